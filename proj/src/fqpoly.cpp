#include "tforge/fqpoly.hpp"

#include <algorithm>

namespace tforge {

PackedField::PackedField(FieldContextPtr context) : ctx(std::move(context)) {
  if (ctx->cardinality > kMaxPackedField)
    fail(Err::BudgetExceeded,
         "packed field tables capped at " + std::to_string(kMaxPackedField) + " elements, got " +
             ctx->cardinality.get_str());
  size = static_cast<uint32_t>(mpz_get_ui(ctx->cardinality.get_mpz_t()));
  p = static_cast<uint32_t>(ctx->p);
  deg = ctx->n;

  add_.resize(static_cast<size_t>(size) * size);
  mul_.resize(static_cast<size_t>(size) * size);
  neg_.resize(size);
  inv_.resize(size);
  sqrt_.resize(size);
  chi_.resize(size);
  digits_.resize(static_cast<size_t>(size) * deg);

  std::vector<FieldElement> elems;
  elems.reserve(size);
  for (uint32_t r = 0; r < size; ++r) elems.push_back(ctx->element_at(r));
  for (uint32_t a = 0; a < size; ++a) {
    neg_[a] = static_cast<uint16_t>(ctx->rank_of(ctx->neg(elems[a])));
    chi_[a] = static_cast<int8_t>(quadratic_character(elems[a]));
    auto root = tforge::sqrt(elems[a]);
    sqrt_[a] = root ? static_cast<uint16_t>(ctx->rank_of(*root)) : uint16_t(0xFFFF);
    inv_[a] = a ? static_cast<uint16_t>(ctx->rank_of(ctx->inv(elems[a]))) : uint16_t(0);
    for (uint32_t i = 0; i < deg; ++i) digits_[a * deg + i] = static_cast<uint16_t>(elems[a].c[i]);
    for (uint32_t b = 0; b < size; ++b) {
      add_[a * size + b] = static_cast<uint16_t>(ctx->rank_of(ctx->add(elems[a], elems[b])));
      mul_[a * size + b] = static_cast<uint16_t>(ctx->rank_of(ctx->mul(elems[a], elems[b])));
    }
  }
}

uint16_t PackedField::inv(uint16_t a) const {
  if (a == 0) fail(Err::Internal, "inverse of zero");
  return inv_[a];
}

uint16_t PackedField::from_int(int64_t v) const { return from_element(ctx->from_int(v)); }

uint16_t PackedField::from_digits(const uint16_t* d) const {
  uint32_t r = 0;
  for (uint32_t i = deg; i-- > 0;) r = r * p + d[i];
  return static_cast<uint16_t>(r);
}

FqPoly fq_from_coeffs(std::vector<uint16_t> coeffs) {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  return FqPoly{std::move(coeffs)};
}

FqPoly fq_constant(uint16_t a) { return a ? FqPoly{{a}} : FqPoly{}; }

FqPoly fq_x() { return FqPoly{{0, 1}}; }

FqPoly fq_add(const PackedField& K, const FqPoly& a, const FqPoly& b) {
  std::vector<uint16_t> r(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r[i] = K.add(r[i], b.c[i]);
  return fq_from_coeffs(std::move(r));
}

FqPoly fq_sub(const PackedField& K, const FqPoly& a, const FqPoly& b) {
  std::vector<uint16_t> r(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) r[i] = a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r[i] = K.sub(r[i], b.c[i]);
  return fq_from_coeffs(std::move(r));
}

FqPoly fq_neg(const PackedField& K, const FqPoly& a) {
  FqPoly r = a;
  for (auto& v : r.c) v = K.neg(v);
  return r;
}

FqPoly fq_scale(const PackedField& K, const FqPoly& a, uint16_t s) {
  if (s == 0) return {};
  FqPoly r = a;
  for (auto& v : r.c) v = K.mul(v, s);
  return r;
}

namespace {

FqPoly mul_schoolbook(const PackedField& K, const FqPoly& a, const FqPoly& b) {
  std::vector<uint16_t> r(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    uint16_t ai = a.c[i];
    if (ai == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) {
      if (b.c[j] == 0) continue;
      r[i + j] = K.add(r[i + j], K.mul(ai, b.c[j]));
    }
  }
  return fq_from_coeffs(std::move(r));
}

// Kronecker substitution: expand coefficients into F_p digit slots (stride
// 2*deg - 1 so cross-digit products stay separated), multiply the packed
// integers with GMP, read the slots back and reduce modulo p and the
// defining polynomial. Supported for deg <= 2, which covers every packed
// base field in use.
template <typename Slot>
FqPoly mul_kronecker(const PackedField& K, const FqPoly& a, const FqPoly& b) {
  uint32_t e = K.deg;
  uint32_t stride = 2 * e - 1;
  size_t la = a.c.size(), lb = b.c.size();
  bool squaring = (&a == &b);
  std::vector<Slot> pa(la * stride, 0);
  for (size_t i = 0; i < la; ++i)
    for (uint32_t k = 0; k < e; ++k) pa[i * stride + k] = K.digit(a.c[i], k);

  mpz_class za, zb;
  mpz_import(za.get_mpz_t(), pa.size(), -1, sizeof(Slot), 0, 0, pa.data());
  if (squaring) {
    mpz_mul(za.get_mpz_t(), za.get_mpz_t(), za.get_mpz_t());
  } else {
    std::vector<Slot> pb(lb * stride, 0);
    for (size_t i = 0; i < lb; ++i)
      for (uint32_t k = 0; k < e; ++k) pb[i * stride + k] = K.digit(b.c[i], k);
    mpz_import(zb.get_mpz_t(), pb.size(), -1, sizeof(Slot), 0, 0, pb.data());
    za *= zb;
  }

  size_t out_len = la + lb - 1;
  std::vector<Slot> prod(out_len * stride + 2, 0);
  size_t words = 0;
  mpz_export(prod.data(), &words, -1, sizeof(Slot), 0, 0, za.get_mpz_t());

  std::vector<uint16_t> r(out_len);
  if (e == 1) {
    for (size_t i = 0; i < out_len; ++i) r[i] = static_cast<uint16_t>(prod[i] % K.p);
  } else {
    // defining polynomial t^2 + f1 t + f0
    uint16_t f0 = static_cast<uint16_t>(K.ctx->defpoly[0]);
    uint16_t f1 = static_cast<uint16_t>(K.ctx->defpoly[1]);
    uint32_t pp = K.p;
    for (size_t i = 0; i < out_len; ++i) {
      uint32_t d0 = static_cast<uint32_t>(prod[i * stride] % pp);
      uint32_t d1 = static_cast<uint32_t>(prod[i * stride + 1] % pp);
      uint32_t d2 = static_cast<uint32_t>(prod[i * stride + 2] % pp);
      // reduce t^2 -> -f1 t - f0
      uint16_t digits[2];
      digits[0] = static_cast<uint16_t>((d0 + (pp - (static_cast<uint32_t>(f0) * d2) % pp)) % pp);
      digits[1] = static_cast<uint16_t>((d1 + (pp - (static_cast<uint32_t>(f1) * d2) % pp)) % pp);
      r[i] = K.from_digits(digits);
    }
  }
  return fq_from_coeffs(std::move(r));
}

constexpr size_t kKroneckerThreshold = 48;

bool kronecker_fits_u16(const PackedField& K, size_t la, size_t lb) {
  uint64_t bound = static_cast<uint64_t>(std::min(la, lb)) * K.deg * (K.p - 1) * (K.p - 1);
  return bound < (uint64_t(1) << 16);
}

}  // namespace

FqPoly fq_mul(const PackedField& K, const FqPoly& a, const FqPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (K.deg <= 2 && std::min(a.c.size(), b.c.size()) >= kKroneckerThreshold) {
    if (kronecker_fits_u16(K, a.c.size(), b.c.size())) return mul_kronecker<uint16_t>(K, a, b);
    return mul_kronecker<uint32_t>(K, a, b);
  }
  return mul_schoolbook(K, a, b);
}

FqPoly fq_sqr(const PackedField& K, const FqPoly& a) {
  // passing the same object lets GMP take its squaring path
  return fq_mul(K, a, a);
}

namespace {

FqPoly divrem_schoolbook(const PackedField& K, const FqPoly& a, const FqPoly& b, FqPoly& quotient) {
  std::vector<uint16_t> rem = a.c;
  size_t db = b.c.size() - 1;
  uint16_t lead_inv = K.inv(b.c.back());
  std::vector<uint16_t> q(a.c.size() - db, 0);
  for (size_t i = rem.size(); i-- > db;) {
    uint16_t coef = rem[i];
    if (coef == 0) continue;
    uint16_t qc = K.mul(coef, lead_inv);
    q[i - db] = qc;
    for (size_t k = 0; k <= db; ++k) rem[i - db + k] = K.sub(rem[i - db + k], K.mul(qc, b.c[k]));
  }
  quotient = fq_from_coeffs(std::move(q));
  return fq_from_coeffs(std::move(rem));
}

FqPoly truncate(const FqPoly& a, size_t len) {
  if (a.c.size() <= len) return a;
  return fq_from_coeffs(std::vector<uint16_t>(a.c.begin(), a.c.begin() + len));
}

FqPoly reverse_poly(const FqPoly& a, size_t len) {
  std::vector<uint16_t> r(len, 0);
  for (size_t i = 0; i < a.c.size() && i < len; ++i) r[len - 1 - i] = a.c[i];
  return fq_from_coeffs(std::move(r));
}

// inverse of f as a power series mod x^prec (f(0) invertible)
FqPoly inv_series(const PackedField& K, const FqPoly& f, size_t prec) {
  FqPoly inv = fq_constant(K.inv(f.c[0]));
  size_t have = 1;
  FqPoly two = fq_constant(K.from_int(2));
  while (have < prec) {
    have = std::min(2 * have, prec);
    // inv <- inv (2 - f inv) mod x^have
    FqPoly t = truncate(fq_mul(K, truncate(f, have), inv), have);
    t = fq_sub(K, two, t);
    inv = truncate(fq_mul(K, inv, t), have);
  }
  return inv;
}

}  // namespace

std::pair<FqPoly, FqPoly> fq_divrem(const PackedField& K, const FqPoly& a, const FqPoly& b) {
  if (b.is_zero()) fail(Err::Internal, "polynomial division by zero");
  if (a.deg() < b.deg()) return {FqPoly{}, a};
  size_t n = static_cast<size_t>(a.deg() - b.deg());
  if (n <= 16 || (n + 1) * b.c.size() <= 4096) {
    FqPoly q;
    FqPoly r = divrem_schoolbook(K, a, b, q);
    return {std::move(q), std::move(r)};
  }
  // Newton reciprocal of the reversed divisor
  FqPoly rb = reverse_poly(b, b.c.size());
  FqPoly ra = reverse_poly(a, a.c.size());
  FqPoly inv = inv_series(K, rb, n + 1);
  FqPoly qrev = truncate(fq_mul(K, ra, inv), n + 1);
  FqPoly q = reverse_poly(qrev, n + 1);
  FqPoly r = fq_sub(K, a, fq_mul(K, q, b));
  if (r.deg() >= b.deg()) fail(Err::Internal, "fast division remainder too large");
  return {std::move(q), std::move(r)};
}

FqPoly fq_rem(const PackedField& K, const FqPoly& a, const FqPoly& b) { return fq_divrem(K, a, b).second; }

FqPoly fq_divexact(const PackedField& K, const FqPoly& a, const FqPoly& b) {
  if (b.is_zero()) fail(Err::Internal, "polynomial division by zero");
  if (a.is_zero()) return {};
  if (a.deg() < b.deg()) fail(Err::Internal, "division expected to be exact");
  size_t n = static_cast<size_t>(a.deg() - b.deg());
  if (n <= 16 || (n + 1) * b.c.size() <= 4096) {
    FqPoly q;
    FqPoly r = divrem_schoolbook(K, a, b, q);
    if (!r.is_zero()) fail(Err::Internal, "division expected to be exact");
    return q;
  }
  // quotient-only Newton path: the remainder is known to vanish
  FqPoly rb = reverse_poly(b, b.c.size());
  FqPoly ra = reverse_poly(a, a.c.size());
  FqPoly inv = inv_series(K, rb, n + 1);
  FqPoly qrev = truncate(fq_mul(K, ra, inv), n + 1);
  return reverse_poly(qrev, n + 1);
}

FqRecip fq_recip(const PackedField& K, const FqPoly& b) {
  if (b.is_zero()) fail(Err::Internal, "reciprocal of zero");
  if (b.deg() == 0) return FqRecip{fq_constant(K.inv(b.c[0]))};
  return FqRecip{inv_series(K, reverse_poly(b, b.c.size()), static_cast<size_t>(b.deg()))};
}

FqPoly fq_rem_precomp(const PackedField& K, const FqPoly& a, const FqPoly& b, const FqRecip& r) {
  if (a.deg() < b.deg()) return a;
  size_t n = static_cast<size_t>(a.deg() - b.deg());
  if (n + 1 > static_cast<size_t>(b.deg())) return fq_rem(K, a, b);  // outside the precomputed precision
  if (n <= 16 || (n + 1) * b.c.size() <= 4096) {
    FqPoly q;
    return divrem_schoolbook(K, a, b, q);
  }
  FqPoly qrev = truncate(fq_mul(K, reverse_poly(a, a.c.size()), truncate(r.rinv, n + 1)), n + 1);
  FqPoly q = reverse_poly(qrev, n + 1);
  FqPoly rem = fq_sub(K, a, fq_mul(K, q, b));
  if (rem.deg() >= b.deg()) fail(Err::Internal, "precomputed-reciprocal remainder too large");
  return rem;
}

FqPoly fq_make_monic(const PackedField& K, const FqPoly& a) {
  if (a.is_zero() || a.c.back() == 1) return a;
  return fq_scale(K, a, K.inv(a.c.back()));
}

FqPoly fq_gcd(const PackedField& K, FqPoly a, FqPoly b) {
  while (!b.is_zero()) {
    FqPoly r = fq_rem(K, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return fq_make_monic(K, a);
}

FqPoly fq_ext_gcd(const PackedField& K, const FqPoly& a, const FqPoly& b, FqPoly& s, FqPoly& t) {
  FqPoly r0 = a, r1 = b;
  FqPoly s0 = fq_constant(1), s1{};
  FqPoly t0{}, t1 = fq_constant(1);
  while (!r1.is_zero()) {
    auto [q, r] = fq_divrem(K, r0, r1);
    FqPoly s2 = fq_sub(K, s0, fq_mul(K, q, s1));
    FqPoly t2 = fq_sub(K, t0, fq_mul(K, q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) fail(Err::Internal, "gcd of two zero polynomials");
  uint16_t lead = r0.c.back();
  if (lead != 1) {
    uint16_t inv = K.inv(lead);
    r0 = fq_scale(K, r0, inv);
    s0 = fq_scale(K, s0, inv);
    t0 = fq_scale(K, t0, inv);
  }
  s = std::move(s0);
  t = std::move(t0);
  return r0;
}

uint16_t fq_eval(const PackedField& K, const FqPoly& a, uint16_t x) {
  uint16_t r = 0;
  for (size_t i = a.c.size(); i-- > 0;) r = K.add(K.mul(r, x), a.c[i]);
  return r;
}

FqPoly fq_deriv(const PackedField& K, const FqPoly& a) {
  if (a.c.size() <= 1) return {};
  std::vector<uint16_t> r(a.c.size() - 1);
  for (size_t i = 1; i < a.c.size(); ++i) {
    uint16_t factor = K.from_int(static_cast<int64_t>(i % K.p));
    r[i - 1] = K.mul(a.c[i], factor);
  }
  return fq_from_coeffs(std::move(r));
}

bool fq_lex_less(const FqPoly& a, const FqPoly& b) {
  size_t n = std::max(a.c.size(), b.c.size());
  for (size_t i = 0; i < n; ++i) {
    uint16_t av = i < a.c.size() ? a.c[i] : 0;
    uint16_t bv = i < b.c.size() ? b.c[i] : 0;
    if (av != bv) return av < bv;
  }
  return false;
}

}  // namespace tforge
