#include "tforge/ffield.hpp"

#include <map>
#include <mutex>

namespace tforge {

bool FieldElement::is_zero() const {
  for (uint64_t v : c)
    if (v) return false;
  return true;
}

// ---- dense polynomial helpers over F_p (small degrees only) ----

namespace {

using Pol = std::vector<uint64_t>;  // ascending coefficients, not normalized

void pol_trim(Pol& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// a * b reduced modulo the monic polynomial f
Pol pol_mulmod(const Pol& a, const Pol& b, const Pol& f, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  size_t n = f.size() - 1;
  std::vector<uint64_t> r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0) continue;
      uint64_t t = mulmod_u64(a[i], b[j], p);
      uint64_t& cell = r[i + j];
      cell += t;
      if (cell >= p) cell -= p;
    }
  }
  for (size_t i = r.size(); i-- > n;) {
    uint64_t c = r[i];
    if (c == 0) continue;
    r[i] = 0;
    for (size_t k = 0; k < n; ++k) {
      uint64_t t = mulmod_u64(c, f[k], p);
      uint64_t& cell = r[i - n + k];
      cell = (cell >= t) ? cell - t : cell + p - t;
    }
  }
  r.resize(n);
  return r;
}

Pol pol_powmod(Pol base, mpz_class e, const Pol& f, uint64_t p) {
  Pol r{1};
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = pol_mulmod(r, base, f, p);
    base = pol_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

Pol pol_gcd(Pol a, Pol b, uint64_t p) {
  pol_trim(a);
  pol_trim(b);
  while (!b.empty()) {
    // a mod b via long division
    uint64_t lead_inv = powmod_u64(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
      uint64_t q = mulmod_u64(a.back(), lead_inv, p);
      size_t off = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) {
        uint64_t t = mulmod_u64(q, b[i], p);
        uint64_t& cell = a[off + i];
        cell = (cell >= t) ? cell - t : cell + p - t;
      }
      pol_trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a;
}

bool pol_is_irreducible(const Pol& f, uint64_t p) {
  size_t n = f.size() - 1;
  if (n == 1) return true;
  // probe for factors of degree <= k at a few cheap checkpoints and at the
  // proper-subfield degrees n/r; a nontrivial gcd at any k < n is a witness
  std::vector<char> probe(n, 0);
  for (size_t k = 1; k <= 4 && k < n; ++k) probe[k] = 1;
  for (auto [r, e] : factorize_u64(n)) {
    (void)e;
    probe[n / r] = 1;
  }
  mpz_class pz(static_cast<unsigned long>(p));
  Pol fx{0, 1};
  for (size_t k = 1; k < n; ++k) {
    fx = pol_powmod(fx, pz, f, p);
    if (!probe[k]) continue;
    Pol g = fx;
    if (g.size() < 2) g.resize(2, 0);
    g[1] = (g[1] + p - 1) % p;  // x^(p^k) - x
    if (pol_gcd(g, f, p).size() != 1) return false;
  }
  fx = pol_powmod(fx, pz, f, p);
  // x^(p^n) == x closes the test
  if (fx.size() < 2) fx.resize(2, 0);
  fx[1] = (fx[1] + p - 1) % p;
  pol_trim(fx);
  return fx.empty();
}

}  // namespace

// ---- context construction ----

FieldContextPtr make_extension(uint64_t p, uint32_t n) {
  if (n == 0) fail(Err::DegreeZero, "extension degree must be positive");
  if (p == 2 || !is_prime_u64(p)) fail(Err::NotPrime, "characteristic must be an odd prime, got " + std::to_string(p));

  static std::mutex mtx;
  static std::map<std::pair<uint64_t, uint32_t>, FieldContextPtr> registry;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(p, n);
  if (auto it = registry.find(key); it != registry.end()) return it->second;

  auto ctx = std::shared_ptr<FieldContext>(new FieldContext());
  ctx->p = p;
  ctx->n = n;
  ctx->cardinality = pow_ui(p, n);
  if (n == 1) {
    ctx->defpoly = {0, 1};
  } else {
    // scan coefficient tuples (c_0, ..., c_{n-1}) in lexicographic order,
    // starting at c_0 = 1 since a zero constant term means x divides f
    std::vector<uint64_t> c(n, 0);
    c[0] = 1;
    bool found = false;
    while (!found) {
      Pol f(c.begin(), c.end());
      f.push_back(1);
      if (pol_is_irreducible(f, p)) {
        ctx->defpoly.assign(f.begin(), f.end());
        found = true;
        break;
      }
      // next tuple: increment the last coordinate (least significant)
      size_t i = n;
      while (i-- > 0) {
        if (++c[i] < p) break;
        c[i] = 0;
        if (i == 0) fail(Err::Internal, "no irreducible polynomial found");
      }
    }
  }
  FieldContextPtr out = ctx;
  registry.emplace(key, out);
  return out;
}

FieldElement FieldContext::zero() const { return FieldElement{this, std::vector<uint64_t>(n, 0)}; }

FieldElement FieldContext::one() const {
  auto e = zero();
  e.c[0] = 1;
  return e;
}

FieldElement FieldContext::from_int(int64_t v) const {
  auto e = zero();
  int64_t r = v % static_cast<int64_t>(p);
  if (r < 0) r += static_cast<int64_t>(p);
  e.c[0] = static_cast<uint64_t>(r);
  return e;
}

FieldElement FieldContext::make(std::vector<uint64_t> coeffs) const {
  if (coeffs.size() != n) fail(Err::Internal, "coefficient vector length mismatch");
  for (uint64_t& v : coeffs) v %= p;
  return FieldElement{this, std::move(coeffs)};
}

FieldElement FieldContext::generator() const {
  auto e = zero();
  if (n >= 2)
    e.c[1] = 1;
  else
    e.c[0] = defpoly[0] ? p - defpoly[0] : 0;  // t reduces modulo x + c_0
  return e;
}

FieldElement FieldContext::add(const FieldElement& a, const FieldElement& b) const {
  auto r = a;
  for (uint32_t i = 0; i < n; ++i) {
    r.c[i] += b.c[i];
    if (r.c[i] >= p) r.c[i] -= p;
  }
  return r;
}

FieldElement FieldContext::sub(const FieldElement& a, const FieldElement& b) const {
  auto r = a;
  for (uint32_t i = 0; i < n; ++i) r.c[i] = (r.c[i] >= b.c[i]) ? r.c[i] - b.c[i] : r.c[i] + p - b.c[i];
  return r;
}

FieldElement FieldContext::neg(const FieldElement& a) const {
  auto r = a;
  for (uint32_t i = 0; i < n; ++i) r.c[i] = a.c[i] ? p - a.c[i] : 0;
  return r;
}

FieldElement FieldContext::mul(const FieldElement& a, const FieldElement& b) const {
  Pol r = pol_mulmod(Pol(a.c.begin(), a.c.end()), Pol(b.c.begin(), b.c.end()), Pol(defpoly.begin(), defpoly.end()), p);
  r.resize(n, 0);
  return FieldElement{this, std::vector<uint64_t>(r.begin(), r.end())};
}

FieldElement FieldContext::pow(const FieldElement& a, const mpz_class& e) const {
  if (e == 0) return one();
  if (a.is_zero()) return zero();
  mpz_class k = e % (cardinality - 1);
  if (k < 0) k += cardinality - 1;
  Pol r = pol_powmod(Pol(a.c.begin(), a.c.end()), k, Pol(defpoly.begin(), defpoly.end()), p);
  r.resize(n, 0);
  return FieldElement{this, std::vector<uint64_t>(r.begin(), r.end())};
}

FieldElement FieldContext::inv(const FieldElement& a) const {
  if (a.is_zero()) fail(Err::Internal, "inverse of zero");
  return pow(a, cardinality - 2);
}

uint64_t FieldContext::rank_of(const FieldElement& e) const {
  if (mpz_sizeinbase(cardinality.get_mpz_t(), 2) > 63)
    fail(Err::Internal, "rank requires cardinality below 2^63");
  uint64_t r = 0;
  for (uint32_t i = n; i-- > 0;) r = r * p + e.c[i];
  return r;
}

FieldElement FieldContext::element_at(uint64_t rank) const {
  auto e = zero();
  for (uint32_t i = 0; i < n; ++i) {
    e.c[i] = rank % p;
    rank /= p;
  }
  return e;
}

int quadratic_character(const FieldElement& e) {
  if (e.is_zero()) return 0;
  const FieldContext& K = *e.ctx;
  FieldElement r = K.pow(e, (K.cardinality - 1) / 2);
  if (r == K.one()) return 1;
  if (r == K.neg(K.one())) return -1;
  fail(Err::Internal, "character value outside {-1, 0, 1}");
}

FieldElement frobenius_power(const FieldElement& e, uint64_t j) {
  const FieldContext& K = *e.ctx;
  j %= K.n;
  if (j == 0) return e;
  mpz_class exp;
  mpz_ui_pow_ui(exp.get_mpz_t(), K.p, j);
  return K.pow(e, exp);
}

std::optional<FieldElement> sqrt(const FieldElement& e) {
  const FieldContext& K = *e.ctx;
  int chi = quadratic_character(e);
  if (chi == -1) return std::nullopt;
  if (chi == 0) return K.zero();

  // Tonelli-Shanks in the cyclic group of order Q - 1 = 2^s * t
  mpz_class t = K.cardinality - 1;
  unsigned s = 0;
  while (mpz_even_p(t.get_mpz_t())) {
    t >>= 1;
    ++s;
  }
  // deterministic nonresidue scan: t + k for extensions, small integers for
  // prime fields, then a fixed pseudo-random tail
  FieldElement z = K.zero();
  {
    bool found = false;
    for (uint64_t k = 0; k < K.p && !found; ++k) {
      FieldElement cand = (K.n >= 2) ? K.add(K.generator(), K.from_int(static_cast<int64_t>(k)))
                                     : K.from_int(static_cast<int64_t>(k));
      if (quadratic_character(cand) == -1) {
        z = cand;
        found = true;
      }
    }
    Rng rng(0xbeadcafeULL);
    while (!found) {
      std::vector<uint64_t> c(K.n);
      for (auto& v : c) v = rng.below(K.p);
      FieldElement cand = K.make(std::move(c));
      if (quadratic_character(cand) == -1) {
        z = cand;
        found = true;
      }
    }
  }

  FieldElement c = K.pow(z, t);
  FieldElement r = K.pow(e, (t + 1) / 2);
  FieldElement w = K.pow(e, t);
  unsigned m = s;
  while (!(w == K.one())) {
    unsigned i = 0;
    FieldElement probe = w;
    while (!(probe == K.one())) {
      probe = K.mul(probe, probe);
      ++i;
    }
    FieldElement b = c;
    for (unsigned k = 0; k + i + 1 < m; ++k) b = K.mul(b, b);
    r = K.mul(r, b);
    c = K.mul(b, b);
    w = K.mul(w, c);
    m = i;
  }
  FieldElement nr = K.neg(r);
  return (nr.c < r.c) ? nr : r;  // canonical: lexicographically smaller tuple
}

void enumerate_elements(const FieldContextPtr& ctx, const std::function<void(const FieldElement&)>& fn,
                        uint64_t budget) {
  if (ctx->cardinality > budget)
    fail(Err::BudgetExceeded,
         "enumeration of " + ctx->cardinality.get_str() + " elements exceeds budget " + std::to_string(budget));
  uint64_t total = mpz_get_ui(ctx->cardinality.get_mpz_t());
  FieldElement e = ctx->zero();
  for (uint64_t r = 0;; ++r) {
    fn(e);
    if (r + 1 == total) break;
    // lexicographic successor: increment the last coordinate
    for (uint32_t i = ctx->n; i-- > 0;) {
      if (++e.c[i] < ctx->p) break;
      e.c[i] = 0;
    }
  }
}

}  // namespace tforge
