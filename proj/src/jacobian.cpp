#include "tforge/jacobian.hpp"

#include <algorithm>
#include <map>

namespace tforge {

std::shared_ptr<const PackedField> packed_field(uint64_t p, uint32_t n) {
  static std::mutex mtx;
  static std::map<std::pair<uint64_t, uint32_t>, std::shared_ptr<const PackedField>> registry;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(p, n);
  if (auto it = registry.find(key); it != registry.end()) return it->second;
  auto ptr = std::make_shared<const PackedField>(make_extension(p, n));
  registry.emplace(key, ptr);
  return ptr;
}

HyperellipticModel make_model(std::shared_ptr<const PackedField> K, FqPoly F) {
  if (F.deg() < 3 || F.deg() % 2 == 0) fail(Err::Internal, "model requires odd degree >= 3");
  const PackedField& k = *K;
  FqPoly d = fq_gcd(k, F, fq_deriv(k, F));
  if (d.deg() != 0) fail(Err::Internal, "model polynomial must be squarefree");
  HyperellipticModel m;
  m.K = std::move(K);
  m.F = std::move(F);
  m.genus = static_cast<uint32_t>((m.F.deg() - 1) / 2);
  return m;
}

HyperellipticModel make_model(const FieldContextPtr& base, const std::vector<int64_t>& coeffs) {
  auto K = packed_field(base->p, base->n);
  std::vector<uint16_t> c(coeffs.size());
  for (size_t i = 0; i < coeffs.size(); ++i) c[i] = K->from_int(coeffs[i]);
  return make_model(K, fq_from_coeffs(std::move(c)));
}

HyperellipticModel family_model(const CurveInstance& curve) {
  if (curve.q > 100000) fail(Err::BudgetExceeded, "family model degree q = " + curve.q.get_str() + " too large");
  uint64_t q = mpz_get_ui(curve.q.get_mpz_t());
  auto K = packed_field(curve.p, 2);
  std::vector<uint16_t> c(q + 1, 0);
  c[1] = K->from_int(-1);
  c[q] = 1;
  return make_model(K, fq_from_coeffs(std::move(c)));
}

HyperellipticModel twist_model(const HyperellipticModel& base, uint16_t c) {
  if (base.K->chi(c) != -1) fail(Err::Internal, "twisting constant must be a nonsquare");
  return make_model(base.K, fq_scale(*base.K, base.F, c));
}

MumfordDivisor divisor_identity() { return MumfordDivisor{fq_constant(1), FqPoly{}}; }

bool is_identity(const MumfordDivisor& d) { return d.u.deg() == 0; }

void validate_divisor(const HyperellipticModel& model, const MumfordDivisor& d) {
  const PackedField& K = *model.K;
  if (d.u.is_zero() || d.u.c.back() != 1) fail(Err::InvalidDivisor, "u must be monic");
  if (d.u.deg() > static_cast<int>(model.genus)) fail(Err::InvalidDivisor, "u degree exceeds the genus");
  if (!d.v.is_zero() && d.v.deg() >= d.u.deg()) fail(Err::InvalidDivisor, "v degree must be below u degree");
  FqPoly w = fq_rem(K, fq_sub(K, fq_sqr(K, d.v), model.F), d.u);
  if (!w.is_zero()) fail(Err::InvalidDivisor, "u does not divide v^2 - F");
}

MumfordDivisor divisor_neg(const HyperellipticModel& model, const MumfordDivisor& a) {
  return MumfordDivisor{a.u, fq_neg(*model.K, a.v)};
}

MumfordDivisor cantor_add(const HyperellipticModel& model, const MumfordDivisor& a, const MumfordDivisor& b) {
  const PackedField& K = *model.K;

  // composition
  FqPoly e1, e2, c1, c2;
  FqPoly d1 = fq_ext_gcd(K, a.u, b.u, e1, e2);
  FqPoly vsum = fq_add(K, a.v, b.v);
  FqPoly d = fq_ext_gcd(K, d1, vsum, c1, c2);

  FqPoly u = fq_divexact(K, fq_mul(K, a.u, b.u), fq_mul(K, d, d));
  // v = (s1 u1 v2 + s2 u2 v1 + s3 (v1 v2 + F)) / d  mod u
  FqPoly s1 = fq_mul(K, c1, e1), s2 = fq_mul(K, c1, e2);
  FqPoly num = fq_mul(K, fq_mul(K, s1, a.u), b.v);
  num = fq_add(K, num, fq_mul(K, fq_mul(K, s2, b.u), a.v));
  num = fq_add(K, num, fq_mul(K, c2, fq_add(K, fq_mul(K, a.v, b.v), model.F)));
  FqPoly v = fq_rem(K, fq_divexact(K, num, d), u);

  // Reduction. Only the first step needs a long division; afterwards the
  // continued-fraction identity u_{i+2} = u_i - c_i (v_i - v_{i+1}) with
  // -v_i = c_i u_{i+1} + v_{i+1} advances the cascade in linear time.
  if (u.deg() > static_cast<int>(model.genus)) {
    FqPoly uprev = u;
    FqPoly ucur = fq_divexact(K, fq_sub(K, model.F, fq_sqr(K, v)), u);
    FqPoly vprev = std::move(v);
    while (true) {
      auto [c, vcur] = fq_divrem(K, fq_neg(K, vprev), ucur);
      if (ucur.deg() <= static_cast<int>(model.genus)) {
        uint16_t lead = ucur.c.back();
        u = (lead == 1) ? std::move(ucur) : fq_scale(K, ucur, K.inv(lead));
        v = std::move(vcur);
        break;
      }
      FqPoly unext = fq_sub(K, uprev, fq_mul(K, c, fq_sub(K, vprev, vcur)));
      uprev = std::move(ucur);
      ucur = std::move(unext);
      vprev = std::move(vcur);
    }
  }
  return MumfordDivisor{std::move(u), std::move(v)};
}

MumfordDivisor scalar_mul(const HyperellipticModel& model, const mpz_class& n, const MumfordDivisor& d) {
  mpz_class k = n;
  MumfordDivisor base = d;
  if (k < 0) {
    k = -k;
    base = divisor_neg(model, base);
  }
  if (k == 0) return divisor_identity();
  // non-adjacent form cuts the additions to about a third of the bits
  std::vector<int8_t> naf;
  {
    mpz_class e = k;
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) {
        long r = mpz_fdiv_ui(e.get_mpz_t(), 4);
        int8_t digit = (r == 1) ? 1 : -1;
        naf.push_back(digit);
        e -= digit;
      } else {
        naf.push_back(0);
      }
      e >>= 1;
    }
  }
  MumfordDivisor neg = divisor_neg(model, base);
  MumfordDivisor acc = divisor_identity();
  for (size_t i = naf.size(); i-- > 0;) {
    acc = cantor_add(model, acc, acc);
    if (naf[i] == 1) acc = cantor_add(model, acc, base);
    if (naf[i] == -1) acc = cantor_add(model, acc, neg);
  }
  return acc;
}

std::vector<MumfordDivisor> enumerate_jacobian(const HyperellipticModel& model, uint64_t budget) {
  const PackedField& K = *model.K;
  mpz_class work = 0;
  for (uint32_t k = 1; k <= model.genus; ++k) work += pow_ui(K.size, k);
  if (work > budget)
    fail(Err::BudgetExceeded, "jacobian enumeration needs " + work.get_str() + " candidate polynomials");

  std::vector<MumfordDivisor> out;
  out.push_back(divisor_identity());
  for (uint32_t k = 1; k <= model.genus; ++k) {
    uint64_t count = 1;
    for (uint32_t i = 0; i < k; ++i) count *= K.size;
    std::vector<uint16_t> uc(k + 1, 0);
    uc[k] = 1;
    for (uint64_t ur = 0; ur < count; ++ur) {
      {
        uint64_t r = ur;
        for (uint32_t i = 0; i < k; ++i) {
          uc[i] = static_cast<uint16_t>(r % K.size);
          r /= K.size;
        }
      }
      FqPoly u{std::vector<uint16_t>(uc)};  // monic by construction, no trim needed
      FqPoly fu = fq_rem(K, model.F, u);
      std::vector<uint16_t> vc(k, 0);
      for (uint64_t vr = 0; vr < count; ++vr) {
        {
          uint64_t r = vr;
          for (uint32_t i = 0; i < k; ++i) {
            vc[i] = static_cast<uint16_t>(r % K.size);
            r /= K.size;
          }
        }
        FqPoly v = fq_from_coeffs(std::vector<uint16_t>(vc));
        FqPoly w = fq_rem(K, fq_sub(K, fq_sqr(K, v), fu), u);
        if (w.is_zero()) out.push_back(MumfordDivisor{u, std::move(v)});
      }
    }
  }
  return out;
}

TorsionCensus ell_torsion_census(const HyperellipticModel& model, uint64_t ell, uint64_t budget) {
  return ell_torsion_census(model, ell, enumerate_jacobian(model, budget));
}

TorsionCensus ell_torsion_census(const HyperellipticModel& model, uint64_t ell,
                                 const std::vector<MumfordDivisor>& classes) {
  if (ell == 2 || !is_prime_u64(ell)) fail(Err::NotPrime, "ell must be an odd prime");
  mpz_class l(static_cast<unsigned long>(ell));
  mpz_class count = 0;
  for (const auto& d : classes)
    if (is_identity(scalar_mul(model, l, d))) ++count;
  // the ell-torsion subgroup has ell-power order
  mpz_class probe = count;
  uint32_t rank = 0;
  while (probe > 1) {
    if (probe % ell != 0)
      fail(Err::NotAPowerOfEll, "torsion census " + count.get_str() + " is not a power of " + std::to_string(ell));
    probe /= ell;
    ++rank;
  }
  return TorsionCensus{count, rank};
}

// ---- quotient-ring helpers for divisor sampling ----

namespace {

// fixed modulus with its precomputed reciprocal
struct QuotRing {
  const PackedField* K;
  FqPoly mod;
  FqRecip recip;

  QuotRing(const PackedField& k, FqPoly m) : K(&k), mod(std::move(m)), recip(fq_recip(k, mod)) {}
};

FqPoly quot_mul(const QuotRing& R, const FqPoly& a, const FqPoly& b) {
  return fq_rem_precomp(*R.K, fq_mul(*R.K, a, b), R.mod, R.recip);
}

FqPoly quot_pow(const QuotRing& R, FqPoly base, mpz_class e) {
  FqPoly r = fq_constant(1);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = quot_mul(R, r, base);
    base = quot_mul(R, base, base);
    e >>= 1;
  }
  return r;
}

bool fq_is_irreducible(const PackedField& K, const FqPoly& f) {
  int n = f.deg();
  if (n <= 0) return false;
  if (n == 1) return true;
  std::vector<char> probe(n, 0);
  for (int k = 1; k <= 4 && k < n; ++k) probe[k] = 1;
  for (auto [r, e] : factorize_u64(static_cast<uint64_t>(n))) {
    (void)e;
    probe[n / r] = 1;
  }
  mpz_class Q(static_cast<unsigned long>(K.size));
  QuotRing R(K, f);
  FqPoly fx = fq_x();
  for (int k = 1; k < n; ++k) {
    fx = quot_pow(R, fx, Q);
    if (!probe[k]) continue;
    FqPoly g = fq_sub(K, fx, fq_x());
    if (g.is_zero() || fq_gcd(K, g, f).deg() != 0) return false;
  }
  fx = quot_pow(R, fx, Q);
  return fq_sub(K, fx, fq_x()).is_zero();
}

// minimal polynomial of x0 in K[T]/(mod), found as the first linear
// dependence among its powers
FqPoly minpoly_in_quotient(const QuotRing& R, const FqPoly& x0) {
  const PackedField& K = *R.K;
  uint32_t g = static_cast<uint32_t>(R.mod.deg());
  struct Row {
    std::vector<uint16_t> vec;   // reduced power, pivot normalized to 1
    std::vector<uint16_t> comb;  // expression in the original powers
    uint32_t pivot;
  };
  std::vector<Row> rows;
  FqPoly power = fq_constant(1);
  for (uint32_t i = 0; i <= g; ++i) {
    std::vector<uint16_t> vec(g, 0);
    for (size_t j = 0; j < power.c.size(); ++j) vec[j] = power.c[j];
    std::vector<uint16_t> comb(g + 1, 0);
    comb[i] = 1;
    for (const Row& row : rows) {
      uint16_t factor = vec[row.pivot];
      if (factor == 0) continue;
      for (uint32_t k = 0; k < g; ++k) vec[k] = K.sub(vec[k], K.mul(factor, row.vec[k]));
      for (uint32_t k = 0; k <= g; ++k) comb[k] = K.sub(comb[k], K.mul(factor, row.comb[k]));
    }
    uint32_t pivot = g;
    for (uint32_t k = 0; k < g; ++k)
      if (vec[k]) {
        pivot = k;
        break;
      }
    if (pivot == g) {
      comb.resize(i + 1);
      return FqPoly{std::move(comb)};  // monic: the leading entry was never touched
    }
    uint16_t inv = K.inv(vec[pivot]);
    for (uint32_t k = 0; k < g; ++k) vec[k] = K.mul(vec[k], inv);
    for (uint32_t k = 0; k <= g; ++k) comb[k] = K.mul(comb[k], inv);
    // keep the rows mutually reduced so one elimination pass stays valid
    for (Row& row : rows) {
      uint16_t factor = row.vec[pivot];
      if (factor == 0) continue;
      for (uint32_t k = 0; k < g; ++k) row.vec[k] = K.sub(row.vec[k], K.mul(factor, vec[k]));
      for (uint32_t k = 0; k <= g; ++k) row.comb[k] = K.sub(row.comb[k], K.mul(factor, comb[k]));
    }
    rows.push_back(Row{std::move(vec), std::move(comb), pivot});
    power = quot_mul(R, power, x0);
  }
  fail(Err::Internal, "no linear dependence among quotient powers");
}

int quot_chi(const QuotRing& R, const FqPoly& a) {
  if (a.is_zero()) return 0;
  const PackedField& K = *R.K;
  mpz_class card = pow_ui(K.size, static_cast<uint64_t>(R.mod.deg()));
  FqPoly r = quot_pow(R, a, (card - 1) / 2);
  if (r == fq_constant(1)) return 1;
  if (r == fq_constant(K.neg(1))) return -1;
  fail(Err::Internal, "quotient character value outside {-1, 0, 1}");
}

FqPoly quot_sqrt(const QuotRing& R, const FqPoly& a) {
  if (a.is_zero()) return {};
  const PackedField& K = *R.K;
  const FqPoly& mod = R.mod;
  mpz_class card = pow_ui(K.size, static_cast<uint64_t>(mod.deg()));
  mpz_class t = card - 1;
  unsigned s = 0;
  while (mpz_even_p(t.get_mpz_t())) {
    t >>= 1;
    ++s;
  }
  FqPoly z;
  {
    bool found = false;
    for (uint32_t c = 0; c < K.size && !found; ++c) {
      FqPoly cand = fq_rem(K, fq_add(K, fq_x(), fq_constant(static_cast<uint16_t>(c))), mod);
      if (!cand.is_zero() && quot_chi(R, cand) == -1) {
        z = cand;
        found = true;
      }
    }
    Rng rng(0x5eedf00dULL);
    while (!found) {
      std::vector<uint16_t> c(static_cast<size_t>(mod.deg()));
      for (auto& v : c) v = static_cast<uint16_t>(rng.below(K.size));
      FqPoly cand = fq_from_coeffs(std::move(c));
      if (!cand.is_zero() && quot_chi(R, cand) == -1) {
        z = cand;
        found = true;
      }
    }
  }
  FqPoly c = quot_pow(R, z, t);
  FqPoly r = quot_pow(R, a, (t + 1) / 2);
  FqPoly w = quot_pow(R, a, t);
  unsigned m = s;
  FqPoly one = fq_constant(1);
  while (!(w == one)) {
    unsigned i = 0;
    FqPoly probe = w;
    while (!(probe == one)) {
      probe = quot_mul(R, probe, probe);
      ++i;
    }
    FqPoly b = c;
    for (unsigned k = 0; k + i + 1 < m; ++k) b = quot_mul(R, b, b);
    r = quot_mul(R, r, b);
    c = quot_mul(R, b, b);
    w = quot_mul(R, w, c);
    m = i;
  }
  return r;
}

const FqPoly& sampling_modulus(const HyperellipticModel& model) {
  auto& cache = *model.sampler;
  std::lock_guard<std::mutex> lock(cache.mtx);
  if (cache.ready) return cache.modulus;
  const PackedField& K = *model.K;
  if (model.genus == 1) {
    cache.modulus = fq_x();
  } else {
    // fixed deterministic candidate stream, independent of user seeds
    Rng rng(0xac1d5eedULL, model.genus);
    while (true) {
      std::vector<uint16_t> c(model.genus + 1, 0);
      for (uint32_t i = 0; i < model.genus; ++i) c[i] = static_cast<uint16_t>(rng.below(K.size));
      c[model.genus] = 1;
      FqPoly cand{std::move(c)};
      if (fq_is_irreducible(K, cand)) {
        cache.modulus = std::move(cand);
        break;
      }
    }
  }
  cache.ready = true;
  return cache.modulus;
}

}  // namespace

MumfordDivisor random_divisor(const HyperellipticModel& model, uint64_t seed) {
  const PackedField& K = *model.K;
  const FqPoly& U0 = sampling_modulus(model);
  QuotRing ext(K, U0);
  for (uint32_t retry = 0; retry < 256; ++retry) {
    Rng rng(seed, retry);
    std::vector<uint16_t> coeffs(static_cast<size_t>(U0.deg()));
    for (auto& v : coeffs) v = static_cast<uint16_t>(rng.below(K.size));
    FqPoly x0 = fq_from_coeffs(std::move(coeffs));
    FqPoly mu = minpoly_in_quotient(ext, x0);
    QuotRing sub(K, mu);
    FqPoly rem = fq_rem(K, model.F, mu);
    int chi = quot_chi(sub, rem);
    if (chi == -1) continue;
    FqPoly v = (chi == 0) ? FqPoly{} : quot_sqrt(sub, rem);
    FqPoly vneg = fq_neg(K, v);
    if (fq_lex_less(vneg, v)) v = std::move(vneg);
    return MumfordDivisor{std::move(mu), std::move(v)};
  }
  fail(Err::SamplingExhausted, "no square F(x0) found in 256 retries");
}

std::optional<MumfordDivisor> find_order_ell_element(const HyperellipticModel& model, const mpz_class& N,
                                                     uint64_t ell, uint32_t trials, uint64_t seed) {
  if (ell == 2 || !is_prime_u64(ell)) fail(Err::NotPrime, "ell must be an odd prime");
  mpz_class l(static_cast<unsigned long>(ell));
  if (N % l != 0) fail(Err::Inadmissible, "ell does not divide the group order");
  mpz_class v = valuation_mpz(N, l);
  mpz_class cofactor = N / pow_mpz(l, mpz_get_ui(v.get_mpz_t()));

  for (uint32_t trial = 0; trial < trials; ++trial) {
    MumfordDivisor d = random_divisor(model, seed + trial);
    MumfordDivisor e = scalar_mul(model, cofactor, d);
    if (is_identity(e)) continue;
    // e has ell-power order at most ell^v; walk down to order exactly ell
    mpz_class steps = 0;
    while (true) {
      MumfordDivisor next = scalar_mul(model, l, e);
      if (is_identity(next)) break;
      if (++steps >= v) fail(Err::Internal, "ell-power descent did not terminate; group order wrong?");
      e = std::move(next);
    }
    if (!is_identity(e) && is_identity(scalar_mul(model, l, e))) return e;
    fail(Err::Internal, "order-ell reduction produced an invalid element");
  }
  return std::nullopt;
}

mpz_class count_points_model(const HyperellipticModel& model) {
  const PackedField& K = *model.K;
  mpz_class count = 1;
  for (uint32_t x = 0; x < K.size; ++x)
    count += 1 + K.chi(fq_eval(K, model.F, static_cast<uint16_t>(x)));
  return count;
}

mpz_class count_points_enum(const FieldContextPtr& field, const std::vector<int64_t>& coeffs, uint64_t budget) {
  std::vector<FieldElement> cs;
  cs.reserve(coeffs.size());
  for (int64_t c : coeffs) cs.push_back(field->from_int(c));
  mpz_class count = 1;  // the point at infinity of the odd-degree model
  enumerate_elements(
      field,
      [&](const FieldElement& x) {
        FieldElement y = field->zero();
        for (size_t i = cs.size(); i-- > 0;) y = field->add(field->mul(y, x), cs[i]);
        count += 1 + quadratic_character(y);
      },
      budget);
  return count;
}

}  // namespace tforge
