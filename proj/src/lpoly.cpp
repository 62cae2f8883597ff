#include "tforge/lpoly.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace tforge {

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly r(a.size() + b.size() - 1, mpz_class(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

IntPoly poly_pow(const IntPoly& base, uint64_t e) {
  if (e == 0) return {mpz_class(1)};
  size_t nonzero = 0, top = base.size() - 1;
  for (const auto& c : base)
    if (c != 0) ++nonzero;
  if (nonzero == 2 && base[top] == 1) {
    // (x^k + c x^l)^e by binomial expansion
    size_t low = 0;
    while (base[low] == 0) ++low;
    mpz_class c = base[low];
    IntPoly r(top * e + 1, mpz_class(0));
    mpz_class binom = 1;
    for (uint64_t j = 0; j <= e; ++j) {
      mpz_class cp;
      mpz_pow_ui(cp.get_mpz_t(), c.get_mpz_t(), j);
      r[top * (e - j) + low * j] += binom * cp;
      binom *= static_cast<unsigned long>(e - j);
      binom /= static_cast<unsigned long>(j + 1);
    }
    return r;
  }
  IntPoly acc{mpz_class(1)}, sq = base;
  uint64_t k = e;
  while (k) {
    if (k & 1) acc = poly_mul(acc, sq);
    k >>= 1;
    if (k) sq = poly_mul(sq, sq);
  }
  return acc;
}

mpz_class poly_eval(const IntPoly& a, const mpz_class& x) {
  mpz_class r = 0;
  for (size_t i = a.size(); i-- > 0;) r = r * x + a[i];
  return r;
}

IntPoly cyclotomic_polynomial(uint64_t d) {
  if (d == 0) fail(Err::Internal, "cyclotomic index must be positive");
  if (d > 1000000) fail(Err::BudgetExceeded, "cyclotomic index capped at 10^6");
  static std::mutex mtx;
  static std::map<uint64_t, IntPoly> cache;
  {
    std::lock_guard<std::mutex> lock(mtx);
    if (auto it = cache.find(d); it != cache.end()) return it->second;
  }
  // x^d - 1 divided by Phi_e for every proper divisor e
  IntPoly num(d + 1, mpz_class(0));
  num[0] = -1;
  num[d] = 1;
  for (uint64_t e : divisors_u64(d)) {
    if (e == d) continue;
    IntPoly div = cyclotomic_polynomial(e);
    // exact long division, divisor monic
    IntPoly q(num.size() - div.size() + 1, mpz_class(0));
    IntPoly rem = num;
    for (size_t i = q.size(); i-- > 0;) {
      mpz_class c = rem[i + div.size() - 1];
      if (c == 0) continue;
      q[i] = c;
      for (size_t k = 0; k < div.size(); ++k) rem[i + k] -= c * div[k];
    }
    for (const auto& c : rem)
      if (c != 0) fail(Err::Internal, "cyclotomic division not exact");
    num = q;
  }
  std::lock_guard<std::mutex> lock(mtx);
  cache.emplace(d, num);
  return num;
}

void CharPolyInt::validate() const {
  if (coeffs.empty() || coeffs.back() != 1) fail(Err::ProfileInvalid, "characteristic polynomial must be monic");
  size_t deg = degree();
  if (deg % 2 != 0) fail(Err::ProfileInvalid, "characteristic polynomial must have even degree");
  size_t g = deg / 2;
  mpz_class power = 1;  // base^(g-i), built from i = g downward
  for (size_t i = g + 1; i-- > 0;) {
    // c_{2g-i} = base^{g-i} c_i, written on ascending coefficients
    if (coeffs[i] != power * coeffs[deg - i])
      fail(Err::ProfileInvalid, "Weil symmetry fails at coefficient " + std::to_string(i));
    power *= base;
  }
  if (poly_eval(coeffs, mpz_class(1)) <= 0) fail(Err::NonPositive, "value at 1 must be positive");
}

CharPolyInt charpoly_over_fq(const CurveInstance& curve, uint64_t degree_cap) {
  if (curve.genus * 2 > degree_cap)
    fail(Err::BudgetExceeded, "degree 2g = " + mpz_class(curve.genus * 2).get_str() + " exceeds expansion cap");
  uint64_t g = mpz_get_ui(curve.genus.get_mpz_t());
  IntPoly quad{-curve.qstar, mpz_class(0), mpz_class(1)};  // x^2 - q*
  CharPolyInt out;
  out.coeffs = poly_pow(quad, g);
  out.base = curve.q;
  out.validate();
  return out;
}

// p^phi(d) Phi_d(x/p): substitute and clear denominators
static IntPoly scaled_cyclotomic(uint64_t d, const mpz_class& p) {
  IntPoly phi = cyclotomic_polynomial(d);
  size_t deg = phi.size() - 1;
  IntPoly out(phi.size());
  for (size_t i = 0; i < phi.size(); ++i) out[i] = phi[i] * pow_mpz(p, deg - i);
  return out;
}

FactoredCharPoly charpoly_factors(const MultiplicityProfile& profile) {
  FactoredCharPoly out;
  out.base = profile.q0;
  mpz_class p = sqrt_exact(profile.q0);
  for (const auto& [d, ad] : profile.a) out.factors.emplace_back(scaled_cyclotomic(d, p), ad);
  return out;
}

CharPolyInt charpoly_from_profile(const MultiplicityProfile& profile, uint64_t degree_cap) {
  mpz_class deg = 0;
  for (const auto& [d, ad] : profile.a) deg += ad * static_cast<unsigned long>(euler_phi_u64(d));
  if (deg > degree_cap)
    fail(Err::BudgetExceeded, "degree " + deg.get_str() + " exceeds expansion cap " + std::to_string(degree_cap));

  mpz_class p = sqrt_exact(profile.q0);
  IntPoly acc{mpz_class(1)};
  for (const auto& [d, ad] : profile.a) {
    if (ad == 0) continue;
    if (!ad.fits_ulong_p()) fail(Err::BudgetExceeded, "multiplicity too large to expand");
    acc = poly_mul(acc, poly_pow(scaled_cyclotomic(d, p), mpz_get_ui(ad.get_mpz_t())));
  }
  CharPolyInt out;
  out.coeffs = std::move(acc);
  out.base = profile.q0;
  mpz_class twog = profile.q() - 1;
  if (mpz_class(static_cast<unsigned long>(out.degree())) != twog)
    fail(Err::ProfileInvalid, "expanded degree does not equal 2g");
  out.validate();
  return out;
}

CharPolyInt newton_from_counts(const std::vector<mpz_class>& counts, const mpz_class& B, uint32_t g) {
  if (counts.size() < g) fail(Err::InconsistentCounts, "need counts for s = 1..g");
  std::vector<mpz_class> S(g + 1);
  for (uint32_t s = 1; s <= g; ++s) S[s] = pow_mpz(B, s) + 1 - counts[s - 1];

  // k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} S_i
  std::vector<mpz_class> e(g + 1);
  e[0] = 1;
  for (uint32_t k = 1; k <= g; ++k) {
    mpz_class acc = 0;
    for (uint32_t i = 1; i <= k; ++i) {
      mpz_class term = e[k - i] * S[i];
      if (i % 2 == 0) term = -term;
      acc += term;
    }
    mpz_class q, r;
    mpz_class kk(static_cast<unsigned long>(k));
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), acc.get_mpz_t(), kk.get_mpz_t());
    if (r != 0) fail(Err::InconsistentCounts, "Newton identity non-integral at k = " + std::to_string(k));
    e[k] = q;
  }

  CharPolyInt out;
  out.base = B;
  out.coeffs.assign(2 * g + 1, mpz_class(0));
  out.coeffs[2 * g] = 1;
  for (uint32_t k = 1; k <= g; ++k) {
    mpz_class ck = e[k];
    if (k % 2 == 1) ck = -ck;
    out.coeffs[2 * g - k] = ck;
  }
  // functional equation fills the low half
  for (uint32_t i = 0; i < g; ++i) out.coeffs[i] = pow_mpz(B, g - i) * out.coeffs[2 * g - i];
  try {
    out.validate();
  } catch (const Error& err) {
    fail(Err::InconsistentCounts, std::string("recovered polynomial invalid (") + err.what() + ")");
  }
  return out;
}

mpz_class group_order(const CharPolyInt& P) {
  mpz_class v = poly_eval(P.coeffs, mpz_class(1));
  if (v <= 0) fail(Err::NonPositive, "group order " + v.get_str());
  return v;
}

FactoredOrder group_order_factored(const FactoredCharPoly& P) {
  FactoredOrder out;
  for (const auto& [poly, mult] : P.factors) {
    if (mult == 0) continue;
    out.factors.emplace_back(poly_eval(poly, mpz_class(1)), mult);
  }
  return out;
}

mpz_class FactoredOrder::valuation(uint64_t ell) const {
  mpz_class acc = 0, l(static_cast<unsigned long>(ell));
  for (const auto& [v, e] : factors) acc += e * valuation_mpz(v, l);
  return acc;
}

mpz_class FactoredOrder::expanded(uint64_t max_bits) const {
  double bits = log2_abs();
  if (bits > static_cast<double>(max_bits))
    fail(Err::BudgetExceeded, "group order needs about " + std::to_string(static_cast<uint64_t>(bits)) + " bits");
  mpz_class acc = 1;
  for (const auto& [v, e] : factors) {
    if (!e.fits_ulong_p()) fail(Err::BudgetExceeded, "exponent too large to expand");
    acc *= pow_mpz(v, mpz_get_ui(e.get_mpz_t()));
  }
  if (acc <= 0) fail(Err::NonPositive, "group order " + acc.get_str());
  return acc;
}

double FactoredOrder::log2_abs() const {
  double acc = 0;
  for (const auto& [v, e] : factors) acc += mpz_get_d(e.get_mpz_t()) * log2_mpz(abs(v));
  return acc;
}

namespace {

// coefficients of P mod ell, ascending
std::vector<uint64_t> reduce_mod(const IntPoly& P, uint64_t ell) {
  std::vector<uint64_t> r(P.size());
  mpz_class l(static_cast<unsigned long>(ell)), tmp;
  for (size_t i = 0; i < P.size(); ++i) {
    mpz_fdiv_r(tmp.get_mpz_t(), P[i].get_mpz_t(), l.get_mpz_t());
    r[i] = mpz_get_ui(tmp.get_mpz_t());
  }
  return r;
}

uint64_t unity_multiplicity_reduced(std::vector<uint64_t> c, uint64_t ell) {
  uint64_t M = 0;
  while (c.size() > 1) {
    uint64_t at1 = 0;
    for (uint64_t v : c) at1 = (at1 + v) % ell;
    if (at1 != 0) break;
    // synthetic division by (x - 1)
    std::vector<uint64_t> q(c.size() - 1);
    uint64_t carry = 0;
    for (size_t i = c.size(); i-- > 1;) {
      carry = (carry + c[i]) % ell;
      q[i - 1] = carry;
    }
    c = std::move(q);
    ++M;
  }
  return M;
}

}  // namespace

uint64_t unity_multiplicity_mod_ell(const CharPolyInt& P, uint64_t ell) {
  if (ell == 2 || !is_prime_u64(ell)) fail(Err::NotPrime, "ell must be an odd prime");
  return unity_multiplicity_reduced(reduce_mod(P.coeffs, ell), ell);
}

mpz_class unity_multiplicity_mod_ell(const FactoredCharPoly& P, uint64_t ell) {
  if (ell == 2 || !is_prime_u64(ell)) fail(Err::NotPrime, "ell must be an odd prime");
  mpz_class M = 0;
  for (const auto& [poly, mult] : P.factors)
    M += mult * static_cast<unsigned long>(unity_multiplicity_reduced(reduce_mod(poly, ell), ell));
  return M;
}

std::vector<mpz_class> power_sums(const CharPolyInt& P, uint32_t upto) {
  size_t deg = P.degree();
  // c_k is the coefficient of x^(deg - k)
  auto c = [&](uint32_t k) -> mpz_class { return k <= deg ? P.coeffs[deg - k] : mpz_class(0); };
  std::vector<mpz_class> p(upto + 1);
  p[0] = static_cast<unsigned long>(deg);
  for (uint32_t k = 1; k <= upto; ++k) {
    mpz_class acc = mpz_class(static_cast<unsigned long>(k)) * c(k);
    for (uint32_t i = 1; i < k; ++i) acc += c(i) * p[k - i];
    p[k] = -acc;
  }
  return p;
}

}  // namespace tforge
