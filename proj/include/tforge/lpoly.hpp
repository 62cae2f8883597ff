#pragma once

#include "tforge/cyclo.hpp"

namespace tforge {

using IntPoly = std::vector<mpz_class>;  // coefficients ascending

IntPoly poly_mul(const IntPoly& a, const IntPoly& b);
// monic binomials x^k + c expand through binomial coefficients, everything
// else goes through repeated squaring
IntPoly poly_pow(const IntPoly& base, uint64_t e);
mpz_class poly_eval(const IntPoly& a, const mpz_class& x);

// the d-th cyclotomic polynomial by iterated exact division of x^d - 1
IntPoly cyclotomic_polynomial(uint64_t d);

// Exact Frobenius characteristic polynomial: monic, degree 2g, Weil
// coefficient symmetry over the stated base cardinality, positive at 1.
struct CharPolyInt {
  IntPoly coeffs;
  mpz_class base;

  size_t degree() const { return coeffs.size() - 1; }
  void validate() const;
};

constexpr uint64_t kMaxExpandedDegree = 200000;

// (x^2 - q*)^g
CharPolyInt charpoly_over_fq(const CurveInstance& curve, uint64_t degree_cap = kMaxExpandedDegree);

// prod_d (p^phi(d) Phi_d(x/p))^(a_d) expanded; degree sum a_d phi(d) = 2g
CharPolyInt charpoly_from_profile(const MultiplicityProfile& profile, uint64_t degree_cap = kMaxExpandedDegree);

// same product kept factor-wise for instances whose degree 2g is too large
// to expand
struct FactoredCharPoly {
  mpz_class base;
  std::vector<std::pair<IntPoly, mpz_class>> factors;  // (p^phi(d) Phi_d(x/p), a_d)
};

FactoredCharPoly charpoly_factors(const MultiplicityProfile& profile);

// Zeta-function recovery oracle: power sums S_s = B^s + 1 - #C(F_{B^s})
// feed Newton's identities for the first g coefficients, the reciprocal
// half comes from the functional equation.
CharPolyInt newton_from_counts(const std::vector<mpz_class>& counts, const mpz_class& B, uint32_t g);

// |J(F_B)| = P(1)
mpz_class group_order(const CharPolyInt& P);

struct FactoredOrder {
  std::vector<std::pair<mpz_class, mpz_class>> factors;  // (factor value at 1, exponent)

  mpz_class valuation(uint64_t ell) const;
  // exact product; BudgetExceeded beyond the digit cap
  mpz_class expanded(uint64_t max_bits = 4000000) const;
  double log2_abs() const;
};

FactoredOrder group_order_factored(const FactoredCharPoly& P);

// largest M with (x-1)^M dividing P mod ell
uint64_t unity_multiplicity_mod_ell(const CharPolyInt& P, uint64_t ell);
mpz_class unity_multiplicity_mod_ell(const FactoredCharPoly& P, uint64_t ell);

// power sums of the roots from the coefficients (Newton, no factoring)
std::vector<mpz_class> power_sums(const CharPolyInt& P, uint32_t upto);

}  // namespace tforge
