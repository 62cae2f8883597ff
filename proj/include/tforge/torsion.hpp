#pragma once

#include "tforge/jacobian.hpp"
#include "tforge/lpoly.hpp"

namespace tforge {

// admissible family parameters: p != ell odd primes, m divisible by
// ell - 1 and coprime to ell
struct FamilyParams {
  uint64_t p = 0;
  uint64_t ell = 0;
  uint32_t m = 0;
  mpz_class q;      // p^(2m)
  mpz_class q0;     // p^2
  mpz_class genus;  // (q-1)/2
  uint64_t d = 0;   // multiplicative order of p mod ell
};

FamilyParams validate_family(uint64_t p, uint64_t ell, uint32_t m);

struct RankReport {
  FamilyParams params;
  std::string mode;  // "exact" or "interval"

  // derived bound window, always filled, always contains the rank
  mpz_class rank_lo, rank_hi;

  // exact path
  std::optional<MultiplicityProfile> profile;
  std::optional<mpz_class> rank;           // = a_d
  std::optional<mpz_class> unity_mult;     // M, independently computed
  std::optional<FactoredOrder> order;      // |J(F_{q0})| in factored form
  std::optional<mpz_class> order_expanded; // when within the digit budget
  std::optional<mpz_class> ell_valuation;  // v_ell of the order
  bool literal_adappears_ok = false;       // recorded, not asserted

  // report-only diagnostics; the asymptotic reference values are not
  // assertions, their o(1) terms are unquantified
  double thm_main_ref = 0;    // g log_ell(p) / log_p(g)
  double realmain1_ref = 0;   // (q-1)/(2m) * log_ell(p^2)
  std::optional<double> ratio_main;
  std::optional<double> ratio_realmain1;  // with the log factor
  std::optional<double> ratio_plain;      // against (q-1)/(2m) alone
  double seconds = 0;
};

// exact rank through forced traces, counted traces and inversion, with
// the unity-multiplicity cross-check; BudgetExceeded when some required
// count is infeasible
RankReport rank_exact(const FamilyParams& params, uint64_t budget = kDefaultBudget, int workers = 1);

// rank window from the derived multiplicity bound alone; works at any size
RankReport rank_interval(const FamilyParams& params);

struct TwistReport {
  mpz_class order_base, order_twist, order_ext;
  uint32_t rank_base = 0, rank_twist = 0, rank_ext = 0;
  bool decomposition_ok = false;
  uint32_t max_rank_lower_bound = 0;  // ceil(rank_ext / 2)
};

// census check of rank(F_{p^2}) = rank(F_p) + rank_twist(F_p) for
// y^2 = h(x) and its quadratic twist by c
TwistReport twist_decomposition_check(uint64_t p, const std::vector<int64_t>& h, uint64_t ell, int64_t c,
                                      uint64_t budget = 1000000);

}  // namespace tforge
