#pragma once

#include "tforge/ffield.hpp"

namespace tforge {

// One curve y^2 = x^(p^exponent) - x. Family members have exponent = 2m
// and live over F_{q0} with q0 = p^2; small-instance mode admits any odd
// prime power q and is used for the eigenvalue checks over F_q, F_{q^2}.
struct CurveInstance {
  uint64_t p = 0;
  uint32_t exponent = 0;  // q = p^exponent
  bool family = false;
  uint32_t m = 0;  // exponent = 2m when family
  mpz_class q;
  mpz_class q0;     // p^2
  mpz_class qstar;  // (-1)^((q-1)/2) * q
  mpz_class genus;  // (q-1)/2
};

CurveInstance make_curve(uint64_t p, uint32_t m);
CurveInstance make_small_curve(const mpz_class& q);

enum class Strategy { naive, linear, automatic };

// #C(K) = |K| + 1 + sum_x chi(x^q - x), with x^q evaluated through the
// Frobenius power reduced mod the field degree. The two strategies agree
// exactly; automatic picks the cheaper feasible one.
mpz_class count_points(const CurveInstance& curve, const FieldContextPtr& field,
                       Strategy strategy = Strategy::automatic, uint64_t budget = kDefaultBudget,
                       int workers = 1);

enum class TraceMode { force, count, cross_check };

struct TraceEntry {
  uint32_t s;
  mpz_class t;
  bool forced;         // filled from theory, not from a count
  bool cross_checked;  // recounted and compared
};

struct TraceProfile {
  uint64_t p = 0;
  mpz_class q0;
  uint32_t m = 0;
  std::vector<TraceEntry> entries;  // one per divisor s of 2m, ascending

  const TraceEntry& at(uint32_t s) const;
};

// t_s = (q0^s + 1 - #C(F_{q0^s})) / q0^(s/2); the sign is fixed so that
// t_{2m} = q - 1.
TraceProfile trace_profile(const CurveInstance& curve, TraceMode mode, uint64_t budget = kDefaultBudget,
                           int workers = 1);

struct FeasibilityRow {
  uint32_t s;
  bool forced_zero;  // s | m
  bool forced_top;   // s = 2m
  mpz_class naive_cost;   // q0^s
  mpz_class linear_cost;  // p^(2s - gcd(2m, 2s))
  bool feasible;
};

struct FeasibilityPlan {
  std::vector<FeasibilityRow> rows;
  bool exact_feasible;  // all rows that need counting are feasible
};

FeasibilityPlan count_feasibility(const CurveInstance& curve, const mpz_class& budget);

}  // namespace tforge
