#include "tforge/torsion.hpp"

#include <chrono>
#include <cmath>

namespace tforge {

FamilyParams validate_family(uint64_t p, uint64_t ell, uint32_t m) {
  if (p == 2 || !is_prime_u64(p)) fail(Err::Inadmissible, "p = " + std::to_string(p) + " is not an odd prime");
  if (ell == 2 || !is_prime_u64(ell))
    fail(Err::Inadmissible, "ell = " + std::to_string(ell) + " is not an odd prime");
  if (p == ell) fail(Err::Inadmissible, "p and ell must be distinct");
  if (m == 0) fail(Err::Inadmissible, "m must be positive");
  if (m % (ell - 1) != 0)
    fail(Err::Inadmissible, "m = " + std::to_string(m) + " is not divisible by ell - 1 = " + std::to_string(ell - 1));
  if (m % ell == 0) fail(Err::Inadmissible, "m = " + std::to_string(m) + " is not coprime to ell");

  FamilyParams out;
  out.p = p;
  out.ell = ell;
  out.m = m;
  out.q = pow_ui(p, 2 * m);
  out.q0 = pow_ui(p, 2);
  out.genus = (out.q - 1) / 2;
  out.d = multiplicative_order(p % ell, ell);
  // d divides ell - 1 divides m
  if (m % out.d != 0) fail(Err::Internal, "order of p mod ell does not divide m");
  return out;
}

namespace {

// window endpoints from |2m a_d - (q-1)| <= (2m-1)(sqrt(q)+1)
void fill_interval(const FamilyParams& params, RankReport& report) {
  mpz_class bound = mpz_class(2 * params.m - 1) * (pow_ui(params.p, params.m) + 1);
  mpz_class twom(static_cast<unsigned long>(2 * params.m));
  mpz_class lo_num = params.q - 1 - bound, hi_num = params.q - 1 + bound;
  mpz_class lo, hi;
  mpz_cdiv_q(lo.get_mpz_t(), lo_num.get_mpz_t(), twom.get_mpz_t());
  mpz_fdiv_q(hi.get_mpz_t(), hi_num.get_mpz_t(), twom.get_mpz_t());
  if (lo < 0) lo = 0;
  report.rank_lo = lo;
  report.rank_hi = hi;
}

void fill_diagnostics(const FamilyParams& params, RankReport& report) {
  double g2 = log2_mpz(params.genus);
  double q12 = log2_mpz(params.q - 1);
  double p2 = std::log2(static_cast<double>(params.p));
  double l2 = std::log2(static_cast<double>(params.ell));
  double m2 = std::log2(static_cast<double>(2 * params.m));
  // g log_ell(p) / log_p(g); overflows to inf at astronomical genus, which
  // is fine for a report field
  report.thm_main_ref = std::exp2(g2) * (p2 / l2) / (g2 / p2);
  report.realmain1_ref = std::exp2(q12 - m2) * (2 * p2 / l2);
  if (report.rank) {
    double r2 = log2_mpz(*report.rank);
    report.ratio_main = std::exp2(r2 - g2) * (g2 / p2) / (p2 / l2);
    report.ratio_realmain1 = std::exp2(r2 + m2 - q12) / (2 * p2 / l2);
    report.ratio_plain = std::exp2(r2 + m2 - q12);
  }
}

}  // namespace

RankReport rank_exact(const FamilyParams& params, uint64_t budget, int workers) {
  auto start = std::chrono::steady_clock::now();
  RankReport report;
  report.params = params;
  report.mode = "exact";

  CurveInstance curve = make_curve(params.p, params.m);
  FeasibilityPlan plan = count_feasibility(curve, mpz_class(static_cast<unsigned long>(budget)));
  if (!plan.exact_feasible) {
    std::string bad;
    for (const auto& row : plan.rows)
      if (!row.forced_zero && !row.forced_top && !row.feasible) bad += " s=" + std::to_string(row.s);
    fail(Err::BudgetExceeded, "exact rank infeasible at budget " + std::to_string(budget) + ":" + bad);
  }

  TraceProfile traces = trace_profile(curve, TraceMode::force, budget, workers);
  MultiplicityProfile profile = invert_multiplicities(traces);
  MultiplicityProfile oracle = solve_multiplicities_oracle(traces);
  if (profile.a != oracle.a)
    fail(Err::CrossCheckFailed, "closed-form inversion disagrees with the exact linear solve");

  AdAppearsReport bounds = adappears_check(profile);  // asserts the derived bound
  report.literal_adappears_ok = bounds.literal_all_ok;

  mpz_class rank = profile.at(params.d);

  // the unity multiplicity modulo ell, through the expanded polynomial at
  // moderate degrees and factor-wise beyond
  FactoredCharPoly factors = charpoly_factors(profile);
  mpz_class M;
  if (params.genus * 2 <= 8192) {
    CharPolyInt cp = charpoly_from_profile(profile);
    M = mpz_class(static_cast<unsigned long>(unity_multiplicity_mod_ell(cp, params.ell)));
  } else {
    M = unity_multiplicity_mod_ell(factors, params.ell);
  }
  if (M != rank)
    fail(Err::CrossCheckFailed,
         "a_d = " + rank.get_str() + " but the (x-1)-multiplicity mod ell is " + M.get_str());

  fill_interval(params, report);
  if (rank < report.rank_lo || rank > report.rank_hi)
    fail(Err::Internal, "exact rank escapes its derived window");

  FactoredOrder order = group_order_factored(factors);
  report.ell_valuation = order.valuation(params.ell);
  if (*report.ell_valuation < rank) fail(Err::Internal, "v_ell of the group order is below the rank");
  try {
    report.order_expanded = order.expanded();
  } catch (const Error&) {
    // kept factored only
  }
  report.order = std::move(order);
  report.profile = std::move(profile);
  report.rank = rank;
  report.unity_mult = M;
  fill_diagnostics(params, report);

  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

RankReport rank_interval(const FamilyParams& params) {
  auto start = std::chrono::steady_clock::now();
  RankReport report;
  report.params = params;
  report.mode = "interval";
  fill_interval(params, report);
  if (report.rank_lo > report.rank_hi) fail(Err::Internal, "empty rank window");
  fill_diagnostics(params, report);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

TwistReport twist_decomposition_check(uint64_t p, const std::vector<int64_t>& h, uint64_t ell, int64_t c,
                                      uint64_t budget) {
  if (ell == 2 || !is_prime_u64(ell)) fail(Err::Inadmissible, "ell must be an odd prime");
  auto base_field = make_extension(p, 1);
  HyperellipticModel base = make_model(base_field, h);
  uint16_t cc = base.K->from_int(c);
  if (base.K->chi(cc) != -1) fail(Err::Inadmissible, "twisting constant must be a nonsquare mod p");
  HyperellipticModel twist = twist_model(base, cc);
  HyperellipticModel ext = make_model(make_extension(p, 2), h);

  auto classes_base = enumerate_jacobian(base, budget);
  auto classes_twist = enumerate_jacobian(twist, budget);
  auto classes_ext = enumerate_jacobian(ext, budget);

  TwistReport report;
  report.order_base = static_cast<unsigned long>(classes_base.size());
  report.order_twist = static_cast<unsigned long>(classes_twist.size());
  report.order_ext = static_cast<unsigned long>(classes_ext.size());
  report.rank_base = ell_torsion_census(base, ell, classes_base).rank;
  report.rank_twist = ell_torsion_census(twist, ell, classes_twist).rank;
  report.rank_ext = ell_torsion_census(ext, ell, classes_ext).rank;
  report.decomposition_ok = (report.rank_ext == report.rank_base + report.rank_twist);
  if (!report.decomposition_ok)
    fail(Err::DecompositionFailed, "rank over F_{p^2} is " + std::to_string(report.rank_ext) + " but " +
                                       std::to_string(report.rank_base) + " + " + std::to_string(report.rank_twist) +
                                       " over F_p");
  report.max_rank_lower_bound = (report.rank_ext + 1) / 2;
  if (std::max(report.rank_base, report.rank_twist) < report.max_rank_lower_bound)
    fail(Err::Internal, "max-rank consequence violated");
  return report;
}

}  // namespace tforge
