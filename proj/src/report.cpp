#include "tforge/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace tforge {

namespace {

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

Json to_json(const FeasibilityPlan& plan) {
  Json rows = Json::array();
  for (const auto& row : plan.rows) {
    rows.push_back(Json{{"s", row.s},
                        {"provenance", row.forced_top  ? "forced-top"
                                       : row.forced_zero ? "forced-zero"
                                                         : "needs-count"},
                        {"naive_cost", mpz_str(row.naive_cost)},
                        {"linear_cost", mpz_str(row.linear_cost)},
                        {"feasible", row.feasible}});
  }
  return Json{{"rows", rows}, {"exact_feasible", plan.exact_feasible}};
}

Json to_json(const TraceProfile& profile) {
  Json entries = Json::array();
  for (const auto& e : profile.entries)
    entries.push_back(Json{{"s", e.s},
                           {"t", mpz_str(e.t)},
                           {"provenance", e.forced ? "forced" : "counted"},
                           {"cross_checked", e.cross_checked}});
  return Json{{"q0", mpz_str(profile.q0)}, {"m", profile.m}, {"traces", entries}};
}

Json to_json(const MultiplicityProfile& profile) {
  Json entries = Json::array();
  for (const auto& [d, ad] : profile.a) entries.push_back(Json{{"d", d}, {"a", mpz_str(ad)}});
  return Json{{"q0", mpz_str(profile.q0)}, {"m", profile.m}, {"multiplicities", entries}};
}

Json to_json(const AdAppearsReport& report) {
  Json rows = Json::array();
  for (const auto& row : report.rows)
    rows.push_back(Json{{"d", row.d},
                        {"derived_lhs", mpz_str(row.derived_lhs)},
                        {"derived_rhs", mpz_str(row.derived_rhs)},
                        {"derived_ok", row.derived_ok},
                        {"literal_lhs", mpz_str(row.literal_lhs)},
                        {"literal_rhs", mpz_str(row.literal_rhs)},
                        {"literal_ok", row.literal_ok}});
  return Json{{"rows", rows},
              {"derived_all_ok", report.derived_all_ok},
              {"literal_all_ok", report.literal_all_ok}};
}

Json to_json(const CharPolyInt& poly) {
  Json coeffs = Json::array();
  for (const auto& c : poly.coeffs) coeffs.push_back(mpz_str(c));
  return Json{{"base", mpz_str(poly.base)}, {"degree", poly.degree()}, {"coefficients", coeffs}};
}

Json to_json(const FactoredCharPoly& poly) {
  Json factors = Json::array();
  for (const auto& [f, mult] : poly.factors) {
    Json coeffs = Json::array();
    for (const auto& c : f) coeffs.push_back(mpz_str(c));
    factors.push_back(Json{{"coefficients", coeffs}, {"multiplicity", mpz_str(mult)}});
  }
  return Json{{"base", mpz_str(poly.base)}, {"factors", factors}};
}

Json to_json(const FactoredOrder& order) {
  Json factors = Json::array();
  for (const auto& [v, e] : order.factors)
    factors.push_back(Json{{"value", mpz_str(v)}, {"exponent", mpz_str(e)}});
  return Json{{"factors", factors}, {"log2", fmt_double(order.log2_abs())}};
}

Json to_json(const RankReport& report) {
  Json out;
  out["p"] = report.params.p;
  out["ell"] = report.params.ell;
  out["m"] = report.params.m;
  out["q"] = mpz_str(report.params.q);
  out["genus"] = mpz_str(report.params.genus);
  out["d"] = report.params.d;
  out["mode"] = report.mode;
  out["rank_lo"] = mpz_str(report.rank_lo);
  out["rank_hi"] = mpz_str(report.rank_hi);
  if (report.rank) out["rank"] = mpz_str(*report.rank);
  if (report.unity_mult) out["unity_multiplicity"] = mpz_str(*report.unity_mult);
  if (report.profile) out["profile"] = to_json(*report.profile);
  if (report.order) out["order_factored"] = to_json(*report.order);
  if (report.order_expanded) out["order"] = mpz_str(*report.order_expanded);
  if (report.ell_valuation) out["order_ell_valuation"] = mpz_str(*report.ell_valuation);
  return out;
}

Json to_json(const TwistReport& report) {
  return Json{{"order_base", mpz_str(report.order_base)},
              {"order_twist", mpz_str(report.order_twist)},
              {"order_ext", mpz_str(report.order_ext)},
              {"rank_base", report.rank_base},
              {"rank_twist", report.rank_twist},
              {"rank_ext", report.rank_ext},
              {"decomposition_ok", report.decomposition_ok},
              {"max_rank_lower_bound", report.max_rank_lower_bound}};
}

Json envelope(const std::string& command, Json params, Json results, Json diagnostics, Json timings,
              uint64_t seed) {
  Json out;
  out["command"] = command;
  out["params"] = std::move(params);
  out["results"] = std::move(results);
  out["diagnostics"] = std::move(diagnostics);
  out["timings"] = std::move(timings);
  out["seed"] = seed;
  out["version"] = kVersion;
  return out;
}

std::string csv_table_header() {
  return "p,ell,m,q,genus,d,rank_mode,rank_lo,rank,rank_hi,order_valuation,thm_main_ref,ratio_main,"
         "ratio_realmain1,seconds";
}

std::string csv_table_row(const RankReport& r) {
  std::string row;
  row += std::to_string(r.params.p) + ",";
  row += std::to_string(r.params.ell) + ",";
  row += std::to_string(r.params.m) + ",";
  row += mpz_str(r.params.q) + ",";
  row += mpz_str(r.params.genus) + ",";
  row += std::to_string(r.params.d) + ",";
  row += r.mode + ",";
  row += mpz_str(r.rank_lo) + ",";
  row += (r.rank ? mpz_str(*r.rank) : "") + ",";
  row += mpz_str(r.rank_hi) + ",";
  row += (r.ell_valuation ? mpz_str(*r.ell_valuation) : "") + ",";
  row += fmt_double(r.thm_main_ref) + ",";
  row += (r.ratio_main ? fmt_double(*r.ratio_main) : "") + ",";
  row += (r.ratio_realmain1 ? fmt_double(*r.ratio_realmain1) : "") + ",";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", r.seconds);
  row += buf;
  return row;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    std::cout.flush();
    return;
  }
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Err::Internal, "cannot open " + tmp + " for writing");
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) fail(Err::Internal, "cannot rename " + tmp + " to " + path);
}

}  // namespace tforge
