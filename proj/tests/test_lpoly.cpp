#include "doctest.h"
#include "tforge/lpoly.hpp"

using namespace tforge;

namespace {

TraceProfile profile_of(uint64_t p, uint32_t m, const std::vector<long>& traces) {
  TraceProfile t;
  t.p = p;
  t.q0 = pow_ui(p, 2);
  t.m = m;
  auto divs = divisors_u64(2 * m);
  for (size_t i = 0; i < divs.size(); ++i)
    t.entries.push_back({static_cast<uint32_t>(divs[i]), mpz_class(traces[i]), false, false});
  return t;
}

IntPoly from_longs(const std::vector<long>& v) {
  IntPoly out;
  for (long c : v) out.emplace_back(c);
  return out;
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == from_longs({-1, 1}));
  CHECK(cyclotomic_polynomial(4) == from_longs({1, 0, 1}));
  CHECK(cyclotomic_polynomial(12) == from_longs({1, 0, -1, 0, 1}));
  CHECK(cyclotomic_polynomial(2) == from_longs({1, 1}));
  // prod over d | n of Phi_d = x^n - 1
  for (uint64_t n : {6ULL, 20ULL, 36ULL}) {
    IntPoly prod{mpz_class(1)};
    for (uint64_t d : divisors_u64(n)) prod = poly_mul(prod, cyclotomic_polynomial(d));
    IntPoly expect(n + 1, mpz_class(0));
    expect[0] = -1;
    expect[n] = 1;
    CHECK(prod == expect);
  }
}

TEST_CASE("charpoly over F_q") {
  auto p3 = charpoly_over_fq(make_small_curve(3));
  CHECK(p3.coeffs == from_longs({3, 0, 1}));  // x^2 + 3

  auto p5 = charpoly_over_fq(make_small_curve(5));
  CHECK(p5.coeffs == from_longs({25, 0, -10, 0, 1}));  // (x^2 - 5)^2

  auto p9 = charpoly_over_fq(make_small_curve(9));
  CHECK(p9.degree() == 8);
  CHECK(p9.coeffs == poly_pow(from_longs({-9, 0, 1}), 4));
}

TEST_CASE("charpoly from profile") {
  auto prof1 = invert_multiplicities(profile_of(3, 1, {0, 8}));
  auto cp1 = charpoly_from_profile(prof1);
  // (x - 3)^4 (x + 3)^4 = (x^2 - 9)^4
  CHECK(cp1.coeffs == poly_pow(from_longs({-9, 0, 1}), 4));
  // m = 1 members agree with the F_q closed form
  CHECK(cp1.coeffs == charpoly_over_fq(make_curve(3, 1)).coeffs);

  auto prof2 = invert_multiplicities(profile_of(3, 2, {0, 0, 80}));
  auto cp2 = charpoly_from_profile(prof2);
  IntPoly expect = poly_mul(poly_pow(from_longs({-3, 1}), 20), poly_pow(from_longs({3, 1}), 20));
  expect = poly_mul(expect, poly_pow(from_longs({9, 0, 1}), 20));
  CHECK(cp2.coeffs == expect);

  auto prof3 = invert_multiplicities(profile_of(5, 2, {0, 0, 624}));
  auto cp3 = charpoly_from_profile(prof3);
  CHECK(cp3.degree() == 624);
  cp3.validate();
}

TEST_CASE("power sums tie the two charpoly routes together") {
  // sum of beta^(m s) over the F_{q0} eigenvalues equals sum of alpha^s
  // over the F_q eigenvalues
  for (auto& [p, m, top] : std::vector<std::tuple<uint64_t, uint32_t, long>>{{3, 2, 80}, {5, 2, 624}}) {
    auto divs = divisors_u64(2 * m);
    std::vector<long> traces(divs.size(), 0);
    traces.back() = top;
    auto prof = invert_multiplicities(profile_of(p, m, traces));
    auto beta_poly = charpoly_from_profile(prof);
    auto alpha_poly = charpoly_over_fq(make_curve(p, m));
    auto beta_sums = power_sums(beta_poly, 4 * m);
    auto alpha_sums = power_sums(alpha_poly, 4);
    for (uint32_t s = 1; s <= 4; ++s) CHECK(beta_sums[m * s] == alpha_sums[s]);
  }
}

TEST_CASE("power sums of x^2 + 3") {
  CharPolyInt P{from_longs({3, 0, 1}), mpz_class(3)};
  auto ps = power_sums(P, 4);
  CHECK(ps[1] == 0);
  CHECK(ps[2] == -6);
  CHECK(ps[3] == 0);
  CHECK(ps[4] == 18);
}

TEST_CASE("newton recovery from counts") {
  CHECK(newton_from_counts({mpz_class(4), mpz_class(16)}, mpz_class(3), 1).coeffs == from_longs({3, 0, 1}));
  CHECK(newton_from_counts({mpz_class(6), mpz_class(6)}, mpz_class(5), 2).coeffs ==
        from_longs({25, 0, -10, 0, 1}));

  // counts computed live for C_9 over F_{9^s}, s = 1..4
  auto curve = make_small_curve(9);
  std::vector<mpz_class> counts;
  for (uint32_t s = 1; s <= 4; ++s)
    counts.push_back(count_points(curve, make_extension(3, 2 * s)));
  auto P = newton_from_counts(counts, mpz_class(9), 4);
  CHECK(P.coeffs == charpoly_over_fq(curve).coeffs);

  // an odd second power sum cannot come from a genus-2 Weil polynomial
  CHECK_THROWS_AS(newton_from_counts({mpz_class(6), mpz_class(7)}, mpz_class(5), 2), Error);
}

TEST_CASE("group orders") {
  CHECK(group_order(CharPolyInt{from_longs({3, 0, 1}), mpz_class(3)}) == 4);
  CHECK(group_order(CharPolyInt{from_longs({25, 0, -10, 0, 1}), mpz_class(5)}) == 16);

  auto prof3 = invert_multiplicities(profile_of(5, 2, {0, 0, 624}));
  auto cp3 = charpoly_from_profile(prof3);
  mpz_class expect = pow_mpz(mpz_class(4), 156) * pow_mpz(mpz_class(6), 156) * pow_mpz(mpz_class(26), 156);
  CHECK(group_order(cp3) == expect);

  // independent product formula: prod R_d(p)^(a_d), R_1 = 1 - p, R_d = Phi_d(p)
  for (auto& [p, m, top] : std::vector<std::tuple<uint64_t, uint32_t, long>>{{3, 1, 8}, {3, 2, 80}, {5, 2, 624}}) {
    auto divs = divisors_u64(2 * m);
    std::vector<long> traces(divs.size(), 0);
    traces.back() = top;
    auto prof = invert_multiplicities(profile_of(p, m, traces));
    mpz_class prod = 1;
    for (auto& [d, ad] : prof.a) {
      mpz_class r = (d == 1) ? mpz_class(1 - static_cast<long>(p))
                             : poly_eval(cyclotomic_polynomial(d), mpz_class(static_cast<unsigned long>(p)));
      prod *= pow_mpz(r, mpz_get_ui(ad.get_mpz_t()));
    }
    CHECK(group_order(charpoly_from_profile(prof)) == prod);
  }
}

TEST_CASE("factored order matches the expanded one") {
  auto prof = invert_multiplicities(profile_of(5, 2, {0, 0, 624}));
  auto factored = group_order_factored(charpoly_factors(prof));
  CHECK(factored.expanded() == group_order(charpoly_from_profile(prof)));
  CHECK(factored.valuation(3) == 156);
  CHECK(factored.valuation(13) == 156);  // 26 = 2 * 13
  CHECK(factored.valuation(7) == 0);
}

TEST_CASE("multiplicity of x - 1 mod ell") {
  CharPolyInt p9{poly_pow(from_longs({-9, 0, 1}), 4), mpz_class(9)};
  CHECK(unity_multiplicity_mod_ell(p9, 5) == 0);

  auto prof2 = invert_multiplicities(profile_of(3, 2, {0, 0, 80}));
  auto cp2 = charpoly_from_profile(prof2);
  CHECK(unity_multiplicity_mod_ell(cp2, 5) == 20);

  auto prof3 = invert_multiplicities(profile_of(5, 2, {0, 0, 624}));
  auto cp3 = charpoly_from_profile(prof3);
  CHECK(unity_multiplicity_mod_ell(cp3, 3) == 156);

  // factored route agrees without expansion
  CHECK(unity_multiplicity_mod_ell(charpoly_factors(prof2), 5) == 20);
  CHECK(unity_multiplicity_mod_ell(charpoly_factors(prof3), 3) == 156);
}

TEST_CASE("validation rejects broken polynomials") {
  CharPolyInt bad{from_longs({2, 0, 1}), mpz_class(3)};  // x^2 + 2 over base 3
  CHECK_THROWS_AS(bad.validate(), Error);
  CharPolyInt odd{from_longs({1, 1}), mpz_class(3)};
  CHECK_THROWS_AS(odd.validate(), Error);
}
