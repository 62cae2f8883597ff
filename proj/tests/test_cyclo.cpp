#include "doctest.h"
#include "tforge/cyclo.hpp"

using namespace tforge;

namespace {

// forward map: t_s = sum_d a_d f(d, s)
std::vector<mpz_class> forward_traces(uint64_t n, const std::vector<mpz_class>& a) {
  auto divs = divisors_u64(n);
  std::vector<mpz_class> t(divs.size(), mpz_class(0));
  for (size_t si = 0; si < divs.size(); ++si)
    for (size_t di = 0; di < divs.size(); ++di)
      t[si] += a[di] * mpz_class(static_cast<long>(f_value(divs[di], divs[si])));
  return t;
}

TraceProfile profile_of(uint64_t p, uint32_t m, const std::vector<mpz_class>& traces) {
  TraceProfile t;
  t.p = p;
  t.q0 = pow_ui(p, 2);
  t.m = m;
  auto divs = divisors_u64(2 * m);
  for (size_t i = 0; i < divs.size(); ++i)
    t.entries.push_back({static_cast<uint32_t>(divs[i]), traces[i], false, false});
  return t;
}

}  // namespace

TEST_CASE("f on prime powers") {
  CHECK(f_prime_power(2, 0, 5) == 1);
  CHECK(f_prime_power(2, 2, 1) == -2);
  CHECK(f_prime_power(3, 1, 1) == 2);
  CHECK(f_prime_power(5, 3, 1) == 0);  // a > b + 1
  CHECK_THROWS_AS(f_prime_power(6, 1, 1), Error);
}

TEST_CASE("f values") {
  CHECK(f_value(6, 3) == -2);
  CHECK(f_value(4, 2) == -2);
  CHECK(f_value(12, 12) == 4);
  CHECK(f_value(12, 24) == 4);
  CHECK(f_value(1, 7) == 1);
  // f(d, dk) = phi(d)
  for (uint64_t d : {2ULL, 6ULL, 9ULL, 20ULL, 36ULL})
    for (uint64_t k : {1ULL, 2ULL, 5ULL})
      CHECK(f_value(d, d * k) == static_cast<int64_t>(euler_phi_u64(d)));
}

TEST_CASE("f oracle examples") {
  CHECK(f_oracle(1, 3) == 1);
  CHECK(f_oracle(4, 2) == -2);
  CHECK(f_oracle(9, 3) == -3);
}

TEST_CASE("closed form equals the Moebius oracle") {
  for (uint64_t d = 1; d <= 400; ++d)
    for (uint64_t s = 1; s <= 400; ++s) REQUIRE(f_value(d, s) == f_oracle(d, s));
}

TEST_CASE("prime power inversion identity") {
  CHECK(pinversion_check(2, 1, 0, 0) == 2);
  CHECK(pinversion_check(3, 2, 1, 2) == 0);
  CHECK(pinversion_check(5, 3, 2, 2) == 125);
  for (uint64_t r : {2ULL, 3ULL, 5ULL, 7ULL})
    for (uint32_t k = 1; k <= 4; ++k)
      for (uint32_t d = 0; d <= k; ++d)
        for (uint32_t e = 0; e <= k; ++e) {
          int64_t expect = (d == e) ? static_cast<int64_t>(powmod_u64(r, k, UINT64_MAX)) : 0;
          REQUIRE(pinversion_check(r, k, d, e) == expect);
        }
}

TEST_CASE("inversion coefficients") {
  for (uint64_t d : {1ULL, 2ULL, 4ULL}) CHECK(c_coeff(4, 4, d) == 1);
  CHECK(c_coeff(4, 2, 4) == -1);
  CHECK(c_coeff(12, 6, 12) == -1);
  CHECK_THROWS_AS(c_coeff(12, 5, 1), Error);
  try {
    c_coeff(12, 1, 7);
  } catch (const Error& e) {
    CHECK(e.kind() == Err::NotDivisor);
  }
}

TEST_CASE("full orthogonality") {
  for (uint64_t n : {2ULL, 4ULL, 6ULL, 8ULL, 12ULL, 20ULL}) {
    auto divs = divisors_u64(n);
    for (uint64_t d : divs)
      for (uint64_t dp : divs) {
        int64_t sum = 0;
        for (uint64_t s : divs) sum += c_coeff(n, s, d) * f_value(dp, s);
        REQUIRE(sum == (d == dp ? static_cast<int64_t>(n) : 0));
      }
  }
}

TEST_CASE("worked inversions") {
  auto p1 = invert_multiplicities(profile_of(3, 1, {mpz_class(0), mpz_class(8)}));
  CHECK(p1.at(1) == 4);
  CHECK(p1.at(2) == 4);

  auto p2 = invert_multiplicities(profile_of(3, 2, {mpz_class(0), mpz_class(0), mpz_class(80)}));
  CHECK(p2.at(1) == 20);
  CHECK(p2.at(2) == 20);
  CHECK(p2.at(4) == 20);

  auto p3 = invert_multiplicities(profile_of(5, 2, {mpz_class(0), mpz_class(0), mpz_class(624)}));
  CHECK(p3.at(1) == 156);
  CHECK(p3.at(2) == 156);
  CHECK(p3.at(4) == 156);
}

TEST_CASE("closed form inversion equals the linear solve") {
  for (auto& [p, m, top] : std::vector<std::tuple<uint64_t, uint32_t, long>>{{3, 1, 8}, {3, 2, 80}, {5, 2, 624}}) {
    auto divs = divisors_u64(2 * m);
    std::vector<mpz_class> traces(divs.size(), mpz_class(0));
    traces.back() = top;
    auto prof = profile_of(p, m, traces);
    auto a = invert_multiplicities(prof);
    auto b = solve_multiplicities_oracle(prof);
    CHECK(a.a == b.a);
  }
}

TEST_CASE("round trip on random profiles") {
  for (uint64_t n : {2ULL, 4ULL, 6ULL, 8ULL, 12ULL, 20ULL}) {
    auto divs = divisors_u64(n);
    Rng rng(n * 97);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<mpz_class> a(divs.size());
      for (auto& v : a) v = static_cast<unsigned long>(rng.below(1000000));
      auto t = forward_traces(n, a);
      auto back = ramanujan_invert(n, t);
      REQUIRE(back == a);
    }
  }
}

TEST_CASE("non-integral and negative inversions are rejected") {
  // t_2 = 7 is not consistent with any integer profile for n = 2
  CHECK_THROWS_AS(ramanujan_invert(2, {mpz_class(0), mpz_class(7)}), Error);
  // t = (8, 8) forces a_2 = 0, a_1 = 8; t = (-24, 8) forces a negative a_1
  try {
    ramanujan_invert(2, {mpz_class(-24), mpz_class(8)});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == Err::Negative);
  }
}

TEST_CASE("profile sum constraint") {
  // traces that invert fine but violate sum a_d phi(d) = q - 1
  auto bad = profile_of(3, 1, {mpz_class(0), mpz_class(10)});
  CHECK_THROWS_AS(invert_multiplicities(bad), Error);
}

TEST_CASE("derived bound holds, literal bound recorded failing at (9, 2)") {
  auto p2 = invert_multiplicities(profile_of(3, 2, {mpz_class(0), mpz_class(0), mpz_class(80)}));
  auto report = adappears_check(p2);
  CHECK(report.derived_all_ok);
  CHECK(!report.literal_all_ok);
  for (const auto& row : report.rows) {
    CHECK(row.derived_lhs == 0);
    CHECK(row.derived_rhs == 30);
    CHECK(row.literal_lhs == 40);
    CHECK(row.literal_rhs == 10);
  }

  auto p3 = invert_multiplicities(profile_of(5, 2, {mpz_class(0), mpz_class(0), mpz_class(624)}));
  auto r3 = adappears_check(p3);
  CHECK(r3.derived_all_ok);
  for (const auto& row : r3.rows) CHECK(row.derived_lhs == 0);
}
