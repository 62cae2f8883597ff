#include "doctest.h"
#include "tforge/jacobian.hpp"
#include "tforge/lpoly.hpp"

#include <map>
#include <set>

using namespace tforge;

namespace {

// chord-tangent oracle for y^2 = x^3 + a x + b over a packed prime field
struct EcPoint {
  bool inf = true;
  uint16_t x = 0, y = 0;
  bool operator<(const EcPoint& o) const { return std::tie(inf, x, y) < std::tie(o.inf, o.x, o.y); }
  bool operator==(const EcPoint& o) const { return inf == o.inf && x == o.x && y == o.y; }
};

EcPoint ec_add(const PackedField& K, uint16_t a, EcPoint P, EcPoint Q) {
  if (P.inf) return Q;
  if (Q.inf) return P;
  if (P.x == Q.x && Q.y == K.neg(P.y)) return EcPoint{};
  uint16_t lambda;
  if (P == Q) {
    uint16_t num = K.add(K.mul(K.from_int(3), K.mul(P.x, P.x)), a);
    lambda = K.mul(num, K.inv(K.mul(K.from_int(2), P.y)));
  } else {
    lambda = K.mul(K.sub(Q.y, P.y), K.inv(K.sub(Q.x, P.x)));
  }
  uint16_t x3 = K.sub(K.sub(K.mul(lambda, lambda), P.x), Q.x);
  uint16_t y3 = K.sub(K.mul(lambda, K.sub(P.x, x3)), P.y);
  return EcPoint{false, x3, y3};
}

EcPoint to_point(const PackedField& K, const MumfordDivisor& d) {
  if (is_identity(d)) return EcPoint{};
  uint16_t x = K.neg(d.u.c[0]);  // u = X - x
  uint16_t y = d.v.is_zero() ? uint16_t(0) : d.v.c[0];
  return EcPoint{false, x, y};
}

// subgroup generated by a set of classes, by closure under addition
size_t generated_subgroup_size(const HyperellipticModel& model, std::vector<MumfordDivisor> gens) {
  auto key = [](const MumfordDivisor& d) { return std::make_pair(d.u.c, d.v.c); };
  std::map<std::pair<std::vector<uint16_t>, std::vector<uint16_t>>, MumfordDivisor> seen;
  seen.emplace(key(divisor_identity()), divisor_identity());
  std::vector<MumfordDivisor> frontier{divisor_identity()};
  while (!frontier.empty()) {
    std::vector<MumfordDivisor> next;
    for (const auto& d : frontier)
      for (const auto& g : gens) {
        MumfordDivisor s = cantor_add(model, d, g);
        if (seen.emplace(key(s), s).second) next.push_back(s);
      }
    frontier = std::move(next);
  }
  return seen.size();
}

}  // namespace

TEST_CASE("C_3 over F_3: four classes matching the elliptic oracle") {
  auto model = make_model(make_extension(3, 1), {0, -1, 0, 1});  // y^2 = x^3 - x
  CHECK(model.genus == 1);
  auto classes = enumerate_jacobian(model);
  CHECK(classes.size() == 4);
  CHECK(count_points_model(model) == 4);

  const PackedField& K = *model.K;
  uint16_t a = K.from_int(-1);
  for (const auto& d1 : classes)
    for (const auto& d2 : classes) {
      MumfordDivisor sum = cantor_add(model, d1, d2);
      EcPoint expect = ec_add(K, a, to_point(K, d1), to_point(K, d2));
      CHECK(to_point(K, sum) == expect);
    }
}

TEST_CASE("identity and ramification 2-torsion") {
  auto model = make_model(make_extension(5, 1), {0, -1, 0, 0, 0, 1});  // y^2 = x^5 - x
  auto classes = enumerate_jacobian(model);
  CHECK(classes.size() == 16);
  for (const auto& d : classes) {
    CHECK(cantor_add(model, d, divisor_identity()) == d);
    CHECK(d.v.is_zero());  // this group is entirely 2-torsion
    CHECK(is_identity(cantor_add(model, d, d)));
    validate_divisor(model, d);
  }
}

TEST_CASE("full associativity on the 16-element group") {
  auto model = make_model(make_extension(5, 1), {0, -1, 0, 0, 0, 1});
  auto classes = enumerate_jacobian(model);
  for (const auto& a : classes)
    for (const auto& b : classes)
      for (const auto& c : classes)
        REQUIRE(cantor_add(model, cantor_add(model, a, b), c) == cantor_add(model, a, cantor_add(model, b, c)));
}

TEST_CASE("generic genus-2 model over F_5") {
  auto model = make_model(make_extension(5, 1), {1, 1, 0, 0, 0, 1});  // y^2 = x^5 + x + 1
  auto classes = enumerate_jacobian(model);

  // order from the zeta-function oracle
  std::vector<mpz_class> counts{count_points_enum(make_extension(5, 1), {1, 1, 0, 0, 0, 1}),
                                count_points_enum(make_extension(5, 2), {1, 1, 0, 0, 0, 1})};
  auto P = newton_from_counts(counts, mpz_class(5), 2);
  CHECK(classes.size() == mpz_get_ui(group_order(P).get_mpz_t()));

  // group axioms on random triples
  Rng rng(77);
  for (int i = 0; i < 10000; ++i) {
    const auto& a = classes[rng.below(classes.size())];
    const auto& b = classes[rng.below(classes.size())];
    const auto& c = classes[rng.below(classes.size())];
    REQUIRE(cantor_add(model, cantor_add(model, a, b), c) == cantor_add(model, a, cantor_add(model, b, c)));
  }

  // Lagrange
  mpz_class order(static_cast<unsigned long>(classes.size()));
  for (const auto& d : classes) CHECK(is_identity(scalar_mul(model, order, d)));

  // census rank is bounded by the unity multiplicity even off the family
  for (uint64_t ell : {3ULL, 5ULL, 7ULL}) {
    auto census = ell_torsion_census(model, ell);
    CHECK(census.rank <= unity_multiplicity_mod_ell(P, ell));
    mpz_class expect = pow_ui(ell, census.rank);
    CHECK(census.count == expect);
  }
}

TEST_CASE("C_5 over F_25: census equals the unity multiplicity") {
  // q* = +5, so the F_25-Frobenius polynomial is (x - 5)^4 and the group
  // order is (1 - 5)^4 = 256
  auto curve = make_small_curve(5);
  auto model = make_model(make_extension(5, 2), {0, -1, 0, 0, 0, 1});
  auto classes = enumerate_jacobian(model);

  std::vector<mpz_class> counts{count_points(curve, make_extension(5, 2)), count_points(curve, make_extension(5, 4))};
  auto P = newton_from_counts(counts, mpz_class(25), 2);
  CHECK(P.coeffs == poly_pow(IntPoly{mpz_class(-5), mpz_class(1)}, 4));
  CHECK(group_order(P) == 256);
  CHECK(classes.size() == 256);

  for (uint64_t ell : {3ULL, 13ULL}) {
    auto census = ell_torsion_census(model, ell);
    CHECK(census.rank == 0);
    CHECK(census.count == 1);
    CHECK(census.rank == unity_multiplicity_mod_ell(P, ell));
  }
}

TEST_CASE("scalar multiplication basics") {
  auto model = make_model(make_extension(5, 1), {1, 1, 0, 0, 0, 1});
  auto classes = enumerate_jacobian(model);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto& d = classes[rng.below(classes.size())];
    CHECK(is_identity(scalar_mul(model, mpz_class(0), d)));
    CHECK(scalar_mul(model, mpz_class(1), d) == d);
    mpz_class a(static_cast<unsigned long>(rng.below(50))), b(static_cast<unsigned long>(rng.below(50)));
    CHECK(scalar_mul(model, a + b, d) == cantor_add(model, scalar_mul(model, a, d), scalar_mul(model, b, d)));
    CHECK(scalar_mul(model, -a, d) == divisor_neg(model, scalar_mul(model, a, d)));
  }
}

TEST_CASE("random divisors are valid and deterministic") {
  auto model = make_model(make_extension(5, 1), {1, 1, 0, 0, 0, 1});
  for (uint64_t seed : {0ULL, 1ULL, 42ULL}) {
    MumfordDivisor a = random_divisor(model, seed);
    MumfordDivisor b = random_divisor(model, seed);
    CHECK(a == b);
    validate_divisor(model, a);
  }
}

TEST_CASE("sampled divisors generate the group") {
  // 10^3 samples must generate at least 90% of the group; on both of these
  // models they generate all of it
  auto generic = make_model(make_extension(5, 1), {1, 1, 0, 0, 0, 1});
  std::vector<MumfordDivisor> gens;
  for (uint64_t seed = 0; seed < 1000; ++seed) gens.push_back(random_divisor(generic, seed));
  size_t total = enumerate_jacobian(generic).size();
  CHECK(generated_subgroup_size(generic, gens) * 10 >= total * 9);

  auto ramified = make_model(make_extension(5, 1), {0, -1, 0, 0, 0, 1});
  gens.clear();
  for (uint64_t seed = 0; seed < 1000; ++seed) gens.push_back(random_divisor(ramified, seed));
  CHECK(generated_subgroup_size(ramified, gens) * 10 >= 16 * 9);
}

TEST_CASE("order-ell witnesses") {
  // y^2 = x^5 + x + 1 over F_5 has group order 36, so a 3-part of rank <= 2
  auto model = make_model(make_extension(5, 1), {1, 1, 0, 0, 0, 1});
  auto e = find_order_ell_element(model, mpz_class(36), 3, 8, 0);
  REQUIRE(e.has_value());
  CHECK(!is_identity(*e));
  CHECK(is_identity(scalar_mul(model, mpz_class(3), *e)));
  validate_divisor(model, *e);

  auto tiny = make_model(make_extension(3, 1), {0, -1, 0, 1});  // order 4
  CHECK_THROWS_AS(find_order_ell_element(tiny, mpz_class(4), 3, 4, 0), Error);
}

TEST_CASE("twists complement the point counts") {
  auto model = make_model(make_extension(5, 1), {1, 1, 0, 0, 0, 1});
  auto twisted = twist_model(model, model.K->from_int(2));
  mpz_class n = count_points_model(model), nt = count_points_model(twisted);
  CHECK(n + nt == 2 * (5 + 1));
  CHECK_THROWS_AS(twist_model(model, model.K->from_int(4)), Error);  // 4 is a square
}

TEST_CASE("medium scale: genus 40 family member over F_9") {
  // y^2 = x^81 - x over F_9; order and torsion from the multiplicity profile
  auto curve = make_curve(3, 2);
  auto model = family_model(curve);
  CHECK(model.genus == 40);

  auto profile = invert_multiplicities(trace_profile(curve, TraceMode::force));
  auto factored = group_order_factored(charpoly_factors(profile));
  mpz_class N = factored.expanded();
  CHECK(N == pow_mpz(mpz_class(-2), 20) * pow_mpz(mpz_class(4), 20) * pow_mpz(mpz_class(10), 20));

  for (uint64_t seed : {0ULL, 7ULL, 123ULL}) {
    MumfordDivisor d = random_divisor(model, seed);
    validate_divisor(model, d);
    CHECK(is_identity(scalar_mul(model, N, d)));
  }

  // v_5(N) = 20 through the Phi_4(3) = 10 factors; d = ord_5(3) = 4
  CHECK(factored.valuation(5) == 20);
  auto witness = find_order_ell_element(model, N, 5, 4, 1);
  REQUIRE(witness.has_value());
  CHECK(is_identity(scalar_mul(model, mpz_class(5), *witness)));
  CHECK(!is_identity(*witness));
}
