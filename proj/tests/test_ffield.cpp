#include "doctest.h"
#include "tforge/ffield.hpp"

#include <set>

using namespace tforge;

TEST_CASE("canonical contexts") {
  auto f3 = make_extension(3, 1);
  CHECK(f3->defpoly == std::vector<uint64_t>{0, 1});
  CHECK(f3->cardinality == 3);

  auto f9 = make_extension(3, 2);
  CHECK(f9->defpoly == std::vector<uint64_t>{1, 0, 1});  // t^2 + 1
  CHECK(make_extension(3, 2).get() == f9.get());

  auto f58 = make_extension(5, 8);
  CHECK(f58->cardinality == 390625);
}

// independent route to the defining polynomial: the chosen quadratic must be
// irreducible (no roots) and every lexicographically smaller candidate must
// have a root
TEST_CASE("defining polynomial is the lex-smallest irreducible") {
  for (uint64_t p : {3ULL, 5ULL, 7ULL, 13ULL}) {
    auto ctx = make_extension(p, 2);
    auto has_root = [&](uint64_t c0, uint64_t c1) {
      for (uint64_t x = 0; x < p; ++x)
        if ((x * x + c1 * x + c0) % p == 0) return true;
      return false;
    };
    uint64_t c0 = ctx->defpoly[0], c1 = ctx->defpoly[1];
    CHECK(!has_root(c0, c1));
    for (uint64_t a = 0; a <= c0; ++a)
      for (uint64_t b = 0; a < c0 ? b < p : b < c1; ++b) CHECK(has_root(a, b));
  }
}

TEST_CASE("context errors") {
  CHECK_THROWS_AS(make_extension(4, 1), Error);
  CHECK_THROWS_AS(make_extension(2, 3), Error);
  CHECK_THROWS_AS(make_extension(5, 0), Error);
  try {
    make_extension(5, 0);
  } catch (const Error& e) {
    CHECK(e.kind() == Err::DegreeZero);
  }
}

TEST_CASE("quadratic character on F_5") {
  auto f5 = make_extension(5, 1);
  CHECK(quadratic_character(f5->from_int(0)) == 0);
  CHECK(quadratic_character(f5->from_int(1)) == 1);
  CHECK(quadratic_character(f5->from_int(2)) == -1);
  CHECK(quadratic_character(f5->from_int(3)) == -1);
  CHECK(quadratic_character(f5->from_int(4)) == 1);
}

TEST_CASE("-2 is a square in F_{q^2} for odd q") {
  for (auto [p, a] : std::vector<std::pair<uint64_t, uint32_t>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}, {13, 1}, {5, 2}}) {
    auto ctx = make_extension(p, 2 * a);
    CHECK(quadratic_character(ctx->from_int(-2)) == 1);
  }
}

TEST_CASE("character is multiplicative and balanced") {
  for (auto [p, n] : std::vector<std::pair<uint64_t, uint32_t>>{{3, 2}, {7, 2}, {3, 3}}) {
    auto ctx = make_extension(p, n);
    int squares = 0;
    enumerate_elements(ctx, [&](const FieldElement& e) {
      if (quadratic_character(e) == 1) ++squares;
    });
    uint64_t card = mpz_get_ui(ctx->cardinality.get_mpz_t());
    CHECK(squares == static_cast<int>((card - 1) / 2));

    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
      auto a = ctx->element_at(rng.below(card));
      auto b = ctx->element_at(rng.below(card));
      CHECK(quadratic_character(ctx->mul(a, b)) == quadratic_character(a) * quadratic_character(b));
    }
  }
}

TEST_CASE("field axioms on random triples") {
  for (auto [p, n] : std::vector<std::pair<uint64_t, uint32_t>>{{5, 1}, {3, 2}, {5, 2}, {3, 4}, {13, 2}}) {
    auto ctx = make_extension(p, n);
    uint64_t card = mpz_get_ui(ctx->cardinality.get_mpz_t());
    Rng rng(card);
    for (int i = 0; i < 10000; ++i) {
      auto a = ctx->element_at(rng.below(card));
      auto b = ctx->element_at(rng.below(card));
      auto c = ctx->element_at(rng.below(card));
      CHECK(ctx->add(ctx->add(a, b), c) == ctx->add(a, ctx->add(b, c)));
      CHECK(ctx->mul(ctx->mul(a, b), c) == ctx->mul(a, ctx->mul(b, c)));
      CHECK(ctx->mul(a, ctx->add(b, c)) == ctx->add(ctx->mul(a, b), ctx->mul(a, c)));
      CHECK(ctx->mul(a, b) == ctx->mul(b, a));
      if (!a.is_zero()) CHECK(ctx->mul(a, ctx->inv(a)) == ctx->one());
    }
  }
}

TEST_CASE("frobenius power") {
  auto f5 = make_extension(5, 1);
  CHECK(frobenius_power(f5->from_int(3), 1) == f5->from_int(3));

  auto f9 = make_extension(3, 2);
  auto t = f9->generator();
  CHECK(frobenius_power(t, 2) == t);
  // t^3 = -t for the defining polynomial t^2 + 1
  CHECK(frobenius_power(t, 1) == f9->pow(t, 3));
  CHECK(frobenius_power(t, 1) == f9->make({0, 2}));
}

TEST_CASE("frobenius permutes and fixes exactly the prime field") {
  for (auto [p, n] : std::vector<std::pair<uint64_t, uint32_t>>{{3, 2}, {3, 6}, {5, 3}}) {
    auto ctx = make_extension(p, n);
    std::set<uint64_t> image;
    uint64_t fixed = 0;
    enumerate_elements(ctx, [&](const FieldElement& e) {
      auto fe = frobenius_power(e, 1);
      image.insert(ctx->rank_of(fe));
      if (fe == e) ++fixed;
      // homomorphism spot checks
      CHECK(frobenius_power(ctx->mul(e, e), 1) == ctx->mul(fe, fe));
    });
    CHECK(image.size() == mpz_get_ui(ctx->cardinality.get_mpz_t()));
    CHECK(fixed == p);
  }
}

TEST_CASE("square roots") {
  auto f5 = make_extension(5, 1);
  CHECK(*sqrt(f5->from_int(4)) == f5->from_int(2));  // canonical pick between 2 and 3
  CHECK(*sqrt(f5->from_int(0)) == f5->zero());
  CHECK(!sqrt(f5->from_int(2)).has_value());

  for (auto [p, n] : std::vector<std::pair<uint64_t, uint32_t>>{{5, 1}, {3, 2}, {5, 2}, {7, 2}, {3, 5}}) {
    auto ctx = make_extension(p, n);
    enumerate_elements(ctx, [&](const FieldElement& e) {
      auto r = sqrt(e);
      if (quadratic_character(e) >= 0) {
        REQUIRE(r.has_value());
        CHECK(ctx->mul(*r, *r) == e);
        CHECK(*sqrt(e) == *r);  // deterministic
        auto other = ctx->neg(*r);
        CHECK(!(other.c < r->c));  // canonical choice is the lex-smaller root
      } else {
        CHECK(!r.has_value());
      }
    });
  }
}

TEST_CASE("enumeration order and budget") {
  auto f3 = make_extension(3, 1);
  std::vector<uint64_t> seen;
  enumerate_elements(f3, [&](const FieldElement& e) { seen.push_back(e.c[0]); });
  CHECK(seen == std::vector<uint64_t>{0, 1, 2});

  auto f9 = make_extension(3, 2);
  uint64_t count = 0;
  bool ordered = true;
  std::vector<uint64_t> prev;
  enumerate_elements(f9, [&](const FieldElement& e) {
    if (!prev.empty() && !(prev < e.c)) ordered = false;  // lexicographic on (c_0, c_1, ...)
    prev = e.c;
    ++count;
  });
  CHECK(count == 9);
  CHECK(ordered);

  auto f58 = make_extension(5, 8);
  count = 0;
  enumerate_elements(f58, [&](const FieldElement&) { ++count; });
  CHECK(count == 390625);
  CHECK_THROWS_AS(enumerate_elements(f58, [](const FieldElement&) {}, 1024), Error);
}

TEST_CASE("rank round trip") {
  auto ctx = make_extension(7, 3);
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    uint64_t r = rng.below(343);
    CHECK(ctx->rank_of(ctx->element_at(r)) == r);
  }
}
