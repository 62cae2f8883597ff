#include "doctest.h"
#include "tforge/fqpoly.hpp"
#include "tforge/jacobian.hpp"

using namespace tforge;

namespace {

FqPoly random_poly(Rng& rng, uint32_t size, int degree) {
  std::vector<uint16_t> c(degree + 1);
  for (auto& v : c) v = static_cast<uint16_t>(rng.below(size));
  if (c.back() == 0) c.back() = 1;
  return fq_from_coeffs(std::move(c));
}

// reference multiplication through the field context
FqPoly mul_reference(const PackedField& K, const FqPoly& a, const FqPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<FieldElement> r(a.c.size() + b.c.size() - 1, K.ctx->zero());
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j)
      r[i + j] = K.ctx->add(r[i + j], K.ctx->mul(K.to_element(a.c[i]), K.to_element(b.c[j])));
  std::vector<uint16_t> out(r.size());
  for (size_t i = 0; i < r.size(); ++i) out[i] = K.from_element(r[i]);
  return fq_from_coeffs(std::move(out));
}

}  // namespace

TEST_CASE("packed tables mirror the context") {
  auto K = packed_field(5, 2);
  uint64_t card = 25;
  Rng rng(11);
  for (int i = 0; i < 400; ++i) {
    uint16_t a = static_cast<uint16_t>(rng.below(card));
    uint16_t b = static_cast<uint16_t>(rng.below(card));
    auto ea = K->to_element(a), eb = K->to_element(b);
    CHECK(K->add(a, b) == K->from_element(K->ctx->add(ea, eb)));
    CHECK(K->mul(a, b) == K->from_element(K->ctx->mul(ea, eb)));
    CHECK(K->neg(a) == K->from_element(K->ctx->neg(ea)));
    CHECK(K->chi(a) == quadratic_character(ea));
    if (a) CHECK(K->mul(a, K->inv(a)) == 1);
    uint16_t r = K->sqrt(a);
    if (K->chi(a) >= 0) {
      CHECK(K->mul(r, r) == a);
    } else {
      CHECK(r == 0xFFFF);
    }
  }
}

TEST_CASE("kronecker multiplication agrees with schoolbook") {
  for (auto [p, n] : std::vector<std::pair<uint64_t, uint32_t>>{{5, 1}, {13, 1}, {5, 2}, {7, 2}, {3, 2}}) {
    auto K = packed_field(p, n);
    Rng rng(p * 31 + n);
    for (int degree : {1, 5, 47, 48, 120, 311}) {
      FqPoly a = random_poly(rng, K->size, degree);
      FqPoly b = random_poly(rng, K->size, degree + 3);
      CHECK(fq_mul(*K, a, b) == mul_reference(*K, a, b));
    }
  }
}

TEST_CASE("division and remainder") {
  auto K = packed_field(5, 2);
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    int da = 20 + static_cast<int>(rng.below(600));
    int db = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(da)));
    FqPoly a = random_poly(rng, K->size, da);
    FqPoly b = random_poly(rng, K->size, db);
    auto [q, r] = fq_divrem(*K, a, b);
    CHECK(r.deg() < b.deg());
    CHECK(fq_add(*K, fq_mul(*K, q, b), r) == a);
  }
}

TEST_CASE("extended gcd") {
  auto K = packed_field(5, 2);
  Rng rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    FqPoly a = random_poly(rng, K->size, 3 + static_cast<int>(rng.below(40)));
    FqPoly b = random_poly(rng, K->size, 1 + static_cast<int>(rng.below(40)));
    FqPoly s, t;
    FqPoly g = fq_ext_gcd(*K, a, b, s, t);
    CHECK(g.c.back() == 1);
    CHECK(fq_add(*K, fq_mul(*K, s, a), fq_mul(*K, t, b)) == g);
    CHECK(fq_rem(*K, a, g).is_zero());
    CHECK(fq_rem(*K, b, g).is_zero());
    CHECK(fq_gcd(*K, a, b) == g);
  }
}

TEST_CASE("evaluation and derivative") {
  auto K = packed_field(7, 1);
  // f = x^3 - x over F_7
  FqPoly f = fq_from_coeffs({0, K->from_int(-1), 0, 1});
  CHECK(fq_eval(*K, f, 2) == K->from_int(6));
  CHECK(fq_eval(*K, f, 1) == 0);
  // f' = 3x^2 - 1
  FqPoly d = fq_deriv(*K, f);
  CHECK(d == fq_from_coeffs({K->from_int(-1), 0, K->from_int(3)}));
  CHECK(fq_gcd(*K, f, d).deg() == 0);  // squarefree
}
