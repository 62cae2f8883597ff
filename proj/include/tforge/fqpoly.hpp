#pragma once

#include "tforge/ffield.hpp"

namespace tforge {

constexpr uint32_t kMaxPackedField = 2048;

// Table-backed small field. Element handles are the lexicographic ranks of
// the underlying context, so 0 and 1 are the field's 0 and 1.
class PackedField {
 public:
  explicit PackedField(FieldContextPtr ctx);

  FieldContextPtr ctx;
  uint32_t size;  // cardinality
  uint32_t p;     // characteristic
  uint32_t deg;   // extension degree over F_p

  uint16_t add(uint16_t a, uint16_t b) const { return add_[a * size + b]; }
  uint16_t sub(uint16_t a, uint16_t b) const { return add_[a * size + neg_[b]]; }
  uint16_t mul(uint16_t a, uint16_t b) const { return mul_[a * size + b]; }
  uint16_t neg(uint16_t a) const { return neg_[a]; }
  uint16_t inv(uint16_t a) const;
  int chi(uint16_t a) const { return chi_[a]; }
  // 0xFFFF when a is a nonsquare
  uint16_t sqrt(uint16_t a) const { return sqrt_[a]; }

  uint16_t from_int(int64_t v) const;
  uint16_t from_element(const FieldElement& e) const { return static_cast<uint16_t>(ctx->rank_of(e)); }
  FieldElement to_element(uint16_t a) const { return ctx->element_at(a); }

  // F_p digit of t^i in the element, i < deg
  uint16_t digit(uint16_t a, uint32_t i) const { return digits_[a * deg + i]; }
  uint16_t from_digits(const uint16_t* d) const;

 private:
  std::vector<uint16_t> add_, mul_, neg_, inv_, sqrt_, digits_;
  std::vector<int8_t> chi_;
};

// Dense polynomial over a packed field; coefficients ascending, normalized
// (no trailing zeros, zero polynomial is empty). Multiplication switches to
// Kronecker substitution through GMP integers once operands are large, and
// long division switches to a Newton reciprocal at large quotient degrees.
struct FqPoly {
  std::vector<uint16_t> c;

  bool is_zero() const { return c.empty(); }
  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool operator==(const FqPoly& o) const { return c == o.c; }
};

FqPoly fq_from_coeffs(std::vector<uint16_t> coeffs);  // normalizes
FqPoly fq_constant(uint16_t a);
FqPoly fq_x();

FqPoly fq_add(const PackedField& K, const FqPoly& a, const FqPoly& b);
FqPoly fq_sub(const PackedField& K, const FqPoly& a, const FqPoly& b);
FqPoly fq_neg(const PackedField& K, const FqPoly& a);
FqPoly fq_scale(const PackedField& K, const FqPoly& a, uint16_t s);
FqPoly fq_mul(const PackedField& K, const FqPoly& a, const FqPoly& b);
FqPoly fq_sqr(const PackedField& K, const FqPoly& a);
// quotient and remainder; b nonzero
std::pair<FqPoly, FqPoly> fq_divrem(const PackedField& K, const FqPoly& a, const FqPoly& b);
FqPoly fq_rem(const PackedField& K, const FqPoly& a, const FqPoly& b);
FqPoly fq_divexact(const PackedField& K, const FqPoly& a, const FqPoly& b);

// precomputed series inverse of the reversed divisor, for repeated
// reductions modulo the same polynomial
struct FqRecip {
  FqPoly rinv;  // inverse of rev(b) mod x^(deg b)
};
FqRecip fq_recip(const PackedField& K, const FqPoly& b);
// remainder of a mod b for deg a <= 2 deg b - 1 using the reciprocal
FqPoly fq_rem_precomp(const PackedField& K, const FqPoly& a, const FqPoly& b, const FqRecip& r);
FqPoly fq_make_monic(const PackedField& K, const FqPoly& a);
FqPoly fq_gcd(const PackedField& K, FqPoly a, FqPoly b);  // monic
// monic g = s*a + t*b
FqPoly fq_ext_gcd(const PackedField& K, const FqPoly& a, const FqPoly& b, FqPoly& s, FqPoly& t);
uint16_t fq_eval(const PackedField& K, const FqPoly& a, uint16_t x);
FqPoly fq_deriv(const PackedField& K, const FqPoly& a);
// coefficient-sequence order used for canonical choices
bool fq_lex_less(const FqPoly& a, const FqPoly& b);

}  // namespace tforge
