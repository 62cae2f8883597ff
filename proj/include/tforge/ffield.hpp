#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "tforge/util.hpp"

namespace tforge {

// Arithmetic in F_{p^n} = F_p[t]/(f) with a deterministic defining
// polynomial: the monic irreducible of degree n whose coefficient tuple
// (c_0, ..., c_{n-1}) is lexicographically smallest (c_0 compared first).
// Contexts are immutable; elements are reduced coefficient vectors and
// compare equal iff their coefficients do.
class FieldContext;
using FieldContextPtr = std::shared_ptr<const FieldContext>;

struct FieldElement {
  const FieldContext* ctx = nullptr;
  std::vector<uint64_t> c;  // length n, entries in [0, p)

  bool operator==(const FieldElement& o) const { return ctx == o.ctx && c == o.c; }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }
  bool is_zero() const;
};

class FieldContext {
 public:
  uint64_t p;                       // odd characteristic
  uint32_t n;                       // extension degree
  std::vector<uint64_t> defpoly;    // monic, length n + 1
  mpz_class cardinality;            // p^n

  FieldElement zero() const;
  FieldElement one() const;
  // embed a prime-field value (reduced mod p, negatives allowed)
  FieldElement from_int(int64_t v) const;
  // element with the given reduced coefficient vector
  FieldElement make(std::vector<uint64_t> coeffs) const;
  FieldElement generator() const;  // the class of t (equals 1 when n = 1... no: t is 0 shifted); see impl

  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement neg(const FieldElement& a) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement inv(const FieldElement& a) const;
  FieldElement pow(const FieldElement& a, const mpz_class& e) const;

  // index under c_0 + c_1 p + ... + c_{n-1} p^(n-1): a bijection onto
  // [0, p^n) with the prime-field constants at 0..p-1; requires p^n to
  // fit in 64 bits
  uint64_t rank_of(const FieldElement& e) const;
  FieldElement element_at(uint64_t rank) const;

 private:
  friend FieldContextPtr make_extension(uint64_t p, uint32_t n);
  FieldContext() = default;
};

// Canonical context factory. Repeated calls with the same (p, n) return
// the same shared context.
FieldContextPtr make_extension(uint64_t p, uint32_t n);

// chi(e) = e^((p^n - 1)/2) read in {-1, 0, +1}
int quadratic_character(const FieldElement& e);

// e^(p^(j mod n)); an additive and multiplicative homomorphism
FieldElement frobenius_power(const FieldElement& e, uint64_t j);

// deterministic square root (the root with the lexicographically smaller
// coefficient tuple); nullopt when chi(e) = -1
std::optional<FieldElement> sqrt(const FieldElement& e);

constexpr uint64_t kDefaultBudget = uint64_t(1) << 26;

// Visits every element exactly once in lexicographic coefficient order.
void enumerate_elements(const FieldContextPtr& ctx, const std::function<void(const FieldElement&)>& fn,
                        uint64_t budget = kDefaultBudget);

}  // namespace tforge
