#pragma once

#include <memory>
#include <mutex>
#include <optional>

#include "tforge/counting.hpp"
#include "tforge/fqpoly.hpp"

namespace tforge {

// shared packed-field registry
std::shared_ptr<const PackedField> packed_field(uint64_t p, uint32_t n);

// y^2 = F(x) with F squarefree of odd degree; genus (deg F - 1)/2. The
// leading coefficient may be any nonzero value, which makes quadratic
// twists y^2 = c F(x) first-class.
struct HyperellipticModel {
  std::shared_ptr<const PackedField> K;
  FqPoly F;
  uint32_t genus = 0;

  struct SamplerCache {
    std::mutex mtx;
    FqPoly modulus;  // irreducible of degree genus over K
    bool ready = false;
  };
  std::shared_ptr<SamplerCache> sampler = std::make_shared<SamplerCache>();
};

HyperellipticModel make_model(std::shared_ptr<const PackedField> K, FqPoly F);
// prime-field coefficients, ascending, embedded as constants
HyperellipticModel make_model(const FieldContextPtr& base, const std::vector<int64_t>& coeffs);
// the family curve y^2 = x^q - x over F_{p^2}
HyperellipticModel family_model(const CurveInstance& curve);
// y^2 = c F(x); c must be a nonsquare for a genuine twist
HyperellipticModel twist_model(const HyperellipticModel& base, uint16_t c);

struct MumfordDivisor {
  FqPoly u, v;
  bool operator==(const MumfordDivisor& o) const { return u == o.u && v == o.v; }
};

MumfordDivisor divisor_identity();
bool is_identity(const MumfordDivisor& d);
// reduced Mumford pair: u monic of degree <= genus, deg v < deg u,
// u | v^2 - F; throws InvalidDivisor otherwise
void validate_divisor(const HyperellipticModel& model, const MumfordDivisor& d);

MumfordDivisor cantor_add(const HyperellipticModel& model, const MumfordDivisor& a, const MumfordDivisor& b);
MumfordDivisor divisor_neg(const HyperellipticModel& model, const MumfordDivisor& a);
MumfordDivisor scalar_mul(const HyperellipticModel& model, const mpz_class& n, const MumfordDivisor& d);

// every class exactly once (all reduced pairs); budget bounds sum_k |K|^k
std::vector<MumfordDivisor> enumerate_jacobian(const HyperellipticModel& model, uint64_t budget = 1000000);

struct TorsionCensus {
  mpz_class count;  // #{D : ell D = 0}
  uint32_t rank;    // log_ell of count
};
TorsionCensus ell_torsion_census(const HyperellipticModel& model, uint64_t ell, uint64_t budget = 1000000);
// census over an already enumerated class list
TorsionCensus ell_torsion_census(const HyperellipticModel& model, uint64_t ell,
                                 const std::vector<MumfordDivisor>& classes);

// Deterministic sampling through the degree-genus extension: draw x0,
// take u as its minimal polynomial, v as the square root of F at x0
// carried back to the base by the power basis of x0. Retries with an
// incremented sub-seed when F(x0) is a nonsquare.
MumfordDivisor random_divisor(const HyperellipticModel& model, uint64_t seed);

// an element of order exactly ell, built as (N / ell^v) * random and
// verified; nullopt when every trial collapses to the identity
std::optional<MumfordDivisor> find_order_ell_element(const HyperellipticModel& model, const mpz_class& N,
                                                     uint64_t ell, uint32_t trials, uint64_t seed);

// #{(x, y) : y^2 = F(x)} + 1 by enumeration, for arbitrary prime-field
// coefficient vectors over any enumerable field
mpz_class count_points_enum(const FieldContextPtr& field, const std::vector<int64_t>& coeffs,
                            uint64_t budget = kDefaultBudget);

// the same count over the model's own (packed, hence small) base field
mpz_class count_points_model(const HyperellipticModel& model);

}  // namespace tforge
