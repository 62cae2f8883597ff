#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace tforge {

// Failure taxonomy. Conditions that the theory says cannot happen
// (CrossCheckFailed, SingularSystem, ...) still map to exceptions so a
// violation aborts the computation loudly instead of producing garbage.
enum class Err {
  NotPrime,
  EvenPrime,
  DegreeZero,
  BudgetExceeded,
  NonIntegral,
  Negative,
  NotDivisor,
  SingularSystem,
  DerivedBoundViolated,
  ProfileInvalid,
  InconsistentCounts,
  NonPositive,
  InvalidDivisor,
  SamplingExhausted,
  NotAPowerOfEll,
  Inadmissible,
  DecompositionFailed,
  CrossCheckFailed,
  SignConventionViolated,
  Internal,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err kind, const std::string& msg)
      : std::runtime_error(std::string(err_name(kind)) + ": " + msg), kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

[[noreturn]] inline void fail(Err kind, const std::string& msg) { throw Error(kind, msg); }

// Deterministic 64-bit generator (splitmix64). Streams are derived by
// hashing (seed, stream) so per-trial sub-seeds never collide with the
// base sequence.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  Rng(uint64_t seed, uint64_t stream);
  uint64_t next();
  // uniform in [0, n), n > 0
  uint64_t below(uint64_t n);
};

// ---- small-integer number theory (all deterministic) ----

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m);
bool is_prime_u64(uint64_t n);

// prime factorization as (prime, exponent) pairs, primes ascending
std::vector<std::pair<uint64_t, uint32_t>> factorize_u64(uint64_t n);
std::vector<uint64_t> divisors_u64(uint64_t n);  // ascending
uint64_t euler_phi_u64(uint64_t n);
int moebius_u64(uint64_t n);  // in {-1, 0, 1}
uint32_t valuation_u64(uint64_t n, uint64_t p);
uint64_t gcd_u64(uint64_t a, uint64_t b);
// multiplicative order of a modulo n, gcd(a, n) = 1
uint64_t multiplicative_order(uint64_t a, uint64_t n);

// ---- arbitrary-precision helpers ----

mpz_class pow_mpz(const mpz_class& base, uint64_t exp);
mpz_class pow_ui(uint64_t base, uint64_t exp);
// largest e with p^e | n (n != 0)
mpz_class valuation_mpz(const mpz_class& n, const mpz_class& p);
// exact integer square root; throws Internal if n is not a perfect square
mpz_class sqrt_exact(const mpz_class& n);
// ceil(sqrt(n)) for n >= 0
mpz_class sqrt_ceil(const mpz_class& n);
double log2_mpz(const mpz_class& n);  // n > 0

}  // namespace tforge
