#include "tforge/util.hpp"

#include <algorithm>
#include <cmath>

namespace tforge {

const char* err_name(Err e) {
  switch (e) {
    case Err::NotPrime: return "NotPrime";
    case Err::EvenPrime: return "EvenPrime";
    case Err::DegreeZero: return "DegreeZero";
    case Err::BudgetExceeded: return "BudgetExceeded";
    case Err::NonIntegral: return "NonIntegral";
    case Err::Negative: return "Negative";
    case Err::NotDivisor: return "NotDivisor";
    case Err::SingularSystem: return "SingularSystem";
    case Err::DerivedBoundViolated: return "DerivedBoundViolated";
    case Err::ProfileInvalid: return "ProfileInvalid";
    case Err::InconsistentCounts: return "InconsistentCounts";
    case Err::NonPositive: return "NonPositive";
    case Err::InvalidDivisor: return "InvalidDivisor";
    case Err::SamplingExhausted: return "SamplingExhausted";
    case Err::NotAPowerOfEll: return "NotAPowerOfEll";
    case Err::Inadmissible: return "Inadmissible";
    case Err::DecompositionFailed: return "DecompositionFailed";
    case Err::CrossCheckFailed: return "CrossCheckFailed";
    case Err::SignConventionViolated: return "SignConventionViolated";
    case Err::Internal: return "Internal";
  }
  return "Unknown";
}

static uint64_t splitmix64_step(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(uint64_t seed, uint64_t stream) : state(seed) {
  // decorrelate the stream id from the base seed
  state ^= 0xd1b54a32d192ed03ULL * (stream + 1);
  splitmix64_step(state);
}

uint64_t Rng::next() { return splitmix64_step(state); }

uint64_t Rng::below(uint64_t n) {
  // rejection sampling to stay unbiased
  uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % n;
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
  if (m == 1) return 0;
  uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  // deterministic Miller-Rabin base set for 64-bit inputs
  for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

static uint64_t pollard_rho(uint64_t n, Rng& rng) {
  while (true) {
    uint64_t c = rng.below(n - 1) + 1;
    uint64_t x = rng.below(n), y = x, d = 1;
    auto step = [&](uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      uint64_t diff = x > y ? x - y : y - x;
      if (diff == 0) break;
      d = gcd_u64(diff, n);
    }
    if (d != 1 && d != n) return d;
  }
}

static void factor_rec(uint64_t n, std::vector<uint64_t>& out, Rng& rng) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    out.push_back(n);
    return;
  }
  uint64_t d = pollard_rho(n, rng);
  factor_rec(d, out, rng);
  factor_rec(n / d, out, rng);
}

std::vector<std::pair<uint64_t, uint32_t>> factorize_u64(uint64_t n) {
  std::vector<uint64_t> primes;
  for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) {
    Rng rng(0x9d2c5680u);
    factor_rec(n, primes, rng);
  }
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<uint64_t, uint32_t>> out;
  for (uint64_t p : primes) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.push_back({p, 1});
  }
  return out;
}

std::vector<uint64_t> divisors_u64(uint64_t n) {
  std::vector<uint64_t> divs{1};
  for (auto [p, k] : factorize_u64(n)) {
    size_t base = divs.size();
    uint64_t pe = 1;
    for (uint32_t i = 1; i <= k; ++i) {
      pe *= p;
      for (size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pe);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

uint64_t euler_phi_u64(uint64_t n) {
  uint64_t phi = 1;
  for (auto [p, k] : factorize_u64(n)) {
    phi *= p - 1;
    for (uint32_t i = 1; i < k; ++i) phi *= p;
  }
  return phi;
}

int moebius_u64(uint64_t n) {
  int sign = 1;
  for (auto [p, k] : factorize_u64(n)) {
    (void)p;
    if (k > 1) return 0;
    sign = -sign;
  }
  return sign;
}

uint32_t valuation_u64(uint64_t n, uint64_t p) {
  uint32_t v = 0;
  while (n % p == 0) n /= p, ++v;
  return v;
}

uint64_t gcd_u64(uint64_t a, uint64_t b) {
  while (b) {
    uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

uint64_t multiplicative_order(uint64_t a, uint64_t n) {
  if (gcd_u64(a % n, n) != 1) fail(Err::Internal, "order of non-unit");
  uint64_t group = euler_phi_u64(n);
  uint64_t order = group;
  for (auto [p, k] : factorize_u64(group)) {
    (void)k;
    while (order % p == 0 && powmod_u64(a % n, order / p, n) == 1) order /= p;
  }
  return order;
}

mpz_class pow_mpz(const mpz_class& base, uint64_t exp) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

mpz_class pow_ui(uint64_t base, uint64_t exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

mpz_class valuation_mpz(const mpz_class& n, const mpz_class& p) {
  if (n == 0) fail(Err::Internal, "valuation of zero");
  mpz_class v = 0, rest = abs(n), q, r;
  while (true) {
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
    if (r != 0) break;
    rest = q;
    ++v;
  }
  return v;
}

mpz_class sqrt_exact(const mpz_class& n) {
  mpz_class root, rem;
  mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
  if (rem != 0) fail(Err::Internal, "not a perfect square: " + n.get_str());
  return root;
}

mpz_class sqrt_ceil(const mpz_class& n) {
  mpz_class root, rem;
  mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
  if (rem != 0) ++root;
  return root;
}

double log2_mpz(const mpz_class& n) {
  signed long e;
  double m = mpz_get_d_2exp(&e, n.get_mpz_t());
  return std::log2(m) + static_cast<double>(e);
}

}  // namespace tforge
