#include "tforge/cyclo.hpp"

#include <algorithm>

namespace tforge {

int64_t f_prime_power(uint64_t r, uint32_t a, uint32_t b) {
  if (!is_prime_u64(r)) fail(Err::NotPrime, std::to_string(r) + " is not prime");
  if (a == 0) return 1;
  if (a > b + 1) return 0;
  int64_t rpow = 1;
  for (uint32_t i = 1; i < a; ++i) rpow *= static_cast<int64_t>(r);
  if (a == b + 1) return -rpow;
  return static_cast<int64_t>(r - 1) * rpow;
}

int64_t f_value(uint64_t d, uint64_t s) {
  if (d == 0 || s == 0) fail(Err::Internal, "f requires positive arguments");
  int64_t out = 1;
  for (auto [r, a] : factorize_u64(d)) out *= f_prime_power(r, a, valuation_u64(s, r));
  return out;
}

int64_t f_oracle(uint64_t d, uint64_t s) {
  if (d > 1000000) fail(Err::BudgetExceeded, "oracle divisor enumeration capped at 10^6");
  int64_t sum = 0;
  for (uint64_t e : divisors_u64(d)) {
    if (s % e != 0) continue;
    sum += moebius_u64(d / e) * static_cast<int64_t>(e);
  }
  return sum;
}

int64_t pinversion_check(uint64_t r, uint32_t k, uint32_t d, uint32_t e) {
  if (!is_prime_u64(r)) fail(Err::NotPrime, std::to_string(r) + " is not prime");
  int64_t sum = 0;
  for (uint32_t i = 0; i <= k; ++i) sum += f_prime_power(r, d, i) * f_prime_power(r, k - i, k - e);
  return sum;
}

int64_t c_coeff(uint64_t n, uint64_t s, uint64_t d) {
  if (n == 0 || s == 0 || d == 0 || n % s != 0 || n % d != 0)
    fail(Err::NotDivisor, "c_s(d) requires s | n and d | n");
  int64_t out = 1;
  for (auto [r, k] : factorize_u64(n)) {
    uint32_t vs = std::min(valuation_u64(s, r), k);
    uint32_t vd = std::min(valuation_u64(d, r), k);
    out *= f_prime_power(r, k - vs, k - vd);
  }
  return out;
}

CyclotomicTable::CyclotomicTable(uint64_t n_) : n(n_), divisors(divisors_u64(n_)) {
  size_t t = divisors.size();
  f.assign(t, std::vector<int64_t>(t, 0));
  c.assign(t, std::vector<int64_t>(t, 0));
  for (size_t di = 0; di < t; ++di)
    for (size_t si = 0; si < t; ++si) f[di][si] = f_value(divisors[di], divisors[si]);
  for (size_t si = 0; si < t; ++si)
    for (size_t di = 0; di < t; ++di) c[si][di] = c_coeff(n, divisors[si], divisors[di]);
}

size_t CyclotomicTable::index_of(uint64_t d) const {
  auto it = std::lower_bound(divisors.begin(), divisors.end(), d);
  if (it == divisors.end() || *it != d) fail(Err::NotDivisor, std::to_string(d) + " does not divide " + std::to_string(n));
  return static_cast<size_t>(it - divisors.begin());
}

const mpz_class& MultiplicityProfile::at(uint64_t d) const {
  for (const auto& [dd, ad] : a)
    if (dd == d) return ad;
  fail(Err::Internal, "no multiplicity for d = " + std::to_string(d));
}

std::vector<mpz_class> ramanujan_invert(uint64_t n, const std::vector<mpz_class>& t_by_divisor) {
  CyclotomicTable table(n);
  if (t_by_divisor.size() != table.divisors.size())
    fail(Err::Internal, "trace vector length does not match the divisor count of " + std::to_string(n));
  std::vector<mpz_class> out;
  out.reserve(table.divisors.size());
  mpz_class nn(static_cast<unsigned long>(n));
  for (size_t di = 0; di < table.divisors.size(); ++di) {
    mpz_class acc = 0;
    for (size_t si = 0; si < table.divisors.size(); ++si)
      acc += mpz_class(static_cast<long>(table.c[si][di])) * t_by_divisor[si];
    mpz_class ad, r;
    mpz_fdiv_qr(ad.get_mpz_t(), r.get_mpz_t(), acc.get_mpz_t(), nn.get_mpz_t());
    if (r != 0)
      fail(Err::NonIntegral,
           "a_" + std::to_string(table.divisors[di]) + " = " + acc.get_str() + "/" + std::to_string(n));
    if (ad < 0) fail(Err::Negative, "a_" + std::to_string(table.divisors[di]) + " = " + ad.get_str());
    out.push_back(std::move(ad));
  }
  return out;
}

MultiplicityProfile invert_multiplicities(const TraceProfile& t) {
  uint64_t n = 2 * static_cast<uint64_t>(t.m);
  auto divs = divisors_u64(n);
  std::vector<mpz_class> traces;
  traces.reserve(divs.size());
  for (uint64_t s : divs) traces.push_back(t.at(static_cast<uint32_t>(s)).t);
  std::vector<mpz_class> a = ramanujan_invert(n, traces);

  MultiplicityProfile out;
  out.p = t.p;
  out.q0 = t.q0;
  out.m = t.m;
  mpz_class phi_sum = 0;
  for (size_t di = 0; di < divs.size(); ++di) {
    phi_sum += a[di] * mpz_class(static_cast<unsigned long>(euler_phi_u64(divs[di])));
    out.a.emplace_back(divs[di], a[di]);
  }
  mpz_class expect = out.q() - 1;
  if (phi_sum != expect)
    fail(Err::ProfileInvalid, "sum a_d phi(d) = " + phi_sum.get_str() + " but q - 1 = " + expect.get_str());
  return out;
}

MultiplicityProfile solve_multiplicities_oracle(const TraceProfile& t) {
  uint64_t n = 2 * static_cast<uint64_t>(t.m);
  auto divs = divisors_u64(n);
  size_t dim = divs.size();

  // rows indexed by s, columns by d: sum_d f(d, s) a_d = t_s
  std::vector<std::vector<mpq_class>> aug(dim, std::vector<mpq_class>(dim + 1));
  for (size_t si = 0; si < dim; ++si) {
    for (size_t di = 0; di < dim; ++di) aug[si][di] = mpq_class(static_cast<long>(f_value(divs[di], divs[si])));
    aug[si][dim] = mpq_class(t.at(static_cast<uint32_t>(divs[si])).t);
  }

  for (size_t col = 0; col < dim; ++col) {
    size_t piv = col;
    while (piv < dim && aug[piv][col] == 0) ++piv;
    if (piv == dim) fail(Err::SingularSystem, "trace system singular at column " + std::to_string(col));
    std::swap(aug[piv], aug[col]);
    mpq_class inv = 1 / aug[col][col];
    for (size_t k = col; k <= dim; ++k) aug[col][k] *= inv;
    for (size_t row = 0; row < dim; ++row) {
      if (row == col || aug[row][col] == 0) continue;
      mpq_class factor = aug[row][col];
      for (size_t k = col; k <= dim; ++k) aug[row][k] -= factor * aug[col][k];
    }
  }

  MultiplicityProfile out;
  out.p = t.p;
  out.q0 = t.q0;
  out.m = t.m;
  for (size_t di = 0; di < dim; ++di) {
    mpq_class v = aug[di][dim];
    v.canonicalize();
    if (v.get_den() != 1) fail(Err::NonIntegral, "oracle solution non-integral at d = " + std::to_string(divs[di]));
    if (v < 0) fail(Err::Negative, "oracle solution negative at d = " + std::to_string(divs[di]));
    out.a.emplace_back(divs[di], v.get_num());
  }
  return out;
}

AdAppearsReport adappears_check(const MultiplicityProfile& profile) {
  AdAppearsReport report;
  report.derived_all_ok = true;
  report.literal_all_ok = true;
  mpz_class q = profile.q();
  mpz_class root = sqrt_ceil(q);
  uint64_t m = profile.m;
  for (const auto& [d, ad] : profile.a) {
    AdAppearsRow row;
    row.d = d;
    row.derived_lhs = abs(mpz_class(2 * m) * ad - (q - 1));
    row.derived_rhs = mpz_class(2 * m - 1) * (root + 1);
    row.derived_ok = row.derived_lhs <= row.derived_rhs;
    row.literal_lhs = abs(mpz_class(m) * ad - (q - 1));
    row.literal_rhs = mpz_class(m - 1) * (root + 1);
    row.literal_ok = row.literal_lhs <= row.literal_rhs;
    if (!row.derived_ok) {
      report.derived_all_ok = false;
      fail(Err::DerivedBoundViolated, "d = " + std::to_string(d) + ": |2m a_d - (q-1)| = " +
                                          row.derived_lhs.get_str() + " > " + row.derived_rhs.get_str());
    }
    if (!row.literal_ok) report.literal_all_ok = false;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace tforge
