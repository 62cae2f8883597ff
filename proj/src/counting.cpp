#include "tforge/counting.hpp"

#include <algorithm>
#include <thread>

namespace tforge {

CurveInstance make_curve(uint64_t p, uint32_t m) {
  if (p == 2) fail(Err::EvenPrime, "the family requires odd characteristic");
  if (!is_prime_u64(p)) fail(Err::NotPrime, std::to_string(p) + " is not prime");
  if (m == 0) fail(Err::DegreeZero, "m must be positive");
  CurveInstance c;
  c.p = p;
  c.m = m;
  c.exponent = 2 * m;
  c.family = true;
  c.q = pow_ui(p, c.exponent);
  c.q0 = pow_ui(p, 2);
  c.genus = (c.q - 1) / 2;
  c.qstar = (((c.q - 1) / 2) % 2 == 0) ? c.q : -c.q;
  return c;
}

CurveInstance make_small_curve(const mpz_class& q) {
  if (q < 3 || !q.fits_ulong_p()) fail(Err::NotPrime, "q must be a small odd prime power");
  uint64_t qu = mpz_get_ui(q.get_mpz_t());
  auto fac = factorize_u64(qu);
  if (fac.size() != 1 || fac[0].first == 2)
    fail(Err::NotPrime, q.get_str() + " is not an odd prime power");
  CurveInstance c;
  c.p = fac[0].first;
  c.exponent = fac[0].second;
  c.family = (c.exponent % 2 == 0);
  c.m = c.family ? c.exponent / 2 : 0;
  c.q = q;
  c.q0 = pow_ui(c.p, 2);
  c.genus = (c.q - 1) / 2;
  c.qstar = (((c.q - 1) / 2) % 2 == 0) ? c.q : -c.q;
  return c;
}

namespace {

// Plain-array mirror of a field context for the counting kernels.
// Enumerable fields keep p well below 2^32, so products fit in uint64.
struct Kernel {
  uint64_t p;
  uint32_t n;
  std::vector<uint64_t> f;  // defining polynomial, monic, length n+1

  explicit Kernel(const FieldContext& ctx) : p(ctx.p), n(ctx.n), f(ctx.defpoly) {}

  // c = a*a mod f, all vectors length n
  void sq(const uint64_t* a, uint64_t* c, uint64_t* scratch) const {
    for (uint32_t i = 0; i < 2 * n - 1; ++i) scratch[i] = 0;
    for (uint32_t i = 0; i < n; ++i) {
      if (a[i] == 0) continue;
      for (uint32_t j = 0; j < n; ++j) {
        if (a[j] == 0) continue;
        scratch[i + j] = (scratch[i + j] + a[i] * a[j]) % p;
      }
    }
    for (uint32_t i = 2 * n - 1; i-- > n;) {
      uint64_t c0 = scratch[i];
      if (c0 == 0) continue;
      scratch[i] = 0;
      for (uint32_t k = 0; k < n; ++k) {
        uint64_t t = (c0 * f[k]) % p;
        uint64_t& cell = scratch[i - n + k];
        cell = (cell >= t) ? cell - t : cell + p - t;
      }
    }
    for (uint32_t i = 0; i < n; ++i) c[i] = scratch[i];
  }

  uint64_t rank(const uint64_t* a) const {
    uint64_t r = 0;
    for (uint32_t i = 0; i < n; ++i) r = r * p + a[i];
    return r;
  }
};

// one bit per element rank marking the nonzero squares
std::vector<uint64_t> build_square_bitmap(const FieldContextPtr& ctx, uint64_t card, int workers) {
  Kernel K(*ctx);
  uint64_t words = (card + 63) / 64;
  std::vector<uint64_t> bitmap(words, 0);
  int nw = std::max(1, workers);
  auto run = [&](uint64_t lo, uint64_t hi, std::vector<uint64_t>& local) {
    std::vector<uint64_t> x(K.n), s(K.n), scratch(2 * K.n);
    {
      uint64_t r = lo;
      for (uint32_t i = K.n; i-- > 0;) {
        x[i] = r % K.p;
        r /= K.p;
      }
    }
    for (uint64_t r = lo; r < hi; ++r) {
      K.sq(x.data(), s.data(), scratch.data());
      uint64_t sr = K.rank(s.data());
      local[sr >> 6] |= uint64_t(1) << (sr & 63);
      for (uint32_t i = K.n; i-- > 0;) {
        if (++x[i] < K.p) break;
        x[i] = 0;
      }
    }
  };
  if (nw == 1) {
    run(0, card, bitmap);
  } else {
    std::vector<std::vector<uint64_t>> locals(nw, std::vector<uint64_t>(words, 0));
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) {
      uint64_t lo = card * w / nw, hi = card * (w + 1) / nw;
      pool.emplace_back(run, lo, hi, std::ref(locals[w]));
    }
    for (auto& t : pool) t.join();
    for (auto& local : locals)
      for (uint64_t i = 0; i < words; ++i) bitmap[i] |= local[i];
  }
  bitmap[0] &= ~uint64_t(1);  // zero is not a nonzero square
  return bitmap;
}

// columns of the F_p-linear map L(x) = x^(p^j) - x in the monomial basis
std::vector<std::vector<uint64_t>> frobenius_columns(const FieldContextPtr& ctx, uint64_t j) {
  std::vector<std::vector<uint64_t>> cols(ctx->n);
  for (uint32_t i = 0; i < ctx->n; ++i) {
    std::vector<uint64_t> coeffs(ctx->n, 0);
    coeffs[i] = 1;
    FieldElement ti = ctx->make(coeffs);
    FieldElement img = ctx->sub(frobenius_power(ti, j), ti);
    cols[i] = img.c;
  }
  return cols;
}

int64_t naive_char_sum(const FieldContextPtr& ctx, uint64_t j, uint64_t card, int workers) {
  auto bitmap = build_square_bitmap(ctx, card, workers);
  auto cols = frobenius_columns(ctx, j);
  Kernel K(*ctx);
  int nw = std::max(1, workers);
  std::vector<int64_t> partial(nw, 0);
  auto run = [&](uint64_t lo, uint64_t hi, int64_t& out) {
    std::vector<uint64_t> x(K.n, 0), L(K.n, 0);
    {
      uint64_t r = lo;
      for (uint32_t i = K.n; i-- > 0;) {
        x[i] = r % K.p;
        r /= K.p;
      }
      for (uint32_t i = 0; i < K.n; ++i)
        for (uint32_t k = 0; k < K.n; ++k) L[k] = (L[k] + x[i] * cols[i][k]) % K.p;
    }
    int64_t acc = 0;
    for (uint64_t r = lo; r < hi; ++r) {
      uint64_t lr = K.rank(L.data());
      if (lr != 0) acc += (bitmap[lr >> 6] >> (lr & 63)) & 1 ? 1 : -1;
      // lexicographic successor; every changed digit moves by +1 mod p,
      // so the linear image gains the matching column each time
      for (uint32_t i = K.n; i-- > 0;) {
        for (uint32_t k = 0; k < K.n; ++k) {
          L[k] += cols[i][k];
          if (L[k] >= K.p) L[k] -= K.p;
        }
        if (++x[i] < K.p) break;
        x[i] = 0;
      }
    }
    out = acc;
  };
  if (nw == 1) {
    run(0, card, partial[0]);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) {
      uint64_t lo = card * w / nw, hi = card * (w + 1) / nw;
      pool.emplace_back(run, lo, hi, std::ref(partial[w]));
    }
    for (auto& t : pool) t.join();
  }
  int64_t total = 0;
  for (int64_t v : partial) total += v;
  return total;
}

mpz_class linear_char_sum(const FieldContextPtr& ctx, uint64_t j, uint64_t budget) {
  auto cols = frobenius_columns(ctx, j);
  uint32_t n = ctx->n;
  uint64_t p = ctx->p;
  // column-space basis by Gaussian elimination
  std::vector<std::vector<uint64_t>> basis;  // reduced rows used as pivots
  std::vector<std::vector<uint64_t>> image_basis;
  std::vector<int> pivot_pos;
  for (uint32_t i = 0; i < n; ++i) {
    std::vector<uint64_t> v = cols[i];
    std::vector<uint64_t> orig = cols[i];
    for (size_t b = 0; b < basis.size(); ++b) {
      uint64_t coef = v[pivot_pos[b]];
      if (coef == 0) continue;
      for (uint32_t k = 0; k < n; ++k) {
        uint64_t t = mulmod_u64(coef, basis[b][k], p);
        v[k] = (v[k] >= t) ? v[k] - t : v[k] + p - t;
      }
    }
    int pos = -1;
    for (uint32_t k = 0; k < n; ++k)
      if (v[k]) {
        pos = static_cast<int>(k);
        break;
      }
    if (pos < 0) continue;
    uint64_t inv = powmod_u64(v[pos], p - 2, p);
    for (uint32_t k = 0; k < n; ++k) v[k] = mulmod_u64(v[k], inv, p);
    basis.push_back(v);
    pivot_pos.push_back(pos);
    image_basis.push_back(orig);
  }
  uint32_t dim = static_cast<uint32_t>(image_basis.size());
  uint64_t expected_kernel = gcd_u64(j == 0 ? ctx->n : j, ctx->n);
  if (dim != n - expected_kernel) fail(Err::Internal, "unexpected image dimension");

  mpz_class image_size = pow_ui(p, dim);
  if (image_size > budget)
    fail(Err::BudgetExceeded, "linear image of size " + image_size.get_str() + " exceeds budget");
  uint64_t count = mpz_get_ui(image_size.get_mpz_t());

  int64_t acc = 0;
  std::vector<uint64_t> digits(dim, 0), h(n, 0);
  for (uint64_t r = 0; r < count; ++r) {
    bool zero = true;
    for (uint32_t k = 0; k < n; ++k)
      if (h[k]) {
        zero = false;
        break;
      }
    if (!zero) acc += quadratic_character(ctx->make(h));
    if (r + 1 == count) break;
    for (uint32_t i = dim; i-- > 0;) {
      for (uint32_t k = 0; k < n; ++k) {
        h[k] += image_basis[i][k];
        if (h[k] >= p) h[k] -= p;
      }
      if (++digits[i] < p) break;
      digits[i] = 0;
    }
  }
  return mpz_class(acc) * pow_ui(p, expected_kernel);
}

}  // namespace

mpz_class count_points(const CurveInstance& curve, const FieldContextPtr& field, Strategy strategy,
                       uint64_t budget, int workers) {
  if (field->p != curve.p) fail(Err::Internal, "field characteristic does not match the curve");
  uint32_t n = field->n;
  uint64_t j = curve.exponent % n;
  if (j == 0) return field->cardinality + 1;  // x^q - x vanishes identically

  mpz_class naive_cost = field->cardinality;
  mpz_class linear_cost = pow_ui(curve.p, n - gcd_u64(curve.exponent, n));
  mpz_class budget_z(static_cast<unsigned long>(budget));

  Strategy pick = strategy;
  if (pick == Strategy::automatic) {
    bool naive_ok = naive_cost <= budget_z;
    bool linear_ok = linear_cost <= budget_z;
    if (!naive_ok && !linear_ok)
      fail(Err::BudgetExceeded, "naive cost " + naive_cost.get_str() + " and linear cost " +
                                    linear_cost.get_str() + " both exceed budget " + std::to_string(budget));
    // the linear image is smaller by the kernel factor, but each of its
    // character values costs an exponentiation; 64x is the crossover
    if (linear_ok && (!naive_ok || linear_cost * 64 <= naive_cost))
      pick = Strategy::linear;
    else
      pick = Strategy::naive;
  }

  if (pick == Strategy::naive) {
    if (naive_cost > budget_z)
      fail(Err::BudgetExceeded, "naive enumeration of " + naive_cost.get_str() + " elements exceeds budget " +
                                    std::to_string(budget) + " (linear cost would be " + linear_cost.get_str() + ")");
    uint64_t card = mpz_get_ui(field->cardinality.get_mpz_t());
    int64_t sum = naive_char_sum(field, j, card, workers);
    return field->cardinality + 1 + sum;
  }
  return field->cardinality + 1 + linear_char_sum(field, j, budget);
}

const TraceEntry& TraceProfile::at(uint32_t s) const {
  for (const auto& e : entries)
    if (e.s == s) return e;
  fail(Err::Internal, "no trace entry for s = " + std::to_string(s));
}

TraceProfile trace_profile(const CurveInstance& curve, TraceMode mode, uint64_t budget, int workers) {
  if (!curve.family) fail(Err::Internal, "trace profiles require a family member (even exponent)");
  TraceProfile out;
  out.p = curve.p;
  out.q0 = curve.q0;
  out.m = curve.m;
  uint32_t twom = 2 * curve.m;
  FeasibilityPlan plan = count_feasibility(curve, mpz_class(static_cast<unsigned long>(budget)));

  for (uint64_t sd : divisors_u64(twom)) {
    uint32_t s = static_cast<uint32_t>(sd);
    bool forced_zero = (curve.m % s == 0);
    bool forced_top = (s == twom);
    TraceEntry entry{s, 0, false, false};

    auto counted_trace = [&]() -> mpz_class {
      auto field = make_extension(curve.p, 2 * s);
      mpz_class cnt = count_points(curve, field, Strategy::automatic, budget, workers);
      mpz_class num = field->cardinality + 1 - cnt;
      mpz_class ps = pow_ui(curve.p, s);
      mpz_class t, r;
      mpz_fdiv_qr(t.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), ps.get_mpz_t());
      if (r != 0) fail(Err::Internal, "trace at s = " + std::to_string(s) + " is not integral");
      return t;
    };

    if (mode == TraceMode::count) {
      entry.t = counted_trace();
      if (forced_top && entry.t != curve.q - 1)
        fail(Err::SignConventionViolated, "t_{2m} = " + entry.t.get_str() + " but q - 1 = " + mpz_class(curve.q - 1).get_str());
      if (forced_zero && entry.t != 0)
        fail(Err::Internal, "ramified subfield trace nonzero at s = " + std::to_string(s));
    } else if (forced_zero || forced_top) {
      entry.forced = true;
      entry.t = forced_top ? mpz_class(curve.q - 1) : mpz_class(0);
      if (mode == TraceMode::cross_check) {
        bool feasible = false;
        for (const auto& row : plan.rows)
          if (row.s == s) feasible = row.feasible;
        if (feasible) {
          mpz_class recount = counted_trace();
          if (recount != entry.t) {
            if (forced_top)
              fail(Err::SignConventionViolated,
                   "recounted t_{2m} = " + recount.get_str() + " but q - 1 = " + mpz_class(curve.q - 1).get_str());
            fail(Err::CrossCheckFailed, "forced trace at s = " + std::to_string(s) + " recounted as " +
                                            recount.get_str());
          }
          entry.cross_checked = true;
        }
      }
    } else {
      entry.t = counted_trace();
    }

    // the strict bulletin bound for s != 2m
    if (s != twom) {
      mpz_class bound = pow_ui(curve.p, s) + 1;
      if (abs(entry.t) >= bound)
        fail(Err::Internal, "trace bound violated at s = " + std::to_string(s) + ": " + entry.t.get_str());
    }
    out.entries.push_back(std::move(entry));
  }
  return out;
}

FeasibilityPlan count_feasibility(const CurveInstance& curve, const mpz_class& budget) {
  if (!curve.family) fail(Err::Internal, "feasibility plans require a family member");
  FeasibilityPlan plan;
  plan.exact_feasible = true;
  uint32_t twom = 2 * curve.m;
  for (uint64_t sd : divisors_u64(twom)) {
    uint32_t s = static_cast<uint32_t>(sd);
    FeasibilityRow row;
    row.s = s;
    row.forced_zero = (curve.m % s == 0);
    row.forced_top = (s == twom);
    row.naive_cost = pow_mpz(curve.q0, s);
    row.linear_cost = pow_ui(curve.p, 2 * s - gcd_u64(twom, 2 * s));
    row.feasible = (row.naive_cost <= budget) || (row.linear_cost <= budget);
    if (!row.forced_zero && !row.forced_top && !row.feasible) plan.exact_feasible = false;
    plan.rows.push_back(std::move(row));
  }
  return plan;
}

}  // namespace tforge
