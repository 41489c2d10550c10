#include "roughmax/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "roughmax/kernel.hpp"

namespace roughmax {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// v - round(v); odd in v, so negated inputs give exactly negated output.
double centered(double v) { return v - std::round(v); }

// e(a + b) with both arguments reduced separately. Conjugates exactly under
// (a, b) -> (-a, -b).
std::complex<double> phase(double a, double b) {
  const double t = kTwoPi * (centered(a) + centered(b));
  return {std::cos(t), std::sin(t)};
}

void check_range(std::int64_t N, std::int64_t x, std::int64_t N_prime) {
  const auto [lo, hi] = sum_range(N, x);
  if (N_prime <= lo || N_prime > hi) throw PreconditionError("exp sum: N' outside (N_{1,x}, N_{2,x}]");
}

// phi(n) for n in [lo, hi), with a domain check that names the caller.
std::vector<double> phi_values(const InverseFunction& phi, std::int64_t lo, std::int64_t hi, Workers w) {
  if (static_cast<double>(lo) < phi.y0()) throw DomainError("exp sum: phase argument below h(x0)");
  return phi.table(lo, hi, w);
}

template <class Term>
std::complex<double> chunked_sum(std::int64_t lo, std::int64_t hi, Workers w, Term term) {
  const auto parts = map_chunks<std::complex<double>>(lo, hi, w, [&](std::int64_t a, std::int64_t b) {
    CompensatedSum<std::complex<double>> acc;
    for (std::int64_t n = a; n < b; ++n) acc.add(term(n));
    return acc.value();
  });
  return ordered_sum(parts);
}

ExpSumResult finish(std::complex<double> actual, double bound, std::int64_t terms, const ExpSumParams& p) {
  ExpSumResult r;
  r.actual = actual;
  r.actual_abs = std::abs(actual);
  r.bound = bound;
  r.ratio = r.actual_abs / bound;
  r.terms = terms;
  r.params = p;
  return r;
}

double single_bound(const InverseFunction& phi, std::int64_t N, std::int64_t m) {
  return std::sqrt(static_cast<double>(std::abs(m))) * static_cast<double>(N) /
         std::sqrt(phi(static_cast<double>(N)));
}

double two_bound(const InverseFunction& phi, std::int64_t N, std::int64_t m1, std::int64_t m2, double kappa) {
  const double m = static_cast<double>(std::max(std::abs(m1), std::abs(m2)));
  const double dN = static_cast<double>(N);
  return std::pow(m, 2.0 / 3.0) * std::pow(dN, 4.0 / 3.0) * std::pow(phi(dN), -(1.0 + kappa) / 3.0);
}

void check_two_phase(const InverseFunction& phi, std::int64_t N, std::int64_t x, std::int64_t m1,
                     std::int64_t m2, double kappa) {
  if (m1 == 0 || m2 == 0) throw DomainError("two_phase_sum: m1 and m2 must be nonzero");
  if (kappa < 0.0 || kappa > 1.0) throw DomainError("two_phase_sum: kappa must lie in [0, 1]");
  if (static_cast<double>(x) < std::pow(phi(static_cast<double>(N)), kappa)) {
    throw PreconditionError("two_phase_sum: x < phi(N)^kappa");
  }
}

}  // namespace

double sawtooth(double t) { return t - std::floor(t) - 0.5; }

double dist_to_integer(double t) { return std::abs(t - std::nearbyint(t)); }

SawtoothTruncation sawtooth_truncation(double t, std::int64_t M) {
  if (M < 1) throw DomainError("sawtooth_truncation: M must be positive");
  // Pairing m with -m: e^{-2 pi i m t}/(2 pi i m) + c.c. = -sin(2 pi m t)/(pi m).
  // The imaginary parts cancel identically in the pairing.
  const double r = t - std::floor(t);
  CompensatedSum<double> acc;
  for (std::int64_t m = 1; m <= M; ++m) {
    const double dm = static_cast<double>(m);
    const double a = dm * r;
    acc.add(-std::sin(kTwoPi * (a - std::floor(a))) / (std::numbers::pi * dm));
  }
  SawtoothTruncation s;
  s.M = M;
  s.value = {acc.value(), 0.0};
  const double d = dist_to_integer(t);
  s.residual_bound = d == 0.0 ? 1.0 : std::min(1.0, 1.0 / (static_cast<double>(M) * d));
  return s;
}

double coefficient_bound(std::int64_t m, std::int64_t M) {
  if (M < 1) throw DomainError("coefficient_bound: M must be positive");
  const double dM = static_cast<double>(M);
  const double am = static_cast<double>(std::abs(m));
  double b = std::log(dM + 1.0) / dM;
  if (am > 0) b = std::min({b, 1.0 / am, dM / (am * am)});
  return b;
}

std::pair<std::int64_t, std::int64_t> sum_range(std::int64_t N, std::int64_t x) {
  if (N < 1) throw DomainError("exp sum: N must be positive");
  const std::int64_t lo = std::max(N / 2, N / 2 - x);
  const std::int64_t hi = std::min(4 * N, 4 * N - x);
  if (lo >= hi) throw DomainError("exp sum: empty summation range");
  return {lo, hi};
}

ExpSumResult single_phase_sum(const InverseFunction& phi, std::int64_t N, std::int64_t x, double alpha,
                              std::int64_t l, std::int64_t m, int p, int q,
                              std::optional<std::int64_t> N_prime, Workers w) {
  if (m == 0) throw DomainError("single_phase_sum: m must be nonzero");
  if ((p != 0 && p != 1) || (q != 0 && q != 1)) throw DomainError("single_phase_sum: p, q must be 0 or 1");
  const auto [lo, hi] = sum_range(N, x);
  const std::int64_t top = N_prime.value_or(hi);
  check_range(N, x, top);
  const std::int64_t shift = p * x + q;
  const std::vector<double> ph = phi_values(phi, lo + 1 + shift, top + 1 + shift, w);
  const double al = alpha * static_cast<double>(l);
  const double dm = static_cast<double>(m);
  const auto actual = chunked_sum(lo + 1, top + 1, w, [&](std::int64_t n) {
    return phase(al * static_cast<double>(n), dm * ph[static_cast<std::size_t>(n - lo - 1)]);
  });
  ExpSumParams prm{N, x, alpha, l, m, 0, p, q, 0.0, top};
  return finish(actual, single_bound(phi, N, m), top - lo, prm);
}

ExpSumResult two_phase_sum(const InverseFunction& phi, std::int64_t N, std::int64_t x, double alpha,
                           std::int64_t l, std::int64_t m1, std::int64_t m2, double kappa,
                           std::optional<std::int64_t> N_prime, Workers w) {
  check_two_phase(phi, N, x, m1, m2, kappa);
  const auto [lo, hi] = sum_range(N, x);
  const std::int64_t top = N_prime.value_or(hi);
  check_range(N, x, top);
  const std::vector<double> ph = phi_values(phi, lo + 1, top + 1 + x, w);
  const double al = alpha * static_cast<double>(l);
  const double d1 = static_cast<double>(m1), d2 = static_cast<double>(m2);
  const auto actual = chunked_sum(lo + 1, top + 1, w, [&](std::int64_t n) {
    const auto i = static_cast<std::size_t>(n - lo - 1);
    return phase(al * static_cast<double>(n), d1 * ph[i] + d2 * ph[i + static_cast<std::size_t>(x)]);
  });
  ExpSumParams prm{N, x, alpha, l, m1, m2, 0, 0, kappa, top};
  return finish(actual, two_bound(phi, N, m1, m2, kappa), top - lo, prm);
}

ExpSumResult weighted_sum_bound_check(const InverseFunction& phi, const ExpSumParams& params,
                                      const std::function<double(std::int64_t)>& weight, PhaseMode mode,
                                      Workers w) {
  const std::int64_t N = params.N, x = params.x;
  const auto [lo, hi] = sum_range(N, x);
  const std::int64_t top = params.N_prime > 0 ? params.N_prime : hi;
  ExpSumResult plain = mode == PhaseMode::Single
                           ? single_phase_sum(phi, N, x, params.alpha, params.l, params.m1, params.p,
                                              params.q, top, w)
                           : two_phase_sum(phi, N, x, params.alpha, params.l, params.m1, params.m2,
                                           params.kappa, top, w);
  const std::int64_t shift = mode == PhaseMode::Single ? params.p * x + params.q : 0;
  const std::int64_t extra = mode == PhaseMode::Two ? x : 0;
  const std::vector<double> ph = phi_values(phi, lo + 1 + shift, top + 1 + shift + extra, w);
  const double al = params.alpha * static_cast<double>(params.l);
  const double d1 = static_cast<double>(params.m1), d2 = static_cast<double>(params.m2);
  const auto actual = chunked_sum(lo + 1, top + 1, w, [&](std::int64_t n) {
    const auto i = static_cast<std::size_t>(n - lo - 1);
    const double b = mode == PhaseMode::Single ? d1 * ph[i] : d1 * ph[i] + d2 * ph[i + static_cast<std::size_t>(x)];
    return weight(n) * phase(al * static_cast<double>(n), b);
  });
  double sup = 0.0, sup_diff = 0.0;
  for (std::int64_t n = lo + 1; n <= top; ++n) {
    const double f = weight(n);
    sup = std::max(sup, std::abs(f));
    sup_diff = std::max(sup_diff, std::abs(weight(n + 1) - f));
  }
  const double factor = sup + static_cast<double>(N) * sup_diff;
  plain.params.N_prime = top;
  return finish(actual, plain.bound * factor, top - lo, plain.params);
}

std::pair<double, double> min_norm_sum(const InverseFunction& phi, std::int64_t N, std::int64_t x,
                                       std::int64_t M, int p, int q, Workers w) {
  if (M < 2) throw DomainError("min_norm_sum: M must be at least 2");
  if ((p != 0 && p != 1) || (q != 0 && q != 1)) throw DomainError("min_norm_sum: p, q must be 0 or 1");
  // eta(n/N) eta((n+x)/N) vanishes outside this window.
  const auto [lo, hi] = sum_range(N, x);
  const std::int64_t shift = p * x + q;
  const std::vector<double> ph = phi_values(phi, lo + 1 + shift, hi + shift, w);
  const double dN = static_cast<double>(N), dM = static_cast<double>(M);
  const auto parts = map_chunks<double>(lo + 1, hi, w, [&](std::int64_t a, std::int64_t b) {
    CompensatedSum<double> acc;
    for (std::int64_t n = a; n < b; ++n) {
      const double wt = eta(static_cast<double>(n) / dN) * eta(static_cast<double>(n + x) / dN);
      if (wt == 0.0) continue;
      const double d = dist_to_integer(ph[static_cast<std::size_t>(n - lo - 1)]);
      acc.add(wt * (d == 0.0 ? 1.0 : std::min(1.0, 1.0 / (dM * d))));
    }
    return acc.value();
  });
  const double logM = std::log(dM);
  const double bound = dN * logM / dM + dN * std::sqrt(dM) * logM / std::sqrt(phi(dN));
  return {ordered_sum(parts), bound};
}

double resonant_alpha(double slope, std::int64_t l) {
  if (l == 0) throw DomainError("resonant_alpha: l must be nonzero");
  const double a = std::ceil(slope) - slope;
  return a / static_cast<double>(l);
}

namespace serial {

std::complex<double> single_phase_sum(const InverseFunction& phi, std::int64_t N, std::int64_t x,
                                      double alpha, std::int64_t l, std::int64_t m, int p, int q) {
  const auto [lo, hi] = sum_range(N, x);
  const double al = alpha * static_cast<double>(l);
  const double dm = static_cast<double>(m);
  std::complex<double> acc = 0.0;
  for (std::int64_t n = lo + 1; n <= hi; ++n) {
    acc += phase(al * static_cast<double>(n), dm * phi(static_cast<double>(n + p * x + q)));
  }
  return acc;
}

}  // namespace serial

std::vector<SweepRow> lemma_sweep(const InverseFunction& phi, Lemma lemma, int kmin, int kmax,
                                  const SweepParams& params, Workers w) {
  if (kmin < 1 || kmax < kmin || kmax > 36) throw DomainError("lemma_sweep: need 1 <= kmin <= kmax <= 36");
  std::vector<SweepRow> rows;
  for (int k = kmin; k <= kmax; ++k) {
    const std::int64_t N = std::int64_t{1} << k;
    const double center = 2.0 * static_cast<double>(N);
    SweepRow row{k, N, 0, 0, 0};
    if (lemma == Lemma::SinglePhase) {
      const double slope = static_cast<double>(params.m) * phi.derivative(center, 1);
      const double alpha = params.resonant ? resonant_alpha(slope) : 0.0;
      const auto r = single_phase_sum(phi, N, 0, alpha, 1, params.m, 0, 0, std::nullopt, w);
      row.actual_abs = r.actual_abs;
      row.bound = r.bound;
    } else if (lemma == Lemma::TwoPhase) {
      const std::int64_t m2 = params.m2.value_or(params.m);
      const auto x = static_cast<std::int64_t>(std::ceil(std::pow(phi(static_cast<double>(N)), params.kappa)));
      const double slope = static_cast<double>(params.m) * phi.derivative(center, 1) +
                           static_cast<double>(m2) * phi.derivative(center + static_cast<double>(x), 1);
      const double alpha = params.resonant ? resonant_alpha(slope) : 0.0;
      const auto r = two_phase_sum(phi, N, x, alpha, 1, params.m, m2, params.kappa, std::nullopt, w);
      row.actual_abs = r.actual_abs;
      row.bound = r.bound;
    } else {
      const auto M = std::max<std::int64_t>(
          2, static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(N), params.M_exponent))));
      const auto [actual, bound] = min_norm_sum(phi, N, 0, M, 0, 0, w);
      row.actual_abs = actual;
      row.bound = bound;
    }
    row.ratio = row.actual_abs / row.bound;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace roughmax
