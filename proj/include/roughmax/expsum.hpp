#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "roughmax/error.hpp"
#include "roughmax/growth.hpp"
#include "roughmax/parallel.hpp"

namespace roughmax {

struct ExpSumParams {
  std::int64_t N = 0;
  std::int64_t x = 0;
  double alpha = 0.0;
  std::int64_t l = 1;
  std::int64_t m1 = 1;
  std::int64_t m2 = 0;  // 0 for the single-phase sums
  int p = 0;
  int q = 0;
  double kappa = 0.0;
  std::int64_t N_prime = 0;
};

struct ExpSumResult {
  std::complex<double> actual;
  double actual_abs = 0;
  double bound = 0;
  double ratio = 0;
  std::int64_t terms = 0;
  ExpSumParams params;
};

// {t} - 1/2.
double sawtooth(double t);

// |t - round(t)|.
double dist_to_integer(double t);

struct SawtoothTruncation {
  std::int64_t M = 0;
  std::complex<double> value;  // sum_{0<|m|<=M} e^{-2 pi i m t} / (2 pi i m)
  double residual_bound = 0;   // min{1, 1/(M ||t||)}
};

SawtoothTruncation sawtooth_truncation(double t, std::int64_t M);

// min{log(M+1)/M, 1/|m|, M/m^2}
double coefficient_bound(std::int64_t m, std::int64_t M);

// U_a(b) g(b) - sum_{a<n<b} U_a(n) (g(n+1) - g(n)), U_a(n) = sum_{a<k<=n} u(k).
// u[i] holds u(a + 1 + i).
template <class T, class G>
T abel_sum(const std::vector<T>& u, std::int64_t a, G g) {
  if (u.empty()) throw DomainError("abel_sum: need b > a");
  const std::int64_t b = a + static_cast<std::int64_t>(u.size());
  T partial = T(0);
  T tail = T(0);
  for (std::int64_t n = a + 1; n < b; ++n) {
    partial += u[static_cast<std::size_t>(n - a - 1)];
    tail += partial * (g(n + 1) - g(n));
  }
  partial += u.back();
  return partial * g(b) - tail;
}

// Summation range (N_{1,x}, N_{2,x}] = (max{N/2, N/2 - x}, min{4N, 4N - x}].
std::pair<std::int64_t, std::int64_t> sum_range(std::int64_t N, std::int64_t x);

// sum_{N_{1,x} < n <= N'} e(alpha l n + m phi(n + p x + q)) against
// |m|^{1/2} N phi(N)^{-1/2}. N' defaults to N_{2,x}.
ExpSumResult single_phase_sum(const InverseFunction& phi, std::int64_t N, std::int64_t x, double alpha,
                              std::int64_t l, std::int64_t m, int p, int q,
                              std::optional<std::int64_t> N_prime = std::nullopt, Workers w = {});

// sum e(alpha l n + m1 phi(n) + m2 phi(n + x)) against
// m^{2/3} N^{4/3} phi(N)^{-(1+kappa)/3}, m = max(|m1|, |m2|).
ExpSumResult two_phase_sum(const InverseFunction& phi, std::int64_t N, std::int64_t x, double alpha,
                           std::int64_t l, std::int64_t m1, std::int64_t m2, double kappa,
                           std::optional<std::int64_t> N_prime = std::nullopt, Workers w = {});

enum class PhaseMode { Single, Two };

// Weighted version of either sum; the bound picks up
// sup|F| + N sup|F(n+1) - F(n)| over the summation range. For Single mode
// m2 is ignored and p = q = 0.
ExpSumResult weighted_sum_bound_check(const InverseFunction& phi, const ExpSumParams& params,
                                      const std::function<double(std::int64_t)>& weight, PhaseMode mode,
                                      Workers w = {});

// (actual, bound) for sum_n min{1, 1/(M ||phi(n+px+q)||)} eta(n/N) eta((n+x)/N)
// against N log M / M + N M^{1/2} log M phi(N)^{-1/2}.
std::pair<double, double> min_norm_sum(const InverseFunction& phi, std::int64_t N, std::int64_t x,
                                       std::int64_t M, int p, int q, Workers w = {});

// alpha in [0, 1/l) making alpha l + slope an integer, so the phase is
// stationary where its derivative equals slope.
double resonant_alpha(double slope, std::int64_t l = 1);

namespace serial {
// Plain left-to-right evaluation of the single-phase sum.
std::complex<double> single_phase_sum(const InverseFunction& phi, std::int64_t N, std::int64_t x,
                                      double alpha, std::int64_t l, std::int64_t m, int p, int q);
}  // namespace serial

enum class Lemma { SinglePhase, TwoPhase, MinNorm };

struct SweepParams {
  std::int64_t m = 1;
  std::optional<std::int64_t> m2;  // two-phase only, defaults to m
  double kappa = 1.0;              // two-phase: x = ceil(phi(N)^kappa)
  bool resonant = true;            // put a stationary point at n = 2N
  double M_exponent = 0.5;         // min-norm: M = round(N^M_exponent)
};

struct SweepRow {
  int k = 0;
  std::int64_t N = 0;
  double actual_abs = 0;
  double bound = 0;
  double ratio = 0;
};

// One row per N = 2^k, k in [kmin, kmax].
std::vector<SweepRow> lemma_sweep(const InverseFunction& phi, Lemma lemma, int kmin, int kmax,
                                  const SweepParams& params, Workers w = {});

}  // namespace roughmax
