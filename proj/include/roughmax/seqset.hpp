#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "roughmax/growth.hpp"
#include "roughmax/parallel.hpp"

namespace roughmax {

inline constexpr std::int64_t kMaxSequenceBound = std::int64_t{1} << 40;

// N_h intersected with [1, n_max].
class SequenceSet {
 public:
  const GrowthFunction& growth() const { return g_; }
  std::int64_t n_max() const { return n_max_; }
  const std::vector<std::int64_t>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }

  bool contains(std::int64_t p) const {
    return p >= 1 && p <= n_max_ && member_[static_cast<std::size_t>(p)];
  }

  // Threshold beyond which the inverse-function membership test is trusted.
  std::int64_t p_min() const { return p_min_; }

  // |N_h cap [1, N]|, 1 <= N <= n_max.
  std::int64_t count(std::int64_t N) const;

 private:
  friend SequenceSet generate(const GrowthFunction& g, std::int64_t n_max);

  GrowthFunction g_;
  std::int64_t n_max_ = 0;
  std::vector<std::int64_t> elements_;
  std::vector<bool> member_;
  std::int64_t p_min_ = 16;
};

// { floor(h(m)) : m >= ceil(x0) } cap [1, n_max].
SequenceSet generate(const GrowthFunction& g, std::int64_t n_max);

// floor(h(m)), deciding values that sit on an integer at extended precision.
std::int64_t floor_h(const GrowthFunction& g, std::int64_t m);

// floor(-phi(p)) - floor(-phi(p+1)) == 1 at the tolerance of phi.
// Throws AmbiguityError when either phi value is within 10 tol phi of an
// integer.
bool contains_via_inverse(const InverseFunction& phi, std::int64_t p);

// Same test, raising the precision on ambiguity: long double at tol * 1e-3,
// then an exact comparison of h(k) against p at 50 significant digits.
bool contains_via_inverse_escalating(const InverseFunction& phi, std::int64_t p);

// Smallest p >= max(16, ceil(h(x0))) beyond which both membership tests agree
// on [p, min(n_max - 1, 2^16)].
std::int64_t find_p_min(const SequenceSet& s, const InverseFunction& phi);

struct WeightedExpSum {
  std::complex<double> sum;  // sum over N_h cap [1,N] of phi'(n)^{-1} e(alpha n)
  double residual;           // |sum - sum_{n=1}^N e(alpha n)|
};

WeightedExpSum weighted_exp_sum(const SequenceSet& s, const InverseFunction& phi, double alpha,
                                std::int64_t N, Workers w = {});

// e^{2 pi i t} with t reduced mod 1 first.
inline std::complex<double> unit_phase(double t) {
  const double r = t - std::floor(t);
  const double a = 2.0 * 3.14159265358979323846 * r;
  return {std::cos(a), std::sin(a)};
}

}  // namespace roughmax
