#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roughmax/growth.hpp"
#include "roughmax/seqset.hpp"

namespace roughmax {

// Permutation T of {0, ..., m-1} under the uniform measure. Iterates T^n x
// are looked up through the cycle decomposition.
class FiniteSystem {
 public:
  explicit FiniteSystem(std::vector<std::int64_t> map, std::string tag = "permutation");

  std::int64_t size() const { return static_cast<std::int64_t>(map_.size()); }
  const std::string& tag() const { return tag_; }
  std::int64_t apply(std::int64_t x) const { return map_[static_cast<std::size_t>(x)]; }

  // T^n x for any integer n.
  std::int64_t iterate(std::int64_t x, std::int64_t n) const;

 private:
  std::vector<std::int64_t> map_;
  std::string tag_;
  std::vector<std::int64_t> cycle_of_;
  std::vector<std::int64_t> position_;
  std::vector<std::vector<std::int64_t>> cycles_;
};

FiniteSystem identity_system(std::int64_t m);
// x -> x + step mod m
FiniteSystem shift_system(std::int64_t m, std::int64_t step);
FiniteSystem random_system(std::int64_t m, std::uint64_t seed);

// "identity:m", "shift:m:step" or "random:m:seed".
FiniteSystem parse_system(const std::string& text);

// 1 at state k, 0 elsewhere.
std::vector<double> indicator(std::int64_t m, std::int64_t k);

// (1/|N_h cap [1,N]|) sum_{n in N_h, n <= N} f(T^n x)
double ergodic_average(const FiniteSystem& sys, const SequenceSet& s, const std::vector<double>& f,
                       std::int64_t x, std::int64_t N);

// (1/N) sum_{n in N_h, n <= N} phi'(n)^{-1} f(T^n x)
double weighted_average(const FiniteSystem& sys, const SequenceSet& s, const InverseFunction& phi,
                        const std::vector<double>& f, std::int64_t x, std::int64_t N);

// weighted_average at every N of an increasing list, in one pass.
std::vector<double> weighted_average_path(const FiniteSystem& sys, const SequenceSet& s, const InverseFunction& phi,
                                          const std::vector<double>& f, std::int64_t x,
                                          const std::vector<std::int64_t>& Ns);

// { floor((1+eps)^k) : k >= 0 } cap [1, limit], increasing and distinct.
std::vector<std::int64_t> lacunary_set(double eps, std::int64_t limit);

// sum_j max_{N in Z_eps, N_j < N <= N_{j+1}} |A1_N f(x) - A1_{N_j} f(x)|
// over consecutive breakpoints, which must satisfy 2 N_j < N_{j+1}. This is
// the value at the single point x, not the norm over the space.
double oscillation_diagnostic(const FiniteSystem& sys, const SequenceSet& s, const InverseFunction& phi,
                              const std::vector<double>& f, std::int64_t x, double eps,
                              const std::vector<std::int64_t>& breakpoints);

}  // namespace roughmax
