#pragma once

#include <omp.h>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <vector>

namespace roughmax {

// Worker count handed down from the caller. Kernels never pick their own.
struct Workers {
  int count = 1;
};

// Fixed chunk width for ordered reductions. Results depend on this constant,
// never on the worker count.
inline constexpr std::int64_t kChunk = 1 << 14;

// Neumaier compensated sum.
template <class T>
class CompensatedSum {
 public:
  void add(T v) {
    T t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

template <class T>
class CompensatedSum<std::complex<T>> {
 public:
  void add(std::complex<T> v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  std::complex<T> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<T> re_;
  CompensatedSum<T> im_;
};

// Evaluates body(lo, hi) on fixed chunks of [begin, end) and returns the
// per-chunk results in chunk order.
template <class T, class Body>
std::vector<T> map_chunks(std::int64_t begin, std::int64_t end, Workers w, Body body,
                          std::int64_t chunk = kChunk) {
  if (end <= begin) return {};
  const std::int64_t n_chunks = (end - begin + chunk - 1) / chunk;
  std::vector<T> out(static_cast<std::size_t>(n_chunks));
#pragma omp parallel for schedule(static) num_threads(std::max(1, w.count))
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    const std::int64_t lo = begin + c * chunk;
    const std::int64_t hi = std::min(end, lo + chunk);
    out[static_cast<std::size_t>(c)] = body(lo, hi);
  }
  return out;
}

// Ordered compensated reduction of chunk partials.
template <class T>
T ordered_sum(const std::vector<T>& parts) {
  CompensatedSum<T> acc;
  for (const T& p : parts) acc.add(p);
  return acc.value();
}

}  // namespace roughmax
