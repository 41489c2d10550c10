#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "roughmax/error.hpp"

namespace roughmax {

// Finitely supported function on the integers: values[i] sits at offset + i.
template <class T>
struct BasicSignal {
  std::int64_t offset = 0;
  std::vector<T> values;

  std::int64_t begin() const { return offset; }
  std::int64_t end() const { return offset + static_cast<std::int64_t>(values.size()); }
  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }

  T at(std::int64_t x) const {
    if (x < begin() || x >= end()) return T(0);
    return values[static_cast<std::size_t>(x - offset)];
  }

  bool operator==(const BasicSignal&) const = default;
};

using Signal = BasicSignal<double>;

template <class T>
BasicSignal<T> delta(std::int64_t at, T value = T(1)) {
  return {at, {value}};
}

// Leading and trailing zeros removed; the zero signal becomes empty.
template <class T>
BasicSignal<T> trimmed(BasicSignal<T> s) {
  auto first = std::find_if(s.values.begin(), s.values.end(), [](const T& v) { return v != T(0); });
  if (first == s.values.end()) return {};
  auto last = std::find_if(s.values.rbegin(), s.values.rend(), [](const T& v) { return v != T(0); });
  const auto lead = first - s.values.begin();
  const auto tail = last - s.values.rbegin();
  s.values.erase(s.values.end() - tail, s.values.end());
  s.values.erase(s.values.begin(), s.values.begin() + lead);
  s.offset += lead;
  return s;
}

// x -> s(-x)
template <class T>
BasicSignal<T> reversed(const BasicSignal<T>& s) {
  BasicSignal<T> r;
  r.values.assign(s.values.rbegin(), s.values.rend());
  r.offset = -(s.end() - 1);
  return r;
}

// Pointwise a + b over the union of supports.
template <class T>
BasicSignal<T> add(const BasicSignal<T>& a, const BasicSignal<T>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  BasicSignal<T> r;
  r.offset = std::min(a.begin(), b.begin());
  r.values.assign(static_cast<std::size_t>(std::max(a.end(), b.end()) - r.offset), T(0));
  for (std::size_t i = 0; i < a.size(); ++i) r.values[static_cast<std::size_t>(a.offset - r.offset) + i] += a.values[i];
  for (std::size_t i = 0; i < b.size(); ++i) r.values[static_cast<std::size_t>(b.offset - r.offset) + i] += b.values[i];
  return r;
}

template <class T>
T l1_norm(const BasicSignal<T>& s) {
  T acc(0);
  for (const T& v : s.values) acc += v < T(0) ? T(-v) : v;
  return acc;
}

template <class T>
T total(const BasicSignal<T>& s) {
  T acc(0);
  for (const T& v : s.values) acc += v;
  return acc;
}

template <class T>
T sup_norm(const BasicSignal<T>& s) {
  T m(0);
  for (const T& v : s.values) m = std::max(m, v < T(0) ? T(-v) : v);
  return m;
}

enum class ConvolutionMethod { Direct, Fast };

inline constexpr std::int64_t kMaxConvolutionLength = std::int64_t{1} << 30;

// (a * b)(x) = sum_y a(y) b(x - y).
Signal convolve(const Signal& a, const Signal& b, ConvolutionMethod method);

// (a * reversed(a))(x) = sum_n a(n) a(n + x) through one real transform.
// The result is exactly even.
Signal self_correlation(const Signal& a);

// CSV with header "x,value", floats at 17 significant digits.
void write_signal_csv(std::ostream& os, const Signal& s, bool skip_zeros = true);
Signal read_signal_csv(std::istream& is);

}  // namespace roughmax
