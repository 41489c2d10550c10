#include "roughmax/seqset.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

namespace roughmax {
namespace {

using Wide = boost::multiprecision::cpp_bin_float_50;

// Relative gap below which a 50-digit value is taken to equal the integer.
const Wide kWideEquality("1e-40");

// h(k) compared with integer p at 50 digits: -1, 0, +1.
int compare_h_wide(const GrowthFunction& g, std::int64_t k, std::int64_t p) {
  const Wide hk = g.value(Wide(k));
  const Wide diff = hk - Wide(p);
  if (abs(diff) <= kWideEquality * Wide(p)) return 0;
  return diff < 0 ? -1 : 1;
}

double distance_to_integer(double x) { return std::abs(x - std::nearbyint(x)); }

// ceil(phi(y)) for integer y given an approximation near an integer k,
// decided by monotonicity: phi(y) <= k iff y <= h(k).
std::int64_t ceil_phi_exact(const InverseFunction& phi, std::int64_t y, double approx) {
  const auto k = static_cast<std::int64_t>(std::llround(approx));
  return compare_h_wide(phi.growth(), k, y) >= 0 ? k : k + 1;
}

}  // namespace

std::int64_t floor_h(const GrowthFunction& g, std::int64_t m) {
  const double v = g.value(static_cast<double>(m));
  if (!(v < std::ldexp(1.0, 62))) throw RangeError("generate: h(m) exceeds the 64-bit range");
  const double fl = std::floor(v);
  const double frac = v - fl;
  if (frac > 1e-12 * v && 1.0 - frac > 1e-12 * v) return static_cast<std::int64_t>(fl);
  const Wide w = g.value(Wide(m));
  const Wide k = round(w);
  if (abs(w - k) <= kWideEquality * w) return k.convert_to<std::int64_t>();
  return floor(w).convert_to<std::int64_t>();
}

std::int64_t SequenceSet::count(std::int64_t N) const {
  if (N < 1 || N > n_max_) throw RangeError("count: N outside [1, n_max]");
  return std::upper_bound(elements_.begin(), elements_.end(), N) - elements_.begin();
}

SequenceSet generate(const GrowthFunction& g, std::int64_t n_max) {
  if (n_max > kMaxSequenceBound) throw RangeError("generate: n_max above 2^40");
  if (static_cast<double>(n_max) < g.value(g.x0())) throw DomainError("generate: n_max below h(x0)");
  SequenceSet s;
  s.g_ = g;
  s.n_max_ = n_max;
  s.member_.assign(static_cast<std::size_t>(n_max) + 1, false);
  for (auto m = static_cast<std::int64_t>(std::ceil(g.x0()));; ++m) {
    const std::int64_t v = floor_h(g, m);
    if (v > n_max) break;
    if (v < 1) continue;
    if (!s.elements_.empty() && s.elements_.back() >= v) continue;
    s.elements_.push_back(v);
    s.member_[static_cast<std::size_t>(v)] = true;
  }
  s.p_min_ = find_p_min(s, InverseFunction(g));
  return s;
}

bool contains_via_inverse(const InverseFunction& phi, std::int64_t p) {
  if (static_cast<double>(p) < phi.y0()) throw DomainError("contains_via_inverse: p below h(x0)");
  const double a = phi(static_cast<double>(p));
  const double b = phi(static_cast<double>(p + 1));
  const double guard = 10.0 * phi.tol();
  if (distance_to_integer(a) <= guard * a || distance_to_integer(b) <= guard * b) {
    throw AmbiguityError("contains_via_inverse: phi value within tolerance of an integer");
  }
  return std::floor(-a) - std::floor(-b) == 1.0;
}

bool contains_via_inverse_escalating(const InverseFunction& phi, std::int64_t p) {
  try {
    return contains_via_inverse(phi, p);
  } catch (const AmbiguityError&) {
  }
  const long double tol = static_cast<long double>(phi.tol()) * 1e-3L;
  std::int64_t ceil_ab[2];
  for (int i = 0; i < 2; ++i) {
    const std::int64_t y = p + i;
    const long double v = phi.invert_as<long double>(static_cast<long double>(y), tol);
    const long double dist = std::abs(v - std::nearbyint(v));
    if (dist > 10.0L * tol * v) {
      ceil_ab[i] = static_cast<std::int64_t>(std::ceil(v));
    } else {
      ceil_ab[i] = ceil_phi_exact(phi, y, static_cast<double>(v));
    }
  }
  // floor(-a) - floor(-b) = ceil(b) - ceil(a)
  return ceil_ab[1] - ceil_ab[0] == 1;
}

std::int64_t find_p_min(const SequenceSet& s, const InverseFunction& phi) {
  const std::int64_t start = std::max<std::int64_t>(16, static_cast<std::int64_t>(std::ceil(phi.y0())));
  const std::int64_t stop = std::min<std::int64_t>(s.n_max() - 1, std::int64_t{1} << 16);
  std::int64_t p_min = start;
  for (std::int64_t p = start; p <= stop; ++p) {
    if (contains_via_inverse_escalating(phi, p) != s.contains(p)) p_min = p + 1;
  }
  return p_min;
}

WeightedExpSum weighted_exp_sum(const SequenceSet& s, const InverseFunction& phi, double alpha,
                                std::int64_t N, Workers w) {
  if (N < 1 || N > s.n_max()) throw RangeError("weighted_exp_sum: N outside [1, n_max]");
  const auto& el = s.elements();
  const auto n_el = static_cast<std::int64_t>(std::upper_bound(el.begin(), el.end(), N) - el.begin());
  using C = std::complex<double>;
  const C weighted = ordered_sum(map_chunks<C>(0, n_el, w, [&](std::int64_t lo, std::int64_t hi) {
    CompensatedSum<C> acc;
    for (std::int64_t i = lo; i < hi; ++i) {
      const auto n = el[static_cast<std::size_t>(i)];
      acc.add(phi.inverse_slope(static_cast<double>(n)) * unit_phase(alpha * static_cast<double>(n)));
    }
    return acc.value();
  }, 1 << 12));
  const C plain = ordered_sum(map_chunks<C>(1, N + 1, w, [&](std::int64_t lo, std::int64_t hi) {
    CompensatedSum<C> acc;
    for (std::int64_t n = lo; n < hi; ++n) acc.add(unit_phase(alpha * static_cast<double>(n)));
    return acc.value();
  }));
  return {weighted, std::abs(weighted - plain)};
}

}  // namespace roughmax
