#include "roughmax/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "roughmax/stats.hpp"

namespace roughmax {
namespace {

// 0 for v <= 0, 1 for v >= 1, C-infinity in between.
double smooth_step(double v) {
  const auto bump = [](double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; };
  const double a = bump(v), b = bump(1.0 - v);
  return a / (a + b);
}

// First support point and one-past-last of eta(n/N): (N/2, 4N).
std::int64_t support_lo(std::int64_t N) { return N / 2 + 1; }
std::int64_t support_hi(std::int64_t N) { return 4 * N; }

}  // namespace

double eta(double t) {
  if (t <= 0.5 || t >= 4.0) return 0.0;
  if (t < 1.0) return smooth_step(2.0 * t - 1.0);
  if (t <= 2.0) return 1.0;
  return smooth_step((4.0 - t) / 2.0);
}

Kernel build_kernel(const SequenceSet& s, const InverseFunction& phi, std::int64_t N,
                    Normalization normalization) {
  if (N < 1) throw DomainError("build_kernel: N must be positive");
  if (4 * N > s.n_max()) throw RangeError("build_kernel: 4N exceeds n_max");
  Kernel k;
  k.scale = N;
  k.normalization = normalization;
  if (normalization == Normalization::CountExact) {
    const std::int64_t cnt = s.count(N);
    if (cnt == 0) throw DomainError("build_kernel: N_h cap [1, N] is empty");
    k.norm = static_cast<double>(cnt);
  } else {
    k.norm = phi(static_cast<double>(N));
  }
  const std::int64_t lo = support_lo(N), hi = support_hi(N);
  k.signal.offset = lo;
  k.signal.values.assign(static_cast<std::size_t>(hi - lo), 0.0);
  const auto& el = s.elements();
  for (auto it = std::upper_bound(el.begin(), el.end(), lo - 1); it != el.end() && *it < hi; ++it) {
    k.signal.values[static_cast<std::size_t>(*it - lo)] =
        eta(static_cast<double>(*it) / static_cast<double>(N)) / k.norm;
  }
  return k;
}

Signal autocorrelation(const Kernel& k) { return self_correlation(k.signal); }

namespace serial {

Signal autocorrelation_pairs(const Kernel& k) {
  const Signal& s = k.signal;
  const auto len = static_cast<std::int64_t>(s.size());
  std::vector<std::int64_t> nz;
  for (std::int64_t i = 0; i < len; ++i) {
    if (s.values[static_cast<std::size_t>(i)] != 0.0) nz.push_back(i);
  }
  std::vector<double> lag(static_cast<std::size_t>(len), 0.0);
  for (std::size_t a = 0; a < nz.size(); ++a) {
    const double va = s.values[static_cast<std::size_t>(nz[a])];
    for (std::size_t b = a; b < nz.size(); ++b) {
      lag[static_cast<std::size_t>(nz[b] - nz[a])] += va * s.values[static_cast<std::size_t>(nz[b])];
    }
  }
  Signal out;
  out.offset = -(len - 1);
  out.values.resize(static_cast<std::size_t>(2 * len - 1));
  for (std::int64_t x = 0; x < len; ++x) {
    out.values[static_cast<std::size_t>(len - 1 + x)] = lag[static_cast<std::size_t>(x)];
    out.values[static_cast<std::size_t>(len - 1 - x)] = lag[static_cast<std::size_t>(x)];
  }
  return out;
}

}  // namespace serial

Signal autocorrelation_pairs(const Kernel& k, Workers w) {
  const Signal& s = k.signal;
  const auto len = static_cast<std::int64_t>(s.size());
  std::vector<std::int64_t> nz;
  for (std::int64_t i = 0; i < len; ++i) {
    if (s.values[static_cast<std::size_t>(i)] != 0.0) nz.push_back(i);
  }
  std::vector<double> lag(static_cast<std::size_t>(len), 0.0);
  // Each lag sums its pairs in increasing order of the left point, the same
  // order the serial reference uses.
  map_chunks<int>(0, len, w, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t x = lo; x < hi; ++x) {
      double acc = 0.0;
      for (std::int64_t i : nz) {
        if (i + x >= len) break;
        acc += s.values[static_cast<std::size_t>(i)] * s.values[static_cast<std::size_t>(i + x)];
      }
      lag[static_cast<std::size_t>(x)] = acc;
    }
    return 0;
  }, 256);
  Signal out;
  out.offset = -(len - 1);
  out.values.resize(static_cast<std::size_t>(2 * len - 1));
  for (std::int64_t x = 0; x < len; ++x) {
    out.values[static_cast<std::size_t>(len - 1 + x)] = lag[static_cast<std::size_t>(x)];
    out.values[static_cast<std::size_t>(len - 1 - x)] = lag[static_cast<std::size_t>(x)];
  }
  return out;
}

std::vector<double> phi_prime_range(const InverseFunction& phi, std::int64_t lo, std::int64_t hi, Workers w) {
  std::vector<double> out;
  if (hi <= lo) return out;
  out.reserve(static_cast<std::size_t>(hi - lo));
  const auto first_in_domain = std::max(lo, static_cast<std::int64_t>(std::ceil(phi.y0())));
  const double floor_slope = 1.0 / phi.inverse_slope(phi.y0());
  for (std::int64_t n = lo; n < std::min(first_in_domain, hi); ++n) out.push_back(floor_slope);
  if (first_in_domain < hi) {
    const std::vector<double> xs = phi.table(first_in_domain, hi, w);
    for (double x : xs) out.push_back(1.0 / phi.growth().jet(x)[1]);
  }
  return out;
}

double compute_GN(const InverseFunction& phi, std::int64_t N, std::int64_t x) {
  const std::int64_t ax = x < 0 ? -x : x;
  const std::int64_t lo = support_lo(N);
  const std::int64_t hi = support_hi(N) - ax;  // n + |x| < 4N
  if (hi <= lo) return 0.0;
  const double dN = static_cast<double>(N);
  CompensatedSum<double> acc;
  for (std::int64_t n = lo; n < hi; ++n) {
    const double w = eta(static_cast<double>(n) / dN) * eta(static_cast<double>(n + ax) / dN);
    if (w == 0.0) continue;
    const double d1 = 1.0 / phi.inverse_slope(static_cast<double>(n));
    const double d2 = 1.0 / phi.inverse_slope(static_cast<double>(n + ax));
    acc.add(d1 * d2 * w);
  }
  const double pN = phi(dN);
  return acc.value() / (pN * pN);
}

Signal gn_profile(const InverseFunction& phi, std::int64_t N, double norm, Workers w) {
  const std::int64_t lo = support_lo(N), hi = support_hi(N);
  const std::vector<double> slope = phi_prime_range(phi, lo, hi, w);
  Signal a;
  a.offset = lo;
  a.values.resize(slope.size());
  const double dN = static_cast<double>(N);
  for (std::size_t i = 0; i < slope.size(); ++i) {
    a.values[i] = slope[i] * eta(static_cast<double>(lo + static_cast<std::int64_t>(i)) / dN) / norm;
  }
  return self_correlation(a);
}

DecompositionReport decomposition_report(const Kernel& k, const InverseFunction& phi, Workers w) {
  const std::int64_t N = k.scale;
  const double dN = static_cast<double>(N);
  const Signal ac = autocorrelation(k);
  const Signal gn = gn_profile(phi, N, k.norm, w);
  DecompositionReport r;
  r.scale = N;
  r.phi_N = phi(dN);
  r.mass = total(k.signal);
  r.center = ac.at(0);
  const auto small_end = static_cast<std::int64_t>(std::floor(r.phi_N));
  const std::int64_t max_lag = std::max(ac.end(), gn.end());
  for (std::int64_t x = 1; x <= small_end && x < max_lag; ++x) {
    r.small_x_bound = std::max(r.small_x_bound, dN * std::abs(ac.at(x)));
  }
  for (std::int64_t x = small_end + 1; x < max_lag; ++x) {
    const double g = gn.at(x);
    r.gn_sup = std::max(r.gn_sup, dN * std::abs(g));
    r.en_sup = std::max(r.en_sup, std::abs(ac.at(x) - g));
    for (std::int64_t h : {1, 2, 4, 8}) {
      if (x + h >= max_lag) continue;
      r.gn_lipschitz = std::max(r.gn_lipschitz, dN * dN * std::abs(gn.at(x + h) - g) / static_cast<double>(h));
    }
  }
  return r;
}

double estimate_chi(const std::vector<DecompositionReport>& reports) {
  std::vector<double> xs, ys;
  for (const auto& r : reports) {
    if (std::find(xs.begin(), xs.end(), std::log2(static_cast<double>(r.scale))) != xs.end()) continue;
    xs.push_back(std::log2(static_cast<double>(r.scale)));
    ys.push_back(std::log2(r.en_sup));
  }
  if (xs.size() < 4) throw DomainError("estimate_chi: need reports at >= 4 distinct scales");
  return -ls_slope(xs, ys) - 1.0;
}

}  // namespace roughmax
