#include "roughmax/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "roughmax/stats.hpp"

namespace roughmax {
namespace {

struct SparseKernel {
  std::vector<std::int64_t> at;
  std::vector<double> value;
};

SparseKernel sparse(const Signal& s) {
  SparseKernel k;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.values[i] != 0.0) {
      k.at.push_back(s.offset + static_cast<std::int64_t>(i));
      k.value.push_back(s.values[i]);
    }
  }
  return k;
}

// |K * f| by scattering each nonzero of f through the kernel's support, in
// increasing order of the f site.
Signal scale_response(const Kernel& k, const Signal& f) {
  const SparseKernel sk = sparse(k.signal);
  Signal out;
  out.offset = f.begin() + k.signal.begin();
  out.values.assign(f.size() + k.signal.size() - 1, 0.0);
  for (std::size_t y = 0; y < f.size(); ++y) {
    const double fy = f.values[y];
    if (fy == 0.0) continue;
    const std::int64_t base = f.offset + static_cast<std::int64_t>(y) - out.offset;
    for (std::size_t i = 0; i < sk.at.size(); ++i) {
      out.values[static_cast<std::size_t>(base + sk.at[i])] += fy * sk.value[i];
    }
  }
  for (double& v : out.values) v = std::abs(v);
  return out;
}

// Pointwise max of signals onto a common span.
Signal merge_max(const std::vector<Signal>& parts) {
  std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = std::numeric_limits<std::int64_t>::min();
  for (const Signal& p : parts) {
    if (p.empty()) continue;
    lo = std::min(lo, p.begin());
    hi = std::max(hi, p.end());
  }
  if (lo >= hi) return {};
  Signal out{lo, std::vector<double>(static_cast<std::size_t>(hi - lo), 0.0)};
  for (const Signal& p : parts) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      double& o = out.values[static_cast<std::size_t>(p.offset - lo) + i];
      o = std::max(o, p.values[i]);
    }
  }
  return out;
}

void check_nonnegative(const Signal& f) {
  for (double v : f.values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("maximal_function: f must be finite and nonnegative");
  }
}

double max_over_min(const std::vector<double>& v) { return spread(v); }

}  // namespace

ScaleFamily build_family(const SequenceSet& s, const InverseFunction& phi, int n_lo, int n_hi,
                         Normalization normalization) {
  if (n_lo < 1 || n_hi < n_lo) throw DomainError("build_family: need 1 <= n_lo <= n_hi");
  if ((std::int64_t{4} << n_hi) > s.n_max()) throw RangeError("build_family: 4 2^n_hi exceeds n_max");
  ScaleFamily f;
  f.n_lo = n_lo;
  f.n_hi = n_hi;
  for (int n = n_lo; n <= n_hi; ++n) {
    const std::int64_t N = std::int64_t{1} << n;
    f.scales.push_back(N);
    f.kernels.push_back(build_kernel(s, phi, N, normalization));
    f.d.push_back(s.count(4 * N) - s.count(N / 2));
    f.D.push_back(4 * N);
  }
  return f;
}

double fitted_eps0(const ScaleFamily& family) {
  double e = 0.0;
  for (std::size_t i = 0; i < family.d.size(); ++i) {
    e = std::max(e, std::log(static_cast<double>(family.d[i])) / std::log(static_cast<double>(family.D[i])));
  }
  return e;
}

double fitted_growth_ratio(const ScaleFamily& family) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < family.d.size(); ++i) {
    m = std::min(m, static_cast<double>(family.d[i + 1]) / static_cast<double>(family.d[i]));
    m = std::min(m, static_cast<double>(family.D[i + 1]) / static_cast<double>(family.D[i]));
  }
  return m;
}

Signal maximal_function(const ScaleFamily& family, const Signal& f, Workers w) {
  check_nonnegative(f);
  const Signal g = trimmed(f);
  if (g.empty()) return {};
  const auto n = static_cast<std::int64_t>(family.kernels.size());
  const auto parts = map_chunks<Signal>(0, n, w, [&](std::int64_t a, std::int64_t) {
    return scale_response(family.kernels[static_cast<std::size_t>(a)], g);
  }, 1);
  return merge_max(parts);
}

namespace serial {

Signal maximal_function(const ScaleFamily& family, const Signal& f) {
  check_nonnegative(f);
  const Signal g = trimmed(f);
  if (g.empty()) return {};
  std::vector<Signal> parts;
  for (const Kernel& k : family.kernels) parts.push_back(scale_response(k, g));
  return merge_max(parts);
}

}  // namespace serial

std::vector<double> default_lambdas(const ScaleFamily& family, const Signal& f, int count) {
  if (family.D.empty()) throw DomainError("default_lambdas: empty family");
  const double l1 = l1_norm(f);
  if (l1 == 0.0) throw DomainError("default_lambdas: f = 0");
  return log_grid(l1 / (4.0 * static_cast<double>(family.D.back())), 2.0 * sup_norm(f), count);
}

std::vector<WeakTypePoint> weak_type_profile_of(const Signal& mf, double f_l1, const std::vector<double>& lambdas) {
  if (!(f_l1 > 0.0)) throw DomainError("weak_type_profile: f = 0");
  std::vector<double> v = mf.values;
  std::sort(v.begin(), v.end());
  std::vector<WeakTypePoint> out;
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw DomainError("weak_type_profile: lambda must be positive");
    const auto count = static_cast<std::int64_t>(v.end() - std::upper_bound(v.begin(), v.end(), lambda));
    out.push_back({lambda, count, lambda * static_cast<double>(count) / f_l1});
  }
  return out;
}

std::vector<WeakTypePoint> weak_type_profile(const ScaleFamily& family, const Signal& f,
                                             const std::vector<double>& lambdas, Workers w) {
  return weak_type_profile_of(maximal_function(family, f, w), l1_norm(f), lambdas);
}

double weak_type_sup(const Signal& mf, double f_l1) {
  if (!(f_l1 > 0.0)) throw DomainError("weak_type_sup: f = 0");
  std::vector<double> v = mf.values;
  std::sort(v.begin(), v.end(), std::greater<>());
  double best = 0.0;
  for (std::size_t k = 0; k < v.size() && v[k] > 0.0; ++k) best = std::max(best, v[k] * static_cast<double>(k + 1));
  return best / f_l1;
}

Signal random_sparse(int K, std::uint64_t seed, std::int64_t lo, std::int64_t hi) {
  if (K < 1 || hi - lo < K) throw DomainError("random_sparse: need 1 <= K <= hi - lo");
  std::mt19937_64 gen(seed);
  const auto range = static_cast<std::uint64_t>(hi - lo);
  std::vector<std::pair<std::int64_t, double>> pts;
  while (static_cast<int>(pts.size()) < K) {
    const auto x = lo + static_cast<std::int64_t>(gen() % range);
    const double v = static_cast<double>((gen() >> 11) + 1) * 0x1p-53;
    if (std::none_of(pts.begin(), pts.end(), [&](const auto& p) { return p.first == x; })) pts.emplace_back(x, v);
  }
  std::sort(pts.begin(), pts.end());
  Signal s{pts.front().first, std::vector<double>(static_cast<std::size_t>(pts.back().first - pts.front().first + 1), 0.0)};
  for (const auto& [x, v] : pts) s.values[static_cast<std::size_t>(x - s.offset)] = v;
  return s;
}

FamilyReport verify_family_hypotheses(const ScaleFamily& family, const InverseFunction& phi, Workers w) {
  if (family.kernels.size() < 4) throw DomainError("verify_family_hypotheses: need at least 4 scales");
  FamilyReport rep;
  std::vector<double> logD, logres, centers, sups, lips;
  for (std::size_t i = 0; i < family.kernels.size(); ++i) {
    const DecompositionReport d = decomposition_report(family.kernels[i], phi, w);
    const double N = static_cast<double>(family.scales[i]);
    const double D = static_cast<double>(family.D[i]);
    FamilyScaleRow row;
    row.n = family.n_lo + static_cast<int>(i);
    row.N = family.scales[i];
    row.d = family.d[i];
    row.D = family.D[i];
    row.residual = d.en_sup;
    row.center_times_d = d.center * static_cast<double>(family.d[i]);
    row.sup_times_D = std::max(d.small_x_bound, d.gn_sup) / N * D;
    row.lipschitz = d.gn_lipschitz / (N * N) * D * D;
    rep.rows.push_back(row);
    logD.push_back(std::log(D));
    logres.push_back(std::log(row.residual));
    centers.push_back(row.center_times_d);
    sups.push_back(row.sup_times_D);
    lips.push_back(row.lipschitz);
  }
  rep.eps0 = fitted_eps0(family);
  rep.growth_ratio = fitted_growth_ratio(family);
  rep.eps1 = -ls_slope(logD, logres) - 1.0;
  rep.center_spread = max_over_min(centers);
  rep.sup_spread = max_over_min(sups);
  rep.lipschitz_spread = max_over_min(lips);
  rep.eps0_ok = rep.eps0 < 1.0;
  rep.growth_ok = rep.growth_ratio > 1.0;
  rep.center_bounded = rep.center_spread <= 4.0;
  rep.eps1_positive = rep.eps1 > 0.0;
  return rep;
}

EnergyDiagnostic energy_diagnostic(const ScaleFamily& family, std::size_t index, const CZDecomposition<double>& cz) {
  if (index >= family.kernels.size()) throw RangeError("energy_diagnostic: scale index out of range");
  const Kernel& k = family.kernels[index];
  const int sn = scale_of(family.D[index]);
  EnergyDiagnostic out;
  for (int s = 0; s < sn; ++s) {
    const int level = sn - 1 - s;
    if (std::none_of(cz.atoms.begin(), cz.atoms.end(), [&](const auto& a) { return a.cube.s == level; })) continue;
    const auto r = refine_bad_part(cz, level, family.n_lo + static_cast<int>(index), family.d[index], family.D[index]);
    const double b1 = l1_norm(r.B_part);
    if (b1 == 0.0) continue;
    double b2 = 0.0;
    for (double v : r.B_part.values) b2 += v * v;
    const Signal kb = convolve(k.signal, r.B_part, ConvolutionMethod::Fast);
    double e = 0.0;
    for (double v : kb.values) e += v * v;
    out.s.push_back(s);
    out.r.push_back((e - b2 / static_cast<double>(family.d[index])) / (cz.lambda * b1));
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < out.s.size(); ++i) {
    if (out.r[i] > 0.0) {
      xs.push_back(out.s[i]);
      ys.push_back(std::log2(out.r[i]));
    }
  }
  out.decay = xs.size() >= 2 ? -ls_slope(xs, ys) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace roughmax
