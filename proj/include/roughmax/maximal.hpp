#pragma once

#include <cstdint>
#include <vector>

#include "roughmax/cz.hpp"
#include "roughmax/growth.hpp"
#include "roughmax/kernel.hpp"
#include "roughmax/parallel.hpp"
#include "roughmax/seqset.hpp"
#include "roughmax/signal.hpp"

namespace roughmax {

// Kernels K_n = K_{h,2^n} for n in [n_lo, n_hi].
struct ScaleFamily {
  int n_lo = 0;
  int n_hi = 0;
  std::vector<std::int64_t> scales;  // 2^n
  std::vector<Kernel> kernels;
  std::vector<std::int64_t> d;  // count(4 2^n) - count(2^{n-1})
  std::vector<std::int64_t> D;  // 4 2^n
};

ScaleFamily build_family(const SequenceSet& s, const InverseFunction& phi, int n_lo, int n_hi,
                         Normalization normalization = Normalization::CountExact);

// max_n log d_n / log D_n
double fitted_eps0(const ScaleFamily& family);

// min_n min(d_{n+1}/d_n, D_{n+1}/D_n)
double fitted_growth_ratio(const ScaleFamily& family);

// sup_n |K_n * f|, scales evaluated concurrently and merged by pointwise max.
// f must be nonnegative.
Signal maximal_function(const ScaleFamily& family, const Signal& f, Workers w = {});

namespace serial {
Signal maximal_function(const ScaleFamily& family, const Signal& f);
}  // namespace serial

struct WeakTypePoint {
  double lambda = 0;
  std::int64_t superlevel_count = 0;  // |{M f > lambda}|
  double ratio = 0;                   // lambda |{M f > lambda}| / ||f||_1
};

// 64 log-spaced heights on [||f||_1 / (4 D_max), 2 ||f||_inf].
std::vector<double> default_lambdas(const ScaleFamily& family, const Signal& f, int count = 64);

std::vector<WeakTypePoint> weak_type_profile(const ScaleFamily& family, const Signal& f,
                                             const std::vector<double>& lambdas, Workers w = {});

// Same ratio evaluated on a precomputed M f.
std::vector<WeakTypePoint> weak_type_profile_of(const Signal& mf, double f_l1, const std::vector<double>& lambdas);

// sup over all lambda > 0 of lambda |{mf > lambda}| / f_l1, attained as
// lambda increases to a value of mf.
double weak_type_sup(const Signal& mf, double f_l1);

// K distinct random sites in [lo, hi) with heights in (0, 1].
Signal random_sparse(int K, std::uint64_t seed, std::int64_t lo, std::int64_t hi);

struct FamilyScaleRow {
  int n = 0;
  std::int64_t N = 0;
  std::int64_t d = 0;
  std::int64_t D = 0;
  double residual = 0;        // sup_{|x|>phi(N)} |K*K~ - F_n|
  double center_times_d = 0;  // F_n(0) d_n
  double sup_times_D = 0;     // sup_{x != 0} |F_n(x)| D_n
  double lipschitz = 0;       // sup |F_n(x+y) - F_n(x)| D_n^2 / |y| beyond phi(N)
};

struct FamilyReport {
  std::vector<FamilyScaleRow> rows;
  double eps0 = 0;
  double growth_ratio = 0;  // fitted M
  double eps1 = 0;          // from log residual against log D_n
  double eps2 = 1.0;
  double center_spread = 0;     // max/min of F_n(0) d_n
  double sup_spread = 0;        // max/min of sup |F_n| D_n
  double lipschitz_spread = 0;  // max/min of the Lipschitz ratio
  bool eps0_ok = false;
  bool growth_ok = false;
  bool center_bounded = false;  // spread <= 4
  bool eps1_positive = false;
};

FamilyReport verify_family_hypotheses(const ScaleFamily& family, const InverseFunction& phi, Workers w = {});

// Energy of the refined bad parts at one family scale: for each level
// t = s(n) - 1 - s with atoms, r(s) = (||K_n * B_t||_2^2 - ||B_t||_2^2 / d_n) / (lambda ||B_t||_1).
// decay is minus the fitted slope of log2 r(s) against s (NaN with fewer than
// two positive points). Reported only, nothing is asserted.
struct EnergyDiagnostic {
  std::vector<int> s;
  std::vector<double> r;
  double decay = 0;
};

EnergyDiagnostic energy_diagnostic(const ScaleFamily& family, std::size_t index, const CZDecomposition<double>& cz);

}  // namespace roughmax
