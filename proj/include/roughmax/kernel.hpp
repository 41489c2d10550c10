#pragma once

#include <cstdint>
#include <vector>

#include "roughmax/growth.hpp"
#include "roughmax/parallel.hpp"
#include "roughmax/seqset.hpp"
#include "roughmax/signal.hpp"

namespace roughmax {

// Smooth cutoff: 0 on (-inf, 1/2] and [4, inf), 1 on [1, 2], built from
// exp(-1/t) bumps on the two transition intervals.
double eta(double t);

enum class Normalization {
  CountExact,  // |N_h cap [1, N]|
  PhiApprox,   // phi(N)
};

struct Kernel {
  std::int64_t scale = 0;
  Normalization normalization = Normalization::CountExact;
  double norm = 1.0;
  Signal signal;  // supported in N_h cap (N/2, 4N)
};

// K(n) = eta(n/N) / norm for n in N_h, 0 otherwise.
Kernel build_kernel(const SequenceSet& s, const InverseFunction& phi, std::int64_t N,
                    Normalization normalization);

// K * K~ with K~(x) = K(-x), exactly even.
Signal autocorrelation(const Kernel& k);

// Pair-sum evaluation of the same autocorrelation, one lag at a time, with
// the lags split across workers.
Signal autocorrelation_pairs(const Kernel& k, Workers w);

namespace serial {
// Reference: sum over all ordered pairs of support points.
Signal autocorrelation_pairs(const Kernel& k);
}  // namespace serial

// phi'(n) for n in [lo, hi); values below h(x0) use phi'(h(x0)).
std::vector<double> phi_prime_range(const InverseFunction& phi, std::int64_t lo, std::int64_t hi,
                                    Workers w = {});

// G_N(x) = phi(N)^-2 sum_n phi'(n) phi'(n+|x|) eta(n/N) eta((n+|x|)/N), summed directly.
double compute_GN(const InverseFunction& phi, std::int64_t N, std::int64_t x);

// G_N at every lag through one transform; normalized by norm^2.
Signal gn_profile(const InverseFunction& phi, std::int64_t N, double norm, Workers w = {});

struct DecompositionReport {
  std::int64_t scale = 0;
  double phi_N = 0;
  double small_x_bound = 0;  // max_{0<|x|<=phi(N)} N |K*K~(x)|
  double gn_sup = 0;         // max_{|x|>phi(N)} N |G_N(x)|
  double en_sup = 0;         // max_{|x|>phi(N)} |K*K~(x) - G_N(x)|
  double gn_lipschitz = 0;   // max N^2 |G_N(x+h) - G_N(x)| / |h|, |h| in {1,2,4,8}
  double mass = 0;           // sum of K
  double center = 0;         // K*K~(0)
};

// Exhaustive scan over every lag, with G_N from gn_profile at the kernel's
// own normalization.
DecompositionReport decomposition_report(const Kernel& k, const InverseFunction& phi, Workers w = {});

// -(slope) - 1 of log2(en_sup) against log2(N).
double estimate_chi(const std::vector<DecompositionReport>& reports);

}  // namespace roughmax
