#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roughmax/error.hpp"
#include "roughmax/parallel.hpp"

namespace roughmax {

// Growth function families h(x) = C_h x^c L(x).
//   PurePower     L = 1
//   PowerLog      L = log^A x
//   PowerExpLog   L = exp(A log^B x),  0 < B < 1
//   PowerIterLog  L = l_m(x),  l_1 = log, l_{k+1} = log l_k
enum class Variant { PurePower, PowerLog, PowerExpLog, PowerIterLog };

std::string variant_name(Variant v);

struct GrowthParams {
  double A = 0.0;
  double B = 0.5;
  int m = 1;
};

// vartheta(x) = x h'(x)/h(x) - c written as g(t), t = log x, together with
// dg/dt = x vartheta'(x) and d2g/dt2 = x^2 vartheta''(x) + x vartheta'(x).
template <class Real>
struct SlowJet {
  Real g;
  Real dg;
  Real d2g;
};

class GrowthFunction {
 public:
  Variant variant() const { return variant_; }
  double c() const { return c_; }
  double scale() const { return scale_; }
  const GrowthParams& params() const { return params_; }
  double x0() const { return x0_; }

  // h^{(order)}(x) for order in 0..3. Throws DomainError for x < x0.
  double eval(double x, int order = 0) const;

  // vartheta_i(x), i in 1..3, via the logarithmic-derivative recursion.
  double vartheta(double x, int i) const;

  // Unchecked evaluation at any floating precision (double, long double,
  // boost multiprecision).
  template <class Real>
  Real value(const Real& x) const;

  // {h, h', h'', h'''} from the logarithmic derivative of h.
  template <class Real>
  std::array<Real, 4> jet(const Real& x) const;

  template <class Real>
  SlowJet<Real> slow(const Real& x) const;

  bool operator==(const GrowthFunction&) const = default;

 private:
  friend GrowthFunction make_growth(Variant, double, double, GrowthParams, std::optional<double>);
  friend GrowthFunction identity_growth();

  Variant variant_ = Variant::PurePower;
  double c_ = 1.0;
  double scale_ = 1.0;
  GrowthParams params_{};
  double x0_ = 1.0;
};

// Validated member of the admissible family. x0 defaults per variant.
GrowthFunction make_growth(Variant variant, double c, double C_h, GrowthParams params = {},
                           std::optional<double> x0 = std::nullopt);

// h(x) = x. Not admissible (h'' = 0); kept as the degenerate baseline for
// sanity checks where N_h is every positive integer.
GrowthFunction identity_growth();

double default_x0(Variant variant, const GrowthParams& params);

// Inverse phi of h on [h(x0), inf).
class InverseFunction {
 public:
  explicit InverseFunction(GrowthFunction g, double tol = 1e-12, int max_iter = 100);

  const GrowthFunction& growth() const { return g_; }
  double gamma() const { return gamma_; }
  double y0() const { return y0_; }
  double tol() const { return tol_; }
  int max_iter() const { return max_iter_; }

  // phi(y), |h(phi(y)) - y| <= tol * y.
  double operator()(double y) const { return invert(y); }
  double invert(double y) const;

  // Same solve at another precision and tolerance.
  template <class Real>
  Real invert_as(const Real& y, const Real& tol) const;

  // phi'(y) (order 1) or phi''(y) (order 2).
  double derivative(double y, int order) const;

  // theta_i(y) for i in 1..3.
  double theta(double y, int i) const;

  // c = 1 only: sigma(y) = vartheta(phi(y)) and tau(y), with
  // y phi''(y) = phi'(y) sigma(y) tau(y).
  double sigma(double y) const;
  double tau(double y) const;

  // phi(n) for integers n in [lo, hi), warm-started within fixed chunks.
  std::vector<double> table(std::int64_t lo, std::int64_t hi, Workers w = {}) const;

  // phi'(n)^{-1} = h'(phi(n)). Below y0 the value at y0 is used.
  double inverse_slope(double y) const;

 private:
  template <class Real>
  Real solve(const Real& y, const Real& tol, Real seed) const;

  GrowthFunction g_;
  double gamma_;
  double y0_;
  double tol_;
  int max_iter_;
};

struct AuxFunctionReport {
  std::vector<double> grid;
  std::array<std::vector<double>, 3> theta;      // theta_1..3(y)
  std::array<std::vector<double>, 3> vartheta;   // vartheta_1..3(phi(y))
  std::vector<double> sigma;                     // c = 1 only
  std::vector<double> tau;                       // c = 1 only
  std::vector<double> rho;                       // c = 1 only: vartheta_2 / vartheta
};

AuxFunctionReport aux_report(const InverseFunction& phi, const std::vector<double>& grid);

// n points log-spaced on [lo, hi].
std::vector<double> log_grid(double lo, double hi, int n);

// ---------------------------------------------------------------------------

template <class Real>
Real GrowthFunction::value(const Real& x) const {
  using std::exp;
  using std::log;
  using std::pow;
  const Real base = Real(scale_) * pow(x, Real(c_));
  switch (variant_) {
    case Variant::PurePower:
      return base;
    case Variant::PowerLog:
      return base * pow(log(x), Real(params_.A));
    case Variant::PowerExpLog:
      return base * exp(Real(params_.A) * pow(log(x), Real(params_.B)));
    case Variant::PowerIterLog: {
      Real l = log(x);
      for (int k = 1; k < params_.m; ++k) l = log(l);
      return base * l;
    }
  }
  return base;
}

template <class Real>
SlowJet<Real> GrowthFunction::slow(const Real& x) const {
  using std::log;
  using std::pow;
  const Real t = log(x);
  switch (variant_) {
    case Variant::PurePower:
      return {Real(0), Real(0), Real(0)};
    case Variant::PowerLog: {
      const Real a(params_.A);
      return {a / t, -a / (t * t), 2 * a / (t * t * t)};
    }
    case Variant::PowerExpLog: {
      const Real ab = Real(params_.A) * Real(params_.B);
      const Real b(params_.B);
      const Real p = pow(t, b - 3);
      return {ab * p * t * t, ab * (b - 1) * p * t, ab * (b - 1) * (b - 2) * p};
    }
    case Variant::PowerIterLog: {
      // l_k as functions of t with first and second t-derivatives.
      Real l = t, dl = Real(1), d2l = Real(0);
      Real prod = l;
      Real r = dl / l;
      Real dr = d2l / l - (dl / l) * (dl / l);
      for (int k = 1; k < params_.m; ++k) {
        const Real nl = log(l);
        const Real ndl = dl / l;
        const Real nd2l = (d2l * l - dl * dl) / (l * l);
        l = nl;
        dl = ndl;
        d2l = nd2l;
        prod *= l;
        r += dl / l;
        dr += d2l / l - (dl / l) * (dl / l);
      }
      return {Real(1) / prod, -r / prod, (r * r - dr) / prod};
    }
  }
  return {Real(0), Real(0), Real(0)};
}

template <class Real>
std::array<Real, 4> GrowthFunction::jet(const Real& x) const {
  const Real h = value(x);
  const SlowJet<Real> s = slow(x);
  const Real a = Real(c_) + s.g;  // x h'/h
  const Real h1 = h * a / x;
  const Real h2 = h * (a * (a - 1) + s.dg) / (x * x);
  const Real h3 = h * (s.d2g + 3 * s.dg * (a - 1) + a * (a - 1) * (a - 2)) / (x * x * x);
  return {h, h1, h2, h3};
}

template <class Real>
Real InverseFunction::invert_as(const Real& y, const Real& tol) const {
  using std::pow;
  if (y < Real(y0_)) throw DomainError("phi: argument below h(x0)");
  if (y == Real(y0_)) return Real(g_.x0());
  Real seed = pow(y / Real(g_.scale()), Real(gamma_));
  return solve(y, tol, seed);
}

// Safeguarded Newton on the convex increasing h. The bracket starts as
// [x0, inf) and tightens with every evaluation.
template <class Real>
Real InverseFunction::solve(const Real& y, const Real& tol, Real x) const {
  using std::abs;
  Real lo(g_.x0());
  Real hi(-1);  // unbounded
  if (x <= lo) x = lo;
  for (int it = 0; it < max_iter_; ++it) {
    const auto j = g_.jet(x);
    const Real r = j[0] - y;
    if (r <= 0) {
      if (x > lo) lo = x;
    } else if (hi < 0 || x < hi) {
      hi = x;
    }
    if (abs(r) <= tol * y) {
      const Real polished = x - r / j[1];
      if (polished >= lo && (hi < 0 || polished <= hi)) return polished;
      return x;
    }
    Real next = x - r / j[1];
    const bool inside = next > lo && (hi < 0 || next < hi);
    if (!inside) next = (hi < 0) ? 2 * x : (lo + hi) / 2;
    if (next == x) return x;
    x = next;
  }
  throw ConvergenceError("phi: Newton iteration did not converge", static_cast<double>(lo),
                         static_cast<double>(hi));
}

}  // namespace roughmax
