#include "roughmax/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace roughmax {
namespace {

constexpr double kSingular = 1e-8;

double checked_denominator(double d, const char* what) {
  if (std::abs(d) < kSingular) throw SingularityError(what);
  return d;
}

void validate_on_grid(const GrowthFunction& g) {
  for (double x : log_grid(g.x0(), g.x0() * std::ldexp(1.0, 20), 64)) {
    const auto j = g.jet(x);
    for (double v : j) {
      if (!std::isfinite(v)) throw DomainError("make_growth: non-finite derivative on validation grid");
    }
    if (j[0] < 1.0) throw DomainError("make_growth: h(x0) < 1");
    if (j[1] <= 0.0) throw DomainError("make_growth: h' <= 0 on validation grid");
    if (j[2] <= 0.0) throw DomainError("make_growth: h'' <= 0 on validation grid");
    try {
      for (int i = 1; i <= 3; ++i) {
        if (!std::isfinite(g.vartheta(x, i))) throw DomainError("make_growth: non-finite vartheta");
      }
    } catch (const SingularityError&) {
      throw DomainError("make_growth: vartheta recursion singular on validation grid");
    }
    if (g.c() == 1.0 && g.slow(x).g <= 0.0) {
      throw DomainError("make_growth: c = 1 requires vartheta > 0");
    }
  }
}

}  // namespace

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::PurePower: return "pure";
    case Variant::PowerLog: return "powerlog";
    case Variant::PowerExpLog: return "powerexplog";
    case Variant::PowerIterLog: return "poweriterlog";
  }
  return "?";
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

double default_x0(Variant variant, const GrowthParams& params) {
  switch (variant) {
    case Variant::PurePower: return 1.0;
    case Variant::PowerLog: return std::max(3.0, std::exp(std::abs(params.A) + 1.0));
    case Variant::PowerExpLog: return 3.0;
    case Variant::PowerIterLog: {
      // smallest tower e, e^e, e^e^e, ... with l_m(x0) >= 1
      double tower = std::exp(1.0);
      for (int k = 1; k < params.m; ++k) tower = std::exp(tower);
      return std::max(3.0, std::ceil(tower));
    }
  }
  return 1.0;
}

GrowthFunction make_growth(Variant variant, double c, double C_h, GrowthParams params,
                           std::optional<double> x0) {
  if (!(c >= 1.0 && c < 2.0)) throw DomainError("make_growth: c must lie in [1, 2)");
  if (!(C_h > 0.0) || !std::isfinite(C_h)) throw DomainError("make_growth: C_h must be positive");
  if (variant == Variant::PurePower && c == 1.0) {
    throw DomainError("make_growth: pure power with c = 1 has vartheta = 0");
  }
  if (variant == Variant::PowerExpLog && !(params.B > 0.0 && params.B < 1.0)) {
    throw DomainError("make_growth: B must lie in (0, 1)");
  }
  if (variant == Variant::PowerIterLog && (params.m < 1 || params.m > 3)) {
    throw DomainError("make_growth: iteration depth m must be 1, 2 or 3");
  }
  GrowthFunction g;
  g.variant_ = variant;
  g.c_ = c;
  g.scale_ = C_h;
  g.params_ = params;
  g.x0_ = x0.value_or(default_x0(variant, params));
  if (!(g.x0_ >= 1.0) || !std::isfinite(g.x0_)) throw DomainError("make_growth: x0 must be >= 1");
  validate_on_grid(g);
  return g;
}

GrowthFunction identity_growth() {
  GrowthFunction g;
  g.variant_ = Variant::PurePower;
  g.c_ = 1.0;
  g.scale_ = 1.0;
  g.x0_ = 1.0;
  return g;
}

double GrowthFunction::eval(double x, int order) const {
  if (!(x >= x0_)) throw DomainError("eval_h: x below x0");
  if (order < 0 || order > 3) throw DomainError("eval_h: derivative order must be 0..3");
  return jet(x)[static_cast<std::size_t>(order)];
}

double GrowthFunction::vartheta(double x, int i) const {
  if (!(x >= x0_)) throw DomainError("vartheta: x below x0");
  if (i < 1 || i > 3) throw DomainError("vartheta: index must be 1..3");
  const SlowJet<double> s = slow(x);
  const double a1 = c_ + s.g;
  if (i == 1) return s.g;
  const double v2 = s.g + s.dg / checked_denominator(a1, "vartheta_2: alpha_1 + vartheta_1 vanishes");
  if (i == 2) return v2;
  // x vartheta_2'(x) as a t-derivative
  const double xdv2 = s.dg + (s.d2g * a1 - s.dg * s.dg) / (a1 * a1);
  return v2 + xdv2 / checked_denominator(c_ - 1.0 + v2, "vartheta_3: alpha_2 + vartheta_2 vanishes");
}

InverseFunction::InverseFunction(GrowthFunction g, double tol, int max_iter)
    : g_(std::move(g)), gamma_(1.0 / g_.c()), y0_(g_.value(g_.x0())), tol_(tol), max_iter_(max_iter) {
  if (!(tol > 0.0)) throw DomainError("InverseFunction: tol must be positive");
  if (max_iter < 1) throw DomainError("InverseFunction: max_iter must be positive");
}

double InverseFunction::invert(double y) const { return invert_as<double>(y, tol_); }

double InverseFunction::derivative(double y, int order) const {
  const double x = invert(y);
  const auto j = g_.jet(x);
  if (order == 1) return 1.0 / j[1];
  if (order == 2) return -j[2] / (j[1] * j[1] * j[1]);
  throw DomainError("eval_phi_deriv: order must be 1 or 2");
}

double InverseFunction::inverse_slope(double y) const {
  return g_.jet(invert(std::max(y, y0_)))[1];
}

double InverseFunction::theta(double y, int i) const {
  if (i < 1 || i > 3) throw DomainError("theta: index must be 1..3");
  const double x = invert(y);
  const SlowJet<double> s = g_.slow(x);
  const double a = g_.c() + s.g;
  const double a2 = a * a;
  const double theta1 = 1.0 / checked_denominator(a, "theta: c + vartheta vanishes") - gamma_;
  if (i == 1) return theta1;
  const double theta2 = theta1 - s.dg / a2;
  if (i == 2) return theta2;
  // x^2 vartheta'' + 2 x vartheta' = d2g + dg in the t variable
  const double d1 = checked_denominator(a2 - a2 * a - s.dg * a, "theta_3: singular denominator");
  const double d2 = checked_denominator(a2 * a - a2 * a2 - s.dg * a2, "theta_3: singular denominator");
  return theta2 - (s.d2g + s.dg) / d1 + 2.0 * s.dg * s.dg / d2;
}

double InverseFunction::sigma(double y) const {
  if (g_.c() != 1.0) throw DomainError("sigma: defined for c = 1 only");
  return g_.slow(invert(y)).g;
}

double InverseFunction::tau(double y) const {
  if (g_.c() != 1.0) throw DomainError("tau: defined for c = 1 only");
  const SlowJet<double> s = g_.slow(invert(y));
  const double a = 1.0 + s.g;
  return -(1.0 / a + s.dg / (checked_denominator(s.g, "tau: vartheta vanishes") * a * a));
}

std::vector<double> InverseFunction::table(std::int64_t lo, std::int64_t hi, Workers w) const {
  if (hi <= lo) return {};
  if (static_cast<double>(lo) < y0_) throw DomainError("phi table: range starts below h(x0)");
  std::vector<double> out(static_cast<std::size_t>(hi - lo));
  map_chunks<int>(lo, hi, w, [&](std::int64_t a, std::int64_t b) {
    double x = invert(static_cast<double>(a));
    out[static_cast<std::size_t>(a - lo)] = x;
    for (std::int64_t n = a + 1; n < b; ++n) {
      const double seed = x + 1.0 / g_.jet(x)[1];
      x = solve<double>(static_cast<double>(n), tol_, seed);
      out[static_cast<std::size_t>(n - lo)] = x;
    }
    return 0;
  });
  return out;
}

AuxFunctionReport aux_report(const InverseFunction& phi, const std::vector<double>& grid) {
  AuxFunctionReport r;
  r.grid = grid;
  const bool c_one = phi.growth().c() == 1.0;
  for (double y : grid) {
    const double x = phi(y);
    for (int i = 1; i <= 3; ++i) {
      r.theta[static_cast<std::size_t>(i - 1)].push_back(phi.theta(y, i));
      r.vartheta[static_cast<std::size_t>(i - 1)].push_back(phi.growth().vartheta(x, i));
    }
    if (c_one) {
      r.sigma.push_back(phi.sigma(y));
      r.tau.push_back(phi.tau(y));
      r.rho.push_back(phi.growth().vartheta(x, 2) / phi.growth().vartheta(x, 1));
    }
  }
  return r;
}

}  // namespace roughmax
