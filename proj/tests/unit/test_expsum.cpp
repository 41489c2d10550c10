#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "roughmax/expsum.hpp"
#include "roughmax/kernel.hpp"
#include "roughmax/stats.hpp"

using namespace roughmax;
using Rational = boost::multiprecision::cpp_rational;

namespace {

const InverseFunction& phi105() {
  static const InverseFunction phi(make_growth(Variant::PurePower, 1.05, 1.0));
  return phi;
}

// Geometric series sum_{n=a}^{b} e(beta n), evaluated in closed form.
std::complex<double> geometric(double beta, std::int64_t a, std::int64_t b) {
  const std::complex<double> z = std::polar(1.0, 2 * std::numbers::pi * beta);
  const auto n = static_cast<double>(b - a + 1);
  return std::pow(z, static_cast<double>(a)) * (1.0 - std::pow(z, n)) / (1.0 - z);
}

}  // namespace

TEST_CASE("sawtooth and distance to the integers") {
  CHECK(sawtooth(0.25) == -0.25);
  CHECK(sawtooth(-0.25) == 0.25);
  CHECK(sawtooth(3.0) == -0.5);
  CHECK(dist_to_integer(2.7) == doctest::Approx(0.3));
  CHECK(dist_to_integer(-2.5) == 0.5);
  CHECK(dist_to_integer(5.0) == 0.0);
}

TEST_CASE("truncated sawtooth series") {
  for (std::int64_t M : {8, 64, 512}) {
    for (int i = 1; i < 1000; ++i) {
      const double t = -3.0 + 6.0 * i / 1000.0 + 1e-7;
      const auto s = sawtooth_truncation(t, M);
      CHECK(s.value.imag() == 0.0);
      CHECK(std::abs(s.value.real() - sawtooth(t)) <= s.residual_bound);
    }
  }
  CHECK(sawtooth_truncation(2.0, 10).residual_bound == 1.0);
  CHECK(sawtooth_truncation(0.5, 10).residual_bound == doctest::Approx(0.2));
  CHECK_THROWS_AS(sawtooth_truncation(0.3, 0), DomainError);
  // the truncation error decays like 1/M at fixed t
  const double e1 = std::abs(sawtooth_truncation(0.3, 100).value.real() - sawtooth(0.3));
  const double e2 = std::abs(sawtooth_truncation(0.3, 100000).value.real() - sawtooth(0.3));
  CHECK(e2 < e1 / 100);
}

TEST_CASE("coefficient bound") {
  CHECK(coefficient_bound(0, 10) == doctest::Approx(std::log(11.0) / 10));
  CHECK(coefficient_bound(1, 100) == doctest::Approx(std::log(101.0) / 100));
  CHECK(coefficient_bound(50, 10) == doctest::Approx(10.0 / 2500));
  CHECK(coefficient_bound(-50, 10) == coefficient_bound(50, 10));
}

TEST_CASE("summation by parts") {
  // exact over the rationals
  std::vector<Rational> u;
  for (int k = 1; k <= 30; ++k) u.emplace_back(Rational(k % 7 - 3, k + 1));
  const auto g = [](std::int64_t n) { return Rational(1, n * n + 1); };
  Rational direct = 0;
  for (std::size_t i = 0; i < u.size(); ++i) direct += u[i] * g(static_cast<std::int64_t>(i) + 6);
  CHECK(abel_sum(u, 5, g) == direct);
  // doubles within round-off
  std::vector<std::complex<double>> v;
  for (int k = 0; k < 1000; ++k) v.push_back(std::polar(1.0, 0.37 * k * k));
  const auto w = [](std::int64_t n) { return std::complex<double>(std::sqrt(static_cast<double>(n)), 0.0); };
  std::complex<double> ref = 0;
  for (std::size_t i = 0; i < v.size(); ++i) ref += v[i] * w(static_cast<std::int64_t>(i) + 11);
  CHECK(std::abs(abel_sum(v, 10, w) - ref) <= 1e-10 * std::abs(ref) + 1e-9);
  CHECK_THROWS_AS(abel_sum(std::vector<double>{}, 0, [](std::int64_t) { return 1.0; }), DomainError);
}

TEST_CASE("summation range") {
  CHECK(sum_range(16, 0) == std::pair<std::int64_t, std::int64_t>{8, 64});
  CHECK(sum_range(16, 5) == std::pair<std::int64_t, std::int64_t>{8, 59});
  CHECK(sum_range(16, -5) == std::pair<std::int64_t, std::int64_t>{13, 64});
  CHECK_THROWS_AS(sum_range(16, 60), DomainError);
}

TEST_CASE("identity phase reduces to a geometric series") {
  const InverseFunction id(identity_growth());
  const auto r = single_phase_sum(id, 64, 0, 0.0, 1, 3, 0, 0);
  CHECK(r.terms == 224);
  CHECK(r.actual.real() == doctest::Approx(224.0));
  CHECK(std::abs(r.actual.imag()) < 1e-9);
  const double alpha = 0.1234;
  const auto s = single_phase_sum(id, 64, 0, alpha, 2, 1, 0, 0);
  CHECK(std::abs(s.actual - geometric(2 * alpha, 33, 256)) < 1e-9);
  CHECK(s.bound == doctest::Approx(64.0 / 8.0));
}

TEST_CASE("conjugation is exact") {
  const auto& phi = phi105();
  const auto a = single_phase_sum(phi, 4096, 17, 0.3, 3, 5, 1, 1);
  const auto b = single_phase_sum(phi, 4096, 17, -0.3, 3, -5, 1, 1);
  CHECK(a.actual == std::conj(b.actual));
  const auto c = two_phase_sum(phi, 4096, 200, 0.3, 1, 2, -3, 0.5);
  const auto d = two_phase_sum(phi, 4096, 200, -0.3, 1, -2, 3, 0.5);
  CHECK(c.actual == std::conj(d.actual));
}

TEST_CASE("bounds follow their scaling") {
  const auto& phi = phi105();
  const auto a = single_phase_sum(phi, 1 << 12, 0, 0.0, 1, 1, 0, 0);
  const auto b = single_phase_sum(phi, 1 << 12, 0, 0.0, 1, 4, 0, 0);
  CHECK(b.bound == doctest::Approx(2 * a.bound));
  const double N = 1 << 12;
  CHECK(a.bound == doctest::Approx(N / std::sqrt(phi(N))));
  const auto c = two_phase_sum(phi, 1 << 12, 3000, 0.0, 1, 1, 8, 1.0);
  CHECK(c.bound == doctest::Approx(4 * std::pow(N, 4.0 / 3) * std::pow(phi(N), -2.0 / 3)));
  CHECK_THROWS_AS(two_phase_sum(phi, 1 << 12, 10, 0.0, 1, 1, 1, 1.0), PreconditionError);
  CHECK_THROWS_AS(single_phase_sum(phi, 1 << 12, 0, 0.0, 1, 0, 0, 0), DomainError);
  CHECK_THROWS_AS(single_phase_sum(phi, 1 << 12, 0, 0.0, 1, 1, 0, 0, std::int64_t{100}), PreconditionError);
}

TEST_CASE("partial sums up to N'") {
  const auto& phi = phi105();
  const auto full = single_phase_sum(phi, 1024, 0, 0.2, 1, 1, 0, 0);
  const auto part = single_phase_sum(phi, 1024, 0, 0.2, 1, 1, 0, 0, std::int64_t{2000});
  CHECK(part.terms == 2000 - 512);
  std::complex<double> ref = 0;
  for (std::int64_t n = 513; n <= 2000; ++n) ref += std::polar(1.0, 2 * std::numbers::pi * (0.2 * n + phi(n)));
  CHECK(std::abs(part.actual - ref) < 1e-8);
  CHECK(full.terms == 4096 - 512);
}

TEST_CASE("weighted sums") {
  const auto& phi = phi105();
  ExpSumParams p;
  p.N = 2048;
  p.x = 0;
  p.alpha = 0.17;
  p.m1 = 2;
  const auto one = weighted_sum_bound_check(phi, p, [](std::int64_t) { return 1.0; }, PhaseMode::Single);
  const auto plain = single_phase_sum(phi, 2048, 0, 0.17, 1, 2, 0, 0);
  CHECK(std::abs(one.actual - plain.actual) < 1e-9);
  CHECK(one.bound == doctest::Approx(plain.bound));
  const auto tapered = weighted_sum_bound_check(
      phi, p, [](std::int64_t n) { return eta(static_cast<double>(n) / 2048.0); }, PhaseMode::Single);
  CHECK(tapered.bound > plain.bound);
  p.x = 400;
  p.m2 = -1;
  p.kappa = 0.5;
  const auto two = weighted_sum_bound_check(phi, p, [](std::int64_t) { return 1.0; }, PhaseMode::Two);
  CHECK(std::abs(two.actual - two_phase_sum(phi, 2048, 400, 0.17, 1, 2, -1, 0.5).actual) < 1e-9);
}

TEST_CASE("min-norm sums") {
  const InverseFunction id(identity_growth());
  // phi(n) = n is always an integer, so every weighted term is 1
  const auto [a, b] = min_norm_sum(id, 256, 0, 16, 0, 0);
  double wsum = 0;
  for (std::int64_t n = 129; n < 1024; ++n) wsum += eta(n / 256.0) * eta(n / 256.0);
  CHECK(a == doctest::Approx(wsum));
  CHECK(b > 0);
  const auto& phi = phi105();
  double prev = 1e300;
  for (std::int64_t M : {2, 8, 32, 128}) {
    const double v = min_norm_sum(phi, 4096, 0, M, 0, 0).first;
    CHECK(v <= prev);
    prev = v;
  }
  CHECK_THROWS_AS(min_norm_sum(phi, 4096, 0, 1, 0, 0), DomainError);
}

TEST_CASE("resonant frequency") {
  CHECK(resonant_alpha(3.25) == doctest::Approx(0.75));
  CHECK(resonant_alpha(4.0) == 0.0);
  CHECK(resonant_alpha(0.6, 2) == doctest::Approx(0.2));
  CHECK_THROWS_AS(resonant_alpha(1.0, 0), DomainError);
}

TEST_CASE("chunked evaluation matches the serial loop") {
  const auto& phi = phi105();
  const auto ref = serial::single_phase_sum(phi, 1 << 14, 33, 0.41, 2, 3, 1, 1);
  const auto r1 = single_phase_sum(phi, 1 << 14, 33, 0.41, 2, 3, 1, 1, std::nullopt, {1});
  const auto r4 = single_phase_sum(phi, 1 << 14, 33, 0.41, 2, 3, 1, 1, std::nullopt, {4});
  CHECK(std::abs(r1.actual - ref) < 1e-8);
  CHECK(r1.actual == r4.actual);
}

TEST_CASE("single-phase sweep stays flat") {
  const auto rows = lemma_sweep(phi105(), Lemma::SinglePhase, 12, 18, {});
  std::vector<double> ratios;
  for (const auto& r : rows) ratios.push_back(r.ratio);
  CHECK(spread(ratios) <= 2.0);
}
