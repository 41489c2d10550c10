#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "roughmax/ergodic.hpp"

using namespace roughmax;

TEST_CASE("finite systems") {
  const auto sh = shift_system(10, 3);
  CHECK(sh.apply(9) == 2);
  CHECK(sh.iterate(0, 4) == 2);
  CHECK(sh.iterate(0, -1) == 7);
  CHECK(sh.iterate(5, 1000000007) == (5 + 3 * (1000000007 % 10)) % 10);
  CHECK_THROWS_AS(FiniteSystem({0, 0, 1}), DomainError);
  CHECK_THROWS_AS(sh.iterate(10, 1), DomainError);

  const auto r = random_system(500, 42);
  CHECK(r.size() == 500);
  for (std::int64_t x = 0; x < 500; x += 7) {
    std::int64_t y = x;
    for (int n = 0; n < 37; ++n) y = r.apply(y);
    CHECK(r.iterate(x, 37) == y);
    CHECK(r.iterate(y, -37) == x);
  }
  // measure preservation: T permutes the states
  std::vector<std::int64_t> image;
  for (std::int64_t x = 0; x < 500; ++x) image.push_back(r.apply(x));
  std::sort(image.begin(), image.end());
  for (std::int64_t x = 0; x < 500; ++x) CHECK(image[static_cast<std::size_t>(x)] == x);
  CHECK(random_system(500, 42).iterate(3, 1234) == r.iterate(3, 1234));
}

TEST_CASE("system grammar") {
  CHECK(parse_system("identity:4").iterate(2, 99) == 2);
  CHECK(parse_system("shift:97:5").apply(96) == 4);
  CHECK(parse_system("random:50:1").size() == 50);
  CHECK_THROWS_AS(parse_system("shift:97"), DomainError);
  CHECK_THROWS_AS(parse_system("rotate:3:1"), DomainError);
  CHECK_THROWS_AS(parse_system("identity:x"), DomainError);
}

TEST_CASE("averages of trivial inputs") {
  const auto g = make_growth(Variant::PurePower, 1.05, 1.0);
  const InverseFunction phi(g);
  const auto s = generate(g, 1 << 16);
  const auto id = identity_system(13);
  std::vector<double> f(13);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = 0.1 * static_cast<double>(i);
  CHECK(ergodic_average(id, s, f, 6, 1 << 16) == doctest::Approx(0.6).epsilon(1e-14));
  const std::vector<double> one(13, 1.0);
  CHECK(ergodic_average(shift_system(13, 4), s, one, 2, 5000) == doctest::Approx(1.0).epsilon(1e-14));
  // the phi'-weighted count of N_h cap [1, N] is about N
  const double w = weighted_average(id, s, phi, one, 0, 1 << 16);
  CHECK(std::abs(w - 1.0) < 0.01);
  CHECK_THROWS_AS(ergodic_average(id, s, one, 13, 100), DomainError);
  CHECK_THROWS_AS(ergodic_average(id, s, one, 0, (1 << 16) + 1), RangeError);
  CHECK_THROWS_AS(ergodic_average(id, s, std::vector<double>(5, 1.0), 0, 100), DomainError);
}

TEST_CASE("shift averages approach the space mean") {
  const auto g = make_growth(Variant::PurePower, 1.05, 1.0);
  const InverseFunction phi(g);
  const auto s = generate(g, 1 << 20);
  const auto sys = shift_system(97, 5);
  const auto f = indicator(97, 0);
  const double A = ergodic_average(sys, s, f, 0, 1 << 20);
  CHECK(std::abs(A - 1.0 / 97) < 0.002);
  const auto path = weighted_average_path(sys, s, phi, f, 0, {1 << 12, 1 << 16, 1 << 20});
  CHECK(path.size() == 3);
  CHECK(std::abs(path.back() - 1.0 / 97) < 0.002);
  CHECK(path[1] == weighted_average(sys, s, phi, f, 0, 1 << 16));
}

TEST_CASE("lacunary sets") {
  const auto z = lacunary_set(1.0, 100);
  CHECK(z == std::vector<std::int64_t>{1, 2, 4, 8, 16, 32, 64});
  const auto y = lacunary_set(0.1, 1000);
  CHECK(std::is_sorted(y.begin(), y.end()));
  CHECK(std::adjacent_find(y.begin(), y.end()) == y.end());
  CHECK(y.back() <= 1000);
  CHECK_THROWS_AS(lacunary_set(0.0, 10), DomainError);
}

TEST_CASE("oscillation") {
  const auto g = make_growth(Variant::PurePower, 1.05, 1.0);
  const InverseFunction phi(g);
  const auto s = generate(g, 1 << 16);
  const auto sys = shift_system(97, 5);
  const std::vector<std::int64_t> bp{1 << 10, 1 << 12, 1 << 14, 1 << 16};
  CHECK(oscillation_diagnostic(sys, s, phi, std::vector<double>(97, 0.0), 0, 0.1, bp) == 0.0);
  const double v = oscillation_diagnostic(sys, s, phi, indicator(97, 0), 0, 0.1, bp);
  CHECK(v > 0.0);
  CHECK(v < 1.0);
  CHECK_THROWS_AS(oscillation_diagnostic(sys, s, phi, indicator(97, 0), 0, 0.1, {1 << 10, 1 << 11}),
                  PreconditionError);
  CHECK_THROWS_AS(oscillation_diagnostic(sys, s, phi, indicator(97, 0), 0, 0.1, {1 << 10}), DomainError);
}
