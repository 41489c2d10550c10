#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "roughmax/seqset.hpp"
#include "roughmax/stats.hpp"

using namespace roughmax;

TEST_CASE("x^{3/2} up to 11") {
  const auto g = make_growth(Variant::PurePower, 1.5, 1.0);
  const auto s = generate(g, 11);
  CHECK(s.elements() == std::vector<std::int64_t>{1, 2, 5, 8, 11});
  CHECK(s.count(11) == 5);
  CHECK(s.contains(8));
  CHECK_FALSE(s.contains(9));
  CHECK_THROWS_AS(s.count(12), RangeError);
}

TEST_CASE("identity enumerates every integer") {
  const auto s = generate(identity_growth(), 10);
  CHECK(s.size() == 10);
  CHECK(s.count(10) == 10);
  const InverseFunction phi(identity_growth());
  for (std::int64_t p = 20; p < 200; ++p) CHECK(contains_via_inverse_escalating(phi, p));
}

TEST_CASE("membership through the inverse") {
  const InverseFunction phi(make_growth(Variant::PurePower, 1.5, 1.0));
  CHECK(contains_via_inverse(phi, 5));
  CHECK_FALSE(contains_via_inverse(phi, 6));
  // phi(64) = 16 exactly: the plain test refuses, the escalating one decides
  CHECK_THROWS_AS(contains_via_inverse(phi, 63), AmbiguityError);
  CHECK(contains_via_inverse_escalating(phi, 63) == false);
  CHECK(contains_via_inverse_escalating(phi, 64) == true);
}

TEST_CASE("floor at exact integers") {
  const auto g = make_growth(Variant::PurePower, 1.5, 1.0);
  for (std::int64_t j = 1; j < 2000; ++j) CHECK(floor_h(g, j * j) == j * j * j);
}

TEST_CASE("enumeration against brute force") {
  const auto g = make_growth(Variant::PurePower, 1.02, 1.0);
  const std::int64_t n_max = 1000000;
  const auto s = generate(g, n_max);
  // independent enumeration in long double
  std::vector<std::int64_t> ref;
  for (std::int64_t m = 1;; ++m) {
    const auto v = static_cast<std::int64_t>(std::floor(std::pow(static_cast<long double>(m), 1.02L)));
    if (v > n_max) break;
    if (ref.empty() || ref.back() != v) ref.push_back(v);
  }
  CHECK(s.elements() == ref);
  const InverseFunction phi(g);
  CHECK(std::abs(static_cast<double>(s.size()) / phi(1e6) - 1.0) < 0.01);
}

TEST_CASE("counting invariants") {
  const auto g = make_growth(Variant::PurePower, 1.05, 1.0);
  const InverseFunction phi(g);
  const std::int64_t n_max = std::int64_t{1} << 20;
  const auto s = generate(g, n_max);
  CHECK(std::abs(static_cast<double>(s.count(n_max)) / phi(static_cast<double>(n_max)) - 1.0) < 0.02);
  CHECK(s.count(n_max) == static_cast<std::int64_t>(s.size()));
  std::int64_t prev = 0;
  for (std::int64_t N = 1; N <= n_max; N += 997) {
    CHECK(s.count(N) >= prev);
    prev = s.count(N);
  }
  const double target = std::pow(2.0, phi.gamma());
  for (int k = 17; k <= 19; ++k) {
    const double q = static_cast<double>(s.count(std::int64_t{2} << k)) / static_cast<double>(s.count(std::int64_t{1} << k));
    CHECK(std::abs(q / target - 1.0) < 0.1);
  }
  for (std::int64_t N = n_max / 16; N <= n_max; N += n_max / 64) {
    const double r = static_cast<double>(s.count(N)) / phi(static_cast<double>(N));
    CHECK(r >= 0.9);
    CHECK(r <= 1.1);
  }
}

TEST_CASE("generate preconditions") {
  const auto g = make_growth(Variant::PurePower, 1.5, 1.0);
  CHECK_THROWS_AS(generate(g, kMaxSequenceBound + 1), RangeError);
  const auto pl = make_growth(Variant::PowerLog, 1.05, 1.0, {1.0, 0.5, 1}, 10.0);
  CHECK_THROWS_AS(generate(pl, 5), DomainError);
}

TEST_CASE("membership equivalence on x^{1.05}") {
  const auto g = make_growth(Variant::PurePower, 1.05, 1.0);
  const InverseFunction phi(g);
  const auto s = generate(g, 200000);
  for (std::int64_t p = s.p_min(); p < s.n_max(); ++p) {
    REQUIRE(contains_via_inverse_escalating(phi, p) == s.contains(p));
  }
}

TEST_CASE("weighted exponential sum") {
  const auto id = generate(identity_growth(), 1000);
  const InverseFunction phid(identity_growth());
  const auto r0 = weighted_exp_sum(id, phid, 0.0, 100);
  CHECK(r0.sum.real() == doctest::Approx(100.0));
  CHECK(r0.residual == doctest::Approx(0.0).epsilon(1e-12));

  const auto g = make_growth(Variant::PurePower, 1.05, 1.0);
  const InverseFunction phi(g);
  const auto s = generate(g, std::int64_t{1} << 20);
  std::vector<double> ks, logs;
  for (int k = 10; k <= 20; ++k) {
    const auto r = weighted_exp_sum(s, phi, 0.0, std::int64_t{1} << k);
    ks.push_back(k);
    logs.push_back(std::log2(r.residual));
  }
  CHECK(ls_slope(ks, logs) < 1.0);

  const auto half = weighted_exp_sum(s, phi, 0.5, std::int64_t{1} << 16);
  CHECK(std::abs(half.sum) <= half.residual + 1.0 + 1e-9);

  const auto a = weighted_exp_sum(s, phi, 0.3, std::int64_t{1} << 20, {1});
  const auto b = weighted_exp_sum(s, phi, 0.3, std::int64_t{1} << 20, {3});
  CHECK(a.sum == b.sum);
}
