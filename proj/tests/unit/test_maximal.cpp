#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "roughmax/maximal.hpp"

using namespace roughmax;
using Rational = boost::multiprecision::cpp_rational;

namespace {

struct Fixture {
  GrowthFunction g = make_growth(Variant::PurePower, 1.05, 1.0);
  InverseFunction phi{g};
  SequenceSet s = generate(g, std::int64_t{1} << 15);
  ScaleFamily family = build_family(s, phi, 6, 12);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

}  // namespace

TEST_CASE("family parameters") {
  const auto& F = fixture();
  CHECK(F.family.scales.size() == 7);
  CHECK(F.family.scales.front() == 64);
  CHECK(F.family.D.back() == 4 << 12);
  for (std::size_t i = 0; i < F.family.scales.size(); ++i) {
    const std::int64_t N = F.family.scales[i];
    CHECK(F.family.d[i] == F.s.count(4 * N) - F.s.count(N / 2));
  }
  CHECK(fitted_eps0(F.family) < 1.0);
  CHECK(fitted_growth_ratio(F.family) > 1.0);
  CHECK_THROWS_AS(build_family(F.s, F.phi, 6, 14), RangeError);
}

TEST_CASE("maximal function of a point mass") {
  const auto& F = fixture();
  const Signal m = maximal_function(F.family, delta<double>(0));
  for (std::int64_t x = -10; x < (4 << 12) + 10; ++x) {
    double ref = 0;
    for (const auto& k : F.family.kernels) ref = std::max(ref, k.signal.at(x));
    REQUIRE(m.at(x) == ref);
  }
}

TEST_CASE("zero input and scaling") {
  const auto& F = fixture();
  const Signal zero{0, std::vector<double>(10, 0.0)};
  CHECK(sup_norm(maximal_function(F.family, zero)) == 0.0);
  const Signal f = random_sparse(12, 3, -500, 500);
  Signal f3 = f;
  for (double& v : f3.values) v *= 3.0;
  const Signal a = maximal_function(F.family, f), b = maximal_function(F.family, f3);
  REQUIRE(a.offset == b.offset);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b.values[i] == doctest::Approx(3 * a.values[i]).epsilon(1e-12));
  CHECK_THROWS_AS(maximal_function(F.family, delta<double>(0, -1.0)), DomainError);
}

TEST_CASE("sublinearity and the sup bound") {
  const auto& F = fixture();
  const Signal f = random_sparse(10, 5, -300, 300), g = random_sparse(10, 6, -300, 300);
  const Signal mf = maximal_function(F.family, f), mg = maximal_function(F.family, g);
  const Signal mfg = maximal_function(F.family, add(f, g));
  double mass = 0;
  for (const auto& k : F.family.kernels) mass = std::max(mass, l1_norm(k.signal));
  for (std::int64_t x = mfg.begin(); x < mfg.end(); ++x) {
    CHECK(mfg.at(x) <= mf.at(x) + mg.at(x) + 1e-12);
    CHECK(mf.at(x) <= mass * sup_norm(f) + 1e-12);
  }
}

TEST_CASE("parallel maximal function equals the serial one") {
  const auto& F = fixture();
  const Signal f = random_sparse(16, 9, -1000, 1000);
  const Signal ref = serial::maximal_function(F.family, f);
  CHECK(maximal_function(F.family, f, {1}) == ref);
  CHECK(maximal_function(F.family, f, {3}) == ref);
}

TEST_CASE("weak-type profile") {
  const auto& F = fixture();
  const Signal f = random_sparse(8, 2, -200, 200);
  const Signal mf = maximal_function(F.family, f);
  const auto lambdas = default_lambdas(F.family, f, 16);
  CHECK(lambdas.size() == 16);
  const auto prof = weak_type_profile(F.family, f, lambdas);
  const double l1 = l1_norm(f);
  for (const auto& p : prof) {
    std::int64_t count = 0;
    for (double v : mf.values) count += v > p.lambda;
    CHECK(p.superlevel_count == count);
    CHECK(p.ratio == doctest::Approx(p.lambda * static_cast<double>(count) / l1));
    CHECK(p.ratio <= weak_type_sup(mf, l1) + 1e-12);
  }
  // sup over lambda, brute force just below each value of mf
  double brute = 0;
  for (double v : mf.values) {
    if (v <= 0) continue;
    std::int64_t count = 0;
    for (double u : mf.values) count += u >= v;
    brute = std::max(brute, v * static_cast<double>(count) / l1);
  }
  CHECK(weak_type_sup(mf, l1) == doctest::Approx(brute));
}

TEST_CASE("random sparse signals") {
  const Signal a = random_sparse(20, 4, -50, 50), b = random_sparse(20, 4, -50, 50);
  CHECK(a == b);
  int sites = 0;
  for (double v : a.values) {
    if (v != 0) {
      ++sites;
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
    }
  }
  CHECK(sites == 20);
  CHECK(a.begin() >= -50);
  CHECK(a.end() <= 50);
  CHECK_THROWS(random_sparse(200, 1, 0, 100));
}

TEST_CASE("CZ: constant on [0, 16) at height 2") {
  const BasicSignal<Rational> f{0, std::vector<Rational>(16, Rational(1))};
  const auto cz = cz_decompose(f, Rational(2));
  CHECK(cz.atoms.empty());
  CHECK(cz.good == f);
  CHECK(check_cz(f, cz).all());
}

TEST_CASE("CZ: point mass 8 at height 1") {
  const BasicSignal<Rational> f = delta<Rational>(0, Rational(8));
  const auto cz = cz_decompose(f, Rational(1));
  REQUIRE(cz.atoms.size() == 1);
  CHECK(cz.atoms[0].cube == Cube{2, 0});
  CHECK(total(cz.good) == 0);
  CHECK(check_cz(f, cz).all());
  CHECK_THROWS_AS(cz_decompose(f, Rational(0)), DomainError);
  CHECK_THROWS_AS(cz_decompose(delta<Rational>(3, Rational(-1)), Rational(1)), DomainError);
}

TEST_CASE("CZ on a random rational corpus") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t span = 8 + static_cast<std::int64_t>(gen() % 200);
    BasicSignal<Rational> f{-static_cast<std::int64_t>(gen() % 100), std::vector<Rational>(static_cast<std::size_t>(span))};
    for (auto& v : f.values) {
      if (gen() % 3 == 0) v = Rational(static_cast<long long>(gen() % 50), 1 + static_cast<long long>(gen() % 7));
    }
    if (total(f) == 0) f.values[0] = 1;
    const Rational lambda(1 + static_cast<long long>(gen() % 9), 1 + static_cast<long long>(gen() % 4));
    const auto cz = cz_decompose(f, lambda);
    const auto c = check_cz(f, cz);
    REQUIRE(c.reconstruction);
    REQUIRE(c.disjoint);
    REQUIRE(c.good_bound);
    REQUIRE(c.atom_bound);
    REQUIRE(c.measure_bound);
    for (const auto& a : cz.atoms) {
      REQUIRE(total(a.atom) > lambda * a.cube.size());
    }
  }
}

TEST_CASE("refined bad parts") {
  BasicSignal<Rational> f{0, std::vector<Rational>(64, Rational(0))};
  f.values[3] = 40;
  f.values[5] = 2;
  f.values[20] = 9;
  f.values[21] = 1;
  const Rational lambda(1);
  const auto cz = cz_decompose(f, lambda);
  REQUIRE(check_cz(f, cz).all());
  for (const auto& a : cz.atoms) {
    const auto r = refine_bad_part(cz, a.cube.s, 8, 4, 32);
    CHECK(r.s_of_n == 5);
    CHECK(r.threshold == 4);
    const auto c = check_refinement(r, lambda);
    CHECK(c.telescoping);
    CHECK(c.cut_exact);
    CHECK(c.mean_zero);
    CHECK(c.mean_bound);
  }
  CHECK_THROWS_AS(refine_bad_part(cz, 0, 8, 4, 32), PreconditionError);
  CHECK(scale_of(1) == 0);
  CHECK(scale_of(33) == 6);
}

TEST_CASE("family hypotheses on a small family") {
  const auto& F = fixture();
  const auto rep = verify_family_hypotheses(F.family, F.phi);
  CHECK(rep.rows.size() == 7);
  CHECK(rep.eps0_ok);
  CHECK(rep.growth_ok);
  CHECK(rep.center_bounded);
  CHECK(rep.eps2 == 1.0);
  const auto again = verify_family_hypotheses(F.family, F.phi, {3});
  CHECK(again.eps1 == rep.eps1);
}

TEST_CASE("energy diagnostic runs on a CZ decomposition") {
  const auto& F = fixture();
  Signal f = random_sparse(30, 8, -2000, 2000);
  for (double& v : f.values) v *= 50;
  const auto cz = cz_decompose(f, 0.5);
  const auto e = energy_diagnostic(F.family, F.family.scales.size() - 1, cz);
  CHECK(e.s.size() == e.r.size());
}
