#include "roughmax/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace roughmax {
namespace {

void check_state(const FiniteSystem& sys, const std::vector<double>& f, std::int64_t x) {
  if (static_cast<std::int64_t>(f.size()) != sys.size()) throw DomainError("ergodic: f size differs from the system");
  if (x < 0 || x >= sys.size()) throw DomainError("ergodic: state out of range");
}

void check_scale(const SequenceSet& s, std::int64_t N) {
  if (N < 1 || N > s.n_max()) throw RangeError("ergodic: N outside [1, n_max]");
  if (s.count(N) == 0) throw DomainError("ergodic: N_h cap [1, N] is empty");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw DomainError("parse_system: bad " + what + " '" + s + "'");
  return v;
}

}  // namespace

FiniteSystem::FiniteSystem(std::vector<std::int64_t> map, std::string tag) : map_(std::move(map)), tag_(std::move(tag)) {
  const auto m = map_.size();
  if (m == 0) throw DomainError("FiniteSystem: empty state space");
  std::vector<bool> hit(m, false);
  for (std::int64_t y : map_) {
    if (y < 0 || static_cast<std::size_t>(y) >= m || hit[static_cast<std::size_t>(y)]) {
      throw DomainError("FiniteSystem: map is not a bijection");
    }
    hit[static_cast<std::size_t>(y)] = true;
  }
  cycle_of_.assign(m, -1);
  position_.assign(m, 0);
  for (std::size_t start = 0; start < m; ++start) {
    if (cycle_of_[start] >= 0) continue;
    std::vector<std::int64_t> cycle;
    auto x = static_cast<std::int64_t>(start);
    do {
      cycle_of_[static_cast<std::size_t>(x)] = static_cast<std::int64_t>(cycles_.size());
      position_[static_cast<std::size_t>(x)] = static_cast<std::int64_t>(cycle.size());
      cycle.push_back(x);
      x = map_[static_cast<std::size_t>(x)];
    } while (x != static_cast<std::int64_t>(start));
    cycles_.push_back(std::move(cycle));
  }
}

std::int64_t FiniteSystem::iterate(std::int64_t x, std::int64_t n) const {
  if (x < 0 || x >= size()) throw DomainError("FiniteSystem: state out of range");
  const auto& cycle = cycles_[static_cast<std::size_t>(cycle_of_[static_cast<std::size_t>(x)])];
  const auto len = static_cast<std::int64_t>(cycle.size());
  std::int64_t p = (position_[static_cast<std::size_t>(x)] + n % len) % len;
  if (p < 0) p += len;
  return cycle[static_cast<std::size_t>(p)];
}

FiniteSystem identity_system(std::int64_t m) {
  if (m < 1) throw DomainError("identity_system: m must be positive");
  std::vector<std::int64_t> map(static_cast<std::size_t>(m));
  std::iota(map.begin(), map.end(), 0);
  return FiniteSystem(std::move(map), "identity:" + std::to_string(m));
}

FiniteSystem shift_system(std::int64_t m, std::int64_t step) {
  if (m < 1) throw DomainError("shift_system: m must be positive");
  std::vector<std::int64_t> map(static_cast<std::size_t>(m));
  const std::int64_t r = ((step % m) + m) % m;
  for (std::int64_t x = 0; x < m; ++x) map[static_cast<std::size_t>(x)] = (x + r) % m;
  return FiniteSystem(std::move(map), "shift:" + std::to_string(m) + ":" + std::to_string(step));
}

FiniteSystem random_system(std::int64_t m, std::uint64_t seed) {
  if (m < 1) throw DomainError("random_system: m must be positive");
  std::vector<std::int64_t> map(static_cast<std::size_t>(m));
  std::iota(map.begin(), map.end(), 0);
  // Fisher-Yates with raw generator output, so the permutation does not
  // depend on the standard library's distribution implementations.
  std::mt19937_64 gen(seed);
  for (std::int64_t i = m - 1; i > 0; --i) {
    const auto j = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(i + 1));
    std::swap(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]);
  }
  return FiniteSystem(std::move(map), "random:" + std::to_string(m) + ":" + std::to_string(seed));
}

FiniteSystem parse_system(const std::string& text) {
  const auto p = split(text, ':');
  if (p.size() == 2 && p[0] == "identity") return identity_system(parse_int(p[1], "size"));
  if (p.size() == 3 && p[0] == "shift") return shift_system(parse_int(p[1], "size"), parse_int(p[2], "step"));
  if (p.size() == 3 && p[0] == "random") {
    return random_system(parse_int(p[1], "size"), static_cast<std::uint64_t>(parse_int(p[2], "seed")));
  }
  throw DomainError("parse_system: expected identity:m, shift:m:step or random:m:seed, got '" + text + "'");
}

std::vector<double> indicator(std::int64_t m, std::int64_t k) {
  if (k < 0 || k >= m) throw DomainError("indicator: state out of range");
  std::vector<double> f(static_cast<std::size_t>(m), 0.0);
  f[static_cast<std::size_t>(k)] = 1.0;
  return f;
}

double ergodic_average(const FiniteSystem& sys, const SequenceSet& s, const std::vector<double>& f,
                       std::int64_t x, std::int64_t N) {
  check_state(sys, f, x);
  check_scale(s, N);
  CompensatedSum<double> acc;
  for (std::int64_t n : s.elements()) {
    if (n > N) break;
    acc.add(f[static_cast<std::size_t>(sys.iterate(x, n))]);
  }
  return acc.value() / static_cast<double>(s.count(N));
}

std::vector<double> weighted_average_path(const FiniteSystem& sys, const SequenceSet& s, const InverseFunction& phi,
                                          const std::vector<double>& f, std::int64_t x,
                                          const std::vector<std::int64_t>& Ns) {
  check_state(sys, f, x);
  if (!std::is_sorted(Ns.begin(), Ns.end())) throw DomainError("weighted_average_path: scales must increase");
  for (std::int64_t N : Ns) check_scale(s, N);
  std::vector<double> out;
  out.reserve(Ns.size());
  CompensatedSum<double> acc;
  const auto& el = s.elements();
  std::size_t i = 0;
  for (std::int64_t N : Ns) {
    for (; i < el.size() && el[i] <= N; ++i) {
      const double fx = f[static_cast<std::size_t>(sys.iterate(x, el[i]))];
      if (fx != 0.0) acc.add(phi.inverse_slope(static_cast<double>(el[i])) * fx);
    }
    out.push_back(acc.value() / static_cast<double>(N));
  }
  return out;
}

double weighted_average(const FiniteSystem& sys, const SequenceSet& s, const InverseFunction& phi,
                        const std::vector<double>& f, std::int64_t x, std::int64_t N) {
  return weighted_average_path(sys, s, phi, f, x, {N}).front();
}

std::vector<std::int64_t> lacunary_set(double eps, std::int64_t limit) {
  if (!(eps > 0.0)) throw DomainError("lacunary_set: eps must be positive");
  std::vector<std::int64_t> z;
  for (int k = 0;; ++k) {
    const double v = std::floor(std::pow(1.0 + eps, k));
    if (v > static_cast<double>(limit)) break;
    const auto n = static_cast<std::int64_t>(v);
    if (z.empty() || z.back() != n) z.push_back(n);
  }
  return z;
}

double oscillation_diagnostic(const FiniteSystem& sys, const SequenceSet& s, const InverseFunction& phi,
                              const std::vector<double>& f, std::int64_t x, double eps,
                              const std::vector<std::int64_t>& breakpoints) {
  if (breakpoints.size() < 2) throw DomainError("oscillation_diagnostic: need at least two breakpoints");
  for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j) {
    if (!(2 * breakpoints[j] < breakpoints[j + 1])) {
      throw PreconditionError("oscillation_diagnostic: breakpoints need 2 N_j < N_{j+1}");
    }
  }
  const std::vector<std::int64_t> z = lacunary_set(eps, breakpoints.back());
  std::vector<std::int64_t> Ns = breakpoints;
  for (std::int64_t n : z) {
    if (n > breakpoints.front()) Ns.push_back(n);
  }
  std::sort(Ns.begin(), Ns.end());
  Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
  const std::vector<double> a = weighted_average_path(sys, s, phi, f, x, Ns);
  const auto value_at = [&](std::int64_t N) {
    return a[static_cast<std::size_t>(std::lower_bound(Ns.begin(), Ns.end(), N) - Ns.begin())];
  };
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j) {
    const double base = value_at(breakpoints[j]);
    double worst = 0.0;
    for (auto it = std::upper_bound(z.begin(), z.end(), breakpoints[j]);
         it != z.end() && *it <= breakpoints[j + 1]; ++it) {
      worst = std::max(worst, std::abs(value_at(*it) - base));
    }
    total += worst;
  }
  return total;
}

}  // namespace roughmax
