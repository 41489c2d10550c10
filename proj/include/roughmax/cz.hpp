#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "roughmax/error.hpp"
#include "roughmax/signal.hpp"

namespace roughmax {

// Dyadic cube Q_{s,j} = [j 2^s, (j+1) 2^s).
struct Cube {
  int s = 0;
  std::int64_t j = 0;

  std::int64_t begin() const { return j * (std::int64_t{1} << s); }
  std::int64_t end() const { return (j + 1) * (std::int64_t{1} << s); }
  std::int64_t size() const { return std::int64_t{1} << s; }
  bool operator==(const Cube&) const = default;
};

template <class T>
struct CubeAtom {
  Cube cube;
  BasicSignal<T> atom;  // f restricted to the cube
};

template <class T>
struct CZDecomposition {
  T lambda;
  BasicSignal<T> good;
  std::vector<CubeAtom<T>> atoms;  // ordered by position
};

namespace detail {

template <class T>
T abs_value(const T& v) {
  return v < T(0) ? T(-v) : v;
}

template <class T>
T cube_sum(const BasicSignal<T>& f, std::int64_t a, std::int64_t b) {
  T acc(0);
  for (std::int64_t x = std::max(a, f.begin()); x < std::min(b, f.end()); ++x) {
    acc += f.values[static_cast<std::size_t>(x - f.offset)];
  }
  return acc;
}

// Bisects a cube whose average is at most lambda; children with average
// above lambda are selected, the rest are bisected further.
template <class T>
void stopping_time(const BasicSignal<T>& f, const T& lambda, Cube q, std::vector<Cube>& out) {
  if (q.s == 0) return;
  for (std::int64_t child : {2 * q.j, 2 * q.j + 1}) {
    const Cube c{q.s - 1, child};
    const T mass = cube_sum(f, c.begin(), c.end());
    if (mass == T(0)) continue;
    if (mass > lambda * T(c.size())) {
      out.push_back(c);
    } else {
      stopping_time(f, lambda, c, out);
    }
  }
}

}  // namespace detail

// Calderon-Zygmund decomposition of a nonnegative f at height lambda.
// Atoms carry f itself on the selected cubes (no mean subtracted) and the
// good part is f off those cubes. Selected averages lie in (lambda, 2 lambda].
template <class T>
CZDecomposition<T> cz_decompose(const BasicSignal<T>& f_in, const T& lambda) {
  if (!(lambda > T(0))) throw DomainError("cz_decompose: lambda must be positive");
  for (const T& v : f_in.values) {
    if (v < T(0)) throw DomainError("cz_decompose: f must be nonnegative");
  }
  const BasicSignal<T> f = trimmed(f_in);
  if (f.empty()) throw DomainError("cz_decompose: ||f||_1 = 0");
  const T mass = total(f);
  int S = 0;
  while (lambda * T(std::int64_t{1} << S) < mass) {
    if (++S > 61) throw RangeError("cz_decompose: root scale exceeds 2^61");
  }
  std::vector<Cube> selected;
  const std::int64_t j_lo = f.begin() >> S;  // floor division
  const std::int64_t j_hi = (f.end() - 1) >> S;
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    const Cube root{S, j};
    if (detail::cube_sum(f, root.begin(), root.end()) == T(0)) continue;
    detail::stopping_time(f, lambda, root, selected);
  }
  CZDecomposition<T> cz{lambda, f, {}};
  for (const Cube& q : selected) {
    CubeAtom<T> a{q, {q.begin(), std::vector<T>(static_cast<std::size_t>(q.size()), T(0))}};
    for (std::int64_t x = std::max(q.begin(), f.begin()); x < std::min(q.end(), f.end()); ++x) {
      a.atom.values[static_cast<std::size_t>(x - q.begin())] = f.values[static_cast<std::size_t>(x - f.offset)];
      cz.good.values[static_cast<std::size_t>(x - f.offset)] = T(0);
    }
    cz.atoms.push_back(std::move(a));
  }
  return cz;
}

struct CZCheck {
  bool reconstruction = false;  // good + sum of atoms == f
  bool disjoint = false;
  bool good_bound = false;      // ||g||_inf <= 2 lambda
  bool atom_bound = false;      // ||b_{s,j}||_1 <= 2 lambda 2^s
  bool measure_bound = false;   // sum |Q| <= 4 ||f||_1 / lambda
  bool all() const { return reconstruction && disjoint && good_bound && atom_bound && measure_bound; }
};

// rel_tol = 0 demands exact inequalities (rational inputs).
template <class T>
CZCheck check_cz(const BasicSignal<T>& f, const CZDecomposition<T>& cz, double rel_tol = 0.0) {
  const T slack = T(1) + T(rel_tol);
  const T two_lambda = T(2) * cz.lambda * slack;
  CZCheck c;
  BasicSignal<T> sum = cz.good;
  for (const auto& a : cz.atoms) sum = add(sum, a.atom);
  c.reconstruction = trimmed(sum) == trimmed(f);
  c.disjoint = true;
  for (std::size_t i = 1; i < cz.atoms.size(); ++i) {
    if (cz.atoms[i - 1].cube.end() > cz.atoms[i].cube.begin()) c.disjoint = false;
  }
  c.good_bound = sup_norm(cz.good) <= two_lambda;
  c.atom_bound = true;
  T measure(0);
  for (const auto& a : cz.atoms) {
    if (l1_norm(a.atom) > two_lambda * T(a.cube.size())) c.atom_bound = false;
    measure += T(a.cube.size());
  }
  c.measure_bound = measure * cz.lambda <= T(4) * l1_norm(f) * slack;
  return c;
}

// s(n) = min{s : 2^s >= D_n}
inline int scale_of(std::int64_t D) {
  int s = 0;
  while ((std::int64_t{1} << s) < D) ++s;
  return s;
}

template <class T>
struct RefinedBadPart {
  int n = 0;
  int s = 0;
  T threshold;  // lambda d_n
  int s_of_n = 0;
  std::vector<Cube> cubes;  // selected cubes at scale s
  BasicSignal<T> b_s;
  BasicSignal<T> b_cut;   // b_s where |b_s| > lambda d_n
  BasicSignal<T> B_part;  // h - cube means of h, h = b_s - b_cut
  BasicSignal<T> g_part;  // cube means of h
};

// Splits b_s = sum_j b_{s,j} into b_cut + B_part + g_part at threshold
// lambda d_n. All four signals share the span of the scale-s cubes.
template <class T>
RefinedBadPart<T> refine_bad_part(const CZDecomposition<T>& cz, int s, int n, std::int64_t d_n, std::int64_t D_n) {
  RefinedBadPart<T> r;
  r.n = n;
  r.s = s;
  r.threshold = cz.lambda * T(d_n);
  r.s_of_n = scale_of(D_n);
  for (const auto& a : cz.atoms) {
    if (a.cube.s == s) r.cubes.push_back(a.cube);
  }
  if (r.cubes.empty()) throw PreconditionError("refine_bad_part: no atom at the requested scale");
  const std::int64_t lo = r.cubes.front().begin(), hi = r.cubes.back().end();
  const auto span = static_cast<std::size_t>(hi - lo);
  r.b_s = {lo, std::vector<T>(span, T(0))};
  for (const auto& a : cz.atoms) {
    if (a.cube.s != s) continue;
    for (std::size_t i = 0; i < a.atom.size(); ++i) {
      r.b_s.values[static_cast<std::size_t>(a.atom.offset - lo) + i] += a.atom.values[i];
    }
  }
  r.b_cut = r.b_s;
  BasicSignal<T> h = r.b_s;
  for (std::size_t i = 0; i < span; ++i) {
    if (detail::abs_value<T>(r.b_s.values[i]) > r.threshold) {
      h.values[i] = T(0);
    } else {
      r.b_cut.values[i] = T(0);
    }
  }
  r.g_part = {lo, std::vector<T>(span, T(0))};
  r.B_part = h;
  for (const Cube& q : r.cubes) {
    const T mean = detail::cube_sum(h, q.begin(), q.end()) / T(q.size());
    for (std::int64_t x = q.begin(); x < q.end(); ++x) {
      const auto i = static_cast<std::size_t>(x - lo);
      r.g_part.values[i] = mean;
      r.B_part.values[i] = h.values[i] - mean;
    }
  }
  return r;
}

struct RefinementCheck {
  bool telescoping = false;  // b_cut + B_part + g_part == b_s
  bool cut_exact = false;    // b_cut = b_s [|b_s| > lambda d_n]
  bool mean_zero = false;    // B_part sums to 0 on every cube
  bool mean_bound = false;   // |cube mean of h| <= 2 lambda
  bool all() const { return telescoping && cut_exact && mean_zero && mean_bound; }
};

template <class T>
RefinementCheck check_refinement(const RefinedBadPart<T>& r, const T& lambda, double abs_tol = 0.0) {
  RefinementCheck c{true, true, true, true};
  const T tol = T(abs_tol);
  for (std::size_t i = 0; i < r.b_s.size(); ++i) {
    const T sum = r.b_cut.values[i] + r.B_part.values[i] + r.g_part.values[i];
    if (detail::abs_value<T>(sum - r.b_s.values[i]) > tol) c.telescoping = false;
    const bool over = detail::abs_value<T>(r.b_s.values[i]) > r.threshold;
    if (r.b_cut.values[i] != (over ? r.b_s.values[i] : T(0))) c.cut_exact = false;
  }
  for (const Cube& q : r.cubes) {
    const T b_sum = detail::cube_sum(r.B_part, q.begin(), q.end());
    if (detail::abs_value<T>(b_sum) > tol * T(q.size())) c.mean_zero = false;
    if (detail::abs_value<T>(r.g_part.at(q.begin())) > T(2) * lambda + tol) c.mean_bound = false;
  }
  return c;
}

}  // namespace roughmax
