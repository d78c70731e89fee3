#ifndef MLAB_MONODROMY_HPP
#define MLAB_MONODROMY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlab/filtration.hpp"

namespace mlab {

namespace detail {

inline Subspace restrict_step(const Filtration& f, int w, const Subspace& u) { return intersect(f.at(w), u); }

/// Weight range where gr^M gr^W can be nonzero, padded so that every r is covered.
inline std::pair<int, int> weight_span(const Filtration& a, const Filtration& b) {
  int lo = std::min(a.min_weight(), b.min_weight());
  int hi = std::max(a.max_weight(), b.max_weight());
  return {lo, hi};
}

}  // namespace detail

namespace detail {

/// Checks the relative monodromy axioms on the subspace u for every operator
/// in the (positive) span of ops. Axiom (i) is linear, so it is checked per
/// operator; axiom (ii) is delegated to iso(src, dst, r), which must decide
/// whether the r-th power is an isomorphism between the two graded pieces.
/// Returns an empty string on success, otherwise the failing clause.
template <class Iso>
std::string check_rmf_axioms(const Subspace& u, const Filtration& w, const std::vector<Mat>& ops, const Filtration& m, Iso&& iso) {
  const std::size_t dim = w.ambient();
  if (m.ambient() != dim || u.ambient() != dim) throw DimensionMismatch("rmf axioms: ambient dimensions");
  for (const auto& n : ops) {
    if (n.rows() != dim || n.cols() != dim) throw DimensionMismatch("rmf axioms: operator shape");
    for (const auto& v : u.basis())
      if (!u.contains(n * v)) throw PreconditionViolated("operator does not keep the subspace");
  }
  if (u.is_zero()) return {};
  const bool whole = u.is_full();
  std::map<int, Subspace> mcache, wcache;
  auto step = [&](std::map<int, Subspace>& cache, const Filtration& f, int k) -> const Subspace& {
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, whole ? f.at(k) : intersect(f.at(k), u)).first;
    return it->second;
  };
  auto mk = [&](int k) -> const Subspace& { return step(mcache, m, k); };
  auto wk = [&](int k) -> const Subspace& { return step(wcache, w, k); };
  auto [lo, hi] = weight_span(w, m);
  // axiom (i): N M_k ⊆ M_{k-2}; between jumps M_k is constant and M_{k-2} grows
  for (int k : m.jumps()) {
    const Subspace& target = mk(k - 2);
    for (const auto& n : ops)
      for (const auto& v : mk(k).basis())
        if (!target.contains(n * v)) return "axiom (i) fails at M-weight " + std::to_string(k);
  }
  // axiom (ii): N^r : gr^M_{a+r} gr^W_a -> gr^M_{a-r} gr^W_a iso
  const int span = hi - lo + 2;
  for (int a : w.jumps()) {
    const Subspace& wa = wk(a);
    const Subspace& wa1 = wk(a - 1);
    if (wa.dim() == wa1.dim()) continue;
    std::map<int, Subquotient> pieces;
    auto piece = [&](int k) -> const Subquotient& {
      auto it = pieces.find(k);
      if (it != pieces.end()) return it->second;
      Subspace num = intersect(mk(k), wa);
      Subspace den = sum(intersect(mk(k - 1), wa), intersect(mk(k), wa1));
      return pieces.emplace(k, Subquotient(num, den)).first->second;
    };
    for (int r = 0; r <= span; ++r) {
      const Subquotient& src = piece(a + r);
      const Subquotient& dst = piece(a - r);
      if (src.dim() != dst.dim() || (src.dim() > 0 && !iso(src, dst, r)))
        return "axiom (ii) fails on gr^W_" + std::to_string(a) + " for r = " + std::to_string(r);
    }
  }
  return {};
}

}  // namespace detail

/// Axioms of the relative monodromy filtration, checked on the subspace u
/// (all filtrations are intersected with u, and n must keep u).
inline bool verify_rmf_within(const Subspace& u, const Filtration& w, const Mat& n, const Filtration& m) {
  if (w.ambient() != n.rows() || m.ambient() != n.rows()) throw DimensionMismatch("verify_rmf shapes");
  std::vector<Mat> powers{Mat::identity(n.rows())};
  auto iso = [&](const Subquotient& src, const Subquotient& dst, int r) {
    while (powers.size() <= static_cast<std::size_t>(r)) powers.push_back(powers.back() * n);
    return inverse(induced_map(powers[static_cast<std::size_t>(r)], src, dst)).has_value();
  };
  return detail::check_rmf_axioms(u, w, {n}, m, iso).empty();
}

inline bool verify_rmf(const Filtration& w, const Mat& n, const Filtration& m) {
  return verify_rmf_within(Subspace::full(n.rows()), w, n, m);
}

/// M_{c+k} = Σ_{i-j=k} ker N^{i+1} ∩ im N^j, verified before return.
inline Filtration centered_weight_filtration(const Mat& n, int center) {
  if (!n.square()) throw DimensionMismatch("centered filtration of non-square matrix");
  const std::size_t dim = n.rows();
  if (!is_nilpotent(n)) throw NotNilpotent("centered weight filtration needs a nilpotent operator");
  if (dim == 0) return Filtration(0);
  // img[i] = im N^i, ker[i] = ker N^{i+1}, for i below the nilpotency index
  std::vector<Subspace> ker, img;
  Mat p = Mat::identity(dim);
  while (!p.is_zero()) {
    img.push_back(image(p));
    p = p * n;
    ker.push_back(kernel(p));
  }
  const int d = static_cast<int>(img.size()) - 1;
  std::map<int, Subspace> steps;
  for (int k = -d; k <= d; ++k) {
    Subspace s(dim);
    for (int j = 0; j <= d; ++j) {
      int i = k + j;
      if (i < 0 || i > d) continue;
      s = sum(s, intersect(ker[static_cast<std::size_t>(i)], img[static_cast<std::size_t>(j)]));
    }
    steps.emplace(center + k, s);
  }
  Filtration m(dim, steps);
  if (!verify_rmf(Filtration::pure(dim, center), n, m)) throw InternalInconsistency("centered weight filtration failed verification");
  return m;
}

/// Relative monodromy filtration of n with respect to w, or nullopt when it
/// does not exist. Built by peeling off the top weight of w and solving for
/// lifts of the top graded piece, then verified.
inline std::optional<Filtration> rmf(const Filtration& w, const Mat& n) {
  if (!n.square() || n.rows() != w.ambient()) throw DimensionMismatch("rmf shapes");
  if (!is_nilpotent(n)) throw PreconditionViolated("rmf needs a nilpotent operator");
  if (!preserves(n, w)) throw PreconditionViolated("operator does not preserve W");
  const std::size_t dim = n.rows();
  if (dim == 0) return Filtration(0);
  auto js = w.jumps();
  if (js.size() == 1) return centered_weight_filtration(n, js[0]);

  const int a = js.back();
  const Subspace u = w.at(a - 1);
  const std::size_t du = u.dim();

  // recursion on U = W_{a-1}, carried out in U's echelon coordinates
  Subquotient usq = Subquotient::of(u);
  Mat nu = induced_map(n, usq);
  auto mu = rmf(induce(w, usq), nu);
  if (!mu) return std::nullopt;
  std::map<int, Subspace> mprime;  // M' in ambient coordinates
  for (const auto& [k, s] : mu->steps()) mprime.emplace(k, usq.lift_subspace(s));
  auto mprime_at = [&](int k) {
    auto it = mprime.upper_bound(k);
    if (it == mprime.begin()) return Subspace(dim);
    return std::prev(it)->second;
  };

  // top graded piece V/U is pure of weight a
  Subquotient q(Subspace::full(dim), u);
  Mat nq = induced_map(n, q);
  Filtration mq = centered_weight_filtration(nq, a);

  // basis of a complement C adapted to a splitting of M''
  std::vector<Vec> cbasis;
  std::vector<int> cweight;
  {
    std::vector<Vec> acc;
    for (const auto& [k, s] : mq.steps()) {
      std::size_t have = Subspace(q.dim(), acc).dim();
      for (const auto& v : s.basis()) {
        acc.push_back(v);
        std::size_t now = Subspace(q.dim(), acc).dim();
        if (now > have) {
          have = now;
          cbasis.push_back(q.lift(v));
          cweight.push_back(k);
        } else {
          acc.pop_back();
        }
      }
    }
  }
  const std::size_t nc = cbasis.size();

  // express N c = Σ β_d d + u' with d in C and u' in U
  std::vector<Vec> cols = cbasis;
  cols.insert(cols.end(), u.basis().begin(), u.basis().end());
  Mat decomp = Mat::from_columns(dim, cols);

  // unknowns: x[c][i] with u(c) = Σ_i x[c][i] u_i
  const std::size_t nunk = nc * du;
  std::vector<Vec> rows;
  Vec rhs;
  for (std::size_t c = 0; c < nc; ++c) {
    auto sol = solve(decomp, n * cbasis[c]);
    if (!sol) throw InternalInconsistency("complement does not span V/U");
    Vec uprime(dim);
    for (std::size_t i = 0; i < du; ++i) uprime = uprime + (*sol)[nc + i] * u.basis()[i];
    Mat ann = annihilator(mprime_at(cweight[c] - 2));
    for (std::size_t r = 0; r < ann.rows(); ++r) {
      Vec row(nunk);
      Vec arow = ann.row(r);
      auto pair = [&](const Vec& v) {
        Scalar s;
        for (std::size_t t = 0; t < dim; ++t)
          if (!arow[t].is_zero() && !v[t].is_zero()) s += arow[t] * v[t];
        return s;
      };
      // ann · (N u(c) - Σ β_d u(d)) = - ann · u'
      for (std::size_t i = 0; i < du; ++i) {
        Scalar nu_i = pair(n * u.basis()[i]);
        Scalar ui = pair(u.basis()[i]);
        row[c * du + i] += nu_i;
        for (std::size_t d = 0; d < nc; ++d) {
          const Scalar& beta = (*sol)[d];
          if (beta.is_zero()) continue;
          row[d * du + i] -= beta * ui;
        }
      }
      rows.push_back(std::move(row));
      rhs.push_back(-pair(uprime));
    }
  }
  Vec x(nunk);
  if (!rows.empty()) {
    auto sol = solve(Mat::from_rows(nunk, rows), rhs);
    if (!sol) return std::nullopt;
    x = *sol;
  }

  std::map<int, Subspace> steps;
  std::vector<int> weights;
  for (const auto& kv : mprime) weights.push_back(kv.first);
  weights.insert(weights.end(), cweight.begin(), cweight.end());
  for (int k : weights) {
    std::vector<Vec> g = mprime_at(k).basis();
    for (std::size_t c = 0; c < nc; ++c) {
      if (cweight[c] > k) continue;
      Vec v = cbasis[c];
      for (std::size_t i = 0; i < du; ++i) v = v + x[c * du + i] * u.basis()[i];
      g.push_back(std::move(v));
    }
    steps.emplace(k, Subspace(dim, g));
  }
  Filtration m(dim, steps);
  if (!verify_rmf(w, n, m)) throw InternalInconsistency("constructed relative monodromy filtration failed verification");
  return m;
}

}  // namespace mlab

#endif  // MLAB_MONODROMY_HPP
