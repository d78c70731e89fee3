#ifndef MLAB_FILTRATION_HPP
#define MLAB_FILTRATION_HPP

#include <map>
#include <string>
#include <vector>

#include "mlab/linalg.hpp"

namespace mlab {

/// Finite increasing filtration of K^n, stored at its jump weights only.
/// F_w is zero below the least jump and everything from the greatest jump on.
class Filtration {
public:
  Filtration() = default;
  explicit Filtration(std::size_t n) : n_(n) {}
  Filtration(std::size_t n, const std::map<int, Subspace>& steps) : n_(n) {
    const Subspace* prev = nullptr;
    Subspace zero(n);
    for (const auto& [w, s] : steps) {
      if (s.ambient() != n) throw DimensionMismatch("filtration step in wrong ambient space");
      if (prev && !s.contains(*prev)) throw PreconditionViolated("filtration is not increasing at weight " + std::to_string(w));
      if (s != (prev ? *prev : zero)) steps_.emplace(w, s);
      prev = &s;
    }
    if (n > 0 && (!prev || !prev->is_full())) throw PreconditionViolated("filtration does not exhaust the space");
  }

  static Filtration pure(std::size_t n, int w) {
    if (n == 0) return Filtration(0);
    return Filtration(n, {{w, Subspace::full(n)}});
  }

  std::size_t ambient() const { return n_; }
  const std::map<int, Subspace>& steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }

  Subspace at(int w) const {
    auto it = steps_.upper_bound(w);
    if (it == steps_.begin()) return Subspace(n_);
    return std::prev(it)->second;
  }
  std::vector<int> jumps() const {
    std::vector<int> j;
    for (const auto& kv : steps_) j.push_back(kv.first);
    return j;
  }
  int min_weight() const { return steps_.empty() ? 0 : steps_.begin()->first; }
  int max_weight() const { return steps_.empty() ? 0 : steps_.rbegin()->first; }
  std::size_t gr_dim(int w) const { return at(w).dim() - at(w - 1).dim(); }
  bool is_pure() const { return steps_.size() <= 1; }

  Filtration shift(int k) const {
    std::map<int, Subspace> s;
    for (const auto& [w, sp] : steps_) s.emplace(w + k, sp);
    return Filtration(n_, s);
  }

  /// Graded dimensions at the jumps, e.g. {0:1, 2:1}.
  std::map<int, std::size_t> graded_dims() const {
    std::map<int, std::size_t> d;
    for (const auto& kv : steps_) d[kv.first] = gr_dim(kv.first);
    return d;
  }

  friend bool operator==(const Filtration& a, const Filtration& b) { return a.n_ == b.n_ && a.steps_ == b.steps_; }
  friend bool operator!=(const Filtration& a, const Filtration& b) { return !(a == b); }

private:
  std::size_t n_ = 0;
  std::map<int, Subspace> steps_;
};

inline Subquotient gr(const Filtration& f, int w) { return Subquotient(f.at(w), f.at(w - 1)); }

/// A grading V = ⊕_w parts(w). Zero parts are dropped.
class Splitting {
public:
  Splitting() = default;
  explicit Splitting(std::size_t n) : n_(n) {}
  Splitting(std::size_t n, const std::map<int, Subspace>& parts) : n_(n) {
    std::size_t total = 0;
    std::vector<Vec> all;
    for (const auto& [w, s] : parts) {
      if (s.ambient() != n) throw DimensionMismatch("splitting part in wrong ambient space");
      if (s.is_zero()) continue;
      parts_.emplace(w, s);
      total += s.dim();
      all.insert(all.end(), s.basis().begin(), s.basis().end());
    }
    if (total != n || Subspace(n, all).dim() != n) throw PreconditionViolated("splitting parts are not a direct sum decomposition");
  }

  static Splitting pure(std::size_t n, int w) {
    if (n == 0) return Splitting(0);
    return Splitting(n, {{w, Subspace::full(n)}});
  }

  std::size_t ambient() const { return n_; }
  const std::map<int, Subspace>& parts() const { return parts_; }
  Subspace part(int w) const {
    auto it = parts_.find(w);
    return it == parts_.end() ? Subspace(n_) : it->second;
  }
  std::vector<int> weights() const {
    std::vector<int> w;
    for (const auto& kv : parts_) w.push_back(kv.first);
    return w;
  }

  /// Columns: the echelon bases of the parts in increasing weight order.
  Mat basis_matrix() const {
    std::vector<Vec> cols;
    for (const auto& kv : parts_) cols.insert(cols.end(), kv.second.basis().begin(), kv.second.basis().end());
    return Mat::from_columns(n_, cols);
  }
  std::vector<int> basis_labels() const {
    std::vector<int> l;
    for (const auto& kv : parts_) l.insert(l.end(), kv.second.dim(), kv.first);
    return l;
  }

  /// Projection onto part w along the other parts.
  Mat projector(int w) const {
    Mat b = basis_matrix();
    Mat binv = inverse_or_throw(b, "splitting basis");
    auto labels = basis_labels();
    Mat d(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      if (labels[i] == w) d(i, i) = 1;
    return b * d * binv;
  }

  /// Component of x raising the weight by k: sum_w P_{w+k} x P_w.
  Mat component(const Mat& x, int k) const {
    Mat b = basis_matrix();
    Mat binv = inverse_or_throw(b, "splitting basis");
    Mat xb = binv * x * b;
    auto labels = basis_labels();
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (labels[i] - labels[j] != k) xb(i, j) = 0;
    return b * xb * binv;
  }

  /// x maps each part w into part w + k.
  bool has_pure_weight(const Mat& x, int k) const {
    for (const auto& [w, s] : parts_) {
      Subspace target = part(w + k);
      for (const auto& v : s.basis())
        if (!target.contains(x * v)) return false;
    }
    return true;
  }

  /// x maps each part w into the sum of parts of weight <= w + k.
  bool has_weight_at_most(const Mat& x, int k) const {
    for (const auto& [w, s] : parts_) {
      std::vector<Vec> g;
      for (const auto& [v, t] : parts_)
        if (v <= w + k) g.insert(g.end(), t.basis().begin(), t.basis().end());
      Subspace target(n_, g);
      for (const auto& v : s.basis())
        if (!target.contains(x * v)) return false;
    }
    return true;
  }

  bool preserved_by(const Mat& x) const { return has_pure_weight(x, 0); }

  Splitting shift(int k) const {
    std::map<int, Subspace> p;
    for (const auto& [w, s] : parts_) p.emplace(w + k, s);
    return Splitting(n_, p);
  }

  friend bool operator==(const Splitting& a, const Splitting& b) { return a.n_ == b.n_ && a.parts_ == b.parts_; }
  friend bool operator!=(const Splitting& a, const Splitting& b) { return !(a == b); }

private:
  std::size_t n_ = 0;
  std::map<int, Subspace> parts_;
};

inline Filtration filtration_of(const Splitting& s) {
  std::map<int, Subspace> steps;
  std::vector<Vec> acc;
  for (const auto& [w, p] : s.parts()) {
    acc.insert(acc.end(), p.basis().begin(), p.basis().end());
    steps.emplace(w, Subspace(s.ambient(), acc));
  }
  return Filtration(s.ambient(), steps);
}

/// s splits f: f_w = ⊕_{v <= w} s_v.
inline bool splits(const Splitting& s, const Filtration& f) { return filtration_of(s) == f; }

/// The grading's torus keeps f: every f_w is the sum of its intersections with the parts.
inline bool compatible(const Splitting& s, const Filtration& f) {
  if (s.ambient() != f.ambient()) throw DimensionMismatch("compatibility across ambient spaces");
  for (const auto& [w, step] : f.steps()) {
    std::size_t total = 0;
    for (const auto& kv : s.parts()) total += intersect(step, kv.second).dim();
    if (total != step.dim()) return false;
  }
  return true;
}

/// Simultaneous bigrading: V = ⊕_{u,v} a_u ∩ b_v.
inline bool compatible(const Splitting& a, const Splitting& b) {
  if (a.ambient() != b.ambient()) throw DimensionMismatch("compatibility across ambient spaces");
  std::size_t total = 0;
  for (const auto& ka : a.parts())
    for (const auto& kb : b.parts()) total += intersect(ka.second, kb.second).dim();
  return total == a.ambient();
}

/// Filtration induced on a subquotient, in its coordinates.
inline Filtration induce(const Filtration& f, const Subquotient& sq) {
  std::map<int, Subspace> steps;
  for (const auto& [w, s] : f.steps()) steps.emplace(w, sq.coords_of(s));
  return Filtration(sq.dim(), steps);
}
inline Filtration induce(const Filtration& f, const Subspace& sub) { return induce(f, Subquotient::of(sub)); }

/// Grading induced on a subquotient whose numerator and denominator are graded.
inline Splitting induce(const Splitting& s, const Subquotient& sq) {
  std::map<int, Subspace> parts;
  for (const auto& [w, p] : s.parts()) parts.emplace(w, sq.coords_of(p));
  return Splitting(sq.dim(), parts);
}
inline Splitting induce(const Splitting& s, const Subspace& sub) { return induce(s, Subquotient::of(sub)); }

/// Image of a filtration of the source under an injective or arbitrary map,
/// intersected into the target as the filtration m(F_w) (not exhaustive in general).
inline std::map<int, Subspace> image_steps(const Mat& m, const Filtration& f) {
  std::map<int, Subspace> out;
  for (const auto& [w, s] : f.steps()) out.emplace(w, apply(m, s));
  return out;
}

inline bool preserves(const Mat& m, const Filtration& src, const Filtration& dst, int shift = 0) {
  std::vector<int> ws = src.jumps();
  for (int w : ws) {
    Subspace t = dst.at(w + shift);
    Subspace step = src.at(w);
    for (const auto& v : step.basis())
      if (!t.contains(m * v)) return false;
  }
  return true;
}
inline bool preserves(const Mat& m, const Filtration& f, int shift = 0) { return preserves(m, f, f, shift); }

inline Filtration tensor(const Filtration& a, const Filtration& b) {
  const std::size_t n = a.ambient() * b.ambient();
  if (n == 0) return Filtration(0);
  std::map<int, Subspace> steps;
  for (int wa : a.jumps())
    for (int wb : b.jumps()) steps.emplace(wa + wb, Subspace(n));
  for (auto& [w, s] : steps) {
    std::vector<Vec> g;
    for (int wa : a.jumps()) {
      Subspace t = tensor(a.at(wa), b.at(w - wa));
      g.insert(g.end(), t.basis().begin(), t.basis().end());
    }
    s = Subspace(n, g);
  }
  return Filtration(n, steps);
}

inline Filtration direct_sum(const Filtration& a, const Filtration& b) {
  const std::size_t n = a.ambient() + b.ambient();
  if (n == 0) return Filtration(0);
  std::map<int, Subspace> steps;
  for (int w : a.jumps()) steps.emplace(w, Subspace(n));
  for (int w : b.jumps()) steps.emplace(w, Subspace(n));
  for (auto& [w, s] : steps) s = direct_sum(a.at(w), b.at(w));
  return Filtration(n, steps);
}

/// Dual filtration in the dual basis: (F*)_w = annihilator of F_{-w-1}.
inline Filtration dual(const Filtration& f) {
  const std::size_t n = f.ambient();
  if (n == 0) return Filtration(0);
  std::map<int, Subspace> steps;
  for (int w : f.jumps()) {
    int dw = -w;  // jump of the dual at -w
    Mat ann = annihilator(f.at(-dw - 1));
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < ann.rows(); ++i) rows.push_back(ann.row(i));
    steps.emplace(dw, Subspace(n, rows));
  }
  return Filtration(n, steps);
}

inline Splitting tensor(const Splitting& a, const Splitting& b) {
  const std::size_t n = a.ambient() * b.ambient();
  std::map<int, std::vector<Vec>> g;
  for (const auto& [wa, sa] : a.parts())
    for (const auto& [wb, sb] : b.parts()) {
      Subspace t = tensor(sa, sb);
      auto& v = g[wa + wb];
      v.insert(v.end(), t.basis().begin(), t.basis().end());
    }
  std::map<int, Subspace> parts;
  for (auto& [w, v] : g) parts.emplace(w, Subspace(n, v));
  return Splitting(n, parts);
}

inline Splitting direct_sum(const Splitting& a, const Splitting& b) {
  const std::size_t n = a.ambient() + b.ambient();
  std::map<int, Subspace> parts;
  for (const auto& kv : a.parts()) parts[kv.first] = Subspace(n);
  for (const auto& kv : b.parts()) parts[kv.first] = Subspace(n);
  for (auto& [w, s] : parts) s = direct_sum(a.part(w), b.part(w));
  return Splitting(n, parts);
}

inline Splitting dual(const Splitting& s) {
  const std::size_t n = s.ambient();
  std::map<int, Subspace> parts;
  for (const auto& [w, p] : s.parts()) {
    std::vector<Vec> others;
    for (const auto& [v, q] : s.parts())
      if (v != w) others.insert(others.end(), q.basis().begin(), q.basis().end());
    Mat ann = annihilator(Subspace(n, others));
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < ann.rows(); ++i) rows.push_back(ann.row(i));
    parts.emplace(-w, Subspace(n, rows));
  }
  return Splitting(n, parts);
}

}  // namespace mlab

#endif  // MLAB_FILTRATION_HPP
