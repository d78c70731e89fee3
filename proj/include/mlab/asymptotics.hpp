#ifndef MLAB_ASYMPTOTICS_HPP
#define MLAB_ASYMPTOTICS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "mlab/deligne.hpp"
#include "mlab/logpoint.hpp"
#include "mlab/ratios.hpp"

namespace mlab {

/// Dense row-major double matrix for the inexact side of the convergence check.
struct RealMat {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  RealMat() = default;
  RealMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  static RealMat of(const Mat& m) {
    RealMat out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).real_value();
    return out;
  }
  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  friend RealMat operator*(const RealMat& x, const RealMat& y) {
    RealMat out(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
      for (std::size_t k = 0; k < x.cols; ++k)
        if (x(i, k) != 0.0)
          for (std::size_t j = 0; j < y.cols; ++j) out(i, j) += x(i, k) * y(k, j);
    return out;
  }
  double sup_norm() const {
    double s = 0;
    for (double v : a) s = std::max(s, std::abs(v));
    return s;
  }
};

/// The data attached to a boundary point mu of the space of ratios of an
/// object: markers f_j, a basis (f_{j,lambda}) of the group span adapted to
/// the filtration by the sublattices M^(j) vanishing on sigma_j, the dual
/// operators N_{j,lambda}, and the SL(2)-data of the Deligne system
/// (W(sigma_j), h(N_j), Y) with Y the Frobenius grading.
struct BoundarySetup {
  LogPointObject object;
  RatioPoint mu;
  AdmissibleFamily family;
  DeligneSystem system;
  SL2Data sl2;
  std::vector<std::vector<Vec>> lattice_basis;  // [j-1][lambda], lambda = 0 is the marker
  std::vector<std::vector<Vec>> dual_basis;     // N_{j,lambda}
  Mat adapted;                                  // columns: joint eigenbasis of Y^1..Y^n
  std::vector<std::vector<int>> labels;         // labels[j-1][column] = Y^j-weight

  std::size_t length() const { return mu.length(); }
  const Vec& marker(std::size_t j) const { return lattice_basis.at(j - 1).front(); }
};

namespace detail {

/// Elements of Q^rank vanishing on every ray of the face.
inline Subspace vanishing_lattice(const Cone& c, std::size_t face) {
  const auto& rays = c.faces()[face].rays;
  if (rays.empty()) return Subspace::full(c.rank());
  std::vector<Vec> rows;
  for (auto r : rays) rows.push_back(c.rays()[r]);
  return kernel(Mat::from_rows(c.rank(), rows));
}

/// Default f_{j,lambda}: the marker, then monoid generators and unit vectors
/// in input order completing M^(j) to M^(j-1).
inline std::vector<std::vector<Vec>> default_lattice_basis(const RatioPoint& mu) {
  const Cone& c = mu.cone();
  std::vector<Vec> candidates;
  for (std::size_t g = 0; g < c.monoid().size(); ++g) candidates.push_back(c.monoid().generator(g));
  for (std::size_t i = 0; i < c.rank(); ++i) candidates.push_back(unit_vec(c.rank(), i));
  std::vector<std::vector<Vec>> out;
  std::size_t prev = c.zero_face();
  for (std::size_t j = 0; j < mu.length(); ++j) {
    Subspace hi = vanishing_lattice(c, prev), lo = vanishing_lattice(c, mu.chain()[j]);
    Vec f = c.monoid().generator(mu.markers()[j]);
    std::vector<Vec> acc = lo.basis(), piece{f};
    acc.push_back(f);
    for (const Vec& v : candidates) {
      if (!hi.contains(v)) continue;
      acc.push_back(v);
      if (Subspace(c.rank(), acc).dim() == acc.size())
        piece.push_back(v);
      else
        acc.pop_back();
    }
    if (acc.size() != hi.dim()) throw InternalInconsistency("could not complete the lattice basis");
    out.push_back(piece);
    prev = mu.chain()[j];
  }
  return out;
}

/// Columns spanning V, each homogeneous for every grading in turn.
inline std::pair<Mat, std::vector<std::vector<int>>> joint_basis(std::size_t dim, const std::vector<Splitting>& gs) {
  struct Cell {
    Subspace s;
    std::vector<int> w;
  };
  std::vector<Cell> cells{{Subspace::full(dim), {}}};
  for (const auto& g : gs) {
    std::vector<Cell> next;
    for (const auto& cell : cells)
      for (const auto& [k, part] : g.parts()) {
        Subspace s = intersect(cell.s, part);
        if (s.dim() == 0) continue;
        auto w = cell.w;
        w.push_back(k);
        next.push_back({s, w});
      }
    cells = std::move(next);
  }
  std::vector<Vec> cols;
  std::vector<std::vector<int>> labels(gs.size());
  for (const auto& cell : cells) {
    const std::vector<Vec> b = cell.s.basis();
    for (const auto& v : b) {
      cols.push_back(v);
      for (std::size_t j = 0; j < gs.size(); ++j) labels[j].push_back(cell.w[j]);
    }
  }
  if (cols.size() != dim) throw InternalInconsistency("the gradings Y^j do not commute");
  return {Mat::from_columns(dim, cols), labels};
}

}  // namespace detail

/// Builds the setup. `lattice_basis` overrides the default f_{j,lambda}; its
/// pieces must start with the markers and complete M^(j) to M^(j-1).
inline BoundarySetup make_setup(const LogPointObject& o, const RatioPoint& mu, std::vector<std::vector<Vec>> lattice_basis = {}) {
  if (!(mu.cone() == o.cone())) throw ConeMismatch("boundary point and object live on different cones");
  const Cone& c = o.cone();
  auto rep = check_membership(o);
  if (!rep.ok) throw PreconditionViolated("object is not a member: " + rep.violation);
  std::vector<std::size_t> chain{c.zero_face()};
  chain.insert(chain.end(), mu.chain().begin(), mu.chain().end());
  DeligneSystem sys = system_from_admissible(o.action(), *rep.family, chain, mu.witnesses(), o.grading());
  SL2Data sl2 = build_sl2_data(sys);

  if (lattice_basis.empty()) lattice_basis = detail::default_lattice_basis(mu);
  if (lattice_basis.size() != mu.length()) throw DimensionMismatch("one lattice piece per face expected");
  std::vector<Vec> rows;
  std::size_t prev = c.zero_face();
  for (std::size_t j = 0; j < mu.length(); ++j) {
    const auto& piece = lattice_basis[j];
    if (piece.empty() || piece.front() != c.monoid().generator(mu.markers()[j]))
      throw PreconditionViolated("lattice piece " + std::to_string(j + 1) + " must start with the marker");
    Subspace hi = detail::vanishing_lattice(c, prev), lo = detail::vanishing_lattice(c, mu.chain()[j]);
    std::vector<Vec> acc = lo.basis();
    for (const auto& v : piece) {
      if (!hi.contains(v)) throw PreconditionViolated("lattice element outside M^(j-1)");
      acc.push_back(v);
      rows.push_back(v);
    }
    if (Subspace(c.rank(), acc).dim() != acc.size() || acc.size() != hi.dim())
      throw PreconditionViolated("lattice piece " + std::to_string(j + 1) + " is not a basis of the graded piece");
    prev = mu.chain()[j];
  }
  Mat finv = inverse_or_throw(Mat::from_rows(c.rank(), rows), "lattice basis");
  std::vector<std::vector<Vec>> dual;
  std::size_t col = 0;
  for (const auto& piece : lattice_basis) {
    dual.emplace_back();
    for (std::size_t l = 0; l < piece.size(); ++l, ++col) dual.back().push_back(finv.column(col));
  }

  std::vector<Splitting> gs(sl2.y.begin() + 1, sl2.y.end());
  auto [adapted, labels] = detail::joint_basis(o.dim(), gs);
  return BoundarySetup{o, mu, *rep.family, sys, sl2, lattice_basis, dual, adapted, labels};
}

namespace detail {

inline void require_rank_one(const BoundarySetup& s, const RatioPoint& nu) {
  if (!(nu.cone() == s.mu.cone())) throw ConeMismatch("ratio point on another cone");
  if (!nu.is_rank_one()) throw NotRankOne("ratio point is not in the rank-one locus");
}

}  // namespace detail

/// N(nu) = sum_{j,lambda} nu(f_{j,lambda}, f_n) h(N_{j,lambda}).
inline Mat n_of_nu(const BoundarySetup& s, const RatioPoint& nu) {
  detail::require_rank_one(s, nu);
  const Vec& n = nu.witnesses().front();
  const Scalar denom = detail::dot(n, s.marker(s.length()));
  Mat out(s.object.dim(), s.object.dim());
  for (std::size_t j = 0; j < s.lattice_basis.size(); ++j)
    for (std::size_t l = 0; l < s.lattice_basis[j].size(); ++l) {
      Scalar c = detail::dot(n, s.lattice_basis[j][l]) / denom;
      if (!c.is_zero()) out += c * s.object.action().at(s.dual_basis[j][l]);
    }
  return out;
}

/// nu(f_{j+1}, f_j) for j = 1..n-1.
inline std::vector<Scalar> ratio_coordinates(const BoundarySetup& s, const RatioPoint& nu) {
  detail::require_rank_one(s, nu);
  std::vector<Scalar> out;
  for (std::size_t j = 1; j < s.length(); ++j) {
    Extended e = nu.evaluate(s.marker(j + 1), s.marker(j));
    if (e.infinite || e.value.sign() <= 0) throw NotRankOne("marker ratio is not a positive number");
    out.push_back(e.value);
  }
  return out;
}

/// t(nu) = prod_j tau_j(nu(f_{j+1}, f_j)^{1/2}) in the original basis.
inline RealMat t_of_nu(const BoundarySetup& s, const RatioPoint& nu) {
  auto r = ratio_coordinates(s, nu);
  const std::size_t d = s.object.dim();
  RealMat diag(d, d);
  for (std::size_t b = 0; b < d; ++b) {
    double v = 1.0;
    for (std::size_t j = 0; j < r.size(); ++j) v *= std::pow(r[j].real_value(), s.labels[j][b] / 2.0);
    diag(b, b) = v;
  }
  return RealMat::of(s.adapted) * diag * RealMat::of(inverse_or_throw(s.adapted));
}

/// t(nu)^{-1} N(nu) t(nu), exact when every exponent is integral.
struct Conjugated {
  RealMat value;
  std::optional<Mat> exact;
};

inline Conjugated conjugated(const BoundarySetup& s, const RatioPoint& nu) {
  auto r = ratio_coordinates(s, nu);
  const Mat pinv = inverse_or_throw(s.adapted);
  const Mat x = pinv * n_of_nu(s, nu) * s.adapted;
  const std::size_t d = x.rows();
  // entry (a, b) picks up prod_j r_j^{(w_j(b) - w_j(a)) / 2}
  bool integral = true;
  for (std::size_t a = 0; a < d && integral; ++a)
    for (std::size_t b = 0; b < d && integral; ++b)
      if (!x(a, b).is_zero())
        for (std::size_t j = 0; j < r.size(); ++j)
          if ((s.labels[j][b] - s.labels[j][a]) % 2 != 0) integral = false;
  Conjugated out;
  if (integral) {
    Mat y = x;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        if (!y(a, b).is_zero())
          for (std::size_t j = 0; j < r.size(); ++j) y(a, b) *= power(r[j], (s.labels[j][b] - s.labels[j][a]) / 2);
    Mat back = s.adapted * y * pinv;
    out.value = RealMat::of(back);
    out.exact = back;
    return out;
  }
  RealMat y = RealMat::of(x);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t j = 0; j < r.size(); ++j) y(a, b) *= std::pow(r[j].real_value(), (s.labels[j][b] - s.labels[j][a]) / 2.0);
  out.value = RealMat::of(s.adapted) * y * RealMat::of(pinv);
  return out;
}

/// Sup-norm distance from t^{-1} N(nu) t to sum N-hat_j; exact when available.
inline double distance_to_limit(const BoundarySetup& s, const RatioPoint& nu) {
  Conjugated c = conjugated(s, nu);
  Mat lim = s.sl2.limit();
  if (c.exact) return RealMat::of(*c.exact - lim).sup_norm();
  RealMat l = RealMat::of(lim);
  for (std::size_t i = 0; i < l.a.size(); ++i) l.a[i] = c.value.a[i] - l.a[i];
  return l.sup_norm();
}

struct ConvergenceRow {
  std::vector<Scalar> y;
  std::vector<Scalar> ratios;
  double distance = 0;
};

/// Rows for steps 1..k along the path psi(sum y_j N_j) toward mu.
inline std::vector<ConvergenceRow> sweep(const BoundarySetup& s, const Schedule& schedule, std::size_t k) {
  RatioPath path{s.mu, schedule};
  std::vector<ConvergenceRow> rows(k);
  parallel_for(k, [&](std::size_t i) {
    auto y = schedule.weights(s.length(), i + 1);
    RatioPoint nu = path.at(y);
    rows[i] = ConvergenceRow{y, ratio_coordinates(s, nu), distance_to_limit(s, nu)};
  });
  return rows;
}

/// Every ray generator of sigma_j acts with pure tau_i-weight -2 for i >= j.
/// Returns one line per failure.
inline std::vector<std::string> pure_weight_violations(const BoundarySetup& s) {
  std::vector<std::string> out;
  const Cone& c = s.mu.cone();
  for (std::size_t j = 1; j <= s.length(); ++j)
    for (auto r : c.faces()[s.mu.chain()[j - 1]].rays)
      for (std::size_t i = j; i <= s.length(); ++i)
        if (!s.sl2.tau(i).has_pure_weight(s.object.ray_ops()[r], -2))
          out.push_back("ray " + std::to_string(r) + " of sigma_" + std::to_string(j) + " is not pure of weight -2 for tau_" + std::to_string(i));
  return out;
}

}  // namespace mlab

#endif  // MLAB_ASYMPTOTICS_HPP
