#ifndef MLAB_CONES_HPP
#define MLAB_CONES_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mlab/monodromy.hpp"
#include "mlab/parallel.hpp"
#include "mlab/poly.hpp"

namespace mlab {

namespace detail {

/// Scales a rational vector to the primitive integer vector on the same ray.
inline Vec primitive(const Vec& v) {
  mpz_class den = 1, g = 0;
  for (const auto& x : v) {
    if (!x.is_rational()) throw FieldMismatch("cone rays must be rational");
    mpz_class d = x.rational_part().get_den();
    den = den / gcd(den, d) * d;
  }
  Vec out(v.size());
  std::vector<mpz_class> ints;
  for (const auto& x : v) {
    mpq_class s = x.rational_part() * den;
    ints.push_back(s.get_num());
    g = gcd(g, s.get_num());
  }
  if (g == 0) return out;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Scalar(Rational(ints[i] / g));
  return out;
}

inline Scalar dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot product lengths");
  Scalar s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

inline bool lex_greater(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

}  // namespace detail

/// Finitely generated monoid in Z^m whose group span has full rank and which
/// contains no nontrivial unit. The dual cone's rays are computed on
/// construction since sharpness is read off from them.
class SharpMonoid {
public:
  SharpMonoid() = default;
  SharpMonoid(std::size_t rank, std::vector<std::vector<long>> generators) : m_(rank), gens_(std::move(generators)) {
    if (m_ == 0) throw PreconditionViolated("monoid of rank 0");
    if (gens_.empty()) throw PreconditionViolated("monoid needs generators");
    std::vector<Vec> rows;
    for (const auto& g : gens_) {
      if (g.size() != m_) throw DimensionMismatch("generator length differs from the lattice rank");
      if (std::all_of(g.begin(), g.end(), [](long x) { return x == 0; })) throw PreconditionViolated("zero generator");
      rows.push_back(generator(rows.size()));
    }
    if (Subspace(m_, rows).dim() != m_) throw PreconditionViolated("monoid group span is not of full rank");
    compute_rays();
    Vec s(m_);
    for (const auto& r : rays_) s = s + r;
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (rays_.empty() || detail::dot(generator(i), s).sign() <= 0) throw PreconditionViolated("monoid is not sharp");
  }

  static SharpMonoid free(std::size_t rank) {
    std::vector<std::vector<long>> g(rank, std::vector<long>(rank, 0));
    for (std::size_t i = 0; i < rank; ++i) g[i][i] = 1;
    return SharpMonoid(rank, g);
  }

  std::size_t rank() const { return m_; }
  std::size_t size() const { return gens_.size(); }
  const std::vector<std::vector<long>>& generators() const { return gens_; }
  Vec generator(std::size_t i) const {
    Vec v(m_);
    for (std::size_t k = 0; k < m_; ++k) v[k] = gens_[i][k];
    return v;
  }
  /// Primitive integer generators of the dual cone, lexicographically descending.
  const std::vector<Vec>& dual_rays() const { return rays_; }

  friend bool operator==(const SharpMonoid& a, const SharpMonoid& b) { return a.m_ == b.m_ && a.gens_ == b.gens_; }

private:
  void compute_rays() {
    const std::size_t k = gens_.size();
    std::vector<bool> pick(k, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(std::min(k, m_ - 1)), true);
    if (m_ - 1 > k) return;
    do {
      std::vector<Vec> rows;
      for (std::size_t i = 0; i < k; ++i)
        if (pick[i]) rows.push_back(generator(i));
      Subspace line = rows.empty() ? Subspace::full(m_) : kernel(Mat::from_rows(m_, rows));
      if (line.dim() != 1) continue;
      Vec v = line.basis()[0];
      int pos = 0, neg = 0;
      for (std::size_t i = 0; i < k; ++i) {
        int s = detail::dot(generator(i), v).sign();
        pos += s > 0;
        neg += s < 0;
      }
      if (pos > 0 && neg > 0) continue;
      if (neg > 0) v = Scalar(-1) * v;
      v = detail::primitive(v);
      if (std::find(rays_.begin(), rays_.end(), v) == rays_.end()) rays_.push_back(v);
    } while (std::prev_permutation(pick.begin(), pick.end()));
    std::sort(rays_.begin(), rays_.end(), detail::lex_greater);
  }

  std::size_t m_ = 0;
  std::vector<std::vector<long>> gens_;
  std::vector<Vec> rays_;
};

/// A face of the dual cone, given by the rays it contains and the monoid
/// generators vanishing on it.
struct Face {
  std::vector<std::size_t> rays;
  std::vector<std::size_t> vanishing;
  std::size_t dim = 0;

  bool contains(const Face& o) const { return std::includes(rays.begin(), rays.end(), o.rays.begin(), o.rays.end()); }
  std::string name() const {
    std::string s = "{";
    for (std::size_t i = 0; i < rays.size(); ++i) s += (i ? "," : "") + std::to_string(rays[i]);
    return s + "}";
  }
  friend bool operator==(const Face& a, const Face& b) { return a.rays == b.rays; }
};

/// The dual cone sigma = Hom(S, R>=0) of a sharp monoid with its face lattice.
/// Faces are ordered by dimension, then by ray indices; faces()[0] is {0}
/// and faces().back() is sigma.
class Cone {
public:
  Cone() = default;
  explicit Cone(SharpMonoid m) : monoid_(std::move(m)) {
    const auto& rays = monoid_.dual_rays();
    const std::size_t k = monoid_.size();
    std::set<std::vector<std::size_t>> seen;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      std::vector<std::size_t> rs;
      for (std::size_t r = 0; r < rays.size(); ++r) {
        bool ok = true;
        for (std::size_t g = 0; g < k && ok; ++g)
          if ((mask >> g) & 1) ok = detail::dot(monoid_.generator(g), rays[r]).is_zero();
        if (ok) rs.push_back(r);
      }
      if (!seen.insert(rs).second) continue;
      Face f;
      f.rays = rs;
      for (std::size_t g = 0; g < k; ++g) {
        bool van = true;
        for (auto r : rs) van = van && detail::dot(monoid_.generator(g), rays[r]).is_zero();
        if (van) f.vanishing.push_back(g);
      }
      std::vector<Vec> span;
      for (auto r : rs) span.push_back(rays[r]);
      f.dim = Subspace(monoid_.rank(), span).dim();
      faces_.push_back(std::move(f));
    }
    std::sort(faces_.begin(), faces_.end(), [](const Face& a, const Face& b) {
      if (a.dim != b.dim) return a.dim < b.dim;
      return a.rays < b.rays;
    });
  }

  const SharpMonoid& monoid() const { return monoid_; }
  std::size_t rank() const { return monoid_.rank(); }
  const std::vector<Vec>& rays() const { return monoid_.dual_rays(); }
  const std::vector<Face>& faces() const { return faces_; }
  std::size_t zero_face() const { return 0; }
  std::size_t full_face() const { return faces_.size() - 1; }

  std::size_t face_index(const std::vector<std::size_t>& rays) const {
    std::vector<std::size_t> r = rays;
    std::sort(r.begin(), r.end());
    for (std::size_t i = 0; i < faces_.size(); ++i)
      if (faces_[i].rays == r) return i;
    throw PreconditionViolated("ray set is not a face");
  }

  bool contains(const Vec& v) const {
    for (std::size_t g = 0; g < monoid_.size(); ++g)
      if (detail::dot(monoid_.generator(g), v).sign() < 0) return false;
    return true;
  }

  /// Sum of the face's rays; zero for {0}.
  Vec interior_element(const Face& f) const {
    Vec v(rank());
    for (auto r : f.rays) v = v + rays()[r];
    return v;
  }

  bool is_interior(const Face& f, const Vec& v) const {
    if (v.size() != rank()) throw DimensionMismatch("point vs cone rank");
    std::size_t j = 0;
    for (std::size_t g = 0; g < monoid_.size(); ++g) {
      int s = detail::dot(monoid_.generator(g), v).sign();
      bool van = j < f.vanishing.size() && f.vanishing[j] == g;
      if (van) ++j;
      if (van ? s != 0 : s <= 0) return false;
    }
    return true;
  }

  friend bool operator==(const Cone& a, const Cone& b) { return a.monoid_ == b.monoid_; }

private:
  SharpMonoid monoid_;
  std::vector<Face> faces_;
};

/// Linear map h: sigma_R -> End(V) given on the dual rays, with the base
/// filtration W. The operators commute, are nilpotent and keep W.
class ConeAction {
public:
  ConeAction() = default;
  ConeAction(Cone cone, Filtration w, std::vector<Mat> ray_ops) : cone_(std::move(cone)), w_(std::move(w)), ray_ops_(std::move(ray_ops)) {
    const std::size_t n = w_.ambient(), m = cone_.rank();
    const auto& rays = cone_.rays();
    if (ray_ops_.size() != rays.size()) throw DimensionMismatch("one operator per dual ray expected");
    for (const auto& a : ray_ops_)
      if (a.rows() != n || a.cols() != n) throw DimensionMismatch("ray operator shape");
    // solve h(e_i) from m independent rays, then check the remaining rays
    std::vector<std::size_t> chosen;
    std::vector<Vec> acc;
    for (std::size_t r = 0; r < rays.size() && chosen.size() < m; ++r) {
      acc.push_back(rays[r]);
      if (Subspace(m, acc).dim() == chosen.size() + 1)
        chosen.push_back(r);
      else
        acc.pop_back();
    }
    Mat rmat = Mat::from_rows(m, acc);
    Mat rinv = inverse_or_throw(rmat, "ray matrix");
    basis_ops_.assign(m, Mat(n, n));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k)
        if (!rinv(i, k).is_zero()) basis_ops_[i] += rinv(i, k) * ray_ops_[chosen[k]];
    for (std::size_t r = 0; r < rays.size(); ++r)
      if (at(rays[r]) != ray_ops_[r]) throw PreconditionViolated("ray operators are not the restriction of a linear map");
    for (std::size_t i = 0; i < ray_ops_.size(); ++i) {
      if (!is_nilpotent(ray_ops_[i])) throw PreconditionViolated("ray operator " + std::to_string(i) + " is not nilpotent");
      if (!preserves(ray_ops_[i], w_)) throw PreconditionViolated("ray operator " + std::to_string(i) + " does not keep W");
      for (std::size_t j = i + 1; j < ray_ops_.size(); ++j)
        if (!commute(ray_ops_[i], ray_ops_[j])) throw PreconditionViolated("ray operators do not commute");
    }
  }

  const Cone& cone() const { return cone_; }
  const Filtration& w() const { return w_; }
  std::size_t dim() const { return w_.ambient(); }
  const std::vector<Mat>& ray_ops() const { return ray_ops_; }

  Mat at(const Vec& v) const {
    if (v.size() != cone_.rank()) throw DimensionMismatch("cone point length");
    Mat out(dim(), dim());
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!v[i].is_zero()) out += v[i] * basis_ops_[i];
    return out;
  }

  std::vector<Mat> face_ops(const Face& f) const {
    std::vector<Mat> ops;
    for (auto r : f.rays) ops.push_back(ray_ops_[r]);
    return ops;
  }

private:
  Cone cone_;
  Filtration w_;
  std::vector<Mat> ray_ops_, basis_ops_;
};

inline ConeAction direct_sum(const ConeAction& a, const ConeAction& b) {
  if (!(a.cone() == b.cone())) throw ConeMismatch("direct sum over different cones");
  std::vector<Mat> ops;
  for (std::size_t i = 0; i < a.ray_ops().size(); ++i) ops.push_back(block_diag(a.ray_ops()[i], b.ray_ops()[i]));
  return ConeAction(a.cone(), direct_sum(a.w(), b.w()), ops);
}

inline ConeAction tensor(const ConeAction& a, const ConeAction& b) {
  if (!(a.cone() == b.cone())) throw ConeMismatch("tensor product over different cones");
  std::vector<Mat> ops;
  Mat ia = Mat::identity(a.dim()), ib = Mat::identity(b.dim());
  for (std::size_t i = 0; i < a.ray_ops().size(); ++i) ops.push_back(kron(a.ray_ops()[i], ib) + kron(ia, b.ray_ops()[i]));
  return ConeAction(a.cone(), tensor(a.w(), b.w()), ops);
}

inline ConeAction dual(const ConeAction& a) {
  std::vector<Mat> ops;
  for (const auto& m : a.ray_ops()) ops.push_back(-m.transpose());
  return ConeAction(a.cone(), dual(a.w()), ops);
}

/// The face-indexed family (W(tau))_tau of an admissible action, aligned with
/// cone().faces(). `exact` is false when some face with three or more rays
/// was only checked at sampled interior points.
struct AdmissibleFamily {
  Cone cone;
  std::vector<Filtration> filtrations;
  bool exact = true;

  const Filtration& at(std::size_t face) const { return filtrations.at(face); }
  const Filtration& top() const { return filtrations.back(); }
};

struct AdmissibilityReport {
  bool admissible = false;
  std::optional<AdmissibleFamily> family;
  std::string failure;
};

namespace detail {

/// Whether m is the rmf of every interior operator of the face (given by its
/// ray operators) relative to w, on the subspace u. Faces with at most two
/// rays are decided exactly; larger faces are sampled and clear `exact`.
inline std::string rmf_on_face(const Subspace& u, const Filtration& w, const std::vector<Mat>& ops, const Filtration& m, std::uint64_t seed, bool& exact) {
  const std::size_t n = w.ambient();
  if (ops.size() <= 1) {
    Mat op = ops.empty() ? Mat(n, n) : ops[0];
    std::vector<Mat> powers{Mat::identity(n)};
    auto iso = [&](const Subquotient& src, const Subquotient& dst, int r) {
      while (powers.size() <= static_cast<std::size_t>(r)) powers.push_back(powers.back() * op);
      return inverse(induced_map(powers[static_cast<std::size_t>(r)], src, dst)).has_value();
    };
    return check_rmf_axioms(u, w, ops.empty() ? std::vector<Mat>{op} : ops, m, iso);
  }
  if (ops.size() == 2) {
    // N(t) = t A + B for t in (0, inf); det of the induced N(t)^r is a
    // polynomial in t, recovered by interpolation and root-counted exactly
    auto iso = [&](const Subquotient& src, const Subquotient& dst, int r) {
      const std::size_t deg = static_cast<std::size_t>(r) * src.dim();
      std::vector<Scalar> xs, ys;
      for (std::size_t t = 0; t <= deg; ++t) {
        Mat nt = Scalar(static_cast<long>(t)) * ops[0] + ops[1];
        xs.push_back(Scalar(static_cast<long>(t)));
        ys.push_back(det(induced_map(nt.pow(static_cast<unsigned>(r)), src, dst)));
      }
      Poly p = interpolate(xs, ys);
      return !p.is_zero() && count_positive_roots(p) == 0;
    };
    return check_rmf_axioms(u, w, ops, m, iso);
  }
  exact = false;
  std::mt19937_64 rng(seed);
  for (int sample = 0; sample < 4; ++sample) {
    Mat op(n, n);
    for (const auto& a : ops) op += Scalar(sample == 0 ? 1L : std::uniform_int_distribution<long>(1, 9)(rng)) * a;
    std::string why = rmf_on_face(u, w, {op}, m, seed, exact);
    if (!why.empty()) return why + " (sampled interior point " + std::to_string(sample) + ")";
  }
  return {};
}

}  // namespace detail

/// Decides admissibility: computes W(tau) as the rmf of an interior operator
/// for every face, then checks for all interior operators of tau that W(tau)
/// is the rmf relative to W(tau') on every step W(tau'')_w, for all faces
/// tau ⊇ tau' ⊇ tau''. Steps of W(tau'') with tau'' not inside tau' are not
/// sub-objects for the relevant SL(2)-actions and are excluded.
inline AdmissibilityReport check_admissible(const ConeAction& a, std::uint64_t seed = 0x5eed) {
  const Cone& cone = a.cone();
  const auto& faces = cone.faces();
  AdmissibilityReport rep;
  AdmissibleFamily fam;
  fam.cone = cone;
  for (const auto& f : faces) {
    Mat n = a.at(cone.interior_element(f));
    auto m = rmf(a.w(), n);
    if (!m) {
      rep.failure = "face " + f.name() + ": relative monodromy filtration of an interior operator does not exist";
      return rep;
    }
    fam.filtrations.push_back(*m);
  }
  if (fam.filtrations[cone.zero_face()] != a.w()) throw InternalInconsistency("W({0}) differs from W");
  // (iii-1)
  for (std::size_t t = 0; t < faces.size(); ++t)
    for (std::size_t r = 0; r < a.ray_ops().size(); ++r)
      if (!preserves(a.ray_ops()[r], fam.filtrations[t])) {
        rep.failure = "face " + faces[t].name() + ": ray " + std::to_string(r) + " does not keep W(face)";
        return rep;
      }
  // steps W(tau'')_w for tau'' inside tau', deduplicated per tau'
  struct Task {
    std::size_t tau, tau1;
    Subspace u;
    std::string where;
  };
  std::vector<Task> tasks;
  for (std::size_t t1 = 0; t1 < faces.size(); ++t1) {
    std::vector<std::pair<Subspace, std::string>> steps{{Subspace::full(a.dim()), "V"}};
    for (std::size_t t2 = 0; t2 < faces.size(); ++t2) {
      if (!faces[t1].contains(faces[t2])) continue;
      for (const auto& [w, s] : fam.filtrations[t2].steps()) {
        bool dup = std::any_of(steps.begin(), steps.end(), [&](const auto& p) { return p.first == s; });
        if (!dup && !s.is_zero()) steps.emplace_back(s, "W(face " + faces[t2].name() + ")_" + std::to_string(w));
      }
    }
    for (std::size_t t = 0; t < faces.size(); ++t)
      if (faces[t].contains(faces[t1]))
        for (const auto& [u, where] : steps) tasks.push_back({t, t1, u, where});
  }
  std::vector<std::string> why(tasks.size());
  std::vector<char> exact(tasks.size(), 1);
  parallel_for(tasks.size(), [&](std::size_t i) {
    const Task& k = tasks[i];
    bool ex = true;
    why[i] = detail::rmf_on_face(k.u, fam.filtrations[k.tau1], a.face_ops(faces[k.tau]), fam.filtrations[k.tau], seed + i, ex);
    exact[i] = ex;
  });
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!why[i].empty()) {
      const Task& k = tasks[i];
      rep.failure = "W(face " + faces[k.tau].name() + ") is not the rmf of the interior of that face relative to W(face " + faces[k.tau1].name() +
                    ") on " + k.where + ": " + why[i];
      return rep;
    }
    fam.exact = fam.exact && exact[i];
  }
  rep.admissible = true;
  rep.family = std::move(fam);
  return rep;
}

inline AdmissibleFamily admissible_family(const ConeAction& a) {
  auto rep = check_admissible(a);
  if (!rep.admissible) throw NotAdmissible(rep.failure);
  return *rep.family;
}

}  // namespace mlab

#endif  // MLAB_CONES_HPP
