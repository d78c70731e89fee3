#ifndef MLAB_DIRECT_IMAGES_HPP
#define MLAB_DIRECT_IMAGES_HPP

#include <array>
#include <string>
#include <vector>

#include "mlab/logpoint.hpp"

namespace mlab {

/// A representation of the log fundamental group of the degenerate Tate
/// elliptic curve over the standard log point: gamma_1, gamma_2 generate the
/// geometric part T, gamma_0 is the local monodromy of the base and F a
/// Frobenius lift, subject to
///   F g1 F^-1 = g1,  F g2 F^-1 = g2^q,  g0 g1 g0^-1 = g1 g2,  g0 g2 g0^-1 = g2.
struct EllipticRep {
  Filtration w;
  Mat g0, g1, g2, f;
  Scalar q = Scalar(2);
  Splitting grading;

  std::size_t dim() const { return w.ambient(); }
};

/// Empty when the relations and structural conditions hold.
inline std::string rep_defect(const EllipticRep& e) {
  const std::size_t n = e.dim();
  for (const Mat* m : {&e.g0, &e.g1, &e.g2, &e.f})
    if (m->rows() != n || m->cols() != n) return "operator shapes";
  if (e.grading.ambient() != n) return "grading shape";
  if (!detail::is_prime_power(e.q)) return "q must be a prime power";
  auto f_inv = inverse(e.f);
  auto g0_inv = inverse(e.g0);
  if (!f_inv || !g0_inv || !inverse(e.g1) || !inverse(e.g2)) return "operators must be invertible";
  const Mat id = Mat::identity(n);
  if (!is_nilpotent(e.g2 - id)) return "gamma_2 is not unipotent";
  if (!is_nilpotent(e.g0 - id)) return "gamma_0 is not unipotent";
  if (!commute(e.g1, e.g2)) return "gamma_1 and gamma_2 do not commute";
  if (e.f * e.g1 * *f_inv != e.g1) return "F gamma_1 F^-1 != gamma_1";
  if (!e.q.is_rational() || e.q.rational_part().get_den() != 1) return "q must be an integer";
  if (e.f * e.g2 * *f_inv != e.g2.pow(static_cast<unsigned>(e.q.rational_part().get_num().get_ui()))) return "F gamma_2 F^-1 != gamma_2^q";
  if (e.g0 * e.g1 * *g0_inv != e.g1 * e.g2) return "gamma_0 gamma_1 gamma_0^-1 != gamma_1 gamma_2";
  if (e.g0 * e.g2 * *g0_inv != e.g2) return "gamma_0 gamma_2 gamma_0^-1 != gamma_2";
  for (const Mat* m : {&e.g0, &e.g1, &e.g2, &e.f})
    if (!preserves(*m, e.w)) return "an operator does not keep W";
  if (!e.grading.preserved_by(e.f) || !e.grading.preserved_by(e.g1)) return "F and gamma_1 must keep the Frobenius grading";
  if (!e.grading.has_pure_weight(log_unipotent(e.g2), -2)) return "log gamma_2 must lower Frobenius weights by 2";
  if (!e.grading.has_pure_weight(log_unipotent(e.g0), -2)) return "log gamma_0 must lower Frobenius weights by 2";
  return "";
}

inline void validate(const EllipticRep& e) {
  if (auto d = rep_defect(e); !d.empty()) throw ValidationFailed("elliptic representation: " + d);
}

/// (gamma_1 - 1, gamma_2 - 1) and (1 - gamma_2, gamma_1 - 1) as matrices
/// H -> H + H -> H, the first copy of H stacked above the second.
struct GroupComplex {
  Mat d0, d1;
};

inline GroupComplex complex(const EllipticRep& e) {
  validate(e);
  const std::size_t n = e.dim();
  const Mat id = Mat::identity(n);
  GroupComplex c{Mat(2 * n, n), Mat(n, 2 * n)};
  const Mat a = e.g1 - id, b = e.g2 - id;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      c.d0(i, j) = a(i, j);
      c.d0(n + i, j) = b(i, j);
      c.d1(i, j) = -b(i, j);
      c.d1(i, n + j) = a(i, j);
    }
  if (!(c.d1 * c.d0).is_zero()) throw ComplexNotClosed("d1 d0 != 0 in the group complex");
  return c;
}

inline std::array<std::size_t, 3> group_cohomology_dims(const GroupComplex& c) {
  const std::size_t n = c.d0.cols();
  const std::size_t r0 = rank(c.d0), r1 = rank(c.d1);
  return {n - r0, 2 * n - r1 - r0, n - r1};
}

/// Restriction to a subspace stable under every operator.
inline EllipticRep restrict_rep(const EllipticRep& e, const Subspace& s) {
  Subquotient sq = Subquotient::of(s);
  EllipticRep out{induce(e.w, sq), induced_map(e.g0, sq), induced_map(e.g1, sq), induced_map(e.g2, sq), induced_map(e.f, sq), e.q,
                  induce(e.grading, sq)};
  for (const Mat* m : {&e.g0, &e.g1, &e.g2, &e.f})
    if (!s.contains(apply(*m, s))) throw InternalInconsistency("subspace is not stable under the representation");
  validate(out);
  return out;
}

/// Summands I(c) on the generalized eigenspaces of gamma_1.
inline std::vector<std::pair<Scalar, EllipticRep>> eigen_decompose(const EllipticRep& e, const std::vector<Scalar>& roots) {
  validate(e);
  std::vector<std::pair<Scalar, EllipticRep>> out;
  for (const auto& [c, space] : generalized_eigenspaces(e.g1, roots))
    if (space.dim() > 0) out.emplace_back(c, restrict_rep(e, space));
  return out;
}

/// L* with basis (e1, e2) dual to (log gamma_1, log gamma_2): gamma_0 acts
/// contragrediently, so gamma_0 e2 = e2 - e1, and F e2 = q^-1 e2.
inline Mat lstar_g0() { return Mat{{1, -1}, {0, 1}}; }
inline Mat lstar_frob(const Scalar& q) { return Mat{{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(1) / q}}; }
inline Splitting lstar_grading() { return Splitting(2, {{0, Subspace(2, {{1, 0}})}, {2, Subspace(2, {{0, 1}})}}); }

struct CohomologyResult {
  /// The terms H, H (x) L*, H (x) wedge^2 L* of the unipotent part, as objects over Y.
  std::array<LogPointObject, 3> terms;
  /// Lie algebra differentials between the terms.
  Mat d0, d1;
  /// Cocycles over coboundaries inside each term.
  std::array<Subquotient, 3> classes;
  std::array<LogPointObject, 3> h;
  /// Inclusion of the generalized 1-eigenspace of gamma_1, in whose
  /// coordinates the terms are written.
  Mat unipotent_part;

  std::array<std::size_t, 3> dims() const { return {h[0].dim(), h[1].dim(), h[2].dim()}; }
};

namespace detail {

inline LogPointObject y_object(const Filtration& w, const Mat& g0, const Mat& f, const Scalar& q, const Splitting& grading) {
  return LogPointObject(ConeAction(Cone(SharpMonoid::free(1)), w, {log_unipotent(g0)}), f, q, grading);
}

}  // namespace detail

/// Higher direct images on Y via the Lie algebra complex
/// 0 -> H -> H (x) L* -> H (x) wedge^2 L* -> 0 with N_j = log gamma_j, on the
/// generalized 1-eigenspace of gamma_1; the complementary summand is checked
/// to be acyclic. W on H^i is the image of H^i(W_{w-i}).
inline CohomologyResult cohomology(const EllipticRep& full) {
  validate(full);
  const std::size_t total = full.dim();
  auto [v1, rest] = fitting_decomposition(full.g1, Scalar(1));
  if (rest.dim() > 0) {
    auto dims = group_cohomology_dims(complex(restrict_rep(full, rest)));
    if (dims != std::array<std::size_t, 3>{0, 0, 0}) throw InternalInconsistency("the gamma_1 != 1 summand is not acyclic");
  }
  CohomologyResult r;
  r.unipotent_part = total ? Subquotient::of(v1).lift_matrix() : Mat(0, 0);
  const EllipticRep e = v1.dim() == total ? full : restrict_rep(full, v1);
  const std::size_t n = e.dim();
  const Mat n1 = log_unipotent(e.g1), n2 = log_unipotent(e.g2);
  const Scalar& q = e.q;

  r.d0 = Mat(2 * n, n);
  r.d1 = Mat(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      r.d0(2 * i, k) = n1(i, k);
      r.d0(2 * i + 1, k) = n2(i, k);
      // h1 (x) e1 + h2 (x) e2 -> N1 h2 - N2 h1
      r.d1(i, 2 * k) = -n2(i, k);
      r.d1(i, 2 * k + 1) = n1(i, k);
    }
  if (!(r.d1 * r.d0).is_zero()) throw ComplexNotClosed("d1 d0 != 0 in the Lie algebra complex");

  const Mat g0_1 = kron(e.g0, lstar_g0()), f_1 = kron(e.f, lstar_frob(q));
  const Mat f_2 = (Scalar(1) / q) * e.f;
  if (r.d0 * e.g0 != g0_1 * r.d0 || r.d1 * g0_1 != e.g0 * r.d1) throw InternalInconsistency("differentials are not gamma_0-equivariant");
  if (r.d0 * e.f != f_1 * r.d0 || r.d1 * f_1 != f_2 * r.d1) throw InternalInconsistency("differentials are not Frobenius-equivariant");

  r.terms[0] = detail::y_object(e.w, e.g0, e.f, q, e.grading);
  r.terms[1] = detail::y_object(tensor(e.w, Filtration::pure(2, 1)), g0_1, f_1, q, tensor(e.grading, lstar_grading()));
  r.terms[2] = detail::y_object(e.w.shift(2), e.g0, f_2, q, e.grading.shift(2));

  const Subspace z0 = kernel(r.d0), z1 = kernel(r.d1), b1 = image(r.d0), b2 = image(r.d1);
  r.classes[0] = Subquotient::of(z0);
  r.classes[1] = Subquotient(z1, b1);
  r.classes[2] = Subquotient(Subspace::full(n), b2);
  for (std::size_t i = 0; i < 3; ++i) r.h[i] = detail::induced_object(r.terms[i], r.classes[i]);
  return r;
}

inline EllipticRep tate_twist(const EllipticRep& e, int k) {
  return EllipticRep{e.w.shift(-2 * k), e.g0, e.g1, e.g2, power(e.q, k) * e.f, e.q, e.grading.shift(-2 * k)};
}

inline MembershipReport check_AY_membership(const LogPointObject& h) { return check_membership(h); }

/// The map H^0(H) -> H^2(H(1)) induced by the identity of H, on the
/// coordinates of the cohomology classes.
struct LefschetzMap {
  LogPointObject source, target;
  Mat matrix;
  /// Invertible and commuting with gamma_0 and F.
  bool iso_of_sheaves = false;
  /// Also an isomorphism of objects over Y (W and Frobenius weights kept).
  bool iso_in_category = false;
};

inline LefschetzMap lefschetz_map(const EllipticRep& e) {
  validate(e);
  if (!is_nilpotent(e.g1 - Mat::identity(e.dim()))) throw NotUnipotent("Lefschetz map needs a unipotent gamma_1");
  auto h = cohomology(e);
  auto h2 = cohomology(tate_twist(e, 1));
  LefschetzMap out{h.h[0], h2.h[2], Mat(h2.h[2].dim(), h.h[0].dim()), false, false};
  const auto& src = h.classes[0];
  const auto& dst = h2.classes[2];
  for (std::size_t j = 0; j < src.dim(); ++j) {
    Vec c = dst.coords(src.lifts()[j]);
    for (std::size_t i = 0; i < c.size(); ++i) out.matrix(i, j) = c[i];
  }
  const bool square = out.matrix.rows() == out.matrix.cols();
  out.iso_of_sheaves = square && inverse(out.matrix).has_value() && out.matrix * out.source.frob() == out.target.frob() * out.matrix &&
                       out.matrix * out.source.n() == out.target.n() * out.matrix;
  out.iso_in_category = out.iso_of_sheaves && is_isomorphism(out.source, out.target, out.matrix);
  return out;
}

/// The four conditions of the pushforward criterion for gamma_1 unipotent:
/// (i) every H^i is an object over Y, (ii) H^0 is, (iii) the Lefschetz map is
/// an isomorphism of sheaves, (iv) H is pulled back from an object over Y.
struct PushforwardCriterion {
  bool unipotent = true;
  bool i = false, ii = false, iii = false, iv = false;
  std::array<std::string, 3> violations;

  bool agree() const { return !unipotent || (i == ii && ii == iii && iii == iv); }
};

inline PushforwardCriterion check_pushforward_criterion(const EllipticRep& e) {
  validate(e);
  PushforwardCriterion r;
  const Mat id = Mat::identity(e.dim());
  if (!is_nilpotent(e.g1 - id)) {
    r.unipotent = false;
    return r;
  }
  auto h = cohomology(e);
  r.i = true;
  for (std::size_t k = 0; k < 3; ++k) {
    auto m = check_AY_membership(h.h[k]);
    if (!m.ok) {
      r.i = false;
      r.violations[k] = m.violation;
    }
  }
  r.ii = r.violations[0].empty();
  r.iii = lefschetz_map(e).iso_of_sheaves;
  r.iv = e.g1 == id && e.g2 == id && check_membership(detail::y_object(e.w, e.g0, e.f, e.q, e.grading)).ok;
  return r;
}

// builders

/// The constant object: one dimension, trivial actions, weight 0.
inline EllipticRep constant_rep(const Scalar& q) {
  Mat i = Mat::identity(1);
  return EllipticRep{Filtration::pure(1, 0), i, i, i, i, q, Splitting::pure(1, 0)};
}

/// Pullback of an object over the standard log point: T acts trivially.
inline EllipticRep pullback_from_Y(const LogPointObject& o) {
  Mat i = Mat::identity(o.dim());
  EllipticRep e{o.w(), exp_nilpotent(o.n()), i, i, o.frob(), o.q(), o.grading()};
  validate(e);
  return e;
}

inline EllipticRep s1_pullback(const Scalar& q) { return pullback_from_Y(build_Sr(1, q)); }

/// Two dimensions, gamma_1 f2 = f2 + f1, everything else trivial, W pure 0.
inline EllipticRep unipotent_block_rep(const Scalar& q) {
  Mat i = Mat::identity(2);
  EllipticRep e{Filtration::pure(2, 0), i, Mat{{1, 1}, {0, 1}}, i, i, q, Splitting::pure(2, 0)};
  validate(e);
  return e;
}

/// One dimension with gamma_1 = c and trivial remaining actions.
inline EllipticRep character_rep(const Scalar& c, const Scalar& q) {
  Mat i = Mat::identity(1);
  EllipticRep e{Filtration::pure(1, 0), i, Mat::scalar(1, c), i, i, q, Splitting::pure(1, 0)};
  validate(e);
  return e;
}

inline EllipticRep direct_sum(const EllipticRep& a, const EllipticRep& b) {
  if (a.q != b.q) throw PreconditionViolated("representations over different finite fields");
  return EllipticRep{direct_sum(a.w, b.w),     block_diag(a.g0, b.g0), block_diag(a.g1, b.g1), block_diag(a.g2, b.g2),
                     block_diag(a.f, b.f),     a.q,                    direct_sum(a.grading, b.grading)};
}

inline EllipticRep tensor(const EllipticRep& a, const EllipticRep& b) {
  if (a.q != b.q) throw PreconditionViolated("representations over different finite fields");
  return EllipticRep{tensor(a.w, b.w), kron(a.g0, b.g0), kron(a.g1, b.g1), kron(a.g2, b.g2), kron(a.f, b.f), a.q, tensor(a.grading, b.grading)};
}

}  // namespace mlab

#endif  // MLAB_DIRECT_IMAGES_HPP
