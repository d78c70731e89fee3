#ifndef MLAB_LOGPOINT_HPP
#define MLAB_LOGPOINT_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlab/cones.hpp"
#include "mlab/deligne.hpp"
#include "mlab/poly.hpp"

namespace mlab {

inline Scalar power(const Scalar& x, int n) {
  Scalar r(1);
  for (int i = 0; i < std::abs(n); ++i) r *= x;
  return n < 0 ? Scalar(1) / r : r;
}

inline Scalar factorial(int n) {
  Scalar r(1);
  for (int i = 2; i <= n; ++i) r *= Scalar(i);
  return r;
}

namespace detail {

inline bool is_prime_power(const Scalar& q) {
  if (!q.is_rational() || q.rational_part().get_den() != 1 || q.rational_part() < 2) return false;
  mpz_class n = q.rational_part().get_num();
  mpz_class p = 2;
  while (p * p <= n && n % p != 0) ++p;
  if (n % p != 0) return true;  // n itself is prime
  while (n % p == 0) n /= p;
  return n == 1;
}

}  // namespace detail

/// An object over a finite-field log point: a weight-filtered space with the
/// logarithms of the monodromy on the dual rays, a Frobenius F, the field
/// size q and the declared Frobenius weights as a grading.
class LogPointObject {
public:
  LogPointObject() = default;
  LogPointObject(ConeAction action, Mat frob, Scalar q, Splitting grading)
      : action_(std::move(action)), frob_(std::move(frob)), q_(std::move(q)), grading_(std::move(grading)) {
    const std::size_t n = action_.dim();
    if (frob_.rows() != n || frob_.cols() != n || grading_.ambient() != n) throw DimensionMismatch("log point object shapes");
    if (!detail::is_prime_power(q_)) throw PreconditionViolated("q must be a prime power");
  }

  const ConeAction& action() const { return action_; }
  const Cone& cone() const { return action_.cone(); }
  const Filtration& w() const { return action_.w(); }
  const std::vector<Mat>& ray_ops() const { return action_.ray_ops(); }
  const Mat& frob() const { return frob_; }
  const Scalar& q() const { return q_; }
  const Splitting& grading() const { return grading_; }
  std::size_t dim() const { return action_.dim(); }
  bool standard() const { return cone().monoid() == SharpMonoid::free(1); }
  /// The single monodromy logarithm of a standard log point.
  const Mat& n() const {
    if (!standard()) throw NotStandardLogPoint("object does not live over the standard log point");
    return ray_ops()[0];
  }

private:
  ConeAction action_;
  Mat frob_;
  Scalar q_ = Scalar(2);
  Splitting grading_;
};

struct MembershipReport {
  bool ok = false;
  std::string violation;
  std::optional<AdmissibleFamily> family;
  /// Eigenvalue magnitudes were confirmed on every graded part; false when
  /// some part has non-real eigenvalues and only the declared weights are checked.
  bool magnitudes_verified = true;
};

namespace detail {

enum class Magnitude { Ok, Wrong, Unknown };

/// All eigenvalues of f have absolute value q^{-w/2}. Confirmed when the
/// squarefree part of the characteristic polynomial divides x^2 - q^{-w};
/// refuted when all roots are real but it does not divide.
inline Magnitude check_magnitude(const Mat& f, int w, const Scalar& q) {
  if (f.rows() == 0) return Magnitude::Ok;
  Poly p = charpoly(f);
  Poly sq = p.divmod(gcd(p, p.derivative())).first;
  Poly target({-power(q, -w), Scalar(0), Scalar(1)});
  if (target.divmod(sq).second.is_zero()) return Magnitude::Ok;
  if (count_real_roots(sq) == sq.degree()) return Magnitude::Wrong;
  return Magnitude::Unknown;
}

}  // namespace detail

inline MembershipReport check_membership(const LogPointObject& o) {
  MembershipReport rep;
  auto fail = [&](std::string why) {
    rep.ok = false;
    rep.violation = std::move(why);
    return rep;
  };
  const Mat& f = o.frob();
  if (!inverse(f)) return fail("Frobenius is not invertible");
  for (std::size_t i = 0; i < o.ray_ops().size(); ++i) {
    const Mat& n = o.ray_ops()[i];
    if (f * n != o.q() * (n * f)) return fail("F N F^-1 != q N on ray " + std::to_string(i));
    if (!o.grading().has_pure_weight(n, -2)) return fail("ray " + std::to_string(i) + " does not lower Frobenius weights by 2");
  }
  if (!o.grading().preserved_by(f)) return fail("F does not preserve the Frobenius grading");
  if (!preserves(f, o.w())) return fail("F does not preserve W");
  for (const auto& [wt, part] : o.grading().parts()) {
    Mat fp = restrict_to(f, part);
    auto m = detail::check_magnitude(fp, wt, o.q());
    if (m == detail::Magnitude::Wrong) return fail("eigenvalue of the wrong size on Frobenius weight " + std::to_string(wt));
    if (m == detail::Magnitude::Unknown) rep.magnitudes_verified = false;
  }
  auto adm = check_admissible(o.action());
  if (!adm.admissible) return fail("cone action is not admissible: " + adm.failure);
  const AdmissibleFamily& fam = *adm.family;
  if (!splits(o.grading(), fam.top())) return fail("gr^W(sigma) is not of the declared Frobenius weights");
  for (std::size_t t = 0; t < fam.filtrations.size(); ++t) {
    if (!preserves(f, fam.at(t))) return fail("W(" + o.cone().faces()[t].name() + ") is not F-stable");
    for (const auto& n : o.ray_ops())
      if (!preserves(n, fam.at(t))) return fail("W(" + o.cone().faces()[t].name() + ") is not monodromy-stable");
  }
  rep.ok = true;
  rep.family = fam;
  return rep;
}

inline LogPointObject tate_twist(const LogPointObject& o, int n) {
  return LogPointObject(ConeAction(o.cone(), o.w().shift(-2 * n), o.ray_ops()), power(o.q(), n) * o.frob(), o.q(),
                        o.grading().shift(-2 * n));
}

inline LogPointObject direct_sum(const LogPointObject& a, const LogPointObject& b) {
  if (a.q() != b.q()) throw PreconditionViolated("objects over different finite fields");
  return LogPointObject(direct_sum(a.action(), b.action()), block_diag(a.frob(), b.frob()), a.q(), direct_sum(a.grading(), b.grading()));
}

inline LogPointObject tensor(const LogPointObject& a, const LogPointObject& b) {
  if (a.q() != b.q()) throw PreconditionViolated("objects over different finite fields");
  return LogPointObject(tensor(a.action(), b.action()), kron(a.frob(), b.frob()), a.q(), tensor(a.grading(), b.grading()));
}

/// a ⊠ b over N^2 for objects a, b over the standard log point: the first
/// dual ray acts through a, the second through b.
inline LogPointObject external_product(const LogPointObject& a, const LogPointObject& b) {
  if (a.q() != b.q()) throw PreconditionViolated("objects over different finite fields");
  Mat ia = Mat::identity(a.dim()), ib = Mat::identity(b.dim());
  ConeAction act(Cone(SharpMonoid::free(2)), tensor(a.w(), b.w()), {kron(a.n(), ib), kron(ia, b.n())});
  return LogPointObject(act, kron(a.frob(), b.frob()), a.q(), tensor(a.grading(), b.grading()));
}

/// The same object written in the basis given by the columns of p.
inline LogPointObject change_basis(const LogPointObject& o, const Mat& p) {
  Mat pinv = inverse_or_throw(p, "change of basis");
  auto move_f = [&](const Filtration& f) {
    std::map<int, Subspace> s;
    for (const auto& [k, v] : f.steps()) s.emplace(k, apply(p, v));
    return Filtration(f.ambient(), s);
  };
  std::map<int, Subspace> parts;
  for (const auto& [k, v] : o.grading().parts()) parts.emplace(k, apply(p, v));
  std::vector<Mat> ops;
  for (const auto& n : o.ray_ops()) ops.push_back(p * n * pinv);
  return LogPointObject(ConeAction(o.cone(), move_f(o.w()), ops), p * o.frob() * pinv, o.q(), Splitting(o.dim(), parts));
}

/// S_r on the monomials e1^{r-j} e2^j (j = 0..r): N e2 = e1 extended as a
/// derivation, F multiplies the j-th monomial by q^{-j} (Frobenius weight 2j),
/// W pure of weight r.
inline LogPointObject build_Sr(int r, const Scalar& q) {
  if (r < 0) throw PreconditionViolated("S_r needs r >= 0");
  const std::size_t n = static_cast<std::size_t>(r) + 1;
  Mat nn(n, n), f(n, n);
  std::map<int, Subspace> parts;
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0) nn(j - 1, j) = Scalar(static_cast<long>(j));
    f(j, j) = power(q, -static_cast<int>(j));
    parts.emplace(2 * static_cast<int>(j), Subspace(n, {unit_vec(n, j)}));
  }
  return LogPointObject(ConeAction(Cone(SharpMonoid::free(1)), Filtration::pure(n, r), {nn}), f, q, Splitting(n, parts));
}

/// H_r: a Frobenius module of declared pure weight.
struct Part {
  int r = 0;
  Mat f;
  int weight = 0;
};

/// Parts of a W-pure object of weight w together with the subspaces they were cut from.
struct Extraction {
  int w = 0;
  std::vector<Part> parts;
  std::vector<Subspace> spaces;
};

/// ⊕_r S_r ⊗ H_r; every part must satisfy weight + r = w.
inline LogPointObject phi(const Scalar& q, const std::vector<Part>& parts) {
  std::optional<int> w;
  std::size_t dim = 0;
  for (const auto& p : parts) {
    if (!p.f.square()) throw DimensionMismatch("part Frobenius is not square");
    if (w && *w != p.weight + p.r) throw NotPure("parts of different weights");
    w = p.weight + p.r;
    dim += p.f.rows() * static_cast<std::size_t>(p.r + 1);
  }
  Mat nn(dim, dim), f(dim, dim);
  std::map<int, std::vector<Vec>> gens;
  std::size_t off = 0;
  for (const auto& p : parts) {
    LogPointObject s = build_Sr(p.r, q);
    const std::size_t h = p.f.rows(), blk = h * static_cast<std::size_t>(p.r + 1);
    Mat bn = kron(s.n(), Mat::identity(h)), bf = kron(s.frob(), p.f);
    for (std::size_t i = 0; i < blk; ++i)
      for (std::size_t j = 0; j < blk; ++j) {
        nn(off + i, off + j) = bn(i, j);
        f(off + i, off + j) = bf(i, j);
      }
    for (std::size_t i = 0; i < blk; ++i) gens[2 * static_cast<int>(i / h) + p.weight].push_back(unit_vec(dim, off + i));
    off += blk;
  }
  std::map<int, Subspace> ps;
  for (auto& [k, v] : gens) ps.emplace(k, Subspace(dim, v));
  Filtration wf = dim ? Filtration::pure(dim, w.value_or(0)) : Filtration(0);
  return LogPointObject(ConeAction(Cone(SharpMonoid::free(1)), wf, {nn}), f, q, Splitting(dim, ps));
}

namespace detail {

inline int pure_weight(const LogPointObject& o) {
  if (!o.standard()) throw NotStandardLogPoint("classification needs the standard log point");
  auto js = o.w().jumps();
  if (js.size() > 1) throw NotPure("W is not pure");
  return js.empty() ? 0 : js[0];
}

inline Extraction extract(const LogPointObject& o, bool plus) {
  const int w = pure_weight(o);
  Extraction ex;
  ex.w = w;
  const Mat& n = o.n();
  const int top = static_cast<int>(o.dim());
  for (int r = 0; r <= top; ++r) {
    Subspace part = o.grading().part(plus ? w + r : w - r);
    if (part.is_zero()) continue;
    Mat k = plus ? n.pow(static_cast<unsigned>(r + 1)) : n;
    Subspace h = intersect(part, kernel(k));
    if (h.is_zero()) continue;
    Mat f = restrict_to(o.frob(), h);
    if (plus) f = power(o.q(), r) * f;
    ex.parts.push_back({r, f, w - r});
    ex.spaces.push_back(h);
  }
  return ex;
}

}  // namespace detail

/// H_r = ker(N : H^{[w-r]} -> H^{[w-r-2]}).
inline Extraction psi_minus(const LogPointObject& o) { return detail::extract(o, false); }

/// H_r = ker(N^{r+1} : H^{[w+r]} -> H^{[w-r-2]})(r), the primitive parts.
inline Extraction psi_plus(const LogPointObject& o) { return detail::extract(o, true); }

/// phi(psi_plus(o)) -> o, sending e1^i e2^j ⊗ x to j! N^i x.
inline Mat natural_iso(const LogPointObject& o, const Extraction& plus) {
  const Mat& n = o.n();
  std::vector<Vec> cols;
  for (std::size_t k = 0; k < plus.parts.size(); ++k) {
    const Part& p = plus.parts[k];
    Subquotient h = Subquotient::of(plus.spaces[k]);
    for (int j = 0; j <= p.r; ++j) {
      Mat act = factorial(j) * n.pow(static_cast<unsigned>(p.r - j));
      for (const auto& x : h.lifts()) cols.push_back(act * x);
    }
  }
  return Mat::from_columns(o.dim(), cols);
}

/// Matrices X : src -> dst commuting with F and the monodromy and keeping W
/// and the Frobenius grading; returned as a basis of the solution space.
inline std::vector<Mat> hom_space(const LogPointObject& src, const LogPointObject& dst) {
  if (!(src.cone() == dst.cone()) || src.q() != dst.q()) throw ConeMismatch("objects over different log points");
  const std::size_t ns = src.dim(), nt = dst.dim();
  if (ns == 0 || nt == 0) return {};
  std::vector<std::function<void(const Mat&, std::vector<Scalar>&)>> eqs;
  auto flat = [](const Mat& m, std::vector<Scalar>& out) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  };
  eqs.push_back([&](const Mat& x, std::vector<Scalar>& out) { flat(x * src.frob() - dst.frob() * x, out); });
  for (std::size_t r = 0; r < src.ray_ops().size(); ++r)
    eqs.push_back([&, r](const Mat& x, std::vector<Scalar>& out) { flat(x * src.ray_ops()[r] - dst.ray_ops()[r] * x, out); });
  for (int wt : src.w().jumps()) {
    Mat ann = annihilator(dst.w().at(wt));
    Mat basis = Mat::from_columns(ns, src.w().at(wt).basis());
    eqs.push_back([ann, basis, &flat](const Mat& x, std::vector<Scalar>& out) { flat(ann * x * basis, out); });
  }
  for (const auto& [k, part] : src.grading().parts()) {
    Mat ann = annihilator(dst.grading().part(k));
    Mat basis = Mat::from_columns(ns, part.basis());
    eqs.push_back([ann, basis, &flat](const Mat& x, std::vector<Scalar>& out) { flat(ann * x * basis, out); });
  }
  std::vector<Vec> cols;
  for (std::size_t i = 0; i < nt; ++i)
    for (std::size_t j = 0; j < ns; ++j) {
      Mat e(nt, ns);
      e(i, j) = 1;
      Vec c;
      for (const auto& eq : eqs) eq(e, c);
      cols.push_back(c);
    }
  Mat sys = Mat::from_columns(cols[0].size(), cols);
  std::vector<Mat> out;
  Subspace sols = kernel(sys);
  for (const auto& v : sols.basis()) {
    Mat x(nt, ns);
    for (std::size_t i = 0; i < nt; ++i)
      for (std::size_t j = 0; j < ns; ++j) x(i, j) = v[i * ns + j];
    out.push_back(x);
  }
  return out;
}

inline bool is_morphism(const LogPointObject& src, const LogPointObject& dst, const Mat& m) {
  if (m.rows() != dst.dim() || m.cols() != src.dim()) return false;
  if (!(src.cone() == dst.cone()) || src.q() != dst.q()) return false;
  if (m * src.frob() != dst.frob() * m) return false;
  for (std::size_t r = 0; r < src.ray_ops().size(); ++r)
    if (m * src.ray_ops()[r] != dst.ray_ops()[r] * m) return false;
  if (!preserves(m, src.w(), dst.w())) return false;
  for (const auto& [k, part] : src.grading().parts())
    if (!dst.grading().part(k).contains(apply(m, part))) return false;
  return true;
}

inline bool is_isomorphism(const LogPointObject& src, const LogPointObject& dst, const Mat& m) {
  if (!is_morphism(src, dst, m) || !inverse(m)) return false;
  // the inverse must respect W as well
  return preserves(*inverse(m), dst.w(), src.w());
}

/// Some isomorphism src -> dst, searched among small integer combinations of
/// a basis of the hom space; nullopt when none is found.
inline std::optional<Mat> find_isomorphism(const LogPointObject& src, const LogPointObject& dst) {
  if (src.dim() != dst.dim()) return std::nullopt;
  if (src.dim() == 0) return Mat(0, 0);
  auto hom = hom_space(src, dst);
  if (hom.empty()) return std::nullopt;
  // the singular combinations form a proper hypersurface, so coefficients
  // 1..k in a growing box meet its complement quickly when an iso exists
  for (long bound = 1; bound <= 4; ++bound) {
    std::vector<long> c(hom.size(), 1);
    while (true) {
      Mat m(dst.dim(), src.dim());
      for (std::size_t i = 0; i < hom.size(); ++i) m += Scalar(c[i]) * hom[i];
      if (is_isomorphism(src, dst, m)) return m;
      std::size_t k = 0;
      while (k < c.size() && c[k] == bound) c[k++] = 1;
      if (k == c.size()) break;
      ++c[k];
    }
  }
  return std::nullopt;
}

struct LogPointMorphism {
  LogPointObject source, target;
  Mat matrix;
};

namespace detail {

inline LogPointObject induced_object(const LogPointObject& o, const Subquotient& sq) {
  std::vector<Mat> ops;
  for (const auto& n : o.ray_ops()) ops.push_back(induced_map(n, sq));
  return LogPointObject(ConeAction(o.cone(), induce(o.w(), sq), ops), induced_map(o.frob(), sq), o.q(), induce(o.grading(), sq));
}

inline void check_morphism(const LogPointMorphism& m) {
  if (!is_morphism(m.source, m.target, m.matrix)) throw PreconditionViolated("not a morphism of log point objects");
}

/// Strictness for W and every W(τ): m(F_w) = im(m) ∩ F'_w.
inline void check_strict(const LogPointMorphism& m) {
  auto fs = admissible_family(m.source.action());
  auto ft = admissible_family(m.target.action());
  Subspace im = image(m.matrix);
  auto strict = [&](const Filtration& a, const Filtration& b, const std::string& what) {
    std::vector<int> ws = a.jumps();
    for (int w : b.jumps()) ws.push_back(w);
    for (int w : ws)
      if (apply(m.matrix, a.at(w)) != intersect(im, b.at(w))) throw MembershipLost("morphism is not strict for " + what + " at weight " + std::to_string(w));
  };
  strict(m.source.w(), m.target.w(), "W");
  for (std::size_t t = 0; t < fs.filtrations.size(); ++t) strict(fs.at(t), ft.at(t), "W(" + m.source.cone().faces()[t].name() + ")");
}

inline LogPointObject verified(LogPointObject o, const char* what) {
  auto rep = check_membership(o);
  if (!rep.ok) throw MembershipLost(std::string(what) + ": " + rep.violation);
  return o;
}

}  // namespace detail

/// Kernel in the echelon coordinates of ker(m).
inline LogPointObject kernel(const LogPointMorphism& m) {
  detail::check_morphism(m);
  detail::check_strict(m);
  return detail::verified(detail::induced_object(m.source, Subquotient::of(kernel(m.matrix))), "kernel");
}

/// Image in the echelon coordinates of im(m), with W induced from the target.
inline LogPointObject image(const LogPointMorphism& m) {
  detail::check_morphism(m);
  detail::check_strict(m);
  return detail::verified(detail::induced_object(m.target, Subquotient::of(image(m.matrix))), "image");
}

/// Cokernel in the coordinates of target / im(m).
inline LogPointObject cokernel(const LogPointMorphism& m) {
  detail::check_morphism(m);
  detail::check_strict(m);
  return detail::verified(detail::induced_object(m.target, Subquotient(Subspace::full(m.target.dim()), image(m.matrix))), "cokernel");
}

/// Simple: exactly one primitive part, of rank one.
inline bool is_simple(const LogPointObject& o) {
  auto ex = psi_plus(o);
  return ex.parts.size() == 1 && ex.parts[0].f.rows() == 1;
}

/// Semisimple: every primitive part has a diagonalizable Frobenius.
inline bool is_semisimple(const LogPointObject& o) {
  for (const auto& p : psi_plus(o).parts)
    if (!is_squarefree(minimal_polynomial(p.f))) return false;
  return true;
}

/// Decomposition of a member over the standard log point into pure pieces
/// (via the Deligne splitting of W) and their primitive parts, with the
/// assembled isomorphism ⊕_w phi(parts_w) -> o.
struct Classification {
  std::map<int, Extraction> pieces;
  LogPointObject model;
  Mat iso;
};

inline Classification classify(const LogPointObject& o) {
  if (!o.standard()) throw NotStandardLogPoint("classification needs the standard log point");
  auto rep = check_membership(o);
  if (!rep.ok) throw PreconditionViolated("not a member: " + rep.violation);
  const std::size_t n = o.dim();
  Classification c;
  if (n == 0) {
    c.model = phi(o.q(), {});
    c.iso = Mat(0, 0);
    return c;
  }
  Splitting yw = deligne_splitting(o.n(), o.w(), rep.family->top(), o.grading());
  if (!yw.preserved_by(o.n())) throw NotPure("object is not a direct sum of pure objects");
  std::vector<Vec> cols;
  bool first = true;
  for (const auto& [w, part] : yw.parts()) {
    Subquotient sq = Subquotient::of(part);
    LogPointObject piece = detail::induced_object(o, sq);
    Extraction ex = psi_plus(piece);
    Mat local = natural_iso(piece, ex);
    for (std::size_t j = 0; j < local.cols(); ++j) cols.push_back(sq.lift(local.column(j)));
    LogPointObject model = phi(o.q(), ex.parts);
    c.model = first ? model : direct_sum(c.model, model);
    first = false;
    c.pieces.emplace(w, std::move(ex));
  }
  c.iso = Mat::from_columns(n, cols);
  if (!is_isomorphism(c.model, o, c.iso)) throw InternalInconsistency("classification map is not an isomorphism");
  return c;
}

}  // namespace mlab

#endif  // MLAB_LOGPOINT_HPP
