#ifndef MLAB_DELIGNE_HPP
#define MLAB_DELIGNE_HPP

#include <optional>
#include <string>
#include <vector>

#include "mlab/cones.hpp"
#include "mlab/monodromy.hpp"
#include "mlab/parallel.hpp"

namespace mlab {

inline Mat ad(const Mat& a, const Mat& x) { return a * x - x * a; }

inline Mat ad_power(const Mat& a, Mat x, int k) {
  for (int i = 0; i < k; ++i) x = ad(a, x);
  return x;
}

/// Whether y_prime is the Deligne splitting of w for (n, y): it splits w, is
/// bigraded with y, and every component N_d of N (y_prime-degree -d, d >= 1)
/// is killed by ad(N_0)^{d-1}.
inline std::string deligne_defect(const Mat& n, const Filtration& w, const Splitting& y_prime, const Splitting& y) {
  if (!splits(y_prime, w)) return "does not split W";
  if (!compatible(y_prime, y)) return "not bigraded with Y";
  const Mat n0 = y_prime.component(n, 0);
  const int span = w.max_weight() - w.min_weight();
  for (int d = 1; d <= span; ++d) {
    Mat nd = y_prime.component(n, -d);
    if (!ad_power(n0, nd, d - 1).is_zero()) return "component of degree -" + std::to_string(d) + " is not primitive";
  }
  for (int d = 1; d <= span; ++d)
    if (!y_prime.component(n, d).is_zero()) return "N raises the W-degree";
  return {};
}

/// The splitting Y' of W compatible with Y for which the off-degree parts of N
/// are primitive. Starts from any bigraded splitting and corrects it by
/// exp(X_1 + X_2 + ...), X_d of W-degree -d and Y-degree 0, solving
/// ad(N_0)^d X_d = -ad(N_0)^{d-1} C_d one degree at a time.
inline Splitting deligne_splitting(const Mat& n, const Filtration& w, const Filtration& m, const Splitting& y) {
  const std::size_t dim = n.rows();
  if (!n.square() || w.ambient() != dim || m.ambient() != dim || y.ambient() != dim)
    throw DimensionMismatch("deligne splitting shapes");
  if (!is_nilpotent(n) || !preserves(n, w)) throw PreconditionViolated("N must be nilpotent and preserve W");
  if (!verify_rmf(w, n, m)) throw PreconditionViolated("M is not the relative monodromy filtration of N");
  if (!y.has_pure_weight(n, -2)) throw PreconditionViolated("N is not of weight -2 for Y");
  if (!compatible(y, w)) throw PreconditionViolated("Y is not compatible with W");
  if (!splits(y, m)) throw PreconditionViolated("Y does not split M");
  if (dim == 0) return Splitting(0);

  // initial bigraded basis: complements of W_{a-1} ∩ Y_k in W_a ∩ Y_k
  std::vector<Vec> cols;
  std::vector<int> lw, lk;
  for (int a : w.jumps())
    for (const auto& [k, part] : y.parts()) {
      Subquotient c(intersect(w.at(a), part), intersect(w.at(a - 1), part));
      for (const auto& v : c.lifts()) {
        cols.push_back(v);
        lw.push_back(a);
        lk.push_back(k);
      }
    }
  if (cols.size() != dim) throw InternalInconsistency("bigraded basis has the wrong size");
  const Mat p = Mat::from_columns(dim, cols);
  const Mat pinv = inverse_or_throw(p, "bigraded basis");
  const Mat nb = pinv * n * p;

  auto degree_part = [&](const Mat& x, int d) {
    Mat out(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        if (lw[i] - lw[j] == d) out(i, j) = x(i, j);
    return out;
  };
  const Mat n0 = degree_part(nb, 0);

  Mat x(dim, dim);
  const int span = w.max_weight() - w.min_weight();
  for (int d = 1; d <= span; ++d) {
    std::vector<std::pair<std::size_t, std::size_t>> unknowns, equations;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        if (lw[i] - lw[j] != -d) continue;
        if (lk[i] == lk[j]) unknowns.emplace_back(i, j);
        if (lk[i] - lk[j] == -2 * d) equations.emplace_back(i, j);
      }
    if (unknowns.size() != equations.size()) throw InternalInconsistency("correction system is not square");
    if (unknowns.empty()) continue;
    const Mat g = exp_nilpotent(x);
    const Mat ginv = exp_nilpotent(Scalar(-1) * x);
    const Mat cd = degree_part(ginv * nb * g, -d);
    const Mat target = Scalar(-1) * ad_power(n0, cd, d - 1);
    Mat lin(equations.size(), unknowns.size());
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      Mat e(dim, dim);
      e(unknowns[u].first, unknowns[u].second) = 1;
      Mat img = ad_power(n0, e, d);
      for (std::size_t q = 0; q < equations.size(); ++q) lin(q, u) = img(equations[q].first, equations[q].second);
    }
    Vec rhs(equations.size());
    for (std::size_t q = 0; q < equations.size(); ++q) rhs[q] = target(equations[q].first, equations[q].second);
    if (kernel(lin).dim() != 0) throw InternalInconsistency("correction system is singular");
    auto sol = solve(lin, rhs);
    if (!sol) throw InternalInconsistency("correction system has no solution");
    for (std::size_t u = 0; u < unknowns.size(); ++u) x(unknowns[u].first, unknowns[u].second) = (*sol)[u];
  }

  const Mat g = p * exp_nilpotent(x);
  std::map<int, std::vector<Vec>> gens;
  for (std::size_t i = 0; i < dim; ++i) gens[lw[i]].push_back(g.column(i));
  std::map<int, Subspace> parts;
  for (auto& [a, v] : gens) parts.emplace(a, Subspace(dim, v));
  Splitting out(dim, parts);
  if (auto why = deligne_defect(n, w, out, y); !why.empty()) throw InternalInconsistency("Deligne splitting verification: " + why);
  return out;
}

/// (V, W^0..W^n, N_1..N_n, Y); n[j-1] holds N_j.
struct DeligneSystem {
  std::vector<Filtration> w;
  std::vector<Mat> n;
  Splitting y;

  std::size_t length() const { return n.size(); }
  std::size_t dim() const { return y.ambient(); }
  const Mat& op(std::size_t j) const { return n.at(j - 1); }
};

struct Violation {
  std::string what;
};

/// Checks every defining clause exactly; returns the first violation found.
/// The restriction clause is checked on W^i_w for i < j (and on V).
inline std::optional<Violation> validate_system(const DeligneSystem& s) {
  const std::size_t len = s.length();
  const std::size_t dim = s.dim();
  if (s.w.size() != len + 1) return Violation{"expected " + std::to_string(len + 1) + " filtrations"};
  for (const auto& f : s.w)
    if (f.ambient() != dim) return Violation{"filtration in the wrong ambient space"};
  for (const auto& m : s.n)
    if (m.rows() != dim || m.cols() != dim) return Violation{"operator of the wrong shape"};
  for (std::size_t j = 1; j <= len; ++j) {
    if (!is_nilpotent(s.op(j))) return Violation{"N_" + std::to_string(j) + " is not nilpotent"};
    for (std::size_t i = 1; i < j; ++i)
      if (!commute(s.op(i), s.op(j))) return Violation{"N_" + std::to_string(i) + " and N_" + std::to_string(j) + " do not commute"};
  }
  for (std::size_t i = 1; i <= len; ++i)
    for (std::size_t j = 0; j <= len; ++j) {
      if (!preserves(s.op(i), s.w[j])) return Violation{"N_" + std::to_string(i) + " does not preserve W^" + std::to_string(j)};
      if (i <= j && !preserves(s.op(i), s.w[j], -2))
        return Violation{"N_" + std::to_string(i) + " does not lower W^" + std::to_string(j) + " by 2"};
    }
  struct Task {
    std::size_t i, j;
    std::optional<int> wt;
  };
  std::vector<Task> tasks;
  for (std::size_t j = 1; j <= len; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      tasks.push_back({i, j, std::nullopt});
      for (int a : s.w[i].jumps()) tasks.push_back({i, j, a});
    }
  std::vector<char> ok(tasks.size(), 1);
  parallel_for(tasks.size(), [&](std::size_t t) {
    const Task& k = tasks[t];
    Subspace u = k.wt ? s.w[k.i].at(*k.wt) : Subspace::full(dim);
    ok[t] = verify_rmf_within(u, s.w[k.j - 1], s.op(k.j), s.w[k.j]);
  });
  for (std::size_t t = 0; t < tasks.size(); ++t)
    if (!ok[t]) {
      const Task& k = tasks[t];
      std::string where = k.wt ? "W^" + std::to_string(k.i) + "_" + std::to_string(*k.wt) : std::string("V");
      return Violation{"W^" + std::to_string(k.j) + " is not the relative monodromy filtration of N_" + std::to_string(k.j) +
                       " on " + where};
    }
  if (!splits(s.y, s.w[len])) return Violation{"Y does not split W^" + std::to_string(len)};
  for (std::size_t j = 1; j <= len; ++j)
    if (!s.y.has_pure_weight(s.op(j), -2)) return Violation{"N_" + std::to_string(j) + " is not of weight -2 for Y"};
  for (std::size_t j = 0; j <= len; ++j)
    if (!compatible(s.y, s.w[j])) return Violation{"Y is not compatible with W^" + std::to_string(j)};
  return std::nullopt;
}

/// Splittings Y^0..Y^n (the torus gradings tau_j are the gradings Y^j) and
/// the degree-0 operators; nhat[j-1] holds N-hat_j.
struct SL2Data {
  std::vector<Splitting> y;
  std::vector<Mat> nhat;

  const Splitting& tau(std::size_t j) const { return y.at(j); }
  const Mat& hat(std::size_t j) const { return nhat.at(j - 1); }
  Mat limit() const {
    Mat s(y.front().ambient(), y.front().ambient());
    for (const auto& m : nhat) s += m;
    return s;
  }
};

inline SL2Data build_sl2_data(const DeligneSystem& s) {
  if (auto v = validate_system(s)) throw PreconditionViolated("not a Deligne system: " + v->what);
  const std::size_t len = s.length();
  SL2Data out;
  out.y.assign(len + 1, s.y);
  for (std::size_t j = len; j-- > 0;) out.y[j] = deligne_splitting(s.op(j + 1), s.w[j], s.w[j + 1], out.y[j + 1]);
  for (std::size_t j = 1; j <= len; ++j) {
    Mat x = s.op(j);
    for (std::size_t i = 1; i < j; ++i) x = out.y[i].component(x, 0);
    out.nhat.push_back(x);
  }
  for (std::size_t j = 0; j <= len; ++j)
    if (!splits(out.y[j], s.w[j])) throw InternalInconsistency("Y^" + std::to_string(j) + " does not split W^" + std::to_string(j));
  for (std::size_t j = 1; j <= len; ++j) {
    for (std::size_t i = 1; i <= len; ++i)
      if (!out.y[i].has_pure_weight(out.hat(j), i < j ? 0 : -2))
        throw InternalInconsistency("N-hat_" + std::to_string(j) + " has the wrong weight for Y^" + std::to_string(i));
    for (std::size_t i = 1; i < j; ++i)
      if (!commute(out.hat(i), out.hat(j))) throw InternalInconsistency("N-hat operators do not commute");
  }
  return out;
}

/// W^j = W(chain[j]), N_j = h(picks[j-1]) with picks[j-1] interior to chain[j].
inline DeligneSystem system_from_admissible(const ConeAction& a, const AdmissibleFamily& fam, const std::vector<std::size_t>& chain,
                                            const std::vector<Vec>& picks, const Splitting& y) {
  if (!(fam.cone == a.cone())) throw PreconditionViolated("family and action live on different cones");
  if (chain.empty() || picks.size() + 1 != chain.size()) throw PreconditionViolated("chain and picks have inconsistent lengths");
  const auto& faces = a.cone().faces();
  for (auto f : chain)
    if (f >= faces.size()) throw PreconditionViolated("face index out of range");
  DeligneSystem s;
  s.y = y;
  s.w.push_back(fam.at(chain[0]));
  for (std::size_t j = 1; j < chain.size(); ++j) {
    const Face& lo = faces[chain[j - 1]];
    const Face& hi = faces[chain[j]];
    if (!hi.contains(lo) || hi == lo) throw PreconditionViolated("chain is not strictly increasing");
    if (!a.cone().is_interior(hi, picks[j - 1])) throw PreconditionViolated("pick " + std::to_string(j) + " is not interior to its face");
    s.w.push_back(fam.at(chain[j]));
    s.n.push_back(a.at(picks[j - 1]));
  }
  if (y.ambient() != a.dim()) throw DimensionMismatch("Y in the wrong ambient space");
  if (!splits(y, s.w.back())) throw PreconditionViolated("Y does not split the top filtration");
  for (const auto& m : s.n)
    if (!y.has_pure_weight(m, -2)) throw PreconditionViolated("an operator is not of weight -2 for Y");
  for (const auto& f : s.w)
    if (!compatible(y, f)) throw PreconditionViolated("Y is not compatible with the chain");
  if (auto v = validate_system(s)) throw ValidationFailed(v->what);
  return s;
}

namespace detail {

inline void check_morphism(const DeligneSystem& src, const DeligneSystem& dst, const Mat& phi) {
  if (phi.rows() != dst.dim() || phi.cols() != src.dim() || src.length() != dst.length())
    throw DimensionMismatch("morphism of Deligne systems shapes");
  for (std::size_t j = 1; j <= src.length(); ++j)
    if (phi * src.op(j) != dst.op(j) * phi) throw PreconditionViolated("morphism does not commute with N_" + std::to_string(j));
  for (std::size_t j = 0; j < src.w.size(); ++j)
    if (!preserves(phi, src.w[j], dst.w[j])) throw PreconditionViolated("morphism does not preserve W^" + std::to_string(j));
  for (const auto& [k, part] : src.y.parts()) {
    Subspace img = apply(phi, part);
    if (!dst.y.part(k).contains(img)) throw PreconditionViolated("morphism does not preserve Y-weights");
  }
}

inline DeligneSystem induced_system(const DeligneSystem& s, const Subquotient& sq) {
  DeligneSystem out;
  for (const auto& f : s.w) out.w.push_back(induce(f, sq));
  for (const auto& m : s.n) out.n.push_back(induced_map(m, sq));
  out.y = induce(s.y, sq);
  if (auto v = validate_system(out)) throw ValidationFailed("induced system: " + v->what);
  return out;
}

}  // namespace detail

/// Kernel, in the echelon coordinates of ker(phi).
inline DeligneSystem kernel(const DeligneSystem& src, const DeligneSystem& dst, const Mat& phi) {
  detail::check_morphism(src, dst, phi);
  return detail::induced_system(src, Subquotient::of(kernel(phi)));
}

/// Cokernel, in the coordinates of target / im(phi).
inline DeligneSystem cokernel(const DeligneSystem& src, const DeligneSystem& dst, const Mat& phi) {
  detail::check_morphism(src, dst, phi);
  return detail::induced_system(dst, Subquotient(Subspace::full(dst.dim()), image(phi)));
}

}  // namespace mlab

#endif  // MLAB_DELIGNE_HPP
