#ifndef MLAB_RATIOS_HPP
#define MLAB_RATIOS_HPP

#include <string>
#include <utility>
#include <vector>

#include "mlab/cones.hpp"

namespace mlab {

/// A value in [0, ∞].
struct Extended {
  bool infinite = false;
  Scalar value;

  static Extended inf() { return {true, Scalar()}; }
  std::string str() const { return infinite ? "inf" : value.str(); }
  friend bool operator==(const Extended& a, const Extended& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
  friend bool operator!=(const Extended& a, const Extended& b) { return !(a == b); }
};

/// A point of the space of ratios in family form: faces σ_1 ⊊ ... ⊊ σ_n = σ
/// of the dual cone with witnesses N_j interior to σ_j, each scaled so that
/// its marker (the first generator vanishing on σ_{j-1} but not on σ_j)
/// evaluates to 1.
class RatioPoint {
public:
  RatioPoint(Cone cone, std::vector<std::size_t> chain, std::vector<Vec> witnesses)
      : cone_(std::move(cone)), chain_(std::move(chain)), n_(std::move(witnesses)) {
    const auto& faces = cone_.faces();
    if (chain_.empty() || chain_.size() != n_.size()) throw PreconditionViolated("ratio point needs one witness per face");
    if (chain_.back() != cone_.full_face()) throw PreconditionViolated("chain must end at the full cone");
    std::size_t prev = cone_.zero_face();
    for (std::size_t j = 0; j < chain_.size(); ++j) {
      if (chain_[j] >= faces.size()) throw PreconditionViolated("face index out of range");
      const Face& lo = faces[prev];
      const Face& hi = faces[chain_[j]];
      if (!hi.contains(lo) || hi == lo) throw PreconditionViolated("chain is not strictly increasing");
      if (n_[j].size() != cone_.rank()) throw DimensionMismatch("witness vs cone rank");
      if (!cone_.is_interior(hi, n_[j])) throw NotInterior("witness " + std::to_string(j + 1) + " is not interior to its face");
      std::size_t marker = cone_.monoid().size();
      for (std::size_t g = 0; g < cone_.monoid().size() && marker == cone_.monoid().size(); ++g)
        if (vanishes(g, prev) && !vanishes(g, chain_[j])) marker = g;
      if (marker == cone_.monoid().size()) throw InternalInconsistency("no marker between consecutive faces");
      markers_.push_back(marker);
      n_[j] = Scalar(1) / detail::dot(cone_.monoid().generator(marker), n_[j]) * n_[j];
      prev = chain_[j];
    }
  }

  const Cone& cone() const { return cone_; }
  std::size_t length() const { return chain_.size(); }
  const std::vector<std::size_t>& chain() const { return chain_; }
  const std::vector<Vec>& witnesses() const { return n_; }
  /// Generator indices f_1..f_n.
  const std::vector<std::size_t>& markers() const { return markers_; }

  /// f lies in the face of the monoid dual to σ_j (j = 0 is the whole monoid).
  bool in_dual_face(const Vec& f, std::size_t j) const {
    if (j == 0) return true;
    for (auto r : cone_.faces()[chain_[j - 1]].rays)
      if (!detail::dot(cone_.rays()[r], f).is_zero()) return false;
    return true;
  }

  Extended evaluate(const Vec& f, const Vec& g) const {
    if (f.size() != cone_.rank() || g.size() != cone_.rank()) throw DimensionMismatch("monoid element vs rank");
    if (mlab::is_zero(f) && mlab::is_zero(g)) throw UndefinedPair("ratio of the unit with itself");
    for (const Vec* e : {&f, &g})
      for (const auto& r : cone_.rays())
        if (detail::dot(r, *e).sign() < 0) throw PreconditionViolated("element outside the monoid's cone");
    for (std::size_t j = 1; j <= length(); ++j) {
      if (in_dual_face(f, j) && in_dual_face(g, j)) continue;
      Scalar nf = detail::dot(n_[j - 1], f), ng = detail::dot(n_[j - 1], g);
      if (ng.is_zero()) return Extended::inf();
      return {false, nf / ng};
    }
    throw InternalInconsistency("ratio evaluation fell through the chain");
  }

  Extended evaluate_generators(std::size_t i, std::size_t j) const {
    return evaluate(cone_.monoid().generator(i), cone_.monoid().generator(j));
  }

  /// Rank one: every generator ratio is finite and positive.
  bool is_rank_one() const {
    const std::size_t m = cone_.monoid().size();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        Extended v = evaluate_generators(i, j);
        if (v.infinite || v.value.sign() <= 0) return false;
      }
    return true;
  }

  /// Same class: same chain and the same values on all generator pairs.
  friend bool operator==(const RatioPoint& a, const RatioPoint& b) {
    if (!(a.cone_ == b.cone_) || a.chain_ != b.chain_) return false;
    const std::size_t m = a.cone_.monoid().size();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (a.evaluate_generators(i, j) != b.evaluate_generators(i, j)) return false;
    return true;
  }

private:
  bool vanishes(std::size_t gen, std::size_t face) const {
    const auto& v = cone_.faces()[face].vanishing;
    return std::find(v.begin(), v.end(), gen) != v.end();
  }

  Cone cone_;
  std::vector<std::size_t> chain_;
  std::vector<Vec> n_;
  std::vector<std::size_t> markers_;
};

/// The rank-one point (σ, N).
inline RatioPoint psi(const Cone& cone, const Vec& n) { return RatioPoint(cone, {cone.full_face()}, {n}); }

/// Weights (y_1..y_n) per step: geometric y_j = base^{step (n - j)}, or constant 1.
struct Schedule {
  enum class Kind { Geometric, Constant };
  Kind kind = Kind::Geometric;
  Scalar base = Scalar(10);

  std::vector<Scalar> weights(std::size_t n, std::size_t step) const {
    std::vector<Scalar> y(n, Scalar(1));
    if (kind == Kind::Constant) return y;
    if (base.sign() <= 0) throw PreconditionViolated("geometric schedule needs a positive base");
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t e = 0; e < step * (n - 1 - j); ++e) y[j] *= base;
    return y;
  }
};

struct RatioPath {
  RatioPoint base;
  Schedule schedule;

  /// ψ(Σ y_j N_j) for the given weights.
  RatioPoint at(const std::vector<Scalar>& y) const {
    if (y.size() != base.length()) throw DimensionMismatch("schedule length vs chain length");
    Vec s(base.cone().rank());
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j].sign() <= 0) throw PreconditionViolated("schedule weights must be positive");
      s = s + y[j] * base.witnesses()[j];
    }
    return psi(base.cone(), s);
  }
};

/// Samples for steps 1..k.
inline std::vector<std::pair<RatioPoint, std::vector<Scalar>>> path_samples(const RatioPath& p, std::size_t k) {
  std::vector<std::pair<RatioPoint, std::vector<Scalar>>> out;
  for (std::size_t step = 1; step <= k; ++step) {
    auto y = p.schedule.weights(p.base.length(), step);
    out.emplace_back(p.at(y), y);
  }
  return out;
}

}  // namespace mlab

#endif  // MLAB_RATIOS_HPP
