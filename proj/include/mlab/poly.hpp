#ifndef MLAB_POLY_HPP
#define MLAB_POLY_HPP

#include <utility>
#include <vector>

#include "mlab/linalg.hpp"

namespace mlab {

/// Dense univariate polynomial, coefficients low degree first, no trailing zeros.
class Poly {
public:
  Poly() = default;
  explicit Poly(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Poly constant(const Scalar& s) { return Poly({s}); }
  static Poly x() { return Poly({Scalar(0), Scalar(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Scalar>& coeffs() const { return c_; }
  Scalar coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Scalar(0); }
  Scalar leading() const { return c_.empty() ? Scalar(0) : c_.back(); }

  Scalar operator()(const Scalar& t) const {
    Scalar v;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * t + *it;
    return v;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Scalar> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return Poly(c);
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Scalar> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return Poly(c);
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Scalar> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(c);
  }
  friend Poly operator*(const Scalar& s, const Poly& a) { return Poly::constant(s) * a; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Quotient and remainder.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Scalar> r = c_;
    const int dd = d.degree();
    if (degree() < dd) return {Poly(), *this};
    std::vector<Scalar> q(static_cast<std::size_t>(degree() - dd + 1));
    const Scalar lead_inv = d.leading().inverse();
    for (int k = degree() - dd; k >= 0; --k) {
      Scalar f = r[static_cast<std::size_t>(k + dd)] * lead_inv;
      q[static_cast<std::size_t>(k)] = f;
      if (f.is_zero()) continue;
      for (int i = 0; i <= dd; ++i) r[static_cast<std::size_t>(k + i)] -= f * d.c_[static_cast<std::size_t>(i)];
    }
    return {Poly(q), Poly(r)};
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<Scalar> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Scalar(static_cast<long>(i));
    return Poly(d);
  }

  Poly monic() const {
    if (is_zero()) return *this;
    Scalar inv = leading().inverse();
    std::vector<Scalar> c = c_;
    for (auto& x : c) x *= inv;
    return Poly(c);
  }

private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Scalar> c_;
};

inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

inline bool is_squarefree(const Poly& p) { return gcd(p, p.derivative()).degree() <= 0; }

/// Lagrange interpolation through (xs[i], ys[i]).
inline Poly interpolate(const std::vector<Scalar>& xs, const std::vector<Scalar>& ys) {
  if (xs.size() != ys.size()) throw DimensionMismatch("interpolation nodes vs values");
  Poly out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Poly basis = Poly::constant(1);
    Scalar denom = 1;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      basis = basis * Poly({-xs[j], Scalar(1)});
      denom *= xs[i] - xs[j];
    }
    out = out + (ys[i] / denom) * basis;
  }
  return out;
}

namespace detail {
inline std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain{p, p.derivative()};
  while (!chain.back().is_zero()) {
    Poly r = chain[chain.size() - 2].divmod(chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(Poly::constant(-1) * r);
  }
  return chain;
}
inline int sign_changes(const std::vector<int>& signs) {
  int changes = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}
inline int sign_at_plus_infinity(const Poly& p) { return p.leading().sign(); }
inline int sign_at_minus_infinity(const Poly& p) { return p.degree() % 2 ? -p.leading().sign() : p.leading().sign(); }
}  // namespace detail

/// Number of distinct real roots in the open interval (0, +inf), under the
/// field's real embedding.
inline int count_positive_roots(Poly p) {
  if (p.is_zero()) throw std::domain_error("root count of the zero polynomial");
  while (p.degree() > 0 && p.coeff(0).is_zero()) p = p.divmod(Poly::x()).first;
  if (p.degree() <= 0) return 0;
  auto chain = detail::sturm_chain(p);
  std::vector<int> at0, atinf;
  for (const auto& q : chain) {
    at0.push_back(q.coeff(0).sign());
    atinf.push_back(detail::sign_at_plus_infinity(q));
  }
  return detail::sign_changes(at0) - detail::sign_changes(atinf);
}

/// Number of distinct real roots.
inline int count_real_roots(const Poly& p) {
  if (p.is_zero()) throw std::domain_error("root count of the zero polynomial");
  if (p.degree() <= 0) return 0;
  auto chain = detail::sturm_chain(p);
  std::vector<int> lo, hi;
  for (const auto& q : chain) {
    lo.push_back(detail::sign_at_minus_infinity(q));
    hi.push_back(detail::sign_at_plus_infinity(q));
  }
  return detail::sign_changes(lo) - detail::sign_changes(hi);
}

/// det(x I - m) via Faddeev-LeVerrier.
inline Poly charpoly(const Mat& m) {
  if (!m.square()) throw DimensionMismatch("charpoly of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<Scalar> c(n + 1);
  c[n] = 1;
  Mat mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk + Mat::scalar(n, c[n - k + 1]);
    Mat am = m * mk;
    Scalar tr;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / Scalar(static_cast<long>(k));
  }
  return Poly(c);
}

/// Monic minimal polynomial from the first linear dependency among I, m, m^2, ...
inline Poly minimal_polynomial(const Mat& m) {
  if (!m.square()) throw DimensionMismatch("minimal polynomial of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<Vec> powers;
  Mat p = Mat::identity(n);
  for (std::size_t k = 0; k <= n; ++k) {
    Vec flat;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) flat.push_back(p(i, j));
    if (k > 0) {
      auto sol = solve(Mat::from_columns(n * n, powers), flat);
      if (sol) {
        std::vector<Scalar> c(k + 1);
        for (std::size_t i = 0; i < k; ++i) c[i] = -(*sol)[i];
        c[k] = 1;
        return Poly(c);
      }
    }
    powers.push_back(std::move(flat));
    p = p * m;
  }
  throw InternalInconsistency("no minimal polynomial found");
}

inline Mat evaluate(const Poly& p, const Mat& m) {
  Mat out(m.rows(), m.cols());
  for (int i = p.degree(); i >= 0; --i) out = out * m + Mat::scalar(m.rows(), p.coeff(static_cast<std::size_t>(i)));
  return out;
}

}  // namespace mlab

#endif  // MLAB_POLY_HPP
