#ifndef MLAB_LINALG_HPP
#define MLAB_LINALG_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mlab/error.hpp"
#include "mlab/scalar.hpp"

namespace mlab {

using Vec = std::vector<Scalar>;

class Mat {
public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), e_(rows * cols) {}
  Mat(std::initializer_list<std::initializer_list<Scalar>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    e_.reserve(r_ * c_);
    for (const auto& row : rows) {
      if (row.size() != c_) throw DimensionMismatch("ragged matrix literal");
      e_.insert(e_.end(), row.begin(), row.end());
    }
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Mat scalar(std::size_t n, const Scalar& s) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
    return m;
  }
  static Mat from_columns(std::size_t rows, const std::vector<Vec>& cols) {
    Mat m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw DimensionMismatch("column length");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }
  static Mat from_rows(std::size_t cols, const std::vector<Vec>& rows) {
    Mat m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionMismatch("row length");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool square() const { return r_ == c_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return e_[i * c_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return e_[i * c_ + j]; }

  Vec column(std::size_t j) const {
    Vec v(r_);
    for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  Vec row(std::size_t i) const { return Vec(e_.begin() + i * c_, e_.begin() + (i + 1) * c_); }

  bool is_zero() const {
    return std::all_of(e_.begin(), e_.end(), [](const Scalar& s) { return s.is_zero(); });
  }

  Mat transpose() const {
    Mat t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Mat& operator+=(const Mat& o) {
    same_shape(o);
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    same_shape(o);
    for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
    return *this;
  }
  Mat& operator*=(const Scalar& s) {
    for (auto& x : e_) x *= s;
    return *this;
  }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator-(Mat a) {
    for (auto& x : a.e_) x = -x;
    return a;
  }
  friend Mat operator*(Mat a, const Scalar& s) { return a *= s; }
  friend Mat operator*(const Scalar& s, Mat a) { return a *= s; }

  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.c_ != b.r_) throw DimensionMismatch("matrix product " + a.shape() + " * " + b.shape());
    Mat p(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k) {
        const Scalar& x = a(i, k);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < b.c_; ++j)
          if (!b(k, j).is_zero()) p(i, j) += x * b(k, j);
      }
    return p;
  }
  friend Vec operator*(const Mat& a, const Vec& v) {
    if (a.c_ != v.size()) throw DimensionMismatch("matrix-vector product");
    Vec out(a.r_);
    for (std::size_t i = 0; i < a.r_; ++i)
      for (std::size_t k = 0; k < a.c_; ++k)
        if (!a(i, k).is_zero() && !v[k].is_zero()) out[i] += a(i, k) * v[k];
    return out;
  }

  friend bool operator==(const Mat& a, const Mat& b) { return a.r_ == b.r_ && a.c_ == b.c_ && a.e_ == b.e_; }
  friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

  Mat pow(unsigned k) const {
    if (!square()) throw DimensionMismatch("power of non-square matrix");
    Mat out = identity(r_), base = *this;
    while (k) {
      if (k & 1u) out = out * base;
      k >>= 1u;
      if (k) base = base * base;
    }
    return out;
  }

  std::string shape() const { return std::to_string(r_) + "x" + std::to_string(c_); }

  std::vector<double> to_double() const {
    std::vector<double> d(e_.size());
    for (std::size_t k = 0; k < e_.size(); ++k) d[k] = e_[k].real_value();
    return d;
  }

private:
  void same_shape(const Mat& o) const {
    if (r_ != o.r_ || c_ != o.c_) throw DimensionMismatch("shape " + shape() + " vs " + o.shape());
  }

  std::size_t r_ = 0, c_ = 0;
  std::vector<Scalar> e_;
};

/// [[a, b], [c, d]] with exact entries.
inline std::string to_string(const Mat& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += i ? ", [" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) out += (j ? ", " : "") + m(i, j).str();
    out += "]";
  }
  return out + "]";
}

inline std::ostream& operator<<(std::ostream& os, const Mat& m) { return os << to_string(m); }

inline Vec zero_vec(std::size_t n) { return Vec(n); }
inline Vec unit_vec(std::size_t n, std::size_t i) {
  Vec v(n);
  v[i] = 1;
  return v;
}
inline bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}
inline Vec operator+(Vec a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector sum");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
inline Vec operator-(Vec a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector difference");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}
inline Vec operator*(const Scalar& s, Vec a) {
  for (auto& x : a) x *= s;
  return a;
}

/// In-place reduced row echelon form; returns pivot columns.
inline std::vector<std::size_t> rref_in_place(Mat& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Scalar inv = m(r, c).inverse();
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Scalar f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Mat m) { return rref_in_place(m).size(); }

/// Subspace of K^n stored as the nonzero rows of its reduced row echelon form.
class Subspace {
public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : n_(ambient) {}
  Subspace(std::size_t ambient, const std::vector<Vec>& spanning) : n_(ambient) {
    Mat m = Mat::from_rows(ambient, spanning);
    canonicalize(m);
  }

  static Subspace full(std::size_t n) {
    Subspace s(n);
    for (std::size_t i = 0; i < n; ++i) s.basis_.push_back(unit_vec(n, i));
    for (std::size_t i = 0; i < n; ++i) s.pivots_.push_back(i);
    return s;
  }
  static Subspace span_columns(const Mat& m) {
    Mat t = m.transpose();
    Subspace s(m.rows());
    s.canonicalize(t);
    return s;
  }

  std::size_t ambient() const { return n_; }
  std::size_t dim() const { return basis_.size(); }
  bool is_zero() const { return basis_.empty(); }
  bool is_full() const { return basis_.size() == n_; }
  const std::vector<Vec>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  Mat basis_matrix() const { return Mat::from_columns(n_, basis_); }

  /// v minus its reduction against the echelon basis; zero iff v lies in the subspace.
  Vec residue(const Vec& v) const {
    if (v.size() != n_) throw DimensionMismatch("vector vs subspace ambient");
    Vec w = v;
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      const Scalar c = w[pivots_[k]];
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (!basis_[k][j].is_zero()) w[j] -= c * basis_[k][j];
    }
    return w;
  }
  bool contains(const Vec& v) const { return mlab::is_zero(residue(v)); }
  bool contains(const Subspace& o) const {
    check(o);
    return std::all_of(o.basis_.begin(), o.basis_.end(), [&](const Vec& v) { return contains(v); });
  }

  friend bool operator==(const Subspace& a, const Subspace& b) { return a.n_ == b.n_ && a.basis_ == b.basis_; }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

  void check(const Subspace& o) const {
    if (o.n_ != n_) throw DimensionMismatch("subspaces of different ambient spaces");
  }

private:
  void canonicalize(Mat& m) {
    pivots_ = rref_in_place(m);
    basis_.clear();
    for (std::size_t i = 0; i < pivots_.size(); ++i) basis_.push_back(m.row(i));
  }

  std::size_t n_ = 0;
  std::vector<Vec> basis_;
  std::vector<std::size_t> pivots_;
};

inline Subspace kernel(const Mat& m) {
  Mat r = m;
  auto piv = rref_in_place(r);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<Vec> gens;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_piv[f]) continue;
    Vec v(m.cols());
    v[f] = 1;
    for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = -r(k, f);
    gens.push_back(std::move(v));
  }
  return Subspace(m.cols(), gens);
}

inline Subspace image(const Mat& m) { return Subspace::span_columns(m); }

inline Subspace sum(const Subspace& a, const Subspace& b) {
  a.check(b);
  std::vector<Vec> g = a.basis();
  g.insert(g.end(), b.basis().begin(), b.basis().end());
  return Subspace(a.ambient(), g);
}

/// Rows spanning the annihilator of s in the dual space.
inline Mat annihilator(const Subspace& s) {
  Mat m = Mat::from_rows(s.ambient(), s.basis());
  if (s.is_zero()) m = Mat(0, s.ambient());
  return Mat::from_rows(s.ambient(), kernel(m).basis());
}

inline Subspace intersect(const Subspace& a, const Subspace& b) {
  a.check(b);
  if (a.is_zero() || b.is_full()) return a;
  if (b.is_zero() || a.is_full()) return b;
  // residues modulo b are linear in the coefficients over a's basis, so
  // their linear relations span the intersection
  const std::size_t n = a.ambient();
  std::vector<Vec> res;
  bool inside = true;
  for (const auto& v : a.basis()) {
    res.push_back(b.residue(v));
    inside = inside && is_zero(res.back());
  }
  if (inside) return a;
  Subspace rel = kernel(Mat::from_columns(n, res));
  std::vector<Vec> out;
  for (const auto& c : rel.basis()) {
    Vec x(n);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (!c[i].is_zero())
        for (std::size_t j = 0; j < n; ++j) x[j] += c[i] * a.basis()[i][j];
    out.push_back(std::move(x));
  }
  return Subspace(n, out);
}

/// Image of a subspace under m.
inline Subspace apply(const Mat& m, const Subspace& s) {
  if (m.cols() != s.ambient()) throw DimensionMismatch("apply: map vs subspace");
  std::vector<Vec> g;
  for (const auto& v : s.basis()) g.push_back(m * v);
  return Subspace(m.rows(), g);
}

/// {v : m v in s}.
inline Subspace preimage(const Mat& m, const Subspace& s) {
  if (m.rows() != s.ambient()) throw DimensionMismatch("preimage: map vs subspace");
  Mat a = annihilator(s);
  if (a.rows() == 0) return Subspace::full(m.cols());
  return kernel(a * m);
}

/// Some x with m x = v, or nullopt.
inline std::optional<Vec> solve(const Mat& m, const Vec& v) {
  if (m.rows() != v.size()) throw DimensionMismatch("solve: rhs length");
  Mat aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = v[i];
  }
  auto piv = rref_in_place(aug);
  if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
  Vec x(m.cols());
  for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = aug(k, m.cols());
  return x;
}

inline std::optional<Mat> inverse(const Mat& m) {
  if (!m.square()) throw DimensionMismatch("inverse of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return Mat(0, 0);
  Mat aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = rref_in_place(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Mat inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

inline Scalar det(Mat m) {
  if (!m.square()) throw DimensionMismatch("determinant of non-square matrix");
  const std::size_t n = m.rows();
  Scalar d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return Scalar(0);
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    Scalar inv = m(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      Scalar f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j)
        if (!m(c, j).is_zero()) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

inline Mat inverse_or_throw(const Mat& m, const char* what = "matrix") {
  auto inv = inverse(m);
  if (!inv) throw PreconditionViolated(std::string(what) + " is not invertible");
  return *inv;
}

/// A subquotient num/den of K^n with den inside num. Its canonical basis is
/// the set of rows of num's echelon basis that are independent modulo den,
/// taken in order.
class Subquotient {
public:
  Subquotient() = default;
  Subquotient(Subspace num, Subspace den) : num_(std::move(num)), den_(std::move(den)) {
    num_.check(den_);
    if (!num_.contains(den_)) throw DimensionMismatch("subquotient denominator not inside numerator");
    std::vector<Vec> acc = den_.basis();
    std::size_t rank_acc = den_.dim();
    for (const auto& v : num_.basis()) {
      acc.push_back(v);
      if (Subspace(num_.ambient(), acc).dim() > rank_acc) {
        ++rank_acc;
        lifts_.push_back(v);
      } else {
        acc.pop_back();
      }
    }
    std::vector<Vec> cols = lifts_;
    cols.insert(cols.end(), den_.basis().begin(), den_.basis().end());
    solver_ = Mat::from_columns(num_.ambient(), cols);
  }
  static Subquotient of(const Subspace& s) { return Subquotient(s, Subspace(s.ambient())); }

  std::size_t dim() const { return lifts_.size(); }
  std::size_t ambient() const { return num_.ambient(); }
  const Subspace& num() const { return num_; }
  const Subspace& den() const { return den_; }
  const std::vector<Vec>& lifts() const { return lifts_; }
  Mat lift_matrix() const { return Mat::from_columns(ambient(), lifts_); }

  /// Coordinates of the class of v (v must lie in num).
  Vec coords(const Vec& v) const {
    auto x = solve(solver_, v);
    if (!x) throw DimensionMismatch("vector not in subquotient numerator");
    return Vec(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(dim()));
  }
  Vec lift(const Vec& c) const {
    Vec v(ambient());
    for (std::size_t i = 0; i < dim(); ++i)
      if (!c[i].is_zero()) v = v + c[i] * lifts_[i];
    return v;
  }
  /// Subspace of coordinates of (s ∩ num + den) / den.
  Subspace coords_of(const Subspace& s) const {
    Subspace t = sum(intersect(s, num_), den_);
    std::vector<Vec> g;
    for (const auto& v : t.basis()) g.push_back(coords(v));
    return Subspace(dim(), g);
  }
  /// Preimage in the ambient space of a coordinate subspace.
  Subspace lift_subspace(const Subspace& c) const {
    std::vector<Vec> g = den_.basis();
    for (const auto& v : c.basis()) g.push_back(lift(v));
    return Subspace(ambient(), g);
  }

private:
  Subspace num_, den_;
  std::vector<Vec> lifts_;
  Mat solver_;
};

/// Matrix of m : src -> dst between subquotients (m must map num to num and den to den).
inline Mat induced_map(const Mat& m, const Subquotient& src, const Subquotient& dst) {
  if (m.cols() != src.ambient() || m.rows() != dst.ambient()) throw DimensionMismatch("induced_map shapes");
  for (const auto& v : src.den().basis())
    if (!dst.den().contains(m * v)) throw PreconditionViolated("map does not send denominator into denominator");
  Mat out(dst.dim(), src.dim());
  for (std::size_t j = 0; j < src.dim(); ++j) {
    Vec img = m * src.lifts()[j];
    if (!dst.num().contains(img)) throw PreconditionViolated("map does not send numerator into numerator");
    Vec c = dst.coords(img);
    for (std::size_t i = 0; i < dst.dim(); ++i) out(i, j) = c[i];
  }
  return out;
}

inline Mat induced_map(const Mat& m, const Subquotient& sq) { return induced_map(m, sq, sq); }

inline bool is_nilpotent(const Mat& m) {
  if (!m.square()) throw DimensionMismatch("nilpotency of non-square matrix");
  return m.pow(static_cast<unsigned>(m.rows())).is_zero();
}

inline bool commute(const Mat& a, const Mat& b) { return a * b == b * a; }

inline Mat exp_nilpotent(const Mat& x) {
  if (!is_nilpotent(x)) throw NotNilpotent("exp of a non-nilpotent matrix");
  const std::size_t n = x.rows();
  Mat out = Mat::identity(n), term = Mat::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    term = term * x * Scalar(Rational(1, static_cast<long>(k)));
    if (term.is_zero()) break;
    out += term;
  }
  return out;
}

inline Mat log_unipotent(const Mat& u) {
  const std::size_t n = u.rows();
  Mat x = u - Mat::identity(n);
  if (!is_nilpotent(x)) throw NotUnipotent("log of a non-unipotent matrix");
  Mat out(n, n), term = Mat::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    term = term * x;
    if (term.is_zero()) break;
    Scalar c(Rational(k % 2 ? 1 : -1, static_cast<long>(k)));
    out += term * c;
  }
  return out;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).is_zero()) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t r = 0; r < b.cols(); ++r) k(i * b.rows() + p, j * b.cols() + r) = a(i, j) * b(p, r);
    }
  return k;
}

inline Vec kron(const Vec& a, const Vec& b) {
  Vec v(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) v[i * b.size() + j] = a[i] * b[j];
  return v;
}

inline Mat block_diag(const Mat& a, const Mat& b) {
  Mat m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

/// Embeds subspaces of the two summands into their direct sum.
inline Subspace direct_sum(const Subspace& a, const Subspace& b) {
  const std::size_t n = a.ambient() + b.ambient();
  std::vector<Vec> g;
  for (const auto& v : a.basis()) {
    Vec w(n);
    std::copy(v.begin(), v.end(), w.begin());
    g.push_back(std::move(w));
  }
  for (const auto& v : b.basis()) {
    Vec w(n);
    std::copy(v.begin(), v.end(), w.begin() + static_cast<std::ptrdiff_t>(a.ambient()));
    g.push_back(std::move(w));
  }
  return Subspace(n, g);
}

inline Subspace tensor(const Subspace& a, const Subspace& b) {
  std::vector<Vec> g;
  for (const auto& u : a.basis())
    for (const auto& v : b.basis()) g.push_back(kron(u, v));
  return Subspace(a.ambient() * b.ambient(), g);
}

/// Generalized eigenspaces ker (m - c)^n for the supplied roots; the roots must
/// account for the whole space.
inline std::vector<std::pair<Scalar, Subspace>> generalized_eigenspaces(const Mat& m, const std::vector<Scalar>& roots) {
  if (!m.square()) throw DimensionMismatch("eigenspaces of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<Scalar> distinct;
  for (const auto& r : roots)
    if (std::find(distinct.begin(), distinct.end(), r) == distinct.end()) distinct.push_back(r);
  std::vector<std::pair<Scalar, Subspace>> out;
  std::size_t total = 0;
  for (const auto& c : distinct) {
    Subspace s = kernel((m - Mat::scalar(n, c)).pow(static_cast<unsigned>(n)));
    total += s.dim();
    out.emplace_back(c, std::move(s));
  }
  if (total != n) throw SpectrumNotSplit("supplied roots cover " + std::to_string(total) + " of " + std::to_string(n) + " dimensions");
  return out;
}

/// Fitting decomposition of m - c: (generalized c-eigenspace, complement where m - c is invertible).
inline std::pair<Subspace, Subspace> fitting_decomposition(const Mat& m, const Scalar& c) {
  const std::size_t n = m.rows();
  Mat p = (m - Mat::scalar(n, c)).pow(static_cast<unsigned>(n));
  return {kernel(p), image(p)};
}

/// Matrix of m restricted to an m-stable subspace, in the subspace's echelon basis.
inline Mat restrict_to(const Mat& m, const Subspace& s) { return induced_map(m, Subquotient::of(s)); }

}  // namespace mlab

#endif  // MLAB_LINALG_HPP
