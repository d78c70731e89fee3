#ifndef MLAB_SCALAR_HPP
#define MLAB_SCALAR_HPP

#include <gmpxx.h>

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "mlab/error.hpp"

namespace mlab {

using Rational = mpq_class;

/// Element a + b*sqrt(d) of a real quadratic field Q(sqrt d), or a plain
/// rational when b == 0.
///
/// The embedding sign fixes which real number sqrt(d) maps to; it is part of
/// the field, so two irrational scalars can only be combined when they share
/// both d and the sign. Rational scalars mix with anything.
class Scalar {
public:
  Scalar() = default;
  Scalar(int v) : a_(v) {}
  Scalar(long v) : a_(v) {}
  Scalar(long long v) : a_(static_cast<long>(v)) {}
  Scalar(const Rational& v) : a_(v) {}
  Scalar(long num, long den) : a_(num, den) { a_.canonicalize(); }

  /// a + b*sqrt(d) under the embedding sqrt(d) -> sign*|sqrt(d)|.
  Scalar(Rational a, Rational b, long d, int sign) : a_(std::move(a)), b_(std::move(b)), d_(d), sign_(sign) {
    if (b_ != 0) {
      if (d_ <= 1 || !square_free(d_)) throw FieldMismatch("quadratic field needs square-free d > 1");
      if (sign_ != 1 && sign_ != -1) throw FieldMismatch("embedding sign must be +1 or -1");
    }
    normalize();
  }

  static Scalar sqrt(long d, int sign = 1) { return Scalar(Rational(0), Rational(1), d, sign); }

  const Rational& rational_part() const { return a_; }
  const Rational& quadratic_part() const { return b_; }
  long field_d() const { return d_; }
  int embedding_sign() const { return sign_; }
  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_one() const { return a_ == 1 && b_ == 0; }

  /// Sign of the real image under the fixed embedding; exact.
  int sign() const {
    const int sa = ::sgn(a_);
    const int sb = ::sgn(b_) * sign_;
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sa == 0 ? sb : sa;
    // opposite signs: the larger square wins, and equality is impossible for square-free d
    return a_ * a_ > b_ * b_ * d_ ? sa : sb;
  }

  double real_value() const {
    double v = a_.get_d();
    if (b_ != 0) v += sign_ * b_.get_d() * std::sqrt(static_cast<double>(d_));
    return v;
  }

  Scalar operator-() const {
    Scalar r(*this);
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
  }

  Scalar& operator+=(const Scalar& o) {
    if (b_ == 0 && o.b_ == 0) {
      a_ += o.a_;
      return *this;
    }
    adopt_field(o);
    a_ += o.a_;
    b_ += o.b_;
    normalize();
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    if (b_ == 0 && o.b_ == 0) {
      a_ -= o.a_;
      return *this;
    }
    adopt_field(o);
    a_ -= o.a_;
    b_ -= o.b_;
    normalize();
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    if (o.b_ == 0) {
      a_ *= o.a_;
      if (b_ == 0) return *this;
      b_ *= o.a_;
    } else if (b_ == 0) {
      Rational a = a_;
      a_ = a * o.a_;
      b_ = a * o.b_;
      d_ = o.d_;
      sign_ = o.sign_;
    } else {
      adopt_field(o);
      Rational na = a_ * o.a_ + b_ * o.b_ * d_;
      Rational nb = a_ * o.b_ + b_ * o.a_;
      a_ = std::move(na);
      b_ = std::move(nb);
    }
    normalize();
    return *this;
  }
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  Scalar inverse() const {
    if (is_zero()) throw std::domain_error("division by zero scalar");
    if (b_ == 0) return Scalar(Rational(1) / a_);
    Rational norm = a_ * a_ - b_ * b_ * d_;
    return Scalar(a_ / norm, -b_ / norm, d_, sign_);
  }

  friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
  friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
  friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
  friend Scalar operator/(Scalar x, const Scalar& y) { return x /= y; }

  friend bool operator==(const Scalar& x, const Scalar& y) {
    if (x.a_ != y.a_ || x.b_ != y.b_) return false;
    return x.b_ == 0 || (x.d_ == y.d_ && x.sign_ == y.sign_);
  }
  friend bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }
  friend bool operator<(const Scalar& x, const Scalar& y) { return (x - y).sign() < 0; }
  friend bool operator>(const Scalar& x, const Scalar& y) { return (x - y).sign() > 0; }
  friend bool operator<=(const Scalar& x, const Scalar& y) { return (x - y).sign() <= 0; }
  friend bool operator>=(const Scalar& x, const Scalar& y) { return (x - y).sign() >= 0; }

  /// "p/q" for rationals; "p/q+r/s*sqrt(d)" otherwise. The embedding sign is
  /// not part of the text form.
  std::string str() const {
    std::string s = a_.get_str();
    if (b_ == 0) return s;
    std::string bs = b_.get_str();
    if (a_ == 0) return bs + "*sqrt(" + std::to_string(d_) + ")";
    if (bs[0] != '-') bs = "+" + bs;
    return s + bs + "*sqrt(" + std::to_string(d_) + ")";
  }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

  static bool square_free(long d) {
    for (long p = 2; p * p <= d; ++p)
      if (d % (p * p) == 0) return false;
    return true;
  }

private:
  void normalize() {
    if (b_ == 0) {
      d_ = 1;
      sign_ = 1;
    }
  }
  void adopt_field(const Scalar& o) {
    if (o.b_ == 0) return;
    if (b_ == 0) {
      d_ = o.d_;
      sign_ = o.sign_;
      return;
    }
    if (d_ != o.d_ || sign_ != o.sign_) throw FieldMismatch("scalars from different quadratic fields or embeddings");
  }

  Rational a_{0};
  Rational b_{0};
  long d_ = 1;
  int sign_ = 1;
};

inline Scalar abs(const Scalar& s) { return s.sign() < 0 ? -s : s; }

/// Parses "p", "p/q", "p/q+r/s*sqrt(d)", "r/s*sqrt(d)", "sqrt(d)", "-sqrt(d)".
inline Scalar parse_scalar(const std::string& text, int embedding = 1) {
  std::string t;
  for (char c : text)
    if (c != ' ') t += c;
  if (t.empty()) throw SchemaError("empty scalar");
  auto parse_rat = [&](const std::string& s) -> Rational {
    if (s.empty() || s == "+") return Rational(1);
    if (s == "-") return Rational(-1);
    std::string u = s[0] == '+' ? s.substr(1) : s;
    Rational r;
    if (r.set_str(u, 10) != 0) throw SchemaError("bad rational '" + s + "'");
    if (r.get_den() == 0) throw SchemaError("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
  };
  auto pos = t.find("sqrt(");
  if (pos == std::string::npos) return Scalar(parse_rat(t));
  auto close = t.find(')', pos);
  if (close == std::string::npos || close + 1 != t.size()) throw SchemaError("bad quadratic scalar '" + text + "'");
  long d = std::stol(t.substr(pos + 5, close - pos - 5));
  std::string head = t.substr(0, pos);
  if (!head.empty() && head.back() == '*') head.pop_back();
  // split head into rational part and coefficient at the last top-level sign
  std::size_t split = std::string::npos;
  for (std::size_t i = head.size(); i-- > 1;) {
    if (head[i] == '+' || head[i] == '-') {
      split = i;
      break;
    }
  }
  Rational a(0), b;
  if (split == std::string::npos) {
    b = parse_rat(head);
  } else {
    a = parse_rat(head.substr(0, split));
    b = parse_rat(head.substr(split));
  }
  return Scalar(a, b, d, embedding);
}

}  // namespace mlab

#endif  // MLAB_SCALAR_HPP
