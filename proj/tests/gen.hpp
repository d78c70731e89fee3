// Seeded generators shared by the property tests.
#pragma once

#include <random>

#include "mlab/linalg.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline long integer(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline mlab::Scalar rational(Rng& rng, long bound = 9) {
  long num = integer(rng, -bound, bound);
  long den = integer(rng, 1, bound);
  return mlab::Scalar(num, den);
}

/// Sparse-ish small integer matrix; entries in [-b, b] with the given zero probability.
inline mlab::Mat matrix(Rng& rng, std::size_t r, std::size_t c, long b = 3, double zero_p = 0.4) {
  mlab::Mat m(r, c);
  std::bernoulli_distribution z(zero_p);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (!z(rng)) m(i, j) = integer(rng, -b, b);
  return m;
}

inline mlab::Vec vec(Rng& rng, std::size_t n, long b = 3) {
  mlab::Vec v(n);
  for (auto& x : v) x = integer(rng, -b, b);
  return v;
}

inline mlab::Subspace subspace(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<mlab::Vec> g;
  for (std::size_t i = 0; i < k; ++i) g.push_back(vec(rng, n));
  return mlab::Subspace(n, g);
}

/// Random invertible matrix: unit lower times unit upper triangular times a permutation-free diagonal.
inline mlab::Mat invertible(Rng& rng, std::size_t n) {
  mlab::Mat l = mlab::Mat::identity(n), u = mlab::Mat::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      l(i, j) = integer(rng, -2, 2);
      u(j, i) = integer(rng, -2, 2);
    }
  return l * u;
}

/// Strictly upper triangular, conjugated by a random invertible matrix.
inline mlab::Mat nilpotent(Rng& rng, std::size_t n) {
  mlab::Mat s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s(i, j) = integer(rng, -2, 2);
  mlab::Mat p = invertible(rng, n);
  return p * s * *mlab::inverse(p);
}

}  // namespace gen
