#include <gtest/gtest.h>

#include "gen.hpp"
#include "mlab/monodromy.hpp"

using namespace mlab;

namespace {

Mat jordan(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = 1;
  return m;
}

// Kernel/image oracle for a nilpotent with known Jordan type, written out by hand.
std::map<int, std::size_t> cumulative(const Filtration& f) {
  std::map<int, std::size_t> out;
  for (int w : f.jumps()) out[w] = f.at(w).dim();
  return out;
}

}  // namespace

TEST(CenteredFiltration, JordanBlocks) {
  Filtration m2 = centered_weight_filtration(jordan(2), 1);
  EXPECT_EQ(cumulative(m2), (std::map<int, std::size_t>{{0, 1}, {2, 2}}));
  EXPECT_EQ(m2.at(0), Subspace(2, {{1, 0}}));
  Filtration m3 = centered_weight_filtration(jordan(3), 0);
  EXPECT_EQ(m3.jumps(), (std::vector<int>{-2, 0, 2}));
  EXPECT_EQ(m3.at(-2), Subspace(3, {{1, 0, 0}}));
  EXPECT_EQ(m3.at(0), Subspace(3, {{1, 0, 0}, {0, 1, 0}}));
  EXPECT_EQ(centered_weight_filtration(Mat(3, 3), 4), Filtration::pure(3, 4));
  EXPECT_THROW(centered_weight_filtration(Mat::identity(2), 0), NotNilpotent);
}

TEST(RelativeMonodromy, PureCaseIsCentered) {
  auto m = rmf(Filtration::pure(2, 1), jordan(2));
  ASSERT_TRUE(m);
  EXPECT_EQ(m->graded_dims(), (std::map<int, std::size_t>{{0, 1}, {2, 1}}));
}

TEST(RelativeMonodromy, DoesNotExistForMixedJordanBlock) {
  // W_0 = span e1, W_1 = V, N e2 = e1: gr^W has no room for N to act
  Filtration w(2, {{0, Subspace(2, {{1, 0}})}, {1, Subspace::full(2)}});
  EXPECT_FALSE(rmf(w, jordan(2)));
}

TEST(RelativeMonodromy, ThreeDimensionalFlag) {
  // W_0 = span v1, W_2 = V, N v3 = v1
  Filtration w(3, {{0, Subspace(3, {{1, 0, 0}})}, {2, Subspace::full(3)}});
  Mat n(3, 3);
  n(0, 2) = 1;
  auto m = rmf(w, n);
  ASSERT_TRUE(m);
  Filtration expected(3, {{0, Subspace(3, {{1, 0, 0}})}, {2, Subspace::full(3)}});
  EXPECT_EQ(*m, expected);
  EXPECT_TRUE(verify_rmf(w, n, expected));
  EXPECT_FALSE(verify_rmf(w, n, expected.shift(1)));
  // M_0 too small: v1 of W-weight 0 must sit in M_0
  Filtration wrong(3, {{0, Subspace(3)}, {2, Subspace::full(3)}});
  EXPECT_FALSE(verify_rmf(w, n, wrong));
}

TEST(RelativeMonodromy, RejectsBadInput) {
  Filtration w(2, {{0, Subspace(2, {{0, 1}})}, {1, Subspace::full(2)}});
  EXPECT_THROW(rmf(w, jordan(2)), PreconditionViolated);
  EXPECT_THROW(rmf(Filtration::pure(3, 0), jordan(2)), DimensionMismatch);
}

namespace {

// Random (W, N) with an rmf: a graded N of weight -2 for a grading M,
// conjugated, with W built from a coarser grading compatible with both.
struct Instance {
  Filtration w;
  Mat n;
};

Instance random_instance(gen::Rng& rng) {
  // direct sum of blocks S_r(a): Jordan block of size r+1 placed in W-weight a
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, int>> blocks;
  int nb = static_cast<int>(gen::integer(rng, 1, 3));
  for (int b = 0; b < nb; ++b) {
    std::size_t size = static_cast<std::size_t>(gen::integer(rng, 1, 3));
    blocks.push_back({size, static_cast<int>(gen::integer(rng, -1, 2))});
    n += size;
  }
  Mat nn(n, n);
  std::map<int, std::vector<Vec>> parts;
  std::size_t off = 0;
  for (auto [size, a] : blocks) {
    for (std::size_t i = 0; i + 1 < size; ++i) nn(off + i, off + i + 1) = 1;
    for (std::size_t i = 0; i < size; ++i) parts[a].push_back(unit_vec(n, off + i));
    off += size;
  }
  // off-diagonal coupling from higher W-weight blocks into lower ones
  off = 0;
  std::vector<std::size_t> offs;
  for (auto [size, a] : blocks) {
    offs.push_back(off);
    off += size;
  }
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = 0; j < blocks.size(); ++j)
      if (blocks[i].second < blocks[j].second && gen::integer(rng, 0, 1))
        nn(offs[i], offs[j] + blocks[j].first - 1) = gen::integer(rng, -2, 2);
  std::map<int, Subspace> ps;
  for (auto& [a, v] : parts) ps.emplace(a, Subspace(n, v));
  Filtration w = filtration_of(Splitting(n, ps));
  Mat p = gen::invertible(rng, n);
  Mat pinv = *inverse(p);
  std::map<int, Subspace> steps;
  for (const auto& [k, s] : w.steps()) steps.emplace(k, apply(p, s));
  return {Filtration(n, steps), p * nn * pinv};
}

}  // namespace

TEST(RelativeMonodromyProperty, UniqueScalingInvariantFunctorial) {
  gen::Rng rng(31337);
  int found = 0;
  for (int trial = 0; trial < 80; ++trial) {
    Instance in = random_instance(rng);
    auto m = rmf(in.w, in.n);
    if (!m) continue;
    ++found;
    ASSERT_TRUE(verify_rmf(in.w, in.n, *m));
    // uniqueness: perturbing one step of M by a vector outside breaks the axioms
    for (int k : m->jumps()) {
      Subspace s = m->at(k);
      if (s.is_full() || s.is_zero()) continue;
      Vec v = gen::vec(rng, in.w.ambient());
      if (s.contains(Subspace(in.w.ambient(), {v}))) continue;
      std::vector<Vec> g = s.basis();
      g.back() = g.back() + v;
      Subspace moved(in.w.ambient(), g);
      if (moved == s || !m->at(k + 1).contains(moved) || !moved.contains(m->at(k - 1))) continue;
      std::map<int, Subspace> steps = m->steps();
      steps[k] = moved;
      EXPECT_FALSE(verify_rmf(in.w, in.n, Filtration(in.w.ambient(), steps)));
    }
    // scaling N by a nonzero rational does not change M
    auto ms = rmf(in.w, Scalar(Rational(-3, 2)) * in.n);
    ASSERT_TRUE(ms);
    EXPECT_EQ(*ms, *m);
    // functoriality under change of basis
    Mat p = gen::invertible(rng, in.w.ambient());
    Mat pinv = *inverse(p);
    std::map<int, Subspace> ws;
    for (const auto& [k, s] : in.w.steps()) ws.emplace(k, apply(p, s));
    auto mp = rmf(Filtration(in.w.ambient(), ws), p * in.n * pinv);
    ASSERT_TRUE(mp);
    for (const auto& [k, s] : m->steps()) EXPECT_EQ(mp->at(k), apply(p, s));
  }
  EXPECT_GE(found, 40);
}
