#include <gtest/gtest.h>

#include "gen.hpp"
#include "mlab/direct_images.hpp"

using namespace mlab;

namespace {

const Scalar q(5);

// Basis a (Frobenius weight 2), b, c (weight 0): log gamma_0 = E_ba,
// log gamma_1 = E_cb, log gamma_2 = -E_ca, so gamma_2 is non-trivial.
EllipticRep heisenberg() {
  Mat m(3, 3), n1(3, 3), n2(3, 3);
  m(1, 0) = 1;
  n1(2, 1) = 1;
  n2(2, 0) = -1;
  Mat f(3, 3);
  f(0, 0) = Scalar(1) / q;
  f(1, 1) = 1;
  f(2, 2) = 1;
  Splitting g(3, {{2, Subspace(3, {unit_vec(3, 0)})}, {0, Subspace(3, {unit_vec(3, 1), unit_vec(3, 2)})}});
  EllipticRep e{Filtration::pure(3, 1), exp_nilpotent(m), exp_nilpotent(n1), exp_nilpotent(n2), f, q, g};
  validate(e);
  return e;
}

EllipticRep change_basis(const EllipticRep& e, const Mat& p) {
  Mat pi = inverse_or_throw(p);
  auto move = [&](const Mat& m) { return p * m * pi; };
  std::map<int, Subspace> steps, parts;
  for (const auto& [k, s] : e.w.steps()) steps.emplace(k, apply(p, s));
  for (const auto& [k, s] : e.grading.parts()) parts.emplace(k, apply(p, s));
  return EllipticRep{Filtration(e.dim(), steps), move(e.g0), move(e.g1), move(e.g2), move(e.f), e.q, Splitting(e.dim(), parts)};
}

}  // namespace

TEST(EllipticRep, Builders) {
  auto c = constant_rep(q);
  EXPECT_EQ(c.g0, Mat::identity(1));
  EXPECT_EQ(c.g1, Mat::identity(1));
  EXPECT_EQ(c.g2, Mat::identity(1));
  auto e = unipotent_block_rep(q);
  EXPECT_EQ(e.g1, (Mat{{1, 1}, {0, 1}}));
  EXPECT_EQ(e.g2, Mat::identity(2));
  EXPECT_EQ(e.g0, Mat::identity(2));
  auto s1 = build_Sr(1, q);
  auto p = s1_pullback(q);
  EXPECT_EQ(p.g1, Mat::identity(2));
  EXPECT_EQ(p.g2, Mat::identity(2));
  EXPECT_EQ(p.g0, exp_nilpotent(s1.n()));
  EXPECT_EQ(p.f, s1.frob());
  EXPECT_EQ(rep_defect(heisenberg()), "");
}

TEST(EllipticRep, RelationsAreEnforced) {
  auto e = unipotent_block_rep(q);
  auto bad = e;
  bad.g2 = Mat{{2, 0}, {0, 1}};
  EXPECT_NE(rep_defect(bad).find("gamma_2 is not unipotent"), std::string::npos);
  // gamma_0 must conjugate gamma_1 to gamma_1 gamma_2
  bad = e;
  bad.g0 = Mat{{1, 0}, {1, 1}};
  EXPECT_FALSE(rep_defect(bad).empty());
  auto h = heisenberg();
  bad = h;
  bad.f = Mat::identity(3);
  EXPECT_NE(rep_defect(bad).find("gamma_2^q"), std::string::npos);
  EXPECT_THROW(complex(bad), ValidationFailed);
}

TEST(GroupComplex, Differentials) {
  auto c = complex(constant_rep(q));
  EXPECT_TRUE(c.d0.is_zero());
  EXPECT_TRUE(c.d1.is_zero());
  auto e = complex(unipotent_block_rep(q));
  EXPECT_EQ(rank(e.d0), 1u);
  // f2 -> f1 in the gamma_1 slot, f1 -> 0
  EXPECT_EQ(e.d0 * Vec({0, 1}), (Vec{1, 0, 0, 0}));
  EXPECT_EQ(e.d0 * Vec({1, 0}), (Vec{0, 0, 0, 0}));
  auto two = complex(character_rep(Scalar(2), q));
  EXPECT_EQ(kernel(two.d0).dim(), 0u);
  EXPECT_EQ(group_cohomology_dims(two), (std::array<std::size_t, 3>{0, 0, 0}));
}

TEST(EigenDecomposition, Summands) {
  auto one = eigen_decompose(unipotent_block_rep(q), {Scalar(1)});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].first, Scalar(1));
  EXPECT_EQ(one[0].second.dim(), 2u);
  auto mixed = direct_sum(constant_rep(q), character_rep(Scalar(2), q));
  auto parts = eigen_decompose(mixed, {Scalar(1), Scalar(2)});
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[1].second.g1, Mat::scalar(1, Scalar(2)));
  EXPECT_THROW(eigen_decompose(mixed, {Scalar(1)}), SpectrumNotSplit);
  auto single = eigen_decompose(heisenberg(), {Scalar(1)});
  ASSERT_EQ(single.size(), 1u);
}

TEST(DirectImages, ConstantObject) {
  auto h = cohomology(constant_rep(q));
  ASSERT_EQ(h.dims(), (std::array<std::size_t, 3>{1, 2, 1}));
  auto s0 = build_Sr(0, q);
  EXPECT_TRUE(is_isomorphism(s0, h.h[0], Mat::identity(1)));
  EXPECT_EQ(h.h[0].w().graded_dims(), (std::map<int, std::size_t>{{0, 1}}));
  auto iso = find_isomorphism(build_Sr(1, q), h.h[1]);
  ASSERT_TRUE(iso);
  EXPECT_TRUE(is_isomorphism(build_Sr(1, q), h.h[1], *iso));
  // the identification L* = S1 flips the sign of e1
  EXPECT_TRUE(is_isomorphism(build_Sr(1, q), h.h[1], Mat{{-1, 0}, {0, 1}}));
  EXPECT_TRUE(is_isomorphism(tate_twist(s0, -1), h.h[2], Mat::identity(1)));
  EXPECT_EQ(h.h[2].w().graded_dims(), (std::map<int, std::size_t>{{2, 1}}));
  for (const auto& o : h.h) EXPECT_TRUE(check_AY_membership(o).ok);
  auto l = lefschetz_map(constant_rep(q));
  EXPECT_TRUE(l.iso_of_sheaves);
  EXPECT_TRUE(l.iso_in_category);
  EXPECT_EQ(l.matrix, Mat::identity(1));
}

TEST(DirectImages, NonSemisimpleExampleLeavesTheCategory) {
  auto e = unipotent_block_rep(q);
  auto h = cohomology(e);
  ASSERT_EQ(h.h[1].dim(), 2u);
  // P = <f2 e1, f1 e2, f1 e1>, Q = <f1 e1> with f_i e_j at index 2(i-1) + (j-1)
  EXPECT_EQ(h.classes[1].num(), Subspace(4, {unit_vec(4, 2), unit_vec(4, 1), unit_vec(4, 0)}));
  EXPECT_EQ(h.classes[1].den(), Subspace(4, {unit_vec(4, 0)}));
  EXPECT_EQ(h.h[1].grading().weights(), (std::vector<int>{0, 2}));
  EXPECT_EQ(h.h[1].grading().part(0).dim(), 1u);
  EXPECT_EQ(h.h[1].grading().part(2).dim(), 1u);
  EXPECT_TRUE(h.h[1].n().is_zero());
  EXPECT_TRUE(h.h[1].w().is_pure());
  EXPECT_EQ(h.h[1].w().max_weight(), 1);
  auto m = check_AY_membership(h.h[1]);
  EXPECT_FALSE(m.ok);
  EXPECT_NE(m.violation.find("Frobenius weights"), std::string::npos) << m.violation;
  EXPECT_TRUE(check_AY_membership(h.h[0]).ok);
  auto l = lefschetz_map(e);
  EXPECT_FALSE(l.iso_of_sheaves);
  EXPECT_TRUE(l.matrix.is_zero());
}

TEST(DirectImages, NonTrivialCharacterIsAcyclic) {
  for (long c : {2L, -1L, 7L}) {
    auto e = character_rep(Scalar(c), q);
    EXPECT_EQ(cohomology(e).dims(), (std::array<std::size_t, 3>{0, 0, 0}));
    EXPECT_EQ(group_cohomology_dims(complex(e)), (std::array<std::size_t, 3>{0, 0, 0}));
    EXPECT_THROW(lefschetz_map(e), NotUnipotent);
    auto r = check_pushforward_criterion(e);
    EXPECT_FALSE(r.unipotent);
    EXPECT_TRUE(r.agree());
  }
  // only the I(1) summand contributes
  auto mixed = direct_sum(unipotent_block_rep(q), character_rep(Scalar(3), q));
  EXPECT_EQ(cohomology(mixed).dims(), cohomology(unipotent_block_rep(q)).dims());
  EXPECT_EQ(cohomology(mixed).unipotent_part.cols(), 2u);
}

TEST(DirectImages, PushforwardCriterion) {
  for (const auto& e : {constant_rep(q), s1_pullback(q), pullback_from_Y(build_Sr(2, q)), tate_twist(s1_pullback(q), 1)}) {
    auto r = check_pushforward_criterion(e);
    EXPECT_TRUE(r.i && r.ii && r.iii && r.iv) << r.violations[0] << r.violations[1] << r.violations[2];
    EXPECT_TRUE(lefschetz_map(e).iso_in_category);
  }
  auto neg = check_pushforward_criterion(unipotent_block_rep(q));
  EXPECT_TRUE(neg.unipotent);
  EXPECT_FALSE(neg.iii);
  EXPECT_FALSE(neg.iv);
  EXPECT_FALSE(neg.i);
}

TEST(DirectImages, PullbacksGiveMembersAndSemisimpleImages) {
  std::vector<LogPointObject> ys{build_Sr(0, q), build_Sr(1, q), build_Sr(2, q), tate_twist(build_Sr(1, q), 2),
                                 direct_sum(build_Sr(1, q), build_Sr(1, q)), direct_sum(build_Sr(0, q), tate_twist(build_Sr(2, q), 1))};
  for (const auto& y : ys) {
    auto h = cohomology(pullback_from_Y(y));
    for (const auto& o : h.h) {
      auto m = check_AY_membership(o);
      EXPECT_TRUE(m.ok) << m.violation;
      if (o.dim() && o.w().is_pure()) {
        EXPECT_TRUE(is_semisimple(o));
      }
    }
    EXPECT_TRUE(lefschetz_map(pullback_from_Y(y)).iso_in_category);
  }
  // S_r (x) L* = S_{r+1} + S_{r-1} shows up as H^1 of the pullback of S_r
  auto h1 = cohomology(pullback_from_Y(build_Sr(2, q))).h[1];
  auto iso = find_isomorphism(direct_sum(tate_twist(build_Sr(3, q), 0), tate_twist(build_Sr(1, q), -1)), h1);
  EXPECT_TRUE(iso.has_value());
}

TEST(DirectImages, NonTrivialGammaTwo) {
  auto e = heisenberg();
  auto h = cohomology(e);
  auto g = group_cohomology_dims(complex(e));
  EXPECT_EQ(h.dims(), g);
  EXPECT_EQ(static_cast<long>(h.dims()[0]) - static_cast<long>(h.dims()[1]) + static_cast<long>(h.dims()[2]), 0);
}

TEST(DirectImagesProperty, ComplexesAgreeAndRepsStayUnipotentOnT) {
  gen::Rng rng(6060);
  std::vector<EllipticRep> atoms{constant_rep(q), s1_pullback(q), unipotent_block_rep(q), heisenberg(), tate_twist(constant_rep(q), -1),
                                 character_rep(Scalar(2), q)};
  for (int trial = 0; trial < 24; ++trial) {
    EllipticRep e = atoms[gen::integer(rng, 0, 5)];
    int ops = static_cast<int>(gen::integer(rng, 1, 2));
    for (int k = 0; k < ops; ++k) {
      const auto& other = atoms[gen::integer(rng, 0, 5)];
      e = gen::integer(rng, 0, 1) && e.dim() * other.dim() <= 6 ? tensor(e, other) : direct_sum(e, other);
      if (e.dim() > 6) break;
    }
    e = change_basis(e, gen::invertible(rng, e.dim()));
    ASSERT_EQ(rep_defect(e), "");
    EXPECT_TRUE(is_nilpotent(e.g2 - Mat::identity(e.dim())));
    auto c = complex(e);
    EXPECT_TRUE((c.d1 * c.d0).is_zero());
    auto h = cohomology(e);
    EXPECT_EQ(h.dims(), group_cohomology_dims(c));
    EXPECT_EQ(h.dims()[0] + h.dims()[2], h.dims()[1]);
    auto r = check_pushforward_criterion(e);
    if (r.unipotent && r.iv) {
      EXPECT_TRUE(r.i && r.ii && r.iii);
    }
  }
}
