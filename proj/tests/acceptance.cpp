// Acceptance run: one PASS/FAIL line per criterion with its wall time and limit.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "gen.hpp"
#include "mlab/mlab.hpp"

using namespace mlab;

namespace {

const Scalar q(5);

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

io::json preset(const std::string& name) {
  std::ifstream f(std::string(MLAB_PRESET_DIR) + "/" + name + ".json");
  if (!f) throw SchemaError("missing preset " + name);
  std::stringstream ss;
  ss << f.rdbuf();
  return io::parse_text(ss.str());
}

template <class T, class F>
T read_preset(const std::string& name, F reader) {
  auto doc = preset(name);
  auto [kind, r] = io::open(doc);
  return reader(doc, r, "");
}

std::size_t wdim(const Filtration& f, int w) { return f.ambient() ? f.at(w).dim() : 0; }

Outcome s1_suite() {
  Outcome o;
  auto s1 = read_preset<LogPointObject>("s1", io::read_logpoint);
  auto m = rmf(s1.w(), s1.n());
  o.require(m.has_value(), "rmf of S1 missing");
  if (m) o.require(m->graded_dims() == std::map<int, std::size_t>{{0, 1}, {2, 1}}, "rmf of S1 has the wrong graded dimensions");
  o.require(check_membership(s1).ok, "S1 fails membership");
  for (int r = 0; r <= 4; ++r) o.require(check_membership(build_Sr(r, q)).ok && is_simple(build_Sr(r, q)), "S_" + std::to_string(r) + " is not a simple member");
  if (o.ok) o.detail = "gr^M dims {0:1, 2:1}; S_0..S_4 simple members";
  return o;
}

Outcome classification() {
  Outcome o;
  auto round_trip = [&](const LogPointObject& x, const std::string& name) {
    auto c = classify(x);
    o.require(is_isomorphism(c.model, x, c.iso), "Phi(Psi+) is not isomorphic to the identity on " + name);
    for (const auto& [w, ex] : c.pieces)
      for (const auto& p : ex.parts) o.require(p.weight + p.r == w, "part weight mismatch on " + name);
  };
  round_trip(build_Sr(2, q), "S2");
  round_trip(direct_sum(build_Sr(1, q), build_Sr(3, q)), "S1+S3");
  auto t11 = tensor(build_Sr(1, q), build_Sr(1, q));
  round_trip(t11, "S1xS1");
  // the explicit formula on a pure object
  auto ex = psi_plus(t11);
  o.require(is_isomorphism(phi(q, ex.parts), t11, natural_iso(t11, ex)), "natural isomorphism formula fails on S1xS1");
  for (int r = 1; r <= 2; ++r) {
    auto t = tensor(build_Sr(r, q), build_Sr(1, q));
    auto model = direct_sum(tate_twist(build_Sr(r - 1, q), -1), build_Sr(r + 1, q));
    auto iso = find_isomorphism(model, t);
    o.require(iso && is_isomorphism(model, t, *iso), "S" + std::to_string(r) + "xS1 is not S" + std::to_string(r + 1) + "+S" + std::to_string(r - 1) + "(-1)");
  }
  if (o.ok) o.detail = "S2, S1+S3, S1xS1 recovered; S_r x S_1 decomposes for r = 1, 2";
  return o;
}

Outcome embedding_dependence() {
  Outcome o;
  auto plus = check_admissible(read_preset<ConeAction>("depend-sqrt2", io::read_cone_action));
  auto minus = check_admissible(read_preset<ConeAction>("depend-sqrt2-minus", io::read_cone_action));
  o.require(plus.admissible && plus.family && plus.family->exact, "+ embedding not exactly admissible: " + plus.failure);
  o.require(!minus.admissible, "- embedding reported admissible");
  if (o.ok) o.detail = "+ admissible, - NotAdmissible";
  return o;
}

Outcome rmf_nonexistence() {
  Outcome o;
  auto bad = read_preset<io::RmfInput>("rmf-nonexistence", io::read_rmf);
  o.require(!rmf(bad.w, bad.n).has_value(), "2-dim instance should have no rmf");
  auto flag = read_preset<io::RmfInput>("rmf-flag", io::read_rmf);
  auto m = rmf(flag.w, flag.n);
  o.require(m.has_value(), "3-dim instance has no rmf");
  if (m) {
    Filtration expected(3, {{0, Subspace(3, {unit_vec(3, 0)})}, {2, Subspace::full(3)}});
    o.require(*m == expected, "3-dim flag differs from the derived one");
    o.require(verify_rmf(flag.w, flag.n, *m), "verify_rmf rejects the flag");
  }
  if (o.ok) o.detail = "DoesNotExist on the 2-dim instance; flag M_0 = <v1>, M_2 = V verified";
  return o;
}

Outcome convergence() {
  Outcome o;
  auto in = read_preset<io::SetupInput>("tate-nn", io::read_setup);
  auto s = make_setup(in.object, in.mu, in.lattice_basis);
  auto rows = sweep(s, Schedule{Schedule::Kind::Geometric, Scalar(10)}, 8);
  o.require(rows.size() == 8, "expected 8 rows");
  for (std::size_t k = 1; k < rows.size(); ++k) o.require(rows[k].distance < rows[k - 1].distance, "distance not strictly decreasing at row " + std::to_string(k + 1));
  o.require(!rows.empty() && rows.back().distance < 1e-6, "final distance not below 1e-6");
  // limit oracle: the product's two ray operators summed
  auto product = external_product(build_Sr(1, q), build_Sr(1, q));
  const Mat& a = product.ray_ops()[0];
  const Mat& b = product.ray_ops()[1];
  o.require(s.sl2.limit() == a + b, "limit differs from the hand-computed sum");
  for (long y : {10L, 1000L, 100000L}) {
    auto c = conjugated(s, RatioPath{s.mu, Schedule{}}.at({Scalar(y), Scalar(1)}));
    o.require(c.exact && *c.exact - s.sl2.limit() == Scalar(1, y + 1) * b, "exact conjugate differs from limit + B/(y+1)");
  }
  // the literal product converges with zero error
  auto pure = read_preset<io::SetupInput>("s1xs1", io::read_setup);
  auto ps = make_setup(pure.object, pure.mu, pure.lattice_basis);
  o.require(ps.sl2.limit() == a + b, "product limit differs from the sum");
  for (const auto& r : sweep(ps, Schedule{}, 8)) o.require(r.distance == 0.0, "product preset moved away from its limit");
  if (o.ok) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "tate-nn final distance %.3g, limit exact", rows.back().distance);
    o.detail = buf;
  }
  return o;
}

Outcome ray_weights() {
  Outcome o;
  auto s1 = build_Sr(1, q);
  auto p = external_product(s1, s1);
  const auto& ops = p.ray_ops();
  auto tnn = LogPointObject(ConeAction(p.cone(), p.w(), {ops[0] + ops[1], ops[1]}), p.frob(), q, p.grading());
  auto sqrt2 = LogPointObject(ConeAction(Cone(SharpMonoid::free(2)), s1.w(), {s1.n(), Scalar::sqrt(2) * s1.n()}), s1.frob(), q, s1.grading());
  auto trivial = external_product(direct_sum(build_Sr(0, q), tate_twist(build_Sr(0, q), -1)), build_Sr(0, q));
  std::vector<LogPointObject> corpus{p, tnn, sqrt2, trivial, external_product(build_Sr(2, q), s1)};
  std::size_t setups = 0;
  for (const auto& obj : corpus) {
    const Cone& c = obj.cone();
    std::vector<RatioPoint> points{psi(c, Vec{2, 3})};
    for (std::size_t first : {0u, 1u}) points.emplace_back(c, std::vector<std::size_t>{c.face_index({first}), c.full_face()}, std::vector<Vec>{unit_vec(2, first), Vec{1, 1}});
    for (const auto& mu : points) {
      auto v = pure_weight_violations(make_setup(obj, mu));
      o.require(v.empty(), v.empty() ? "" : v.front());
      ++setups;
    }
  }
  if (o.ok) o.detail = std::to_string(setups) + " boundary setups, every ray generator of pure weight -2";
  return o;
}

Outcome constant_pushforward() {
  Outcome o;
  auto e = read_preset<EllipticRep>("constant", io::read_rep);
  auto h = cohomology(e);
  o.require(h.dims() == std::array<std::size_t, 3>{1, 2, 1}, "cohomology dimensions differ from 1, 2, 1");
  if (!o.ok) return o;
  auto s0 = build_Sr(0, q);
  o.require(is_isomorphism(s0, h.h[0], Mat::identity(1)) && h.h[0].w() == Filtration::pure(1, 0), "H0 is not the weight-0 trivial object");
  auto iso = find_isomorphism(build_Sr(1, q), h.h[1]);
  o.require(iso && is_isomorphism(build_Sr(1, q), h.h[1], *iso), "no isomorphism S1 -> H1 found");
  o.require(is_isomorphism(tate_twist(s0, -1), h.h[2], Mat::identity(1)) && h.h[2].w() == Filtration::pure(1, 2), "H2 is not the weight-2 twist");
  auto l = lefschetz_map(e);
  o.require(l.iso_of_sheaves && l.iso_in_category, "Lefschetz map is not an isomorphism");
  if (o.ok) o.detail = "H0 = S0, H1 = S1 via " + to_string(*iso) + ", H2 = S0(-1), Lefschetz iso";
  return o;
}

Outcome unipotent_block_check() {
  Outcome o;
  auto h = cohomology(read_preset<EllipticRep>("example-615", io::read_rep));
  const auto& h1 = h.h[1];
  o.require(h1.dim() == 2, "H1 is not 2-dimensional");
  if (!o.ok) return o;
  o.require(h1.grading().weights() == std::vector<int>{0, 2}, "Frobenius weights differ from {0, 2}");
  o.require(h1.n().is_zero(), "gamma_0 acts non-trivially");
  o.require(h1.w() == Filtration::pure(2, 1), "rmf is not pure of weight 1");
  auto m = check_AY_membership(h1);
  o.require(!m.ok, "H1 was accepted as a member");
  if (o.ok) o.detail = "Violation: " + m.violation;
  return o;
}

Outcome character_acyclic() {
  Outcome o;
  auto from_file = read_preset<EllipticRep>("character-2", io::read_rep);
  std::vector<EllipticRep> reps{from_file, character_rep(Scalar(-1), q), character_rep(Scalar(7), q), character_rep(Scalar(1, 3), q)};
  for (const auto& e : reps) {
    o.require(cohomology(e).dims() == std::array<std::size_t, 3>{0, 0, 0}, "non-trivial character has cohomology");
    o.require(group_cohomology_dims(complex(e)) == std::array<std::size_t, 3>{0, 0, 0}, "group complex of a non-trivial character is not acyclic");
  }
  auto mixed = direct_sum(read_preset<EllipticRep>("example-615", io::read_rep), from_file);
  o.require(cohomology(mixed).dims() == std::array<std::size_t, 3>{1, 2, 1}, "character summand changed the cohomology");
  if (o.ok) o.detail = "c = 2, -1, 7, 1/3 acyclic; summand does not contribute";
  return o;
}

Outcome abelian_suite() {
  Outcome o;
  gen::Rng rng(20261016);
  auto s0 = build_Sr(0, q), s1 = build_Sr(1, q), s2 = build_Sr(2, q);
  auto t = tate_twist(s0, -1);
  Mat n(3, 3);
  n(0, 2) = 1;
  Mat f(3, 3);
  f(0, 0) = 1;
  f(1, 1) = f(2, 2) = Scalar(1) / q;
  auto ext = LogPointObject(ConeAction(Cone(SharpMonoid::free(1)), Filtration(3, {{0, Subspace(3, {unit_vec(3, 0)})}, {2, Subspace::full(3)}}), {n}), f, q,
                            Splitting(3, {{0, Subspace(3, {unit_vec(3, 0)})}, {2, Subspace(3, {unit_vec(3, 1), unit_vec(3, 2)})}}));
  std::vector<LogPointObject> base{s0, s1, s2, ext, direct_sum(s1, s0), direct_sum(s1, s1), direct_sum(ext, t), direct_sum(s2, t), direct_sum(s1, direct_sum(s1, s0))};
  std::vector<LogPointObject> objs;
  for (const auto& b : base) {
    objs.push_back(b);
    objs.push_back(change_basis(b, gen::invertible(rng, b.dim())));
  }
  auto pick = [&] { return objs[static_cast<std::size_t>(gen::integer(rng, 0, static_cast<long>(objs.size()) - 1))]; };
  int tested = 0;
  for (int trial = 0; trial < 500 && tested < 60 && o.ok; ++trial) {
    auto a = pick(), b = pick();
    auto hom = hom_space(a, b);
    if (hom.empty()) continue;
    Mat m(b.dim(), a.dim());
    for (const auto& h : hom) m += Scalar(gen::integer(rng, -2, 2)) * h;
    LogPointMorphism mor{a, b, m};
    try {
      detail::check_strict(mor);
    } catch (const MembershipLost& e) {
      o.require(false, e.what());
      break;
    }
    // kernel, image and cokernel re-run the membership check internally
    auto k = kernel(mor);
    auto im = image(mor);
    auto c = cokernel(mor);
    auto fa = admissible_family(a.action()), fb = admissible_family(b.action());
    auto fk = admissible_family(k.action()), fi = admissible_family(im.action()), fc = admissible_family(c.action());
    for (int w = -4; w <= 6; ++w) {
      o.require(wdim(k.w(), w) + wdim(im.w(), w) == wdim(a.w(), w) && wdim(im.w(), w) + wdim(c.w(), w) == wdim(b.w(), w), "W sequence not exact");
      o.require(wdim(fk.top(), w) + wdim(fi.top(), w) == wdim(fa.top(), w) && wdim(fi.top(), w) + wdim(fc.top(), w) == wdim(fb.top(), w),
                "W(sigma) sequence not exact at weight " + std::to_string(w));
    }
    ++tested;
  }
  o.require(tested >= 50, "only " + std::to_string(tested) + " morphisms tested");
  if (o.ok) o.detail = std::to_string(tested) + " random morphisms: strict, members, exact";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, 1, s1_suite},          {2, 1, classification},     {3, 1, embedding_dependence}, {4, 1, rmf_nonexistence},
      {5, 5, convergence},       {6, 1, ray_weights},        {7, 1, constant_pushforward}, {8, 1, unipotent_block_check},
      {9, 1, character_acyclic}, {10, 30, abelian_suite},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.ok && secs >= c.limit_s) out = {false, "over the time limit (" + out.detail + ")"};
    if (!out.ok) ++failed;
    std::printf("criterion %2d %s  %.3f s (limit %g s)  %s\n", c.id, out.ok ? "PASS" : "FAIL", secs, c.limit_s, out.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
