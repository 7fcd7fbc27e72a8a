#include <doctest.h>

#include <random>

#include "trk/ball.hpp"
#include "trk/classify.hpp"
#include "trk/gog.hpp"
#include "trk/marked.hpp"

using namespace trk;

namespace {

OraclePtr trivial_oracle(const std::string& id) {
  return std::make_shared<GroupOracle>(GroupOracle::finite_cyclic(id, 1, {"e"}));
}

// Z as an HNN loop of trivial groups: the tree is a line.
GraphOfGroups z_loop() {
  OraclePtr triv = trivial_oracle("triv");
  GogVertex v{"v", triv};
  GogEdge e{"e", 0, 0, triv, {}, {}};
  return GraphOfGroups("Zloop", {v}, {e}, 0);
}

// free product of finite cyclics
GraphOfGroups zm_zn(int m, int n) {
  OraclePtr a = std::make_shared<GroupOracle>(
      GroupOracle::finite_cyclic("Z" + std::to_string(m), m, {"s"}));
  OraclePtr b = std::make_shared<GroupOracle>(
      GroupOracle::finite_cyclic("Z" + std::to_string(n), n, {"r"}));
  OraclePtr triv = trivial_oracle("triv");
  return GraphOfGroups("amalgam",
                       {{"u", a}, {"w", b}},
                       {{"e", 0, 1, triv, {}, {}}}, 0);
}

// F2 = <a> * <b>
GraphOfGroups f2_split() {
  OraclePtr A = std::make_shared<GroupOracle>(GroupOracle::free_group("A", 1, {"a"}));
  OraclePtr B = std::make_shared<GroupOracle>(GroupOracle::free_group("B", 1, {"b"}));
  OraclePtr triv = trivial_oracle("triv");
  return GraphOfGroups("F2", {{"va", A}, {"vb", B}}, {{"e", 0, 1, triv, {}, {}}}, 0);
}

// BS(1,n) as an HNN loop of Z: edge Z -> Z by x->x and x->x^n
GraphOfGroups bs_as_hnn(int n) {
  OraclePtr Z = std::make_shared<GroupOracle>(GroupOracle::free_abelian("Z", 1, {"a"}));
  OraclePtr E = std::make_shared<GroupOracle>(GroupOracle::free_abelian("E", 1, {"x"}));
  GogEdge e{"t", 0, 0, E, {word_of({{0, n}})}, {word_of({{0, 1}})}};
  return GraphOfGroups("BShnn", {{"v", Z}}, {e}, 0);
}

}  // namespace

TEST_CASE("fundamental group arithmetic on the Z loop") {
  auto gog = z_loop();
  FundamentalGroup fg(gog);
  PathWord t = fg.edge_letter(0);
  CHECK(!fg.is_identity(t));
  CHECK(fg.is_identity(fg.mul(t, fg.inv(t))));
  PathWord t3 = fg.mul(t, fg.mul(t, t));
  CHECK(t3.steps.size() == 3);
  CHECK(fg.has_infinite_order(t));
}

TEST_CASE("ball of the Z loop at depth 2 is a 5-vertex segment") {
  auto gog = z_loop();
  FundamentalGroup fg(gog);
  auto ball = BassSerreBall::expand(fg, 2);
  CHECK(ball.verts().size() == 5);
  CHECK(ball.edges().size() == 4);
  // a line: every vertex has degree <= 2
  for (const auto& inc : ball.incident_edges()) CHECK(inc.size() <= 2);
}

TEST_CASE("ball of Z2*Z3 at depth 1 around the Z2 vertex") {
  auto gog = zm_zn(2, 3);
  FundamentalGroup fg(gog);
  auto ball = BassSerreBall::expand(fg, 1);
  // base plus the two Z3-cosets
  CHECK(ball.verts().size() == 3);
  CHECK(ball.edges().size() == 2);
  int z3 = 0;
  for (const auto& v : ball.verts())
    if (v.gog_vertex == 1) ++z3;
  CHECK(z3 == 2);
}

TEST_CASE("ball of F2 = <a>*<b> at depth 1") {
  auto gog = f2_split();
  FundamentalGroup fg(gog);
  auto ball = BassSerreBall::expand(fg, 1);
  // base <a>-vertex plus <b>, a<b>, a^-1<b>
  CHECK(ball.verts().size() == 4);
  int bcount = 0;
  for (const auto& v : ball.verts())
    if (v.gog_vertex == 1) ++bcount;
  CHECK(bcount == 3);
}

TEST_CASE("balls are nested and acyclic") {
  for (auto gog : {z_loop(), zm_zn(2, 3), f2_split(), bs_as_hnn(2)}) {
    FundamentalGroup fg(gog);
    BassSerreBall prev = BassSerreBall::expand(fg, 1);
    for (int d = 2; d <= 5; ++d) {
      auto cur = BassSerreBall::expand(fg, d);
      // nested under identical labeling
      for (const auto& v : prev.verts()) CHECK(cur.find_vertex(v.label) >= 0);
      // acyclic: edges = vertices - 1 and prefix-parents exist
      CHECK(cur.edges().size() == cur.verts().size() - 1);
      prev = std::move(cur);
    }
  }
}

TEST_CASE("word problem in the amalgam F2 = <a>*<b> against the free oracle") {
  auto gog = f2_split();
  FundamentalGroup fg(gog);
  auto F2 = GroupOracle::free_group("F2ref", 2, {"a", "b"});
  PathWord A = fg.vertex_elt(0, word_of({{0, 1}}));
  PathWord B = fg.vertex_elt(1, word_of({{0, 1}}));
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> pick(0, 1), sgn(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    PathWord p = fg.one(), q = fg.one();
    Word w1, w2;
    for (int i = 0; i < 6; ++i) {
      int g = pick(rng);
      int s = sgn(rng) ? 1 : -1;
      p = fg.mul(p, s > 0 ? (g ? B : A) : fg.inv(g ? B : A));
      w1.push(g, s);
      g = pick(rng);
      s = sgn(rng) ? 1 : -1;
      q = fg.mul(q, s > 0 ? (g ? B : A) : fg.inv(g ? B : A));
      w2.push(g, s);
    }
    CHECK(fg.equal(p, q) == F2.equal(w1, w2));
  }
}

TEST_CASE("bs(1,2) presented as an HNN of Z matches the bs oracle") {
  auto gog = bs_as_hnn(2);
  FundamentalGroup fg(gog);
  auto BS = GroupOracle::baumslag_solitar("BSref", 2, {"a", "t"});
  PathWord A = fg.vertex_elt(0, word_of({{0, 1}}));
  // the edge letter satisfies s^-1 alpha(h) s = omega(h); with alpha = a^2
  // and omega = a this gives s a s^-1 = a^2, so t = s
  PathWord T = fg.edge_letter(0);
  CHECK(fg.equal(fg.mul(fg.mul(T, A), fg.inv(T)), fg.vertex_elt(0, word_of({{0, 2}}))));
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> pick(0, 1), sgn(0, 1);
  for (int trial = 0; trial < 120; ++trial) {
    PathWord p = fg.one();
    Word w;
    for (int i = 0; i < 8; ++i) {
      int g = pick(rng);
      int s = sgn(rng) ? 1 : -1;
      p = fg.mul(p, s > 0 ? (g ? T : A) : fg.inv(g ? T : A));
      w.push(g, s);
    }
    CHECK(fg.is_identity(p) == BS.is_identity(w));
  }
}

TEST_CASE("translation lengths") {
  auto gog = z_loop();
  FundamentalGroup fg(gog);
  auto ball = BassSerreBall::expand(fg, 6);
  PathWord t = fg.edge_letter(0);
  CHECK(translation_length(fg.one(), ball).value == 0);
  CHECK(translation_length(t, ball).value == 1);
  CHECK(translation_length(fg.mul(t, t), ball).value == 2);
  // conjugation invariance within the ball
  PathWord c = fg.mul(t, fg.mul(t, t));
  PathWord conj = fg.mul(fg.mul(c, t), fg.inv(c));
  CHECK(translation_length(conj, ball).value == 1);
}

TEST_CASE("classification: elliptic vertex groups and hyperbolic letters") {
  auto gog = f2_split();
  FundamentalGroup fg(gog);
  auto ball = BassSerreBall::expand(fg, 6);

  MarkedSubgroup trivial{"triv", &fg, {}, true, {}, false};
  auto c0 = classify_action(trivial, ball);
  CHECK(c0.cls == ActionClass::Elliptic);
  CHECK(c0.fixed_points.size() == ball.verts().size());

  MarkedSubgroup A{"A", &fg, {fg.vertex_elt(0, word_of({{0, 1}}))}, true, {}, false};
  auto cA = classify_action(A, ball);
  CHECK(cA.cls == ActionClass::Elliptic);

  PathWord ab = fg.mul(fg.vertex_elt(0, word_of({{0, 1}})),
                       fg.vertex_elt(1, word_of({{0, 1}})));
  MarkedSubgroup H{"H", &fg, {ab}, true, {}, false};
  auto cH = classify_action(H, ball);
  CHECK(cH.cls == ActionClass::Hyperbolic);
  CHECK(cH.ends.size() == 2);
}

TEST_CASE("classification: infinite dihedral action on the line") {
  OraclePtr A = std::make_shared<GroupOracle>(GroupOracle::finite_cyclic("Z2a", 2, {"r"}));
  OraclePtr B = std::make_shared<GroupOracle>(GroupOracle::finite_cyclic("Z2b", 2, {"s"}));
  OraclePtr triv = trivial_oracle("triv");
  GraphOfGroups gog("D", {{"u", A}, {"w", B}}, {{"e", 0, 1, triv, {}, {}}}, 0);
  FundamentalGroup fg(gog);
  auto ball = BassSerreBall::expand(fg, 6);
  MarkedSubgroup D{"Dinf",
                   &fg,
                   {fg.vertex_elt(0, word_of({{0, 1}})),
                    fg.vertex_elt(1, word_of({{0, 1}}))},
                   true,
                   {},
                   true};
  auto c = classify_action(D, ball);
  CHECK(c.cls == ActionClass::Dihedral);
  CHECK(fixed_set(D, ball, nullptr).empty());
}

TEST_CASE("fixed sets: hyperbolic element fixes the two ends of the line") {
  auto gog = z_loop();
  FundamentalGroup fg(gog);
  auto ball = BassSerreBall::expand(fg, 6);
  MarkedSubgroup T{"T", &fg, {fg.edge_letter(0)}, true, {}, false};
  Classification cls;
  auto fs = fixed_set(T, ball, &cls);
  CHECK(cls.cls == ActionClass::Hyperbolic);
  REQUIRE(fs.size() == 2);
  CHECK(fs[0].kind == TreePoint::Kind::Boundary);
  CHECK(ball.compare_rays(fs[0].ray, fs[1].ray) == BassSerreBall::RayCompare::Distinct);
}

TEST_CASE("bs(1,2) inside its HNN splitting acts with one fixed end") {
  auto gog = bs_as_hnn(2);
  FundamentalGroup fg(gog);
  auto ball = BassSerreBall::expand(fg, 7);
  PathWord a = fg.vertex_elt(0, word_of({{0, 1}}));
  PathWord t = fg.inv(fg.edge_letter(0));
  MarkedSubgroup A{"A", &fg, {a, t}, false, {}, true};
  Classification cls;
  auto fs = fixed_set(A, ball, &cls);
  CHECK(cls.cls == ActionClass::ParabolicOrUndecided);
  CHECK(fs.size() == 1);  // exactly one certified fixed end
}
