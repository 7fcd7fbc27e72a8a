#include <doctest.h>

#include "trk/ball.hpp"
#include "trk/classify.hpp"

using namespace trk;

namespace {

// HNN extension of Z^3 with edge group Z^3 and boundary maps given by
// diag(n,1,1) and diag(1,1,m): the stable letter s satisfies
// s x^n s^-1 = x, s y s^-1 = y, s z s^-1 = z^m.
GraphOfGroups z3_two_matrices(int n, int m) {
  OraclePtr V = std::make_shared<GroupOracle>(
      GroupOracle::free_abelian("Z3", 3, {"x", "y", "z"}));
  OraclePtr E = std::make_shared<GroupOracle>(
      GroupOracle::free_abelian("E3", 3, {"e1", "e2", "e3"}));
  GogEdge e{"s",
            0,
            0,
            E,
            {word_of({{0, n}}), word_of({{1, 1}}), word_of({{2, 1}})},
            {word_of({{0, 1}}), word_of({{1, 1}}), word_of({{2, m}})}};
  return GraphOfGroups("Delta", {{"v", V}}, {e}, 0);
}

}  // namespace

TEST_CASE("two-matrices example: A and B fix distinct ends, C is hyperbolic") {
  for (auto [n, m] : {std::pair{2, 2}, std::pair{2, 3}}) {
    auto gog = z3_two_matrices(n, m);
    FundamentalGroup fg(gog);
    auto ball = BassSerreBall::expand(fg, 8);

    PathWord x = fg.vertex_elt(0, word_of({{0, 1}}));
    PathWord y = fg.vertex_elt(0, word_of({{1, 1}}));
    PathWord z = fg.vertex_elt(0, word_of({{2, 1}}));
    PathWord s = fg.edge_letter(0);
    PathWord t = s;           // t x t^-1 = x^n
    PathWord tp = fg.inv(s);  // tp z tp^-1 = z^m

    // sanity: the defining relations hold
    CHECK(fg.equal(fg.mul(fg.mul(t, x), fg.inv(t)),
                   fg.vertex_elt(0, word_of({{0, n}}))));
    CHECK(fg.equal(fg.mul(fg.mul(tp, z), fg.inv(tp)),
                   fg.vertex_elt(0, word_of({{2, m}}))));

    // t'' c'' = s y acts hyperbolically
    auto tl = translation_length(fg.mul(s, y), ball);
    REQUIRE(tl.value.has_value());
    CHECK(*tl.value > 0);

    MarkedSubgroup A{"A", &fg, {x, t}, false, {}, false};
    MarkedSubgroup B{"B", &fg, {z, tp}, false, {}, false};
    MarkedSubgroup C{"C", &fg, {y, s}, true, {}, false};

    Classification cC;
    auto fsC = fixed_set(C, ball, &cC);
    CHECK(cC.cls == ActionClass::Hyperbolic);
    CHECK(fsC.size() == 2);

    Classification cA, cB;
    auto fsA = fixed_set(A, ball, &cA);
    auto fsB = fixed_set(B, ball, &cB);
    CHECK(cA.cls == ActionClass::ParabolicOrUndecided);
    CHECK(cB.cls == ActionClass::ParabolicOrUndecided);
    REQUIRE(fsA.size() == 1);
    REQUIRE(fsB.size() == 1);
    CHECK(ball.compare_rays(fsA[0].ray, fsB[0].ray) ==
          BassSerreBall::RayCompare::Distinct);
  }
}
