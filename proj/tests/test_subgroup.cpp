#include <doctest.h>

#include <random>

#include "trk/oracle.hpp"
#include "trk/subgroup.hpp"

using namespace trk;

namespace {

Word random_word(std::mt19937& rng, int num_gens, int len) {
  Word w;
  std::uniform_int_distribution<int> g(0, num_gens - 1), s(0, 1);
  for (int i = 0; i < len; ++i) w.push(g(rng), s(rng) ? 1 : -1);
  return w;
}

Word eval_expr(const SubgroupOracle& H, const SubExpr& e) {
  Word acc;
  const auto& o = H.oracle();
  for (auto [i, k] : e) {
    Word g = k > 0 ? H.gens()[i] : o.inverse(H.gens()[i]);
    for (int64_t j = 0; j < std::abs(k); ++j) acc = o.multiply(acc, g);
  }
  return acc;
}

void check_canon_properties(const SubgroupOracle& H, std::mt19937& rng, int trials) {
  const auto& o = H.oracle();
  for (int i = 0; i < trials; ++i) {
    Word w = random_word(rng, o.num_gens(), 6);
    Word c = H.coset_canon(w);
    CHECK(H.coset_canon(c) == c);
    CHECK(H.contains(o.multiply(o.inverse(c), w)));
    if (!H.gens().empty()) {
      // canon is constant on the coset
      Word h = H.gens()[i % H.gens().size()];
      CHECK(H.coset_canon(o.multiply(w, h)) == c);
    }
  }
}

}  // namespace

TEST_CASE("finite cyclic subgroups") {
  auto Z6 = GroupOracle::finite_cyclic("Z6", 6, {"g"});
  SubgroupOracle H(Z6, {word_of({{0, 2}})});
  CHECK(H.contains(word_of({{0, 4}})));
  CHECK(!H.contains(word_of({{0, 3}})));
  CHECK(H.index(100) == 2);
  auto e = H.express(word_of({{0, 4}}));
  REQUIRE(e.has_value());
  CHECK(Z6.equal(eval_expr(H, *e), word_of({{0, 4}})));
  std::mt19937 rng(1);
  check_canon_properties(H, rng, 50);
}

TEST_CASE("free subgroups via the folded core") {
  auto F2 = GroupOracle::free_group("F2", 2, {"a", "b"});
  Word a = word_of({{0, 1}}), b = word_of({{1, 1}});
  Word comm = word_of({{0, 1}, {1, 1}, {0, -1}, {1, -1}});  // [a,b]

  // <a^2, b, a b a^-1>: the even-a-exponent subgroup, index 2
  Word aba = F2.multiply(a, F2.multiply(b, F2.inverse(a)));
  SubgroupOracle H(F2, {F2.multiply(a, a), b, aba});
  CHECK(H.contains(word_of({{0, 2}, {1, 3}})));
  CHECK(!H.contains(a));
  CHECK(H.contains(F2.multiply(a, F2.multiply(b, a))));  // even a-exponent
  CHECK(H.free_rank() == 3);
  CHECK(H.index(100) == 2);
  CHECK(H.coset_reps_in_ball(3).size() == 2);

  // <a^2, b> itself has infinite index and rank 2
  SubgroupOracle H0(F2, {F2.multiply(a, a), b});
  CHECK(!H0.contains(F2.multiply(a, F2.multiply(b, a))));
  CHECK(H0.free_rank() == 2);
  CHECK(!H0.index(1000).has_value());

  SubgroupOracle C(F2, {comm});  // <[a,b]>
  CHECK(C.contains(F2.multiply(comm, comm)));
  CHECK(!C.contains(F2.multiply(a, b)));
  CHECK(C.free_rank() == 1);
  CHECK(!C.index(1000).has_value());
  auto e = C.express(F2.inverse(F2.multiply(comm, comm)));
  REQUIRE(e.has_value());
  CHECK(F2.equal(eval_expr(C, *e), F2.inverse(F2.multiply(comm, comm))));

  SubgroupOracle W(F2, {a, b});
  CHECK(W.is_whole_group());
  CHECK(W.free_rank() == 2);
  CHECK(W.index(10) == 1);

  std::mt19937 rng(2);
  check_canon_properties(H, rng, 60);
  check_canon_properties(C, rng, 60);

  // express on random members of <a^2, b>
  for (int i = 0; i < 40; ++i) {
    SubExpr probe;
    Word w;
    std::uniform_int_distribution<int> pick(0, 1), sgn(0, 1);
    for (int j = 0; j < 5; ++j) {
      int g = pick(rng);
      int s = sgn(rng) ? 1 : -1;
      w = F2.multiply(w, s > 0 ? H.gens()[g] : F2.inverse(H.gens()[g]));
      probe.push_back({g, s});
    }
    auto ex = H.express(w);
    REQUIRE(ex.has_value());
    CHECK(F2.equal(eval_expr(H, *ex), w));
  }
}

TEST_CASE("free-abelian subgroups via lattice reduction") {
  auto Z2 = GroupOracle::free_abelian("Z2", 2, {"x", "y"});
  SubgroupOracle H(Z2, {word_of({{0, 2}}), word_of({{1, 3}})});
  CHECK(H.contains(word_of({{0, 2}, {1, 3}})));
  CHECK(!H.contains(word_of({{0, 1}})));
  CHECK(H.index(100) == 6);
  auto e = H.express(word_of({{0, 4}, {1, -3}}));
  REQUIRE(e.has_value());
  CHECK(Z2.equal(eval_expr(H, *e), word_of({{0, 4}, {1, -3}})));

  SubgroupOracle D(Z2, {word_of({{0, 1}, {1, 1}})});  // <(1,1)>
  CHECK(D.contains(word_of({{0, 3}, {1, 3}})));
  CHECK(!D.contains(word_of({{0, 1}})));
  CHECK(!D.index(100).has_value());

  std::mt19937 rng(3);
  check_canon_properties(H, rng, 60);
  check_canon_properties(D, rng, 60);
}

TEST_CASE("bs(1,2) subgroups") {
  auto BS = GroupOracle::baumslag_solitar("BS2", 2, {"a", "t"});
  Word a = word_of({{0, 1}}), t = word_of({{1, 1}});

  SubgroupOracle A(BS, {a});  // <a> = Z, not the Z[1/2] closure
  CHECK(A.contains(word_of({{0, 5}})));
  Word half = BS.multiply(BS.inverse(t), BS.multiply(a, t));  // t^-1 a t
  CHECK(!A.contains(half));
  CHECK(A.contains(BS.multiply(half, half)));  // (t^-1 a t)^2 = a

  SubgroupOracle T(BS, {t});
  CHECK(T.contains(word_of({{1, 3}})));
  CHECK(!T.contains(a));

  SubgroupOracle W(BS, {a, t});
  CHECK(W.is_whole_group());

  // <a^2, t> contains a, because t^-1 a^2 t = a
  SubgroupOracle H2(BS, {word_of({{0, 2}}), t});
  CHECK(H2.contains(a));
  auto e = H2.express(a);
  REQUIRE(e.has_value());
  CHECK(BS.equal(eval_expr(H2, *e), a));

  // <a^3, t> does not contain a
  SubgroupOracle H3(BS, {word_of({{0, 3}}), t});
  CHECK(!H3.contains(a));
  CHECK(H3.contains(word_of({{0, 3}})));
  CHECK(H3.contains(BS.multiply(BS.inverse(t), BS.multiply(word_of({{0, 3}}), t))));

  std::mt19937 rng(4);
  check_canon_properties(A, rng, 60);
  check_canon_properties(T, rng, 60);
  check_canon_properties(H3, rng, 60);

  // membership cross-check against exhaustive products for <a^3, t>
  std::vector<Word> members{Word{}};
  std::vector<Word> frontier{Word{}};
  std::vector<Word> hg = {word_of({{0, 3}}), t, BS.inverse(word_of({{0, 3}})),
                          BS.inverse(t)};
  for (int d = 0; d < 5; ++d) {
    std::vector<Word> next;
    for (const auto& w : frontier)
      for (const auto& g : hg) {
        Word v = BS.multiply(w, g);
        bool fresh = true;
        for (const auto& m : members)
          if (m == v) fresh = false;
        if (fresh) {
          members.push_back(v);
          next.push_back(v);
        }
      }
    frontier = std::move(next);
    if (members.size() > 400) break;
  }
  for (const auto& m : members) CHECK(H3.contains(m));
}
