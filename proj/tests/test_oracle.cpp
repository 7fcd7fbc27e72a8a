#include <doctest.h>

#include <random>

#include "trk/oracle.hpp"

using namespace trk;

namespace {

// Independent check for bs(1,n): the faithful affine action a: x -> x+1,
// t: x -> n*x, with exact arithmetic over Z[1/n].
struct Affine {
  long long deg = 0;   // multiplier n^deg
  long long num = 0;   // offset num / n^pow
  long long pow = 0;

  static Affine compose(const Affine& f, const Affine& g, long long n) {
    // (f o g)(x) = n^df (n^dg x + cg) + cf
    auto pown = [&](long long e) {
      long long r = 1;
      for (long long i = 0; i < e; ++i) r *= n;
      return r;
    };
    Affine r;
    r.deg = f.deg + g.deg;
    long long cn = g.num, cp = g.pow;
    if (f.deg >= 0)
      cn *= pown(f.deg);
    else
      cp += -f.deg;
    long long P = std::max(cp, f.pow);
    r.num = cn * pown(P - cp) + f.num * pown(P - f.pow);
    r.pow = P;
    while (r.num != 0 && r.num % n == 0 && r.pow > 0) {
      r.num /= n;
      --r.pow;
    }
    if (r.num == 0) r.pow = 0;
    return r;
  }

  friend bool operator==(const Affine&, const Affine&) = default;
};

Affine affine_of(const Word& w, long long n) {
  Affine a{0, 1, 0}, t{1, 0, 0};  // a: x+1, t: nx
  Affine acc{0, 0, 0};
  for (const auto& s : w.syls) {
    Affine base = s.gen == 0 ? a : t;
    if (s.exp < 0) {
      // invert: (n^d x + c)^-1 = n^-d x - c n^-d
      Affine inv;
      inv.deg = -base.deg;
      inv.num = -base.num;
      inv.pow = base.pow + base.deg > 0 ? base.pow + base.deg : base.pow;
      if (base.deg > 0) inv.pow = base.pow + base.deg;
      base = inv;
    }
    for (long long i = 0; i < std::abs(s.exp); ++i)
      acc = Affine::compose(acc, base, n);
  }
  return acc;
}

Word random_word(std::mt19937& rng, int num_gens, int len) {
  Word w;
  std::uniform_int_distribution<int> g(0, num_gens - 1), s(0, 1);
  for (int i = 0; i < len; ++i) w.push(g(rng), s(rng) ? 1 : -1);
  return w;
}

}  // namespace

TEST_CASE("free group normalization") {
  auto F2 = GroupOracle::free_group("F2", 2, {"a", "b"});
  // a a^-1 = 1
  CHECK(F2.is_identity(word_of({{0, 1}, {0, -1}})));
  Word w = word_of({{0, 1}, {1, 2}, {1, -2}, {0, -1}, {1, 3}});
  CHECK(F2.normalize(w) == word_of({{1, 3}}));
  CHECK(F2.equal(F2.multiply(w, F2.inverse(w)), Word{}));
}

TEST_CASE("free abelian normalization") {
  auto Z2 = GroupOracle::free_abelian("Z2", 2, {"x", "y"});
  // x^2 y^-1 x = x^3 y^-1
  Word w = word_of({{0, 2}, {1, -1}, {0, 1}});
  CHECK(Z2.normalize(w) == word_of({{0, 3}, {1, -1}}));
}

TEST_CASE("finite cyclic normalization") {
  auto Z5 = GroupOracle::finite_cyclic("Z5", 5, {"g"});
  CHECK(Z5.normalize(word_of({{0, 7}})) == word_of({{0, 2}}));
  CHECK(Z5.is_identity(word_of({{0, -5}})));
  CHECK(Z5.ball(10).size() == 5);
}

TEST_CASE("bs(1,2): a t a t^-1 = a^3, checked against the affine action") {
  auto BS = GroupOracle::baumslag_solitar("BS2", 2, {"a", "t"});
  Word w = word_of({{0, 1}, {1, 1}, {0, 1}, {1, -1}});
  // independent oracle first
  Affine expect = affine_of(word_of({{0, 3}}), 2);
  CHECK(affine_of(w, 2) == expect);
  CHECK(BS.normalize(w) == word_of({{0, 3}}));
}

TEST_CASE("bs(1,n) normal form invariants and affine consistency") {
  for (long long n : {2, 3}) {
    auto BS = GroupOracle::baumslag_solitar("BS", n, {"a", "t"});
    std::mt19937 rng(42 + n);
    for (int trial = 0; trial < 4000; ++trial) {
      Word w = random_word(rng, 2, 12);
      Word nf = BS.normalize(w);
      CHECK(BS.normalize(nf) == nf);
      CHECK(affine_of(w, n) == affine_of(nf, n));
      // t^-p a^m t^q with p,q >= 0 and (n !| m, or p = 0, or q = 0)
      long long p = 0, m = 0, q = 0;
      for (const auto& s : nf.syls) {
        if (s.gen == 1 && s.exp < 0) p = -s.exp;
        if (s.gen == 0) m = s.exp;
        if (s.gen == 1 && s.exp > 0) q = s.exp;
      }
      CHECK(p >= 0);
      CHECK(q >= 0);
      if (p > 0 && q > 0) CHECK(m % n != 0);
    }
  }
}

TEST_CASE("normalize is idempotent: exhaustive short words, ball fixpoints") {
  auto F2 = GroupOracle::free_group("F2", 2, {"a", "b"});
  auto Z2 = GroupOracle::free_abelian("Z2", 2, {"x", "y"});
  auto Z6 = GroupOracle::finite_cyclic("Z6", 6, {"g"});
  auto BS = GroupOracle::baumslag_solitar("BS2", 2, {"a", "t"});
  const GroupOracle* oracles[] = {&F2, &Z2, &Z6, &BS};

  for (const auto* o : oracles) {
    // exhaustive words up to length 8
    int letters = 2 * o->num_gens();
    std::vector<Word> frontier{Word{}};
    for (int d = 0; d < 8; ++d) {
      std::vector<Word> next;
      for (const auto& w : frontier) {
        for (int l = 0; l < letters; ++l) {
          Word v = w;
          v.push(l / 2, (l & 1) ? -1 : 1);
          Word nf = o->normalize(v);
          CHECK(o->normalize(nf) == nf);
          next.push_back(std::move(v));
        }
      }
      frontier = std::move(next);
      if (frontier.size() > 30000) break;  // finite oracle loops forever otherwise
    }
    // every ball element is a fixpoint
    for (const auto& w : o->ball(o->kind() == OracleKind::Free ? 12 : 10))
      CHECK(o->normalize(w) == w);
  }

  // random length-12 words on top
  std::mt19937 rng(7);
  for (const auto* o : oracles)
    for (int i = 0; i < 2000; ++i) {
      Word w = random_word(rng, o->num_gens(), 12);
      Word nf = o->normalize(w);
      CHECK(o->normalize(nf) == nf);
    }
}

TEST_CASE("balls are inversion-closed and metric-correct for free groups") {
  auto F2 = GroupOracle::free_group("F2", 2, {"a", "b"});
  auto b = F2.ball(4);
  CHECK(b.size() == 1 + 4 + 4 * 3 + 4 * 9 + 4 * 27);
  for (const auto& w : b) {
    bool found = false;
    Word inv = F2.inverse(w);
    for (const auto& v : b)
      if (v == inv) found = true;
    CHECK(found);
  }
  CHECK(F2.true_length(word_of({{0, 1}, {1, -2}}), 8) == 3);
}
