#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "trk/oracle.hpp"
#include "trk/words.hpp"

namespace trk {

// Expression of a subgroup element as a word over the subgroup's own
// generator list: pairs (generator position, exponent), applied left to
// right.
using SubExpr = std::vector<std::pair<int, int64_t>>;

// A finitely generated subgroup of a GroupOracle with decision procedures:
//
//   contains(w)     exact membership
//   coset_canon(w)  canonical representative of the left coset w·H;
//                   canon is idempotent and constant on cosets
//   express(w)      some expression of w over the subgroup generators
//                   (exact for finite / free-abelian / bs; for free
//                   subgroups a bounded search backs up the greedy
//                   Nielsen route and may report DepthExceeded)
//
// Values are immutable after construction.
class SubgroupOracle {
 public:
  SubgroupOracle(const GroupOracle& oracle, std::vector<Word> gens);

  const GroupOracle& oracle() const { return *oracle_; }
  const std::vector<Word>& gens() const { return gens_; }

  bool contains(const Word& w) const;
  Word coset_canon(const Word& w) const;
  std::optional<SubExpr> express(const Word& w) const;
  Word apply_expr(const SubExpr& e, const std::vector<Word>& images,
                  const GroupOracle& target) const;

  bool is_whole_group() const;
  bool is_trivial() const;

  // Free subgroups only: rank of the Stallings core.
  int free_rank() const;

  // Index of H in the oracle if finite and <= cap, else nullopt.
  std::optional<int64_t> index(int64_t cap) const;

  // Distinct left-coset representatives g·H with |g| <= radius in the
  // generator metric, sorted deterministically; identity coset first.
  std::vector<Word> coset_reps_in_ball(int radius) const;

 private:
  struct FreeCore;   // folded Stallings graph
  struct AbelData;   // HNF lattice basis + expression matrix
  struct BsData;     // degree gcd, base module, stable-letter word

  void build_abel();
  void build_bs();

  const GroupOracle* oracle_;
  std::vector<Word> gens_;
  std::shared_ptr<FreeCore> free_;
  std::shared_ptr<AbelData> abel_;
  std::shared_ptr<BsData> bs_;
  int64_t finite_d_ = 0;  // finite cyclic: subgroup = <g^d>, d | order
};

}  // namespace trk
