#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trk/gog.hpp"

namespace trk {

// Certificate that a subgroup is conjugate into vertex groups along a
// descending chain of hierarchy nodes: node ids with conjugators.
struct HEllipticCert {
  struct Link {
    std::string node;
    PathWord conj;
  };
  std::vector<Link> chain;
};

// A tagged finitely generated subgroup of the fundamental group of a graph
// of groups. Slenderness and H-ellipticity are declared attributes; the
// certificate is validated where a hierarchy context is available.
struct MarkedSubgroup {
  std::string id;
  const FundamentalGroup* ctx = nullptr;
  std::vector<PathWord> gens;
  std::optional<bool> slender;
  std::optional<HEllipticCert> helliptic;
  bool declared_whole = false;

  bool is_trivial_marked() const {
    for (const auto& g : gens)
      if (!(g.steps.empty() && g.tail.empty())) return false;
    return true;
  }
};

// Decision support for cosets of a marked subgroup inside its ambient
// fundamental group. Four supported shapes:
//
//   trivial     the trivial subgroup
//   whole       the whole group
//   oracle-sub  all generators conjugate (by a common spanning-tree path)
//               into one vertex group: exact via SubgroupOracle
//   cyclic      one generator: bounded power search
//
// Anything else is unsupported and reported as such.
class StabOracle {
 public:
  enum class Tier { Trivial, Whole, OracleSub, Cyclic, Unsupported };

  StabOracle(const MarkedSubgroup& s);

  Tier tier() const { return tier_; }
  bool supported() const { return tier_ != Tier::Unsupported; }
  const MarkedSubgroup& marked() const { return *sub_; }

  bool contains(const PathWord& g) const;
  PathWord coset_canon(const PathWord& g) const;
  bool infinite() const;  // the subgroup contains an infinite-order element

 private:
  const MarkedSubgroup* sub_;
  Tier tier_ = Tier::Unsupported;
  int osub_vertex_ = -1;
  PathWord osub_conj_;                       // tree path into that vertex
  std::shared_ptr<SubgroupOracle> osub_;     // subgroup of the vertex oracle
  PathWord cyc_gen_;
  int cyc_order_ = 0;                        // 0 = infinite
};

}  // namespace trk
