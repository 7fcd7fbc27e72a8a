#include "trk/marked.hpp"

#include <algorithm>

#include "trk/errors.hpp"

namespace trk {

StabOracle::StabOracle(const MarkedSubgroup& s) : sub_(&s) {
  const FundamentalGroup& fg = *s.ctx;
  std::vector<PathWord> gens;
  for (const auto& g : s.gens) {
    PathWord n = fg.normalize(g);
    if (!(n.steps.empty() && n.tail.empty())) gens.push_back(std::move(n));
  }
  if (gens.empty()) {
    tier_ = Tier::Trivial;
    return;
  }
  if (s.declared_whole) {
    tier_ = Tier::Whole;
    return;
  }
  // single-vertex graphs: whole-group test is decidable
  if (fg.gog().edges().empty()) {
    std::vector<Word> tails;
    for (const auto& g : gens) tails.push_back(g.tail);
    auto so = std::make_shared<SubgroupOracle>(*fg.gog().vertices()[0].group, tails);
    if (so->is_whole_group()) {
      tier_ = Tier::Whole;
      return;
    }
    tier_ = Tier::OracleSub;
    osub_vertex_ = 0;
    osub_conj_ = fg.one();
    osub_ = so;
    return;
  }
  // conjugate into a single vertex group along the spanning tree?
  for (size_t v = 0; v < fg.gog().vertices().size(); ++v) {
    PathWord t = fg.tree_path(static_cast<int>(v));
    std::vector<Word> tails;
    bool ok = true;
    for (const auto& g : gens) {
      PathWord h = fg.mul(fg.mul(fg.inv(t), g), t);
      if (!h.steps.empty()) {
        ok = false;
        break;
      }
      tails.push_back(h.tail);
    }
    if (ok) {
      tier_ = Tier::OracleSub;
      osub_vertex_ = static_cast<int>(v);
      osub_conj_ = t;
      osub_ = std::make_shared<SubgroupOracle>(
          *fg.gog().vertices()[v].group, tails);
      return;
    }
  }
  if (gens.size() == 1) {
    tier_ = Tier::Cyclic;
    cyc_gen_ = gens[0];
    // torsion detection by bounded powering
    PathWord acc = cyc_gen_;
    for (int k = 2; k <= 64; ++k) {
      acc = fg.mul(acc, cyc_gen_);
      if (acc.steps.empty() && acc.tail.empty()) {
        cyc_order_ = k;
        break;
      }
      if (acc.syl_length() > 8 * cyc_gen_.syl_length() + 64) break;
    }
    if (fg.is_identity(cyc_gen_)) cyc_order_ = 1;
    return;
  }
  tier_ = Tier::Unsupported;
}

bool StabOracle::contains(const PathWord& g) const {
  const FundamentalGroup& fg = *sub_->ctx;
  switch (tier_) {
    case Tier::Trivial:
      return fg.is_identity(g);
    case Tier::Whole:
      return true;
    case Tier::OracleSub: {
      PathWord h = fg.mul(fg.mul(fg.inv(osub_conj_), g), osub_conj_);
      if (!h.steps.empty()) return false;
      return osub_->contains(h.tail);
    }
    case Tier::Cyclic: {
      if (fg.is_identity(g)) return true;
      int limit = cyc_order_ > 0 ? cyc_order_ : 512;
      PathWord pos = fg.one(), neg = fg.one();
      int64_t bound = g.syl_length() + 2 * cyc_gen_.syl_length() + 8;
      for (int k = 1; k <= limit; ++k) {
        pos = fg.mul(pos, cyc_gen_);
        if (pos == fg.normalize(g)) return true;
        if (cyc_order_ == 0) {
          neg = fg.mul(neg, fg.inv(cyc_gen_));
          if (neg == fg.normalize(g)) return true;
          if (pos.syl_length() > bound && neg.syl_length() > bound) break;
        }
      }
      return false;
    }
    case Tier::Unsupported:
      fail(ErrKind::UnsupportedOracle,
           "membership in subgroup " + sub_->id + " is not supported");
  }
  return false;
}

PathWord StabOracle::coset_canon(const PathWord& g) const {
  const FundamentalGroup& fg = *sub_->ctx;
  switch (tier_) {
    case Tier::Trivial:
      return fg.normalize(g);
    case Tier::Whole:
      return fg.one();
    case Tier::OracleSub: {
      PathWord q = fg.normalize(fg.mul(g, osub_conj_));
      q.tail = osub_->coset_canon(q.tail);
      return q;
    }
    case Tier::Cyclic: {
      PathWord best = fg.normalize(g);
      int limit = cyc_order_ > 0 ? cyc_order_ : 512;
      for (int dir : {1, -1}) {
        if (cyc_order_ > 0 && dir < 0) break;
        PathWord step = dir > 0 ? cyc_gen_ : fg.inv(cyc_gen_);
        PathWord cur = fg.normalize(g);
        for (int k = 1; k <= limit; ++k) {
          cur = fg.mul(cur, step);
          if (cur < best) best = cur;
          if (cyc_order_ == 0 &&
              cur.syl_length() > best.syl_length() + 2 * cyc_gen_.syl_length() + 8)
            break;
        }
      }
      return best;
    }
    case Tier::Unsupported:
      fail(ErrKind::UnsupportedOracle,
           "coset labels for subgroup " + sub_->id + " are not supported");
  }
  return g;
}

bool StabOracle::infinite() const {
  const FundamentalGroup& fg = *sub_->ctx;
  switch (tier_) {
    case Tier::Trivial:
      return false;
    case Tier::Whole: {
      for (const auto& g : fg.generators())
        if (fg.has_infinite_order(g)) return true;
      return false;
    }
    case Tier::OracleSub: {
      for (const auto& g : osub_->gens())
        if (osub_->oracle().has_infinite_order(g)) return true;
      return false;
    }
    case Tier::Cyclic:
      return cyc_order_ == 0;
    case Tier::Unsupported:
      for (const auto& g : sub_->gens)
        if (fg.has_infinite_order(g)) return true;
      return false;
  }
  return false;
}

}  // namespace trk
