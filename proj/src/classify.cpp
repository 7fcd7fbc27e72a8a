#include "trk/classify.hpp"

#include <algorithm>
#include <set>

#include "trk/errors.hpp"

namespace trk {

const char* action_class_name(ActionClass c) {
  switch (c) {
    case ActionClass::Elliptic: return "elliptic";
    case ActionClass::Hyperbolic: return "hyperbolic";
    case ActionClass::Dihedral: return "dihedral";
    case ActionClass::ParabolicOrUndecided: return "parabolic-or-undecided";
  }
  return "?";
}

TranslationLength translation_length(const PathWord& g, const BassSerreBall& ball) {
  const FundamentalGroup& fg = ball.fg();
  TranslationLength out;
  out.attempted_depth = ball.depth();
  PathWord gn = fg.normalize(g);
  if (gn.steps.empty() && gn.tail.empty()) {
    out.value = 0;
    return out;
  }
  int best = -1, witness = -1;
  for (int v = 0; v < static_cast<int>(ball.verts().size()); ++v) {
    auto gv = ball.act_vertex(gn, v);
    if (!gv) continue;
    int d = ball.distance(v, *gv);
    if (best < 0 || d < best) {
      best = d;
      witness = v;
    }
    if (best == 0) break;
  }
  if (best < 0) return out;  // no orbit pair inside the ball
  if (best == 0) {
    out.value = 0;
    return out;
  }
  // witness on the axis iff d(v,gv) = d(gv,g2v) = m and d(v,g2v) = 2m
  auto gv = ball.act_vertex(gn, witness);
  auto g2v = gv ? ball.act_vertex(gn, *gv) : std::nullopt;
  if (gv && g2v && ball.distance(*gv, *g2v) == best &&
      ball.distance(witness, *g2v) == 2 * best)
    out.value = best;
  return out;
}

namespace {

// first certified-hyperbolic element among short products of generators
struct HypFind {
  PathWord elt;
  int length = 0;
  bool found = false;
  bool saw_undecided = false;
};

HypFind find_hyperbolic(const std::vector<PathWord>& gens, const BassSerreBall& ball) {
  const FundamentalGroup& fg = ball.fg();
  HypFind out;
  std::vector<PathWord> cands = gens;
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = 0; j < gens.size(); ++j)
      if (i != j) cands.push_back(fg.mul(gens[i], gens[j]));
  for (const auto& c : cands) {
    if (fg.is_identity(c)) continue;
    TranslationLength tl = translation_length(c, ball);
    if (tl.undecided()) {
      out.saw_undecided = true;
      continue;
    }
    if (*tl.value > 0) {
      out.elt = c;
      out.length = *tl.value;
      out.found = true;
      return out;
    }
  }
  return out;
}

}  // namespace

Classification classify_action(const MarkedSubgroup& s, const BassSerreBall& ball) {
  const FundamentalGroup& fg = ball.fg();
  Classification out;
  std::vector<PathWord> gens;
  for (const auto& g : s.gens) {
    PathWord n = fg.normalize(g);
    if (!(n.steps.empty() && n.tail.empty())) gens.push_back(std::move(n));
  }
  if (gens.empty()) {
    out.cls = ActionClass::Elliptic;
    out.certified = true;
    for (int v = 0; v < static_cast<int>(ball.verts().size()); ++v)
      out.fixed_points.push_back(TreePoint::make_vertex(v));
    return out;
  }
  for (const auto& g : gens)
    if (!ball.act_vertex(g, ball.base()))
      fail(ErrKind::DepthExceeded,
           "generator of " + s.id + " moves the base out of the ball");

  // common fixed vertices
  std::vector<int> common;
  for (int v = 0; v < static_cast<int>(ball.verts().size()); ++v) {
    bool all = true;
    for (const auto& g : gens) {
      auto gv = ball.act_vertex(g, v);
      if (!gv || *gv != v) {
        all = false;
        break;
      }
    }
    if (all) common.push_back(v);
  }
  if (!common.empty()) {
    out.cls = ActionClass::Elliptic;
    out.certified = true;
    for (int v : common) out.fixed_points.push_back(TreePoint::make_vertex(v));
    return out;
  }

  HypFind hyp = find_hyperbolic(gens, ball);
  if (hyp.found) {
    // axis = minset of the hyperbolic element inside the ball
    std::set<int> axis;
    for (int v = 0; v < static_cast<int>(ball.verts().size()); ++v) {
      auto gv = ball.act_vertex(hyp.elt, v);
      if (gv && ball.distance(v, *gv) == hyp.length) axis.insert(v);
    }
    int anchor = *axis.begin();
    BoundaryTag plus{anchor, hyp.elt};
    BoundaryTag minus{anchor, fg.inv(hyp.elt)};
    bool invariant = true, reversal = false, undecided = false;
    for (const auto& g : gens) {
      // does g preserve the axis setwise (as far as the window shows)?
      // membership of g.v is tested by the defining minset property, so
      // frontier vertices whose h-image escapes count as unknown, not moved
      int checked = 0;
      bool inside = true;
      for (int v : axis) {
        auto gv = ball.act_vertex(g, v);
        if (!gv) continue;
        auto hgv = ball.act_vertex(hyp.elt, *gv);
        if (!hgv) continue;
        ++checked;
        if (ball.distance(*gv, *hgv) != hyp.length) inside = false;
      }
      if (checked == 0) {
        undecided = true;
        continue;
      }
      if (!inside) {
        invariant = false;
        break;
      }
      BoundaryTag gplus{*ball.act_vertex(g, anchor),
                        fg.mul(fg.mul(g, hyp.elt), fg.inv(g))};
      auto cmp = ball.compare_rays(gplus, plus);
      auto cmp2 = ball.compare_rays(gplus, minus);
      if (cmp == BassSerreBall::RayCompare::Equal) {
        // orientation preserved
      } else if (cmp2 == BassSerreBall::RayCompare::Equal) {
        reversal = true;
      } else {
        undecided = true;
      }
    }
    if (invariant && !undecided) {
      out.cls = reversal ? ActionClass::Dihedral : ActionClass::Hyperbolic;
      out.certified = true;
      out.ends = {plus, minus};
      out.axis.assign(axis.begin(), axis.end());
      if (reversal) out.diagnostic = "axis preserved with a reversing generator";
      return out;
    }
    if (invariant && undecided) {
      out.cls = ActionClass::ParabolicOrUndecided;
      out.diagnostic = "axis candidate not certified at depth " +
                       std::to_string(ball.depth());
      out.ends = {plus, minus};
      return out;
    }
    // axis moved: look for a common fixed end among the axis ends
    std::vector<BoundaryTag> fixed_ends;
    for (const auto& cand : {plus, minus}) {
      bool all = true;
      for (const auto& g : gens) {
        auto ga = ball.act_vertex(g, cand.anchor);
        if (!ga) {
          all = false;
          break;
        }
        BoundaryTag moved{*ga, fg.mul(fg.mul(g, cand.period), fg.inv(g))};
        if (ball.compare_rays(moved, cand) != BassSerreBall::RayCompare::Equal) {
          all = false;
          break;
        }
      }
      if (all) fixed_ends.push_back(cand);
    }
    out.cls = ActionClass::ParabolicOrUndecided;
    out.ends = fixed_ends;
    if (!fixed_ends.empty()) {
      out.diagnostic = "no invariant axis; common fixed end certified to depth " +
                       std::to_string(ball.depth());
    } else {
      out.diagnostic = "no invariant axis and no certified common end";
    }
    if (s.slender.value_or(false))
      out.diagnostic += "; subgroup declared slender, result downgraded to undecided";
    return out;
  }

  out.cls = ActionClass::ParabolicOrUndecided;
  out.diagnostic = hyp.saw_undecided
                       ? "translation lengths undecided at depth " +
                             std::to_string(ball.depth())
                       : "no fixed point and no hyperbolic product found";
  if (s.slender.value_or(false))
    out.diagnostic += "; subgroup declared slender, result downgraded to undecided";
  return out;
}

std::vector<TreePoint> fixed_set(const MarkedSubgroup& s, const BassSerreBall& ball,
                                 Classification* out_cls) {
  Classification cls = classify_action(s, ball);
  if (out_cls) *out_cls = cls;
  switch (cls.cls) {
    case ActionClass::Elliptic:
      return cls.fixed_points;
    case ActionClass::Hyperbolic: {
      std::vector<TreePoint> out;
      for (const auto& e : cls.ends) out.push_back(TreePoint::make_boundary(e));
      return out;
    }
    case ActionClass::Dihedral:
      return {};
    case ActionClass::ParabolicOrUndecided: {
      if (cls.ends.empty())
        fail(ErrKind::DepthExceeded,
             "fixed set of " + s.id + " undecided: " + cls.diagnostic);
      std::vector<TreePoint> out;
      for (const auto& e : cls.ends) out.push_back(TreePoint::make_boundary(e));
      return out;
    }
  }
  return {};
}

}  // namespace trk
