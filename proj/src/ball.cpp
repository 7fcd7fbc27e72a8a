#include "trk/ball.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "trk/errors.hpp"

namespace trk {

namespace {

// canonical prefix with the last (rep, step) dropped
PathWord parent_label(const PathWord& p) {
  PathWord q = p;
  q.elems.pop_back();
  q.steps.pop_back();
  q.tail = Word{};
  return q;
}

// development cost of a vertex label: each edge crossing costs the written
// length of its transversal representative, floored at 1
int64_t label_cost(const PathWord& p) {
  int64_t c = 0;
  for (const auto& e : p.elems) c += std::max<int64_t>(1, e.syl_length());
  return c;
}

}  // namespace

BassSerreBall BassSerreBall::expand(const FundamentalGroup& fg, int depth) {
  BassSerreBall ball;
  ball.fg_ = &fg;
  ball.depth_ = depth;
  const auto& gog = fg.gog();

  // per (edge, side) coset representatives within the budget
  std::map<std::pair<int, bool>, std::vector<Word>> reps_cache;
  auto reps = [&](int e, bool alpha_side) -> const std::vector<Word>& {
    auto key = std::make_pair(e, alpha_side);
    auto it = reps_cache.find(key);
    if (it != reps_cache.end()) return it->second;
    const SubgroupOracle& img = alpha_side ? fg.alpha_image(e) : fg.omega_image(e);
    return reps_cache.emplace(key, img.coset_reps_in_ball(depth)).first->second;
  };

  std::map<int64_t, std::vector<PathWord>> layers;
  PathWord base = fg.vertex_coset(fg.one());
  layers[label_cost(base)].push_back(base);
  std::unordered_map<PathWord, int, PathWordHash> seen;

  std::vector<PathWord> accepted;
  while (!layers.empty()) {
    auto it = layers.begin();
    int64_t len = it->first;
    std::vector<PathWord> layer = std::move(it->second);
    layers.erase(it);
    if (len > depth) break;
    std::sort(layer.begin(), layer.end());
    for (const auto& lbl : layer) {
      if (seen.count(lbl)) continue;
      seen.emplace(lbl, 1);
      accepted.push_back(lbl);
      int v = fg.end_vertex(lbl);
      int64_t budget = depth - len - 1;  // next crossing costs at least 1
      if (budget < 0) continue;
      for (size_t e = 0; e < gog.edges().size(); ++e) {
        const auto& ed = gog.edges()[e];
        for (int dir = 0; dir < 2; ++dir) {
          bool fwd = dir == 0;
          if ((fwd ? ed.from : ed.to) != v) continue;
          for (const auto& r : reps(static_cast<int>(e), fwd)) {
            if (std::max<int64_t>(1, r.syl_length()) > depth - len) continue;
            PathWord raw = lbl;
            raw.elems.push_back(r);
            raw.steps.push_back({static_cast<int>(e), fwd});
            PathWord nb = fg.vertex_coset(fg.normalize(raw));
            int64_t nlen = label_cost(nb);
            if (nlen > depth || seen.count(nb)) continue;
            layers[nlen].push_back(nb);
          }
        }
      }
    }
  }

  std::sort(accepted.begin(), accepted.end());
  for (size_t i = 0; i < accepted.size(); ++i) {
    BVert bv;
    bv.label = accepted[i];
    bv.gog_vertex = fg.end_vertex(bv.label);
    bv.tree_depth = static_cast<int>(bv.label.steps.size());
    bv.parent = -1;
    bv.parent_edge = -1;
    ball.vidx_.emplace(bv.label, static_cast<int>(i));
    ball.verts_.push_back(std::move(bv));
  }

  // parent structure and edges from canonical prefixes
  ball.incid_.assign(ball.verts_.size(), {});
  for (size_t i = 0; i < ball.verts_.size(); ++i) {
    auto& bv = ball.verts_[i];
    if (bv.label.steps.empty()) continue;
    PathWord par = parent_label(bv.label);
    auto pit = ball.vidx_.find(par);
    if (pit == ball.vidx_.end())
      fail(ErrKind::Internal, "ball not prefix-closed at " + fg.print(bv.label));
    bv.parent = pit->second;
    PathStep last = bv.label.steps.back();
    // the crossed edge, anchored at its alpha side
    PathWord entry;
    int u, v2;
    if (last.fwd) {
      entry = par;
      entry.tail = bv.label.elems.back();
      u = pit->second;
      v2 = static_cast<int>(i);
    } else {
      entry = bv.label;  // the child sits at o(e)
      u = static_cast<int>(i);
      v2 = pit->second;
    }
    BEdge be;
    be.gog_edge = last.edge;
    be.label = fg.edge_coset(entry, last.edge, true);
    be.u = u;
    be.v = v2;
    bv.parent_edge = static_cast<int>(ball.edges_.size());
    ball.incid_[u].push_back(bv.parent_edge);
    ball.incid_[v2].push_back(bv.parent_edge);
    ball.edges_.push_back(std::move(be));
  }
  return ball;
}

int BassSerreBall::find_vertex(const PathWord& canon_label) const {
  auto it = vidx_.find(canon_label);
  return it == vidx_.end() ? -1 : it->second;
}

std::optional<int> BassSerreBall::act_vertex(const PathWord& g, int v) const {
  PathWord moved = fg_->vertex_coset(fg_->mul(g, verts_[v].label));
  int idx = find_vertex(moved);
  if (idx < 0) return std::nullopt;
  return idx;
}

std::optional<int> BassSerreBall::act_edge(const PathWord& g, int e) const {
  const auto& be = edges_[e];
  auto u2 = act_vertex(g, be.u);
  auto v2 = act_vertex(g, be.v);
  if (!u2 || !v2) return std::nullopt;
  // the moved edge joins u2 and v2; in a tree adjacent vertices determine it
  for (int cand : incid_[*u2]) {
    if ((edges_[cand].u == *u2 && edges_[cand].v == *v2) ||
        (edges_[cand].u == *v2 && edges_[cand].v == *u2))
      return cand;
  }
  return std::nullopt;
}

int BassSerreBall::lca(int u, int v) const {
  const auto& a = verts_[u].label;
  const auto& b = verts_[v].label;
  size_t j = 0;
  while (j < a.steps.size() && j < b.steps.size() && a.steps[j] == b.steps[j] &&
         a.elems[j] == b.elems[j])
    ++j;
  // the common prefix of length j is itself a ball vertex
  PathWord p;
  p.start = a.start;
  p.elems.assign(a.elems.begin(), a.elems.begin() + j);
  p.steps.assign(a.steps.begin(), a.steps.begin() + j);
  int idx = find_vertex(p);
  if (idx < 0) fail(ErrKind::Internal, "lca prefix missing from ball");
  return idx;
}

int BassSerreBall::distance(int u, int v) const {
  int w = lca(u, v);
  return verts_[u].tree_depth + verts_[v].tree_depth - 2 * verts_[w].tree_depth;
}

std::vector<int> BassSerreBall::geodesic_vertices(int u, int v) const {
  int w = lca(u, v);
  std::vector<int> up, down;
  for (int x = u; x != w; x = verts_[x].parent) up.push_back(x);
  up.push_back(w);
  for (int x = v; x != w; x = verts_[x].parent) down.push_back(x);
  std::reverse(down.begin(), down.end());
  up.insert(up.end(), down.begin(), down.end());
  return up;
}

std::vector<int> BassSerreBall::geodesic_edges(int u, int v) const {
  int w = lca(u, v);
  std::vector<int> up, down;
  for (int x = u; x != w; x = verts_[x].parent) up.push_back(verts_[x].parent_edge);
  for (int x = v; x != w; x = verts_[x].parent) down.push_back(verts_[x].parent_edge);
  std::reverse(down.begin(), down.end());
  up.insert(up.end(), down.begin(), down.end());
  return up;
}

bool BassSerreBall::is_boundary_vertex(int v) const {
  // conservative frontier test: the label has no slack for another crossing
  int64_t c = 0;
  for (const auto& e : verts_[v].label.elems)
    c += std::max<int64_t>(1, e.syl_length());
  return c + 1 > depth_;
}

std::vector<int> BassSerreBall::ray_vertices(const BoundaryTag& tag,
                                             int max_steps) const {
  std::vector<int> seq;
  if (tag.anchor < 0) return seq;
  seq.push_back(tag.anchor);
  PathWord g = tag.period;
  PathWord acc = g;
  int prev = tag.anchor;
  for (int k = 0; k < max_steps; ++k) {
    auto nxt = act_vertex(acc, tag.anchor);
    if (!nxt) break;
    auto path = geodesic_vertices(prev, *nxt);
    for (size_t i = 1; i < path.size(); ++i) {
      if (seq.size() >= 2 && seq[seq.size() - 2] == path[i])
        seq.pop_back();  // cancel backtracking
      else
        seq.push_back(path[i]);
    }
    prev = *nxt;
    acc = fg_->mul(g, acc);
    if (seq.size() > static_cast<size_t>(max_steps)) break;
  }
  return seq;
}

BassSerreBall::RayCompare BassSerreBall::compare_rays(const BoundaryTag& a,
                                                      const BoundaryTag& b) const {
  auto s1 = ray_vertices(a);
  auto s2 = ray_vertices(b);
  if (s1.size() < 3 || s2.size() < 3) return RayCompare::Undecided;
  // last common vertex
  std::map<int, size_t> pos2;
  for (size_t j = 0; j < s2.size(); ++j) pos2[s2[j]] = j;
  int li = -1;
  size_t lj = 0;
  for (size_t i = 0; i < s1.size(); ++i) {
    auto it = pos2.find(s1[i]);
    if (it != pos2.end()) {
      li = static_cast<int>(i);
      lj = it->second;
    }
  }
  if (li < 0) return RayCompare::Undecided;
  bool tail1 = static_cast<size_t>(li) + 1 >= s1.size();
  bool tail2 = lj + 1 >= s2.size();
  if (!tail1 && !tail2) {
    // both continue past their last common vertex; in a tree the common
    // part of two geodesic rays is a segment, so this parting is final
    if (s1[li + 1] != s2[lj + 1]) return RayCompare::Distinct;
    fail(ErrKind::Internal, "ray bookkeeping: divergence after last common vertex");
  }
  // ran together to a window end; certify equality only after a long
  // matched run (window-level certificate, recorded as such by callers)
  int run = 0;
  {
    int i = li;
    int j = static_cast<int>(lj);
    while (i >= 0 && j >= 0 && s1[i] == s2[j]) {
      ++run;
      --i;
      --j;
    }
  }
  // pumping margin from the measured per-period advance along the tree
  auto advance = [&](const BoundaryTag& t) -> int {
    auto img = act_vertex(t.period, t.anchor);
    if (img) return distance(t.anchor, *img);
    return static_cast<int>(t.period.syl_length());
  };
  int margin = std::max(advance(a), advance(b)) + 2;
  if (run >= margin) return RayCompare::Equal;
  return RayCompare::Undecided;
}

std::string BassSerreBall::print_point(const TreePoint& p) const {
  std::ostringstream os;
  switch (p.kind) {
    case TreePoint::Kind::Vertex:
      os << "v" << p.vertex << "=" << fg_->print(verts_[p.vertex].label);
      break;
    case TreePoint::Kind::Midpoint:
      os << "mid(e" << p.edge << ")";
      break;
    case TreePoint::Kind::Interior:
      os << "int(e" << p.edge << "@" << p.coord.value() << ")";
      break;
    case TreePoint::Kind::Boundary:
      os << "end(v" << p.ray.anchor << "; " << fg_->print(p.ray.period) << ")";
      break;
  }
  return os.str();
}

}  // namespace trk
