#include "trk/gog.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "trk/errors.hpp"

namespace trk {

GraphOfGroups::GraphOfGroups(std::string id, std::vector<GogVertex> verts,
                             std::vector<GogEdge> edges, int base)
    : id_(std::move(id)), verts_(std::move(verts)), edges_(std::move(edges)),
      base_(base) {
  if (verts_.empty()) fail(ErrKind::MalformedElement, "graph of groups needs a vertex");
  if (base_ < 0 || base_ >= static_cast<int>(verts_.size()))
    fail(ErrKind::DanglingReference, "base vertex out of range in " + id_);
  for (auto& e : edges_) {
    if (e.from < 0 || e.from >= static_cast<int>(verts_.size()) || e.to < 0 ||
        e.to >= static_cast<int>(verts_.size()))
      fail(ErrKind::DanglingReference, "edge endpoints out of range: " + e.id);
    if (e.group->is_trivial_group()) {
      // images of the trivial group are forced
      e.alpha.assign(e.group->num_gens(), Word{});
      e.omega.assign(e.group->num_gens(), Word{});
    }
    if (static_cast<int>(e.alpha.size()) != e.group->num_gens() ||
        static_cast<int>(e.omega.size()) != e.group->num_gens())
      fail(ErrKind::MalformedElement,
           "edge " + e.id + ": one image word per edge-group generator");
  }
  if (!is_connected())
    fail(ErrKind::MalformedElement, "graph of groups " + id_ + " is not connected");
}

GraphOfGroups GraphOfGroups::wrap(std::string id, OraclePtr oracle) {
  GraphOfGroups g;
  g.id_ = std::move(id);
  g.verts_.push_back({g.id_ + ".v", std::move(oracle)});
  g.base_ = 0;
  return g;
}

int GraphOfGroups::vertex_index(const std::string& id) const {
  for (size_t i = 0; i < verts_.size(); ++i)
    if (verts_[i].id == id) return static_cast<int>(i);
  return -1;
}

bool GraphOfGroups::is_connected() const {
  std::vector<bool> seen(verts_.size(), false);
  std::deque<int> q{base_};
  seen[base_] = true;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (const auto& e : edges_) {
      if (e.from == v && !seen[e.to]) {
        seen[e.to] = true;
        q.push_back(e.to);
      }
      if (e.to == v && !seen[e.from]) {
        seen[e.from] = true;
        q.push_back(e.from);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

int GraphOfGroups::first_betti() const {
  return static_cast<int>(edges_.size()) - static_cast<int>(verts_.size()) + 1;
}

std::string GraphOfGroups::to_dot() const {
  std::ostringstream os;
  os << "graph \"" << id_ << "\" {\n";
  for (const auto& v : verts_)
    os << "  \"" << v.id << "\" [label=\"" << v.id << " : " << v.group->id()
       << "\"];\n";
  for (const auto& e : edges_)
    os << "  \"" << verts_[e.from].id << "\" -- \"" << verts_[e.to].id
       << "\" [label=\"" << e.id << " : " << e.group->id() << "\"];\n";
  os << "}\n";
  return os.str();
}

// --- fundamental group -------------------------------------------------------

FundamentalGroup::FundamentalGroup(const GraphOfGroups& gog) : gog_(&gog) {
  for (const auto& e : gog.edges()) {
    alpha_img_.push_back(std::make_unique<SubgroupOracle>(
        *gog.vertices()[e.from].group, e.alpha));
    omega_img_.push_back(std::make_unique<SubgroupOracle>(
        *gog.vertices()[e.to].group, e.omega));
  }
  // spanning tree by BFS from the base, edges in declaration order
  int n = static_cast<int>(gog.vertices().size());
  tree_parent_edge_.assign(n, -1);
  tree_parent_fwd_.assign(n, true);
  edge_in_tree_.assign(gog.edges().size(), false);
  std::vector<bool> seen(n, false);
  seen[gog.base()] = true;
  std::deque<int> q{gog.base()};
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (size_t i = 0; i < gog.edges().size(); ++i) {
      const auto& e = gog.edges()[i];
      if (e.from == v && !seen[e.to]) {
        seen[e.to] = true;
        tree_parent_edge_[e.to] = static_cast<int>(i);
        tree_parent_fwd_[e.to] = true;  // parent reached by crossing forward
        edge_in_tree_[i] = true;
        q.push_back(e.to);
      } else if (e.to == v && !seen[e.from]) {
        seen[e.from] = true;
        tree_parent_edge_[e.from] = static_cast<int>(i);
        tree_parent_fwd_[e.from] = false;
        edge_in_tree_[i] = true;
        q.push_back(e.from);
      }
    }
  }
}

int FundamentalGroup::end_vertex(const PathWord& p) const {
  int v = p.start;
  for (const auto& s : p.steps) {
    const auto& e = gog_->edges()[s.edge];
    v = s.fwd ? e.to : e.from;
  }
  return v;
}

bool FundamentalGroup::valid_path(const PathWord& p) const {
  if (p.elems.size() != p.steps.size()) return false;
  int v = p.start;
  for (const auto& s : p.steps) {
    const auto& e = gog_->edges()[s.edge];
    if ((s.fwd ? e.from : e.to) != v) return false;
    v = s.fwd ? e.to : e.from;
  }
  return true;
}

std::optional<Word> FundamentalGroup::across(int e, bool from_alpha,
                                             const Word& w) const {
  const auto& src = from_alpha ? *alpha_img_[e] : *omega_img_[e];
  const auto& images = from_alpha ? gog_->edges()[e].omega : gog_->edges()[e].alpha;
  const auto& target = from_alpha ? *gog_->vertices()[gog_->edges()[e].to].group
                                  : *gog_->vertices()[gog_->edges()[e].from].group;
  auto expr = src.express(w);
  if (!expr) return std::nullopt;
  return target.normalize(src.apply_expr(*expr, images, target));
}

PathWord FundamentalGroup::normalize(const PathWord& raw) const {
  if (!valid_path(raw)) fail(ErrKind::MalformedElement, "invalid path word");
  PathWord out;
  out.start = raw.start;
  int cur = raw.start;
  Word tail;  // element at cur
  auto oracle_at = [&](int v) -> const GroupOracle& { return *gog_->vertices()[v].group; };
  tail = Word{};

  auto push_step = [&](PathStep s) {
    const auto& e = gog_->edges()[s.edge];
    const SubgroupOracle& entry = s.fwd ? *alpha_img_[s.edge] : *omega_img_[s.edge];
    // pinch: previous step is the reverse of s and the middle lies in the
    // entry image
    if (!out.steps.empty()) {
      PathStep prev = out.steps.back();
      if (prev.edge == s.edge && prev.fwd != s.fwd && entry.contains(tail)) {
        auto mapped = across(s.edge, s.fwd, entry.oracle().normalize(tail));
        if (!mapped)
          fail(ErrKind::DepthExceeded,
               "edge-image expression failed during reduction on edge " +
                   e.id);
        Word rep = out.elems.back();
        out.steps.pop_back();
        out.elems.pop_back();
        cur = s.fwd ? e.to : e.from;
        tail = oracle_at(cur).multiply(rep, *mapped);
        return;
      }
    }
    Word c = entry.coset_canon(tail);
    Word h = entry.oracle().multiply(entry.oracle().inverse(c), tail);
    auto mapped = across(s.edge, s.fwd, h);
    if (!mapped)
      fail(ErrKind::DepthExceeded,
           "edge-image expression failed during normalization on edge " + e.id);
    out.elems.push_back(c);
    out.steps.push_back(s);
    cur = s.fwd ? e.to : e.from;
    tail = *mapped;
  };

  for (size_t i = 0; i < raw.steps.size(); ++i) {
    tail = oracle_at(cur).multiply(tail, raw.elems[i]);
    push_step(raw.steps[i]);
  }
  tail = oracle_at(cur).multiply(tail, raw.tail);
  out.tail = oracle_at(cur).normalize(tail);
  return out;
}

PathWord FundamentalGroup::mul(const PathWord& a, const PathWord& b) const {
  if (end_vertex(a) != b.start)
    fail(ErrKind::MalformedElement, "path composition endpoint mismatch");
  PathWord raw = a;
  Word pending = raw.tail;
  raw.tail = Word{};
  for (size_t i = 0; i < b.steps.size(); ++i) {
    Word e = pending;
    e.append(b.elems[i]);
    pending = Word{};
    raw.elems.push_back(std::move(e));
    raw.steps.push_back(b.steps[i]);
  }
  pending.append(b.tail);
  raw.tail = pending;
  return normalize(raw);
}

PathWord FundamentalGroup::inv(const PathWord& a) const {
  PathWord raw;
  raw.start = end_vertex(a);
  int k = static_cast<int>(a.steps.size());
  auto oracle_at = [&](int v) -> const GroupOracle& { return *gog_->vertices()[v].group; };
  int v = raw.start;
  for (int i = k - 1; i >= 0; --i) {
    Word before = (i == k - 1) ? a.tail : a.elems[i + 1];
    raw.elems.push_back(oracle_at(v).inverse(before));
    PathStep s = a.steps[i];
    raw.steps.push_back({s.edge, !s.fwd});
    const auto& e = gog_->edges()[s.edge];
    v = s.fwd ? e.from : e.to;
  }
  raw.tail = oracle_at(v).inverse(a.steps.empty() ? a.tail : a.elems[0]);
  return normalize(raw);
}

bool FundamentalGroup::is_identity(const PathWord& a) const {
  PathWord n = normalize(a);
  return n.steps.empty() && n.tail.empty();
}

bool FundamentalGroup::equal(const PathWord& a, const PathWord& b) const {
  if (a.start != b.start) return false;
  return is_identity(mul(inv(b), a));
}

bool FundamentalGroup::has_infinite_order(const PathWord& a) const {
  // cyclically reduce by conjugating away the leading (rep, step) pair;
  // a cyclically reduced loop with steps has infinite order
  PathWord g = normalize(a);
  int guard = 0;
  while (!g.steps.empty() && ++guard < 1024) {
    PathWord head;
    head.start = g.start;
    head.elems = {g.elems[0]};
    head.steps = {g.steps[0]};
    PathWord conj = mul(mul(inv(head), g), head);
    if (conj.steps.size() < g.steps.size())
      g = conj;
    else
      break;
  }
  if (g.steps.empty())
    return gog_->vertices()[g.start].group->has_infinite_order(g.tail);
  return true;
}

PathWord FundamentalGroup::one() const {
  PathWord p;
  p.start = gog_->base();
  return p;
}

PathWord FundamentalGroup::tree_path(int v) const {
  std::vector<PathStep> rev;
  int cur = v;
  while (cur != gog_->base()) {
    int e = tree_parent_edge_[cur];
    if (e < 0) fail(ErrKind::Internal, "disconnected spanning tree");
    bool fwd = tree_parent_fwd_[cur];
    // parent reached crossing edge with orientation fwd; path goes base->v,
    // so record the step in that direction
    rev.push_back({e, fwd});
    const auto& ed = gog_->edges()[e];
    cur = fwd ? ed.from : ed.to;
  }
  PathWord p;
  p.start = gog_->base();
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) {
    p.elems.push_back(Word{});
    p.steps.push_back(*it);
  }
  return normalize(p);
}

PathWord FundamentalGroup::vertex_elt(int v, const Word& w) const {
  PathWord t = tree_path(v);
  PathWord mid;
  mid.start = v;
  mid.tail = gog_->vertices()[v].group->normalize(w);
  return mul(mul(t, mid), inv(t));
}

PathWord FundamentalGroup::edge_letter(int e) const {
  const auto& ed = gog_->edges()[e];
  PathWord t = tree_path(ed.from);
  PathWord mid;
  mid.start = ed.from;
  mid.elems.push_back(Word{});
  mid.steps.push_back({e, true});
  PathWord back = inv(tree_path(ed.to));
  return mul(mul(t, normalize(mid)), back);
}

PathWord FundamentalGroup::vertex_coset(const PathWord& p) const {
  PathWord n = normalize(p);
  n.tail = Word{};
  return n;
}

PathWord FundamentalGroup::edge_coset(const PathWord& p, int edge, bool fwd) const {
  // land on the alpha side of the geometric edge
  PathWord n = normalize(p);
  const auto& e = gog_->edges()[edge];
  if (!fwd) {
    // walk backward across the edge to reach the alpha side
    if (end_vertex(n) != e.to) fail(ErrKind::MalformedElement, "edge coset endpoint");
    n.elems.push_back(n.tail);
    n.tail = Word{};
    n.steps.push_back({edge, false});
    n = normalize(n);
  }
  if (end_vertex(n) != e.from) fail(ErrKind::MalformedElement, "edge coset endpoint");
  n.tail = alpha_img_[edge]->coset_canon(n.tail);
  return n;
}

std::vector<PathWord> FundamentalGroup::generators() const {
  std::vector<PathWord> out;
  for (size_t v = 0; v < gog_->vertices().size(); ++v)
    for (int g = 0; g < gog_->vertices()[v].group->num_gens(); ++g)
      out.push_back(vertex_elt(static_cast<int>(v), word_of({{g, 1}})));
  for (size_t e = 0; e < gog_->edges().size(); ++e)
    if (!edge_in_tree_[e]) out.push_back(edge_letter(static_cast<int>(e)));
  return out;
}

std::string FundamentalGroup::print(const PathWord& p) const {
  std::ostringstream os;
  int v = p.start;
  os << "[" << gog_->vertices()[v].id;
  for (size_t i = 0; i < p.steps.size(); ++i) {
    const auto& e = gog_->edges()[p.steps[i].edge];
    if (!p.elems[i].empty())
      os << " " << gog_->vertices()[v].group->print(p.elems[i]);
    os << " " << (p.steps[i].fwd ? "" : "~") << e.id;
    v = p.steps[i].fwd ? e.to : e.from;
  }
  if (!p.tail.empty()) os << " " << gog_->vertices()[v].group->print(p.tail);
  os << "]";
  return os.str();
}

}  // namespace trk
