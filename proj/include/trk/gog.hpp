#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "trk/oracle.hpp"
#include "trk/subgroup.hpp"

namespace trk {

using OraclePtr = std::shared_ptr<const GroupOracle>;

struct GogVertex {
  std::string id;
  OraclePtr group;
};

// Oriented edge pair stored once: from --e--> to, with monomorphisms given
// by generator-image lists alpha (into the from-group) and omega (into the
// to-group).
struct GogEdge {
  std::string id;
  int from = 0, to = 0;
  OraclePtr group;
  std::vector<Word> alpha;
  std::vector<Word> omega;
};

class GraphOfGroups {
 public:
  GraphOfGroups() = default;
  GraphOfGroups(std::string id, std::vector<GogVertex> verts,
                std::vector<GogEdge> edges, int base);

  // A plain oracle group presented as a one-vertex graph of groups.
  static GraphOfGroups wrap(std::string id, OraclePtr oracle);

  const std::string& id() const { return id_; }
  const std::vector<GogVertex>& vertices() const { return verts_; }
  const std::vector<GogEdge>& edges() const { return edges_; }
  int base() const { return base_; }
  int vertex_index(const std::string& id) const;

  bool is_connected() const;
  int first_betti() const;  // edges - vertices + 1 for connected graphs

  std::string to_dot() const;

 private:
  std::string id_;
  std::vector<GogVertex> verts_;
  std::vector<GogEdge> edges_;
  int base_ = 0;
};

// One traversal of a geometric edge.
struct PathStep {
  int edge = 0;
  bool fwd = true;
  friend bool operator==(const PathStep&, const PathStep&) = default;
  friend auto operator<=>(const PathStep&, const PathStep&) = default;
};

// A path word: elems[i], then steps[i], ..., then tail. All vertex-group
// elements live in the oracle of the vertex the path is visiting. In normal
// form each elems[i] is the canonical coset representative for the image
// subgroup at the entry side of steps[i] and no pinch applies.
struct PathWord {
  int start = 0;
  std::vector<Word> elems;
  std::vector<PathStep> steps;
  Word tail;

  bool step_free() const { return steps.empty(); }
  int64_t syl_length() const {
    int64_t n = tail.syl_length() + static_cast<int64_t>(steps.size());
    for (const auto& e : elems) n += e.syl_length();
    return n;
  }

  friend bool operator==(const PathWord&, const PathWord&) = default;
  friend bool operator<(const PathWord& a, const PathWord& b) {
    auto la = a.syl_length(), lb = b.syl_length();
    if (la != lb) return la < lb;
    if (a.start != b.start) return a.start < b.start;
    if (a.steps != b.steps) return a.steps < b.steps;
    if (a.elems != b.elems) return a.elems < b.elems;
    return a.tail < b.tail;
  }
};

struct PathWordHash {
  size_t operator()(const PathWord& p) const {
    size_t h = std::hash<int>()(p.start);
    WordHash wh;
    auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
    for (const auto& e : p.elems) mix(wh(e));
    for (const auto& s : p.steps) mix(std::hash<int>()(s.edge * 2 + s.fwd));
    mix(wh(p.tail));
    return h;
  }
};

// Arithmetic in the fundamental group(oid) of a graph of groups: normal
// forms, products, inverses, and coset labels for the Bass-Serre tree.
// Built once per graph; immutable afterwards.
class FundamentalGroup {
 public:
  explicit FundamentalGroup(const GraphOfGroups& gog);

  const GraphOfGroups& gog() const { return *gog_; }

  int end_vertex(const PathWord& p) const;
  bool valid_path(const PathWord& p) const;

  PathWord normalize(const PathWord& raw) const;
  PathWord mul(const PathWord& a, const PathWord& b) const;
  PathWord inv(const PathWord& a) const;
  bool is_identity(const PathWord& a) const;
  bool equal(const PathWord& a, const PathWord& b) const;
  bool has_infinite_order(const PathWord& a) const;

  // Identity loop at the base vertex.
  PathWord one() const;
  // A vertex-group element as a based loop (conjugated along the spanning
  // tree when v is not the base vertex).
  PathWord vertex_elt(int v, const Word& w) const;
  // The stable letter of an edge as a based loop.
  PathWord edge_letter(int e) const;
  // Path from the base to vertex v along the spanning tree.
  PathWord tree_path(int v) const;

  // Canonical label of the vertex coset p * G_(end(p)).
  PathWord vertex_coset(const PathWord& p) const;
  // Canonical label of the edge coset: p ends at o(e)/t(e) and crosses e.
  // Returned path ends at o(e) with tail reduced mod the alpha-image.
  PathWord edge_coset(const PathWord& p, int edge, bool fwd) const;

  const SubgroupOracle& alpha_image(int e) const { return *alpha_img_[e]; }
  const SubgroupOracle& omega_image(int e) const { return *omega_img_[e]; }

  // Map an element of one edge image across the edge to the other side.
  std::optional<Word> across(int e, bool from_alpha, const Word& w) const;

  // Generating set of the fundamental group as based loops: vertex-group
  // generators plus one stable letter per non-tree edge.
  std::vector<PathWord> generators() const;

  std::string print(const PathWord& p) const;

 private:
  const GraphOfGroups* gog_;
  std::vector<std::unique_ptr<SubgroupOracle>> alpha_img_, omega_img_;
  std::vector<int> tree_parent_edge_;  // per vertex: edge index into spanning tree, -1 at base
  std::vector<bool> tree_parent_fwd_;  // orientation of that edge toward the base
  std::vector<bool> edge_in_tree_;
};

}  // namespace trk
