#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "trk/gog.hpp"

namespace trk {

// Dyadic coordinate in (0,1); denominator at most 2^16.
struct Dyadic {
  uint32_t num = 1;
  uint8_t log_den = 1;
  friend bool operator==(const Dyadic&, const Dyadic&) = default;
  double value() const { return double(num) / double(1u << log_den); }
};

// An end of the tree: lim_k period^k . anchor, period a based loop of
// infinite order. Eventually periodic by construction.
struct BoundaryTag {
  int anchor = -1;     // ball vertex index
  PathWord period;
  friend bool operator==(const BoundaryTag&, const BoundaryTag&) = default;
};

struct TreePoint {
  enum class Kind { Vertex, Midpoint, Interior, Boundary };
  Kind kind = Kind::Vertex;
  int vertex = -1;   // Vertex
  int edge = -1;     // Midpoint / Interior
  Dyadic coord;      // Interior
  BoundaryTag ray;   // Boundary
  friend bool operator==(const TreePoint&, const TreePoint&) = default;

  static TreePoint make_vertex(int v) { return {Kind::Vertex, v, -1, {}, {}}; }
  static TreePoint make_midpoint(int e) { return {Kind::Midpoint, -1, e, {}, {}}; }
  static TreePoint make_boundary(BoundaryTag t) {
    TreePoint p;
    p.kind = Kind::Boundary;
    p.ray = std::move(t);
    return p;
  }
};

// Word-length-bounded development of the Bass-Serre tree of a graph of
// groups. Vertices and edges are canonically labeled cosets; every
// non-base vertex has its parent strictly closer to the base, and the
// developed set is closed under canonical-prefix truncation.
class BassSerreBall {
 public:
  struct BVert {
    PathWord label;    // canonical vertex coset (empty tail)
    int gog_vertex;
    int tree_depth;    // #steps in the canonical form
    int parent;        // vertex index, -1 at base
    int parent_edge;   // edge index, -1 at base
  };
  struct BEdge {
    PathWord label;    // path to o(e) with tail reduced mod the alpha image
    int gog_edge;
    int u, v;          // u at o(e), v at t(e)
  };

  static BassSerreBall expand(const FundamentalGroup& fg, int depth);

  const FundamentalGroup& fg() const { return *fg_; }
  int depth() const { return depth_; }
  int base() const { return 0; }
  const std::vector<BVert>& verts() const { return verts_; }
  const std::vector<BEdge>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& incident_edges() const { return incid_; }

  int find_vertex(const PathWord& canon_label) const;
  std::optional<int> act_vertex(const PathWord& g, int v) const;
  // Acts on an edge; flips reports whether the edge orientation is reversed
  // (never happens for graph-of-groups trees, kept for interface parity).
  std::optional<int> act_edge(const PathWord& g, int e) const;

  int distance(int u, int v) const;
  int lca(int u, int v) const;
  std::vector<int> geodesic_vertices(int u, int v) const;
  std::vector<int> geodesic_edges(int u, int v) const;  // edge indices
  bool is_boundary_vertex(int v) const;  // at the depth frontier

  // Vertex sequence of the ray toward an end, as far as the ball certifies.
  std::vector<int> ray_vertices(const BoundaryTag& tag, int max_steps = 256) const;

  enum class RayCompare { Equal, Distinct, Undecided };
  RayCompare compare_rays(const BoundaryTag& a, const BoundaryTag& b) const;

  std::string print_point(const TreePoint& p) const;

 private:
  const FundamentalGroup* fg_ = nullptr;
  int depth_ = 0;
  std::vector<BVert> verts_;
  std::vector<BEdge> edges_;
  std::vector<std::vector<int>> incid_;
  std::unordered_map<PathWord, int, PathWordHash> vidx_;
};

}  // namespace trk
