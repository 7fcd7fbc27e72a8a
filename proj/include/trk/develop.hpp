#pragma once

#include <array>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "trk/tri_complex.hpp"

namespace trk {

// Enumerated elements of a stabilizer within a ball, with a completeness
// flag (finite stabilizers enumerate fully; infinite ones are truncated).
struct StabBall {
  std::vector<PathWord> elems;
  bool complete = false;
};

StabBall stab_elements(const StabOracle& s, int radius, size_t cap = 4096);

// Bounded development (window) of a TriComplex: cells are (orbit, coset
// label) pairs, adjacency is materialized, and the partial deck action is
// available through canonical relabeling. `closed` reports that the full
// development was exhausted with no truncation anywhere.
class DevComplex {
 public:
  struct DV {
    int q;
    PathWord c;
    int dist = 0;
    bool link_complete = true;  // stabilizer enumeration not truncated here
  };
  struct DE {
    int q;
    PathWord c;
    int dist = 0;
    int v0 = -1, v1 = -1;
    bool wing_complete = true;
  };
  struct DT {
    int q;
    PathWord c;
    int dist = 0;
    std::array<int, 3> side_edges{-1, -1, -1};
    std::array<int, 3> corners{-1, -1, -1};
  };

  static DevComplex build(const TriComplex& X, int radius, int stab_ball = 6);

  const TriComplex& X() const { return *X_; }
  int radius() const { return radius_; }
  bool closed() const { return closed_; }

  const std::vector<DV>& verts() const { return verts_; }
  const std::vector<DE>& edges() const { return edges_; }
  const std::vector<DT>& tris() const { return tris_; }
  const std::vector<std::vector<int>>& edges_at() const { return edges_at_; }
  const std::vector<std::vector<int>>& tris_at_edge() const { return tris_at_edge_; }

  int find_vertex(int q, const PathWord& canon) const;
  int find_edge(int q, const PathWord& canon) const;
  int find_tri(int q, const PathWord& canon) const;

  std::optional<int> act_vertex(const PathWord& g, int i) const;
  std::optional<int> act_edge(const PathWord& g, int i) const;
  std::optional<int> act_tri(const PathWord& g, int i) const;

  bool vertex_interior(int i) const;
  bool edge_interior(int i) const;
  bool tri_interior(int i) const;

  // connected components of the window (cells of every dimension)
  int component_count() const;

  // first GF(2) Betti number of the window; meaningful when closed()
  int betti1_gf2() const;

  // link of a developed vertex: nodes are incident edge-germs, arcs are
  // triangle corners; returns the partition of germs into components
  struct LinkGerm {
    int dev_edge;
    int end;  // which end of the dev edge touches the vertex
    friend bool operator==(const LinkGerm&, const LinkGerm&) = default;
    friend auto operator<=>(const LinkGerm&, const LinkGerm&) = default;
  };
  struct VertexLink {
    std::vector<LinkGerm> germs;
    std::vector<int> comp_of_germ;
    int num_components = 0;
    std::vector<std::pair<int, int>> corner_arcs;  // germ index pairs
    bool complete = true;
  };
  VertexLink vertex_link(int i) const;

  bool is_cutpoint(int i) const;

 private:
  const TriComplex* X_;
  int radius_ = 0;
  bool closed_ = true;
  std::vector<DV> verts_;
  std::vector<DE> edges_;
  std::vector<DT> tris_;
  std::vector<std::vector<int>> edges_at_;      // per dev vertex
  std::vector<std::vector<int>> tris_at_edge_;  // per dev edge
  struct Key {
    int q;
    PathWord c;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      return std::hash<int>()(k.q) * 0x9e3779b97f4a7c15ull ^ PathWordHash()(k.c);
    }
  };
  std::unordered_map<Key, int, KeyHash> vidx_, eidx_, tidx_;
};

// Connected components of a G-invariant subcomplex of the window, with
// orbit classification and window-certified setwise stabilizer generators.
struct SubComponents {
  std::vector<int> of_vertex, of_edge, of_tri;  // component id or -1
  int count = 0;
  std::vector<int> class_of;                    // per component: orbit class
  int class_count = 0;
  std::vector<std::vector<PathWord>> class_stab_gens;
  std::vector<bool> touches_frontier;           // per component
  std::vector<int> class_rep;                   // representative component
};

SubComponents subcomplex_components(const DevComplex& dev,
                                    const std::function<bool(int)>& in_v,
                                    const std::function<bool(int)>& in_e,
                                    const std::function<bool(int)>& in_t);

}  // namespace trk
