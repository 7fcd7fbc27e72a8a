#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trk/gf2.hpp"
#include "trk/marked.hpp"

namespace trk {

// Attachment of an edge endpoint: the vertex orbit plus the twisting
// element; the lift g.e has endpoint (g * twist) . v.
struct CellEnd {
  int vertex = 0;
  PathWord twist;
};

// Attachment of a triangle side: the edge orbit, travel direction around
// the boundary, and the twisting element.
struct CellSide {
  int edge = 0;
  bool fwd = true;
  PathWord twist;
};

struct TCVertex {
  std::string id;
  MarkedSubgroup stab;
};

struct TCEdge {
  std::string id;
  MarkedSubgroup stab;
  std::array<CellEnd, 2> ends;
};

// 2-cells carry up to three sides; bigons and monogons appear transiently
// during reduction, never in a reduced complex.
struct TCFace {
  std::string id;
  MarkedSubgroup stab;
  std::vector<CellSide> sides;
};

// Quotient triangular complex of groups over the fundamental group of a
// graph of groups. Cells are orbits with stabilizer labels and twisting
// elements; developments are built on demand to bounded size.
class TriComplex {
 public:
  TriComplex(std::string id, const FundamentalGroup* ctx,
             std::vector<TCVertex> verts, std::vector<TCEdge> edges,
             std::vector<TCFace> faces, bool h1_asserted);

  const std::string& id() const { return id_; }
  const FundamentalGroup& ctx() const { return *ctx_; }
  bool h1_asserted() const { return h1_asserted_; }

  const std::vector<TCVertex>& verts() const { return verts_; }
  const std::vector<TCEdge>& edges() const { return edges_; }
  const std::vector<TCFace>& faces() const { return faces_; }

  const StabOracle& vstab(int v) const { return *vstab_[v]; }
  const StabOracle& estab(int e) const { return *estab_[e]; }
  const StabOracle& fstab(int f) const { return *fstab_[f]; }

  // number of triangle orbits; 0 iff the complex is elementary
  int covolume() const;
  bool is_elementary() const { return covolume() == 0; }

  // corner vertex lifts of a face lift with twist g: corner i sits between
  // side i-1 and side i
  PathWord side_edge_coset(int f, int side, const PathWord& g) const;
  PathWord corner_vertex_coset(int f, int corner, const PathWord& g) const;
  PathWord end_vertex_coset(int e, int end, const PathWord& g) const;

  // structural checks: attachment consistency, stabilizer containments
  std::vector<std::string> validate() const;

  // first Betti number of the quotient CW complex over GF(2)
  int quotient_betti1() const;
  int quotient_betti0() const;

  std::string describe() const;

 private:
  std::string id_;
  const FundamentalGroup* ctx_;
  std::vector<TCVertex> verts_;
  std::vector<TCEdge> edges_;
  std::vector<TCFace> faces_;
  bool h1_asserted_ = false;
  std::vector<std::shared_ptr<StabOracle>> vstab_, estab_, fstab_;
};

}  // namespace trk
