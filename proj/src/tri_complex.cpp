#include "trk/tri_complex.hpp"

#include <map>
#include <set>
#include <sstream>

#include "trk/errors.hpp"

namespace trk {

TriComplex::TriComplex(std::string id, const FundamentalGroup* ctx,
                       std::vector<TCVertex> verts, std::vector<TCEdge> edges,
                       std::vector<TCFace> faces, bool h1_asserted)
    : id_(std::move(id)), ctx_(ctx), verts_(std::move(verts)),
      edges_(std::move(edges)), faces_(std::move(faces)),
      h1_asserted_(h1_asserted) {
  for (auto& v : verts_) vstab_.push_back(std::make_shared<StabOracle>(v.stab));
  for (auto& e : edges_) estab_.push_back(std::make_shared<StabOracle>(e.stab));
  for (auto& f : faces_) fstab_.push_back(std::make_shared<StabOracle>(f.stab));
}

int TriComplex::covolume() const {
  int n = 0;
  for (const auto& f : faces_)
    if (f.sides.size() == 3) ++n;
  return n;
}

PathWord TriComplex::end_vertex_coset(int e, int end, const PathWord& g) const {
  const auto& en = edges_[e].ends[end];
  return vstab_[en.vertex]->coset_canon(ctx_->mul(g, en.twist));
}

PathWord TriComplex::side_edge_coset(int f, int side, const PathWord& g) const {
  const auto& s = faces_[f].sides[side];
  return estab_[s.edge]->coset_canon(ctx_->mul(g, s.twist));
}

PathWord TriComplex::corner_vertex_coset(int f, int corner, const PathWord& g) const {
  // corner i is the start of side i: side i runs corner i -> corner i+1
  const auto& s = faces_[f].sides[corner];
  int end = s.fwd ? 0 : 1;
  return end_vertex_coset(s.edge, end, ctx_->mul(g, s.twist));
}

std::vector<std::string> TriComplex::validate() const {
  std::vector<std::string> problems;
  PathWord one = ctx_->one();
  for (size_t f = 0; f < faces_.size(); ++f) {
    const auto& face = faces_[f];
    if (face.sides.size() > 3)
      problems.push_back("face " + face.id + " has more than three sides");
    int k = static_cast<int>(face.sides.size());
    for (int i = 0; i < k; ++i) {
      // side i's head must equal side i+1's tail as a vertex lift
      const auto& s = face.sides[i];
      const auto& t = face.sides[(i + 1) % k];
      int head_end = s.fwd ? 1 : 0;
      PathWord head = end_vertex_coset(s.edge, head_end, ctx_->mul(one, s.twist));
      PathWord next = corner_vertex_coset(static_cast<int>(f), (i + 1) % k, one);
      if (!(head == next))
        problems.push_back("face " + face.id + " side " + std::to_string(i) +
                           " does not close up at corner " +
                           std::to_string((i + 1) % k));
    }
    // face stabilizer sits inside each side stabilizer up to the twist
    for (int i = 0; i < k; ++i) {
      const auto& s = face.sides[i];
      for (const auto& g : face.stab.gens) {
        PathWord conj = ctx_->mul(ctx_->mul(ctx_->inv(s.twist), g), s.twist);
        if (!estab_[s.edge]->contains(conj)) {
          problems.push_back("face " + face.id + " stabilizer escapes side " +
                             std::to_string(i));
          break;
        }
      }
    }
  }
  for (size_t e = 0; e < edges_.size(); ++e) {
    for (int i = 0; i < 2; ++i) {
      const auto& en = edges_[e].ends[i];
      for (const auto& g : edges_[e].stab.gens) {
        PathWord conj = ctx_->mul(ctx_->mul(ctx_->inv(en.twist), g), en.twist);
        if (!vstab_[en.vertex]->contains(conj)) {
          problems.push_back("edge " + edges_[e].id + " stabilizer escapes end " +
                             std::to_string(i));
          break;
        }
      }
    }
  }
  return problems;
}

int TriComplex::quotient_betti0() const {
  // components of the quotient 1-skeleton
  std::vector<int> parent(verts_.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : edges_) {
    int a = find(e.ends[0].vertex), b = find(e.ends[1].vertex);
    if (a != b) parent[a] = b;
  }
  std::set<int> roots;
  for (size_t i = 0; i < parent.size(); ++i) roots.insert(find(static_cast<int>(i)));
  return static_cast<int>(roots.size());
}

int TriComplex::quotient_betti1() const {
  // GF(2) chain complex of the quotient CW structure
  size_t V = verts_.size(), E = edges_.size(), F = faces_.size();
  Gf2Matrix d1(E, V);  // rows: edges
  for (size_t e = 0; e < E; ++e) {
    // boundary = end1 + end0 over GF(2)
    int a = edges_[e].ends[0].vertex, b = edges_[e].ends[1].vertex;
    if (a != b) {
      d1.set(e, a);
      d1.set(e, b);
    }
  }
  Gf2Matrix d2(F, E);  // rows: faces
  for (size_t f = 0; f < F; ++f) {
    std::map<int, int> mult;
    for (const auto& s : faces_[f].sides) mult[s.edge] ^= 1;
    for (auto [e, m] : mult)
      if (m) d2.set(f, e);
  }
  size_t r1 = d1.rank(), r2 = d2.rank();
  // b1 = dim ker d1 - rank d2 = E - r1 - r2
  return static_cast<int>(E - r1 - r2);
}

std::string TriComplex::describe() const {
  std::ostringstream os;
  os << "complex " << id_ << ": " << verts_.size() << " vertex orbits, "
     << edges_.size() << " edge orbits, " << faces_.size()
     << " face orbits (covolume " << covolume() << ")";
  return os.str();
}

}  // namespace trk
