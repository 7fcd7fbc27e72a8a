#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trk/ball.hpp"
#include "trk/marked.hpp"

namespace trk {

enum class ActionClass { Elliptic, Hyperbolic, Dihedral, ParabolicOrUndecided };

const char* action_class_name(ActionClass c);

// min over ball vertices of d(v, g.v); Undecided when the minimum cannot
// be certified inside the ball (axis not captured).
struct TranslationLength {
  std::optional<int> value;
  int attempted_depth = 0;
  bool undecided() const { return !value.has_value(); }
};

TranslationLength translation_length(const PathWord& g, const BassSerreBall& ball);

struct Classification {
  ActionClass cls = ActionClass::ParabolicOrUndecided;
  bool certified = false;  // exact for elliptic/hyperbolic/dihedral; window-level otherwise
  std::string diagnostic;
  std::vector<TreePoint> fixed_points;  // elliptic
  std::vector<BoundaryTag> ends;        // axis ends / fixed ends
  std::vector<int> axis;                // vertex indices of the certified axis segment
};

Classification classify_action(const MarkedSubgroup& s, const BassSerreBall& ball);

// Fixed point set of the subgroup in T union its boundary:
//   elliptic  -> fixed vertices
//   hyperbolic-> the two axis ends
//   dihedral  -> empty (diagnostic in the classification)
//   parabolic -> the window-certified fixed ends; DepthExceeded when none
std::vector<TreePoint> fixed_set(const MarkedSubgroup& s, const BassSerreBall& ball,
                                 Classification* out_cls = nullptr);

}  // namespace trk
