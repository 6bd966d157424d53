#pragma once

#include <string>
#include <vector>

namespace compopt {

/// Variable typing for saddle problems: a coordinate is minimized over
/// (convex) or maximized over (concave). Linear coordinates must be given
/// an explicit label by the modeler; nothing is inferred.
enum class VarLabel { convex, concave };

inline const char* label_name(VarLabel l) {
    return l == VarLabel::convex ? "cx" : "cc";
}

using LabelVec = std::vector<VarLabel>;

}  // namespace compopt
