#include "lyapoly/polytope.hpp"

namespace lyapoly {

std::string_view to_string(HullKind kind) noexcept {
    switch (kind) {
    case HullKind::Symmetric: return "symmetric";
    case HullKind::Monotone: return "monotone";
    case HullKind::Infinite: return "infinite";
    }
    return "symmetric";
}

std::optional<HullKind> parse_hull_kind(std::string_view text) noexcept {
    if (text == "symmetric") return HullKind::Symmetric;
    if (text == "monotone") return HullKind::Monotone;
    if (text == "infinite") return HullKind::Infinite;
    return std::nullopt;
}

}  // namespace lyapoly
