#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lyapoly/matrix.hpp"

namespace lyapoly {

/// symmetric: co_s(V) = co(V u -V); monotone: (co(V) - R^d_+) n R^d_+;
/// infinite: co(V) + R^d_+.
enum class HullKind { Symmetric, Monotone, Infinite };

std::string_view to_string(HullKind kind) noexcept;
std::optional<HullKind> parse_hull_kind(std::string_view text) noexcept;

/// Where a vertex came from: the initial vertex reached from the leading
/// eigenvector by the first `prefix_length` letters of the candidate word,
/// followed by the matrices in `path` (application order).
struct VertexOrigin {
    std::size_t prefix_length = 0;
    std::vector<std::size_t> path;
};

/// Vertex description of a polytope. For symmetric hulls one representative
/// of every +/- pair is stored.
struct Polytope {
    HullKind kind = HullKind::Symmetric;
    std::size_t dim = 0;
    std::vector<Vector> vertices;
    std::vector<std::size_t> generation;  // sweep in which each vertex was added
    std::vector<VertexOrigin> origins;

    [[nodiscard]] std::size_t size() const noexcept { return vertices.size(); }
    /// Number of extreme points, counting both members of a symmetric pair.
    [[nodiscard]] std::size_t extreme_point_count() const noexcept {
        return kind == HullKind::Symmetric ? 2 * vertices.size() : vertices.size();
    }
};

}  // namespace lyapoly
