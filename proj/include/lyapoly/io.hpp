#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lyapoly/family.hpp"
#include "lyapoly/polytope.hpp"

namespace lyapoly::io {

/// Family file: {"dim": d, "matrices": [[[row], ...], ...], "labels": [...]}
/// ("labels" optional). Errors carry the JSON path of the offending entry.
MatrixFamily load_family(const std::filesystem::path& path);
MatrixFamily parse_family(std::string_view text, std::string_view source = "<input>");
std::string family_to_json(const MatrixFamily& family);

/// Polytope file: {"hull": "symmetric"|"monotone"|"infinite", "dim": d, "vertices": [[...], ...]}.
std::string polytope_to_json(const Polytope& polytope);
Polytope parse_polytope(std::string_view text, std::string_view source = "<input>");

/// Boundary of a planar hull in counterclockwise order starting from the
/// point of smallest polar angle in [0, 2 pi). Infinite hulls are clipped:
/// the two unbounded edges end at far points 2 max|x_i| beyond the chain.
std::vector<std::array<double, 2>> boundary2d(const Polytope& polytope);
std::string boundary2d_csv(const Polytope& polytope);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace lyapoly::io
