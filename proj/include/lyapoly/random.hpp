#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "lyapoly/family.hpp"

namespace lyapoly {

/// sign: off-diagonal entries from {0, 1}, diagonal from {-1, 0, 1};
/// real: off-diagonal uniform in [0, 1], diagonal uniform in [-1, 1].
enum class RandomEntries { Sign, Real };

std::optional<RandomEntries> parse_random_entries(std::string_view text) noexcept;

/// Deterministic for a given seed (std::mt19937_64).
MatrixFamily random_metzler_family(std::size_t dim, std::size_t count, std::uint64_t seed,
                                   RandomEntries entries = RandomEntries::Sign);

}  // namespace lyapoly
