#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lyapoly/bounds.hpp"

namespace lyapoly::report {

enum class Format { Json, Csv, Markdown };

std::optional<Format> parse_format(std::string_view text) noexcept;
std::string_view extension(Format format) noexcept;

/// 9 significant digits, "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double x);

struct RunInfo {
    std::string family_source;
    std::size_t dim = 0;
    std::size_t count = 0;
    bool metzler = false;
    std::string search;
    std::size_t max_length = 0;
    double delta = 0.0;
};

/// One row per dwell time, in the order given (analyze_sweep returns them by
/// tau descending). Timings are left out so equal inputs give equal bytes.
std::string render(const std::vector<LyapunovBounds>& rows, const RunInfo& info, Format format);
std::string render(const FibrillationReport& rep, const RunInfo& info, Format format);

/// 0 when every row is conclusive, 2 otherwise.
int exit_code(const std::vector<LyapunovBounds>& rows);

}  // namespace lyapoly::report
