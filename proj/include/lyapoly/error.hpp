#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace lyapoly {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    NonFinite,
    Overflow,
    NoConvergence,
    Infeasible,
    CapExceeded,
    InadmissibleTau,
    Parse,
    Io,
};

inline std::string_view to_string(ErrorCode code) noexcept;

/// Structured error raised by every stage of the pipeline.
///
/// `stage` names the operation that failed ("mat_exp", "alpha_upper", ...),
/// so that the CLI can report where an analysis broke down.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string stage, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + " in " + stage + ": " + message),
          code_(code),
          stage_(std::move(stage)),
          detail_(message) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string stage_;
    std::string detail_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::NonFinite: return "non-finite value";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::NoConvergence: return "no convergence";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::CapExceeded: return "cap exceeded";
    case ErrorCode::InadmissibleTau: return "inadmissible dwell time";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Io: return "i/o error";
    }
    return "error";
}

}  // namespace lyapoly
