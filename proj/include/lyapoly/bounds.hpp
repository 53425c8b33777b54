#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lyapoly/family.hpp"
#include "lyapoly/invariant_polytope.hpp"
#include "lyapoly/lp.hpp"
#include "lyapoly/polytope.hpp"
#include "lyapoly/products.hpp"

namespace lyapoly {

enum class AnalysisMode { Stability, PositiveStability, Stabilizability };
enum class Verdict { Stable, Unstable, Stabilizable, NotStabilizable, Inconclusive };

std::string_view to_string(AnalysisMode mode) noexcept;
std::string_view to_string(Verdict verdict) noexcept;

struct AnalysisConfig {
    std::vector<double> taus{1.0};
    std::size_t max_length = 8;
    double nu = 0.0;
    SearchStrategy search = SearchStrategy::Exhaustive;
    std::size_t max_products = 5'000'000;
    AlphaOptions alpha{};
    BuildOptions build{};
    bool force_symmetric = false;   // use co_s even for Metzler families
    bool check_admissible = true;
    double admissible_delta = 1e-6;
    bool keep_polytope = false;
    unsigned threads = 1;           // concurrent dwell times in analyze_sweep
};

struct LyapunovBounds {
    AnalysisMode mode = AnalysisMode::Stability;
    double tau = 0.0;
    double lower = 0.0;             // beta_l, or alpha-check for stabilizability
    double upper = 0.0;             // alpha, or beta-check_l; NaN without a certificate
    double gamma = 0.0;
    ProductCandidate candidate;
    double beta = 0.0;              // beta_l or beta-check_l
    double nu = 0.0;
    double eps_reported = 0.0;
    HullKind hull = HullKind::Symmetric;
    std::size_t vertex_count = 0;   // stored vertices (one per +/- pair)
    bool terminated = false;
    BuildReport build;
    std::optional<AlphaResult> alpha;
    double invariance_excess = 0.0;  // NaN when the build did not terminate
    Verdict verdict = Verdict::Inconclusive;
    std::optional<Polytope> polytope;
    std::vector<std::string> warnings;
    double seconds = 0.0;
};

/// ln(averaged rho) / tau.
double beta_from_candidate(const ProductCandidate& candidate, double tau);

/// Dwell-time gate: rejects tau when some 2^k tau <= 2 lies within `delta`
/// of a resonance 2 pi n / |Im(l_i - l_j)| or pi n / |Im l_i|.
bool admissible_tau(const MatrixFamily& family, double tau, double delta = 1e-6);

/// Closest tau' in (0, 2] passing admissible_tau.
double nearest_admissible_tau(const MatrixFamily& family, double tau, double delta = 1e-6);

/// Bracket beta_l(tau) <= sigma <= alpha(P) (Metzler families use monotone
/// hulls unless force_symmetric is set).
LyapunovBounds analyze_stability(const MatrixFamily& family, const AnalysisConfig& cfg, double tau);

/// Bracket alpha-check(Q) <= sigma-check <= beta-check_l(tau) for Metzler families.
LyapunovBounds analyze_stabilizability(const MatrixFamily& family, const AnalysisConfig& cfg, double tau);

/// Runs one analysis per tau (possibly concurrently), ordered by tau descending.
std::vector<LyapunovBounds> analyze_sweep(const MatrixFamily& family, const AnalysisConfig& cfg,
                                          bool stabilizability);

struct FibrillationRow {
    double tau = 0.0;
    std::size_t smp_length = 0;
    double beta = 0.0;
    std::string word;
    std::optional<double> transpose_pair_rho;  // sqrt(rho(B1 B2)) when the family is {B, B^T}
};

struct FibrillationReport {
    std::vector<FibrillationRow> rows;     // tau descending
    bool bounded_length = false;           // smp length never exceeds the first row's
    bool beta_increasing = false;          // beta grows as tau shrinks
    bool fibrillation = false;             // both of the above, over at least two rows
};

FibrillationReport fibrillation_scan(const MatrixFamily& family, std::vector<double> taus, std::size_t max_length,
                                     SearchStrategy search = SearchStrategy::Exhaustive);

}  // namespace lyapoly
