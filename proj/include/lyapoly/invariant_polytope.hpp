#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lyapoly/lp.hpp"
#include "lyapoly/matrix.hpp"
#include "lyapoly/polytope.hpp"

namespace lyapoly {

struct BuildOptions {
    double tol_add = 1e-8;          // images with gauge within tol_add of 1 count as inside
    double duplicate_tol = 1e-9;    // relative distance under which a new vertex is a duplicate
    std::size_t max_sweeps = 200;
    std::size_t max_vertices = 50'000;
    double max_seconds = 0.0;       // wall-clock budget, 0 = unlimited
    bool prune_redundant = true;    // drop vertices interior to the final hull
    double redundancy_tol = 1e-9;
    unsigned threads = 1;
    LpOptions lp{};
};

enum class StopReason { Terminated, SweepCap, VertexCap, TimeCap };

std::string_view to_string(StopReason reason) noexcept;

struct BuildReport {
    bool terminated = false;
    StopReason stop = StopReason::SweepCap;
    std::size_t sweeps = 0;
    std::vector<std::size_t> added_per_sweep;
    std::size_t membership_lp_count = 0;
    std::size_t pruned = 0;         // removed after termination
    double seconds = 0.0;
};

struct BuildResult {
    Polytope polytope;
    BuildReport report;
};

/// Iterates V <- V u {B v : v new, B in family, B v outside hull(V)} until a
/// sweep adds nothing or a cap trips. Each image is tested against the
/// vertices present at that moment, including those accepted earlier in the
/// same sweep; vertices are visited in insertion order and matrices in
/// family order, so the result does not depend on the thread count.
/// After termination, vertices lying in the hull of the others are removed
/// one at a time (the hull itself is unchanged).
BuildResult build_polytope(const std::vector<Matrix>& family_scaled_exp, const std::vector<Vector>& initial,
                           HullKind hull, const BuildOptions& options = {},
                           const std::vector<std::size_t>& initial_prefix_lengths = {});

/// Largest violation of B P in P over all vertices and matrices: gauge - 1
/// for symmetric and monotone hulls, 1 - antigauge for infinite hulls.
double verify_invariance(const Polytope& polytope, const std::vector<Matrix>& family_scaled_exp,
                         const LpOptions& lp = {}, unsigned threads = 1);

/// Indices of vertices lying in the hull of the remaining ones (gauge at
/// most 1 - tol, resp. antigauge at least 1 + tol).
std::vector<std::size_t> redundant_vertices(const Polytope& polytope, double tol = 1e-9, const LpOptions& lp = {},
                                            unsigned threads = 1);

/// Removes redundant vertices in insertion order, re-testing each against the
/// vertices still present. Returns the number removed.
std::size_t prune_redundant(Polytope& polytope, double tol = 1e-9, const LpOptions& lp = {}, unsigned threads = 1);

}  // namespace lyapoly
