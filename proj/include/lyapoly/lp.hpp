#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "lyapoly/family.hpp"
#include "lyapoly/matrix.hpp"
#include "lyapoly/polytope.hpp"

namespace lyapoly {

enum class Sense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

/// optimise  objective . x
/// subject to  a_eq x = b_eq,  a_ub x <= b_ub,  x >= lower.
///
/// An empty `lower` means all-zero bounds; -infinity marks a free variable.
/// Constraint blocks with zero rows may be default-constructed.
struct LpProblem {
    Vector objective;
    Sense sense = Sense::Minimize;
    Matrix a_eq;
    Vector b_eq;
    Matrix a_ub;
    Vector b_ub;
    Vector lower;
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    double objective_value = 0.0;
    Vector x;
    std::size_t pivots = 0;
};

struct LpOptions {
    double tol = 1e-9;
    std::size_t max_pivots = 0;  // 0 picks a bound from the problem size
};

/// Dense two-phase primal simplex with Bland's rule.
LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Gauge of z in co_s(V): min sum(lambda + mu) with V(lambda - mu) = z.
/// +infinity when z is outside span(V).
double membership_sym(std::span<const double> z, const std::vector<Vector>& vertices,
                      const LpOptions& options = {});

/// Gauge of z in the monotone hull: min sum(lambda) with V lambda >= z.
double membership_monotone(std::span<const double> z, const std::vector<Vector>& vertices,
                           const LpOptions& options = {});

/// Antigauge of z in the infinite hull: max sum(lambda) with V lambda <= z.
/// Values >= 1 mean z lies in co(V) + R^d_+; +infinity when unbounded.
double membership_infinite(std::span<const double> z, const std::vector<Vector>& vertices,
                           const LpOptions& options = {});

/// Dispatches on the hull kind.
double membership(HullKind kind, std::span<const double> z, const std::vector<Vector>& vertices,
                  const LpOptions& options = {});

struct AlphaOptions {
    double delta = 1e-3;
    bool cross_check = true;       // also solve at delta/2
    double cross_check_tol = 1e-4;
    unsigned threads = 1;
    LpOptions lp{};
};

struct AlphaResult {
    double value = 0.0;           // reported bound
    double at_delta = 0.0;
    double at_half_delta = 0.0;   // NaN when the cross-check is disabled
    double delta = 0.0;           // step that produced `value`
    bool delta_warning = false;   // the two steps disagreed by more than the tolerance
    std::size_t matrix = 0;       // extremal (matrix, vertex) pair
    std::size_t vertex = 0;
};

/// Upper bound max over (A_i, w) of min{ alpha : (I + delta(A_i - alpha I)) w in P }
/// for a symmetric or monotone polytope P.
AlphaResult alpha_upper(const MatrixFamily& family, const Polytope& polytope, const AlphaOptions& options = {});

/// Lower bound min over (A_i, w) of max{ alpha : (I + delta(A_i - alpha I)) w in Q }
/// for an infinite polytope Q.
AlphaResult alpha_lower_infinite(const MatrixFamily& family, const Polytope& polytope,
                                 const AlphaOptions& options = {});

/// Single-pair value at one step, exposed for tests.
double alpha_pair(HullKind kind, const Matrix& a, std::span<const double> w, const std::vector<Vector>& vertices,
                  double delta, const LpOptions& options = {});

}  // namespace lyapoly
