#include "lyapoly/invariant_polytope.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "lyapoly/error.hpp"
#include "parallel.hpp"

namespace lyapoly {

namespace {

bool cone_hull(HullKind kind) { return kind != HullKind::Symmetric; }

bool outside(HullKind kind, double f, double tol) {
    return kind == HullKind::Infinite ? f < 1.0 - tol : f > 1.0 + tol;
}

double excess(HullKind kind, double f) { return kind == HullKind::Infinite ? 1.0 - f : f - 1.0; }

void clip_roundoff(Vector& z) {
    const double floor = 1e-12 * norm_inf(z);
    for (double& x : z)
        if (x < 0.0 && x >= -floor) x = 0.0;
}

bool duplicate_of_any(const std::vector<Vector>& vertices, const Vector& z, bool symmetric, double tol) {
    const double nz = norm2(z);
    for (const Vector& v : vertices) {
        double plus = 0.0, minus = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            plus += (z[i] - v[i]) * (z[i] - v[i]);
            minus += (z[i] + v[i]) * (z[i] + v[i]);
        }
        const double scale = std::max(nz, norm2(v));
        if (std::sqrt(plus) <= tol * scale) return true;
        if (symmetric && std::sqrt(minus) <= tol * scale) return true;
    }
    return false;
}

void check_inputs(const std::vector<Matrix>& family, const std::vector<Vector>& initial, HullKind hull) {
    if (family.empty()) throw Error(ErrorCode::InvalidArgument, "build", "empty family");
    if (initial.empty()) throw Error(ErrorCode::InvalidArgument, "build", "no initial vertices");
    const std::size_t d = initial.front().size();
    for (const Matrix& b : family)
        if (b.rows() != d || b.cols() != d) {
            throw Error(ErrorCode::DimensionMismatch, "build", "matrix and vertex dimensions differ");
        }
    for (const Vector& v : initial) {
        if (v.size() != d) throw Error(ErrorCode::DimensionMismatch, "build", "vertices differ in dimension");
        if (norm2(v) == 0.0) throw Error(ErrorCode::InvalidArgument, "build", "zero initial vertex");
        if (cone_hull(hull) && std::any_of(v.begin(), v.end(), [](double x) { return x < 0.0; })) {
            throw Error(ErrorCode::InvalidArgument, "build",
                        std::string(to_string(hull)) + " hulls need nonnegative initial vertices");
        }
    }
}

}  // namespace

std::string_view to_string(StopReason reason) noexcept {
    switch (reason) {
    case StopReason::Terminated: return "terminated";
    case StopReason::SweepCap: return "sweep cap";
    case StopReason::VertexCap: return "vertex cap";
    case StopReason::TimeCap: return "time cap";
    }
    return "unknown";
}

BuildResult build_polytope(const std::vector<Matrix>& family, const std::vector<Vector>& initial, HullKind hull,
                           const BuildOptions& options, const std::vector<std::size_t>& initial_prefix_lengths) {
    check_inputs(family, initial, hull);
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

    BuildResult result;
    Polytope& p = result.polytope;
    BuildReport& report = result.report;
    p.kind = hull;
    p.dim = initial.front().size();
    for (std::size_t i = 0; i < initial.size(); ++i) {
        p.vertices.push_back(initial[i]);
        p.generation.push_back(0);
        VertexOrigin o;
        o.prefix_length = i < initial_prefix_lengths.size() ? initial_prefix_lengths[i] : i;
        p.origins.push_back(o);
    }

    std::vector<std::size_t> frontier(p.vertices.size());
    for (std::size_t i = 0; i < frontier.size(); ++i) frontier[i] = i;
    const bool symmetric = hull == HullKind::Symmetric;
    const std::size_t m = family.size();

    while (true) {
        if (report.sweeps == options.max_sweeps) {
            report.stop = StopReason::SweepCap;
            break;
        }
        ++report.sweeps;

        const std::size_t count = frontier.size() * m;
        std::vector<Vector> images(count);
        std::vector<double> first_pass(count);
        const std::vector<Vector> snapshot = p.vertices;
        detail::parallel_for(count, options.threads, [&](std::size_t idx) {
            Vector z = family[idx % m] * p.vertices[frontier[idx / m]];
            if (!symmetric) clip_roundoff(z);
            images[idx] = std::move(z);
            first_pass[idx] = membership(hull, images[idx], snapshot, options.lp);
        });
        report.membership_lp_count += count;

        std::vector<std::size_t> added;
        bool cap_hit = false;
        for (std::size_t idx = 0; idx < count && !cap_hit; ++idx) {
            if (!outside(hull, first_pass[idx], options.tol_add)) continue;
            if (!added.empty()) {
                // the hull has grown since the first pass
                ++report.membership_lp_count;
                if (!outside(hull, membership(hull, images[idx], p.vertices, options.lp), options.tol_add)) continue;
            }
            if (duplicate_of_any(p.vertices, images[idx], symmetric, options.duplicate_tol)) continue;
            p.vertices.push_back(std::move(images[idx]));
            p.generation.push_back(report.sweeps);
            VertexOrigin o = p.origins[frontier[idx / m]];
            o.path.push_back(idx % m);
            p.origins.push_back(std::move(o));
            added.push_back(p.vertices.size() - 1);
            if (p.vertices.size() > options.max_vertices) {
                cap_hit = true;
                report.stop = StopReason::VertexCap;
            }
        }
        report.added_per_sweep.push_back(added.size());
        if (cap_hit) break;
        if (added.empty()) {
            report.terminated = true;
            report.stop = StopReason::Terminated;
            if (options.prune_redundant) {
                report.pruned = prune_redundant(p, options.redundancy_tol, options.lp, options.threads);
            }
            break;
        }
        if (options.max_seconds > 0.0 && elapsed() > options.max_seconds) {
            report.stop = StopReason::TimeCap;
            break;
        }
        frontier = std::move(added);
    }
    report.seconds = elapsed();
    return result;
}

double verify_invariance(const Polytope& polytope, const std::vector<Matrix>& family, const LpOptions& lp,
                         unsigned threads) {
    const std::size_t nv = polytope.vertices.size();
    const std::size_t m = family.size();
    if (nv == 0 || m == 0) throw Error(ErrorCode::InvalidArgument, "verify_invariance", "empty input");
    std::vector<double> worst(nv * m);
    detail::parallel_for(nv * m, threads, [&](std::size_t idx) {
        Vector z = family[idx % m] * polytope.vertices[idx / m];
        if (cone_hull(polytope.kind)) clip_roundoff(z);
        worst[idx] = excess(polytope.kind, membership(polytope.kind, z, polytope.vertices, lp));
    });
    return *std::max_element(worst.begin(), worst.end());
}

namespace {

bool interior(HullKind kind, double f, double tol) {
    return kind == HullKind::Infinite ? f >= 1.0 + tol : f <= 1.0 - tol;
}

double membership_without(const Polytope& polytope, std::size_t skip, const std::vector<bool>& keep,
                          const LpOptions& lp) {
    std::vector<Vector> others;
    for (std::size_t j = 0; j < polytope.vertices.size(); ++j)
        if (j != skip && keep[j]) others.push_back(polytope.vertices[j]);
    return membership(polytope.kind, polytope.vertices[skip], others, lp);
}

}  // namespace

std::vector<std::size_t> redundant_vertices(const Polytope& polytope, double tol, const LpOptions& lp,
                                            unsigned threads) {
    const std::size_t n = polytope.vertices.size();
    if (n < 2) return {};
    const std::vector<bool> keep(n, true);
    std::vector<char> flag(n, 0);
    detail::parallel_for(n, threads, [&](std::size_t i) {
        flag[i] = interior(polytope.kind, membership_without(polytope, i, keep, lp), tol) ? 1 : 0;
    });
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (flag[i]) out.push_back(i);
    return out;
}

std::size_t prune_redundant(Polytope& polytope, double tol, const LpOptions& lp, unsigned threads) {
    // a vertex extreme in the full set stays extreme in every subset
    const std::vector<std::size_t> candidates = redundant_vertices(polytope, tol, lp, threads);
    if (candidates.empty()) return 0;
    std::vector<bool> keep(polytope.vertices.size(), true);
    std::size_t removed = 0;
    for (std::size_t i : candidates) {
        if (interior(polytope.kind, membership_without(polytope, i, keep, lp), tol)) {
            keep[i] = false;
            ++removed;
        }
    }
    Polytope out;
    out.kind = polytope.kind;
    out.dim = polytope.dim;
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (!keep[i]) continue;
        out.vertices.push_back(std::move(polytope.vertices[i]));
        out.generation.push_back(polytope.generation[i]);
        out.origins.push_back(std::move(polytope.origins[i]));
    }
    polytope = std::move(out);
    return removed;
}

}  // namespace lyapoly
