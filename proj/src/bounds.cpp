#include "lyapoly/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "lyapoly/error.hpp"
#include "lyapoly/linalg.hpp"
#include "parallel.hpp"

namespace lyapoly {

namespace {

constexpr double kImagTol = 1e-12;

// Resonance points in (0, 2 + delta] for one matrix.
std::vector<double> resonances(const Matrix& a, double delta) {
    const Spectrum s = eig_full(a);
    std::vector<double> periods;  // base values; all positive multiples are forbidden
    const double scale = std::max(1.0, a.max_abs());
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        const double im = std::abs(s.eigenvalues[i].imag());
        if (im > kImagTol * scale) periods.push_back(std::numbers::pi / im);
        for (std::size_t j = i + 1; j < s.eigenvalues.size(); ++j) {
            const double gap = std::abs(s.eigenvalues[i].imag() - s.eigenvalues[j].imag());
            if (gap > kImagTol * scale) periods.push_back(2.0 * std::numbers::pi / gap);
        }
    }
    std::vector<double> points;
    for (double p : periods)
        for (double x = p; x <= 2.0 + delta; x += p) points.push_back(x);
    return points;
}

std::vector<double> all_resonances(const MatrixFamily& family, double delta) {
    std::vector<double> points;
    for (const Matrix& a : family) {
        const auto r = resonances(a, delta);
        points.insert(points.end(), r.begin(), r.end());
    }
    return points;
}

bool admissible_against(const std::vector<double>& points, double tau, double delta) {
    for (double t = tau; t <= 2.0; t *= 2.0)
        for (double p : points)
            if (std::abs(t - p) < delta) return false;
    return true;
}

std::string format_tau(double tau) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", tau);
    return buf;
}

void require_tau(double tau, const char* stage) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw Error(ErrorCode::InvalidArgument, stage, "dwell time must be positive and finite");
    }
}

void gate(const MatrixFamily& family, const AnalysisConfig& cfg, double tau) {
    if (family.metzler() || !cfg.check_admissible) return;
    if (admissible_tau(family, tau, cfg.admissible_delta)) return;
    throw Error(ErrorCode::InadmissibleTau, "admissible_tau",
                "tau = " + format_tau(tau) + " is within " + format_tau(cfg.admissible_delta) +
                    " of a resonance; nearest admissible tau is " +
                    format_tau(nearest_admissible_tau(family, tau, cfg.admissible_delta)));
}

SearchOptions search_options(const AnalysisConfig& cfg, SearchMode mode) {
    SearchOptions s;
    s.max_length = cfg.max_length;
    s.mode = mode;
    s.strategy = cfg.search;
    s.max_products = cfg.max_products;
    return s;
}

void finish(LyapunovBounds& r, std::chrono::steady_clock::time_point start) {
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string_view to_string(AnalysisMode mode) noexcept {
    switch (mode) {
    case AnalysisMode::Stability: return "stability";
    case AnalysisMode::PositiveStability: return "positive-stability";
    case AnalysisMode::Stabilizability: return "stabilizability";
    }
    return "stability";
}

std::string_view to_string(Verdict verdict) noexcept {
    switch (verdict) {
    case Verdict::Stable: return "stable";
    case Verdict::Unstable: return "unstable";
    case Verdict::Stabilizable: return "stabilizable";
    case Verdict::NotStabilizable: return "not stabilizable";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

double beta_from_candidate(const ProductCandidate& candidate, double tau) {
    require_tau(tau, "beta_from_candidate");
    return candidate.log_averaged_rho() / tau;
}

bool admissible_tau(const MatrixFamily& family, double tau, double delta) {
    require_tau(tau, "admissible_tau");
    return admissible_against(all_resonances(family, delta), tau, delta);
}

double nearest_admissible_tau(const MatrixFamily& family, double tau, double delta) {
    require_tau(tau, "nearest_admissible_tau");
    const auto points = all_resonances(family, delta);
    if (admissible_against(points, tau, delta)) return tau;
    // Exclusion windows around p / 2^k; their edges are the candidates.
    std::vector<double> candidates;
    for (double p : points)
        for (double scale = 1.0; p / scale > 1e-12; scale *= 2.0) {
            candidates.push_back((p + 1.01 * delta) / scale);
            candidates.push_back((p - 1.01 * delta) / scale);
        }
    candidates.push_back(2.0);
    std::sort(candidates.begin(), candidates.end(),
              [tau](double a, double b) { return std::abs(a - tau) < std::abs(b - tau); });
    for (double c : candidates)
        if (c > 0.0 && c <= 2.0 && admissible_against(points, c, delta)) return c;
    return 2.0;
}

LyapunovBounds analyze_stability(const MatrixFamily& family, const AnalysisConfig& cfg, double tau) {
    const auto start = std::chrono::steady_clock::now();
    require_tau(tau, "analyze_stability");
    gate(family, cfg, tau);

    LyapunovBounds r;
    r.tau = tau;
    r.nu = cfg.nu;
    r.eps_reported = cfg.nu;
    const bool monotone = family.metzler() && !cfg.force_symmetric;
    r.mode = monotone ? AnalysisMode::PositiveStability : AnalysisMode::Stability;
    r.hull = monotone ? HullKind::Monotone : HullKind::Symmetric;

    const std::vector<Matrix> exps = exponentiate(family, tau);
    r.candidate = search_candidate(exps, search_options(cfg, SearchMode::Max));
    r.beta = beta_from_candidate(r.candidate, tau);
    r.lower = r.beta;

    const MatrixFamily normalized = normalize_family(family, r.beta + cfg.nu);
    const std::vector<Matrix> scaled = exponentiate(normalized, tau);
    const InitialVertices v0 = initial_vertices(r.candidate.word, scaled, r.hull);
    BuildResult built = build_polytope(scaled, v0.vertices, r.hull, cfg.build, v0.prefix_lengths);
    r.build = built.report;
    r.terminated = built.report.terminated;
    r.vertex_count = built.polytope.size();
    r.invariance_excess = r.terminated
                              ? verify_invariance(built.polytope, scaled, cfg.build.lp, cfg.build.threads)
                              : std::nan("");

    if (r.terminated) {
        r.alpha = alpha_upper(family, built.polytope, cfg.alpha);
        r.upper = r.alpha->value;
        r.gamma = r.upper - r.lower;
        if (r.alpha->delta_warning) {
            r.warnings.push_back("alpha changed by more than " + format_tau(cfg.alpha.cross_check_tol) +
                                 " when halving delta; reported the delta/2 value");
        }
        if (r.invariance_excess > cfg.build.tol_add) {
            r.warnings.push_back("post-hoc invariance excess " + format_tau(r.invariance_excess) +
                                 " exceeds the acceptance tolerance");
        }
    } else {
        r.upper = std::nan("");
        r.gamma = std::nan("");
        r.warnings.push_back("polytope construction stopped by " + std::string(to_string(built.report.stop)) +
                             "; increase the word length or nu");
    }

    if (r.terminated && r.upper < 0.0) {
        r.verdict = Verdict::Stable;
    } else if (r.lower > 0.0) {
        r.verdict = Verdict::Unstable;
    } else {
        r.verdict = Verdict::Inconclusive;
    }
    if (cfg.keep_polytope) r.polytope = std::move(built.polytope);
    finish(r, start);
    return r;
}

LyapunovBounds analyze_stabilizability(const MatrixFamily& family, const AnalysisConfig& cfg, double tau) {
    const auto start = std::chrono::steady_clock::now();
    require_tau(tau, "analyze_stabilizability");
    if (!family.metzler()) {
        throw Error(ErrorCode::InvalidArgument, "analyze_stabilizability", "every matrix must be Metzler");
    }
    LyapunovBounds r;
    r.mode = AnalysisMode::Stabilizability;
    r.hull = HullKind::Infinite;
    r.tau = tau;
    r.nu = cfg.nu;
    r.eps_reported = cfg.nu;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (!positive_irreducible(MatrixFamily({family[i]}))) {
            r.warnings.push_back("matrix " + std::to_string(i + 1) +
                                 " is reducible; the construction may not terminate");
        }
    }

    const std::vector<Matrix> exps = exponentiate(family, tau);
    r.candidate = search_candidate(exps, search_options(cfg, SearchMode::Min));
    r.beta = beta_from_candidate(r.candidate, tau);
    r.upper = r.beta;

    const MatrixFamily normalized = normalize_family(family, r.beta - cfg.nu);
    const std::vector<Matrix> scaled = exponentiate(normalized, tau);
    const InitialVertices v0 = initial_vertices(r.candidate.word, scaled, r.hull);
    BuildResult built = build_polytope(scaled, v0.vertices, r.hull, cfg.build, v0.prefix_lengths);
    r.build = built.report;
    r.terminated = built.report.terminated;
    r.vertex_count = built.polytope.size();
    r.invariance_excess = r.terminated
                              ? verify_invariance(built.polytope, scaled, cfg.build.lp, cfg.build.threads)
                              : std::nan("");

    if (r.terminated) {
        r.alpha = alpha_lower_infinite(family, built.polytope, cfg.alpha);
        r.lower = r.alpha->value;
        r.gamma = std::abs(r.upper - r.lower);
        if (r.alpha->delta_warning) {
            r.warnings.push_back("alpha changed by more than " + format_tau(cfg.alpha.cross_check_tol) +
                                 " when halving delta; reported the delta/2 value");
        }
        if (r.invariance_excess > cfg.build.tol_add) {
            r.warnings.push_back("post-hoc invariance excess " + format_tau(r.invariance_excess) +
                                 " exceeds the acceptance tolerance");
        }
    } else {
        r.lower = std::nan("");
        r.gamma = std::nan("");
        r.warnings.push_back("polytope construction stopped by " + std::string(to_string(built.report.stop)) +
                             "; increase the word length or nu");
    }

    if (r.upper < 0.0) {
        r.verdict = Verdict::Stabilizable;
    } else if (r.terminated && r.lower >= 0.0) {
        r.verdict = Verdict::NotStabilizable;
    } else {
        r.verdict = Verdict::Inconclusive;
    }
    if (cfg.keep_polytope) r.polytope = std::move(built.polytope);
    finish(r, start);
    return r;
}

std::vector<LyapunovBounds> analyze_sweep(const MatrixFamily& family, const AnalysisConfig& cfg,
                                          bool stabilizability) {
    if (cfg.taus.empty()) throw Error(ErrorCode::InvalidArgument, "analyze", "no dwell times given");
    if (cfg.max_length == 0) throw Error(ErrorCode::InvalidArgument, "analyze", "word length must be >= 1");
    std::vector<double> taus = cfg.taus;
    std::sort(taus.begin(), taus.end(), std::greater<>());
    std::vector<LyapunovBounds> rows(taus.size());
    detail::parallel_for(taus.size(), cfg.threads, [&](std::size_t i) {
        try {
            rows[i] = stabilizability ? analyze_stabilizability(family, cfg, taus[i])
                                      : analyze_stability(family, cfg, taus[i]);
        } catch (const Error& e) {
            throw Error(e.code(), e.stage(), e.detail() + " (tau = " + format_tau(taus[i]) + ")");
        }
    });
    return rows;
}

FibrillationReport fibrillation_scan(const MatrixFamily& family, std::vector<double> taus, std::size_t max_length,
                                     SearchStrategy search) {
    if (taus.empty()) throw Error(ErrorCode::InvalidArgument, "fibrillation_scan", "no dwell times given");
    std::sort(taus.begin(), taus.end(), std::greater<>());
    FibrillationReport report;
    for (double tau : taus) {
        require_tau(tau, "fibrillation_scan");
        const std::vector<Matrix> exps = exponentiate(family, tau);
        SearchOptions opt;
        opt.max_length = max_length;
        opt.strategy = search;
        const ProductCandidate c = search_candidate(exps, opt);
        FibrillationRow row;
        row.tau = tau;
        row.smp_length = c.length();
        row.beta = beta_from_candidate(c, tau);
        row.word = render_word(c.word);
        if (exps.size() == 2) {
            const Matrix diff = exps[1] - exps[0].transpose();
            if (diff.max_abs() <= 1e-12 * std::max(1.0, exps[0].max_abs())) {
                row.transpose_pair_rho = std::sqrt(spectral_radius(exps[0] * exps[1]));
            }
        }
        report.rows.push_back(row);
    }
    const std::size_t first = report.rows.front().smp_length;
    report.bounded_length = std::all_of(report.rows.begin(), report.rows.end(),
                                        [first](const FibrillationRow& r) { return r.smp_length <= first; });
    report.beta_increasing = report.rows.size() >= 2;
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        report.beta_increasing = report.beta_increasing && report.rows[i].beta > report.rows[i - 1].beta;
    report.fibrillation = report.bounded_length && report.beta_increasing;
    return report;
}

}  // namespace lyapoly
