#include "lyapoly/lp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "lyapoly/error.hpp"
#include "lyapoly/linalg.hpp"
#include "parallel.hpp"

namespace lyapoly {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kTieTol = 1e-12;

struct VarMap {
    std::size_t pos = 0;
    std::optional<std::size_t> neg;
    double shift = 0.0;
};

// min c.x + c0 subject to a x = b, x >= 0, b >= 0.
struct StandardForm {
    Matrix a;
    Vector b;
    Vector c;
    double c0 = 0.0;
    double sign = 1.0;
    std::vector<std::optional<std::size_t>> slack_basis;
    std::vector<VarMap> map;
};

void check_block(const Matrix& a, const Vector& b, std::size_t n, const char* what) {
    if (a.rows() == 0 && b.empty()) return;
    if (a.rows() != b.size() || a.cols() != n) {
        throw Error(ErrorCode::DimensionMismatch, "solve_lp", std::string(what) + " block has inconsistent shape");
    }
    if (!a.all_finite()) throw Error(ErrorCode::NonFinite, "solve_lp", std::string(what) + " matrix not finite");
    for (double v : b)
        if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "solve_lp", std::string(what) + " rhs not finite");
}

StandardForm standardise(const LpProblem& p) {
    const std::size_t n = p.objective.size();
    check_block(p.a_eq, p.b_eq, n, "equality");
    check_block(p.a_ub, p.b_ub, n, "inequality");
    if (!p.lower.empty() && p.lower.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "solve_lp", "lower bound vector has wrong length");
    }
    for (double c : p.objective)
        if (!std::isfinite(c)) throw Error(ErrorCode::NonFinite, "solve_lp", "objective not finite");

    StandardForm s;
    s.sign = p.sense == Sense::Maximize ? -1.0 : 1.0;
    std::size_t cols = 0;
    s.map.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = p.lower.empty() ? 0.0 : p.lower[j];
        if (std::isnan(lo) || lo == kInfinity) {
            throw Error(ErrorCode::InvalidArgument, "solve_lp", "invalid lower bound");
        }
        s.map[j].pos = cols++;
        if (lo == -kInfinity) {
            s.map[j].neg = cols++;
        } else {
            s.map[j].shift = lo;
        }
    }
    const std::size_t n_eq = p.a_eq.rows();
    const std::size_t n_ub = p.a_ub.rows();
    const std::size_t first_slack = cols;
    cols += n_ub;
    const std::size_t m = n_eq + n_ub;

    s.a = Matrix(m, cols);
    s.b.assign(m, 0.0);
    s.c.assign(cols, 0.0);
    s.slack_basis.assign(m, std::nullopt);
    for (std::size_t j = 0; j < n; ++j) {
        const double cj = s.sign * p.objective[j];
        s.c[s.map[j].pos] = cj;
        if (s.map[j].neg) s.c[*s.map[j].neg] = -cj;
        s.c0 += cj * s.map[j].shift;
    }
    auto fill_row = [&](std::size_t row, std::span<const double> coeffs, double rhs) {
        double shifted_rhs = rhs;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = coeffs[j];
            if (v == 0.0) continue;
            s.a(row, s.map[j].pos) = v;
            if (s.map[j].neg) s.a(row, *s.map[j].neg) = -v;
            shifted_rhs -= v * s.map[j].shift;
        }
        s.b[row] = shifted_rhs;
    };
    for (std::size_t i = 0; i < n_eq; ++i) fill_row(i, p.a_eq.row(i), p.b_eq[i]);
    for (std::size_t i = 0; i < n_ub; ++i) {
        fill_row(n_eq + i, p.a_ub.row(i), p.b_ub[i]);
        s.a(n_eq + i, first_slack + i) = 1.0;
        s.slack_basis[n_eq + i] = first_slack + i;
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (s.b[i] < 0.0) {
            for (double& v : s.a.row(i)) v = -v;
            s.b[i] = -s.b[i];
            s.slack_basis[i] = std::nullopt;
        }
    }
    return s;
}

class Tableau {
public:
    Tableau(const StandardForm& s, std::size_t max_pivots) : m_(s.a.rows()), n_(s.a.cols()), max_pivots_(max_pivots) {
        for (std::size_t i = 0; i < m_; ++i)
            if (!s.slack_basis[i]) ++n_art_;
        width_ = n_ + n_art_ + 1;
        t_.assign((m_ + 2) * width_, 0.0);
        basis_.resize(m_);
        std::size_t art = n_;
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) at(i, j) = s.a(i, j);
            at(i, rhs()) = s.b[i];
            if (s.slack_basis[i]) {
                basis_[i] = *s.slack_basis[i];
            } else {
                at(i, art) = 1.0;
                basis_[i] = art++;
            }
        }
        for (std::size_t j = 0; j < n_; ++j) at(m_, j) = s.c[j];
        // Phase-one costs: one per artificial, priced out against the basis.
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            for (std::size_t j = 0; j < n_; ++j) at(m_ + 1, j) -= at(i, j);
            at(m_ + 1, rhs()) -= at(i, rhs());
        }
    }

    // Returns false when unbounded.
    bool optimise(std::size_t obj_row, double tol) {
        while (true) {
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < n_; ++j) {
                if (at(obj_row, j) < -tol) {
                    enter = j;
                    break;
                }
            }
            if (!enter) return true;
            std::optional<std::size_t> leave;
            double best = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double aij = at(i, *enter);
                if (aij <= kPivotTol) continue;
                const double ratio = at(i, rhs()) / aij;
                if (!leave || ratio < best - kTieTol * (1.0 + std::abs(best)) ||
                    (std::abs(ratio - best) <= kTieTol * (1.0 + std::abs(best)) && basis_[i] < basis_[*leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (!leave) return false;
            pivot(*leave, *enter);
        }
    }

    void pivot(std::size_t r, std::size_t col) {
        if (++pivots_ > max_pivots_) {
            throw Error(ErrorCode::NoConvergence, "solve_lp",
                        "simplex exceeded " + std::to_string(max_pivots_) + " pivots");
        }
        const double inv = 1.0 / at(r, col);
        for (std::size_t j = 0; j < width_; ++j) at(r, j) *= inv;
        at(r, col) = 1.0;
        for (std::size_t i = 0; i < m_ + 2; ++i) {
            if (i == r) continue;
            const double f = at(i, col);
            if (f == 0.0) continue;
            double* dst = &at(i, 0);
            const double* src = &at(r, 0);
            for (std::size_t j = 0; j < width_; ++j) dst[j] -= f * src[j];
            at(i, col) = 0.0;
        }
        basis_[r] = col;
    }

    // Moves artificials out of the basis after phase one where possible.
    void expel_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::optional<std::size_t> col;
            double best = 1e-9;
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::abs(at(i, j)) > best) {
                    best = std::abs(at(i, j));
                    col = j;
                }
            }
            if (col) pivot(i, *col);
        }
    }

    [[nodiscard]] double phase_one_value() const { return -at(m_ + 1, rhs()); }
    [[nodiscard]] std::size_t rows() const { return m_; }
    [[nodiscard]] std::size_t structural() const { return n_; }
    [[nodiscard]] std::size_t basis(std::size_t i) const { return basis_[i]; }
    [[nodiscard]] double value(std::size_t i) const { return at(i, rhs()); }
    [[nodiscard]] std::size_t pivots() const { return pivots_; }

private:
    double& at(std::size_t i, std::size_t j) { return t_[i * width_ + j]; }
    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return t_[i * width_ + j]; }
    [[nodiscard]] std::size_t rhs() const { return width_ - 1; }

    std::size_t m_;
    std::size_t n_;
    std::size_t n_art_ = 0;
    std::size_t width_ = 0;
    std::size_t max_pivots_;
    std::size_t pivots_ = 0;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
};

// Recomputes the basic solution from the original data, which removes the
// drift accumulated over the tableau updates.
Vector basic_solution(const StandardForm& s, const Tableau& t, double tol) {
    const std::size_t n = t.structural();
    Vector x(n, 0.0);
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        if (t.basis(i) < n) {
            x[t.basis(i)] = t.value(i);
            rows.push_back(i);
            cols.push_back(t.basis(i));
        }
    }
    if (!rows.empty()) {
        Matrix bmat(rows.size(), rows.size());
        Matrix rhs(rows.size(), 1);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < cols.size(); ++c) bmat(r, c) = s.a(rows[r], cols[c]);
            rhs(r, 0) = s.b[rows[r]];
        }
        try {
            const Matrix xb = solve(bmat, rhs);
            bool sane = xb.all_finite();
            for (std::size_t c = 0; c < cols.size() && sane; ++c)
                sane = std::abs(xb(c, 0) - x[cols[c]]) <= 1e-6 * (1.0 + std::abs(x[cols[c]]));
            if (sane)
                for (std::size_t c = 0; c < cols.size(); ++c) x[cols[c]] = xb(c, 0);
        } catch (const Error&) {
            // singular basis block (redundant rows): keep tableau values
        }
    }
    for (double& v : x)
        if (v < 0.0 && v >= -tol) v = 0.0;
    return x;
}

Matrix columns_of(const std::vector<Vector>& vertices, std::size_t d) {
    Matrix v(d, vertices.size());
    for (std::size_t j = 0; j < vertices.size(); ++j) {
        if (vertices[j].size() != d) {
            throw Error(ErrorCode::DimensionMismatch, "membership", "vertex dimension differs from point");
        }
        for (std::size_t i = 0; i < d; ++i) v(i, j) = vertices[j][i];
    }
    return v;
}

bool is_zero(std::span<const double> z) {
    return std::all_of(z.begin(), z.end(), [](double v) { return v == 0.0; });
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options) {
    const StandardForm s = standardise(problem);
    const std::size_t m = s.a.rows();
    const std::size_t cols = s.a.cols();
    const std::size_t cap = options.max_pivots ? options.max_pivots : 50 * (m + cols) + 1000;
    Tableau t(s, cap);

    LpSolution out;
    double bnorm = 1.0;
    for (double v : s.b) bnorm = std::max(bnorm, std::abs(v));
    t.optimise(m + 1, options.tol);
    if (t.phase_one_value() > options.tol * bnorm) {
        out.status = LpStatus::Infeasible;
        out.pivots = t.pivots();
        return out;
    }
    t.expel_artificials();
    if (!t.optimise(m, options.tol)) {
        out.status = LpStatus::Unbounded;
        out.objective_value = problem.sense == Sense::Maximize ? kInfinity : -kInfinity;
        out.pivots = t.pivots();
        return out;
    }

    const Vector xs = basic_solution(s, t, options.tol);
    double obj = s.c0;
    for (std::size_t j = 0; j < cols; ++j) obj += s.c[j] * xs[j];
    out.status = LpStatus::Optimal;
    out.objective_value = s.sign * obj;
    out.x.resize(problem.objective.size());
    for (std::size_t j = 0; j < out.x.size(); ++j) {
        const VarMap& vm = s.map[j];
        out.x[j] = xs[vm.pos] - (vm.neg ? xs[*vm.neg] : 0.0) + vm.shift;
    }
    out.pivots = t.pivots();
    return out;
}

double membership_sym(std::span<const double> z, const std::vector<Vector>& vertices, const LpOptions& options) {
    if (is_zero(z)) return 0.0;
    if (vertices.empty()) return kInfinity;
    const std::size_t d = z.size();
    const std::size_t k = vertices.size();
    const Matrix v = columns_of(vertices, d);
    LpProblem p;
    p.objective.assign(2 * k, 1.0);
    p.a_eq = Matrix(d, 2 * k);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            p.a_eq(i, j) = v(i, j);
            p.a_eq(i, k + j) = -v(i, j);
        }
    p.b_eq.assign(z.begin(), z.end());
    const LpSolution s = solve_lp(p, options);
    return s.status == LpStatus::Optimal ? s.objective_value : kInfinity;
}

double membership_monotone(std::span<const double> z, const std::vector<Vector>& vertices,
                           const LpOptions& options) {
    if (std::all_of(z.begin(), z.end(), [](double x) { return x <= 0.0; })) return 0.0;
    if (vertices.empty()) return kInfinity;
    const std::size_t d = z.size();
    const std::size_t k = vertices.size();
    const Matrix v = columns_of(vertices, d);
    LpProblem p;
    p.objective.assign(k, 1.0);
    p.a_ub = Matrix(d, k);
    p.b_ub.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < k; ++j) p.a_ub(i, j) = -v(i, j);
        p.b_ub[i] = -z[i];
    }
    const LpSolution s = solve_lp(p, options);
    return s.status == LpStatus::Optimal ? s.objective_value : kInfinity;
}

double membership_infinite(std::span<const double> z, const std::vector<Vector>& vertices,
                           const LpOptions& options) {
    if (vertices.empty()) return 0.0;
    const std::size_t d = z.size();
    const std::size_t k = vertices.size();
    const Matrix v = columns_of(vertices, d);
    LpProblem p;
    p.objective.assign(k, 1.0);
    p.sense = Sense::Maximize;
    p.a_ub = v;
    p.b_ub.assign(z.begin(), z.end());
    const LpSolution s = solve_lp(p, options);
    switch (s.status) {
    case LpStatus::Optimal: return s.objective_value;
    case LpStatus::Unbounded: return kInfinity;
    case LpStatus::Infeasible: return -kInfinity;  // z has a negative entry
    }
    return -kInfinity;
}

double membership(HullKind kind, std::span<const double> z, const std::vector<Vector>& vertices,
                  const LpOptions& options) {
    switch (kind) {
    case HullKind::Symmetric: return membership_sym(z, vertices, options);
    case HullKind::Monotone: return membership_monotone(z, vertices, options);
    case HullKind::Infinite: return membership_infinite(z, vertices, options);
    }
    return kInfinity;
}

double alpha_pair(HullKind kind, const Matrix& a, std::span<const double> w, const std::vector<Vector>& vertices,
                  double delta, const LpOptions& options) {
    const std::size_t d = w.size();
    const std::size_t k = vertices.size();
    const Matrix v = columns_of(vertices, d);
    const Vector aw = a * w;
    Vector target(d);  // w + delta A w
    for (std::size_t i = 0; i < d; ++i) target[i] = w[i] + delta * aw[i];

    // Variable 0 is alpha (free); the hull coefficients follow.
    LpProblem p;
    switch (kind) {
    case HullKind::Symmetric: {
        // V(t - s) + delta alpha w = w + delta A w,  sum(t + s) <= 1
        p.objective.assign(1 + 2 * k, 0.0);
        p.objective[0] = 1.0;
        p.a_eq = Matrix(d, 1 + 2 * k);
        for (std::size_t i = 0; i < d; ++i) {
            p.a_eq(i, 0) = delta * w[i];
            for (std::size_t j = 0; j < k; ++j) {
                p.a_eq(i, 1 + j) = v(i, j);
                p.a_eq(i, 1 + k + j) = -v(i, j);
            }
        }
        p.b_eq = target;
        p.a_ub = Matrix(1, 1 + 2 * k, 1.0);
        p.a_ub(0, 0) = 0.0;
        p.b_ub = {1.0};
        break;
    }
    case HullKind::Monotone: {
        // w + delta(A - alpha I)w <= V t,  sum t <= 1
        p.objective.assign(1 + k, 0.0);
        p.objective[0] = 1.0;
        p.a_ub = Matrix(d + 1, 1 + k);
        p.b_ub.assign(d + 1, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            p.a_ub(i, 0) = -delta * w[i];
            for (std::size_t j = 0; j < k; ++j) p.a_ub(i, 1 + j) = -v(i, j);
            p.b_ub[i] = -target[i];
        }
        for (std::size_t j = 0; j < k; ++j) p.a_ub(d, 1 + j) = 1.0;
        p.b_ub[d] = 1.0;
        break;
    }
    case HullKind::Infinite: {
        // w + delta(A - alpha I)w >= V t,  sum t >= 1, maximise alpha
        p.sense = Sense::Maximize;
        p.objective.assign(1 + k, 0.0);
        p.objective[0] = 1.0;
        p.a_ub = Matrix(d + 1, 1 + k);
        p.b_ub.assign(d + 1, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            p.a_ub(i, 0) = delta * w[i];
            for (std::size_t j = 0; j < k; ++j) p.a_ub(i, 1 + j) = v(i, j);
            p.b_ub[i] = target[i];
        }
        for (std::size_t j = 0; j < k; ++j) p.a_ub(d, 1 + j) = -1.0;
        p.b_ub[d] = -1.0;
        break;
    }
    }
    p.lower.assign(p.objective.size(), 0.0);
    p.lower[0] = -kInfinity;

    const LpSolution s = solve_lp(p, options);
    if (s.status != LpStatus::Optimal) {
        throw Error(s.status == LpStatus::Infeasible ? ErrorCode::Infeasible : ErrorCode::NoConvergence, "alpha",
                    s.status == LpStatus::Infeasible ? "alpha LP infeasible" : "alpha LP unbounded");
    }
    return s.objective_value;
}

namespace {

struct PairValue {
    double value = 0.0;
    std::size_t matrix = 0;
    std::size_t vertex = 0;
};

PairValue extremal_alpha(const MatrixFamily& family, const Polytope& polytope, double delta, bool take_max,
                         const AlphaOptions& options) {
    const std::size_t nv = polytope.vertices.size();
    const std::size_t total = family.size() * nv;
    if (total == 0) throw Error(ErrorCode::InvalidArgument, "alpha", "empty polytope");
    std::vector<double> values(total);
    detail::parallel_for(total, options.threads, [&](std::size_t idx) {
        const std::size_t i = idx / nv;
        const std::size_t v = idx % nv;
        try {
            values[idx] = alpha_pair(polytope.kind, family[i], polytope.vertices[v], polytope.vertices, delta,
                                     options.lp);
        } catch (const Error& e) {
            throw Error(e.code(), "alpha",
                        e.detail() + " for matrix " + std::to_string(i + 1) + ", vertex " + std::to_string(v));
        }
    });
    PairValue best{values[0], 0, 0};
    for (std::size_t idx = 1; idx < total; ++idx) {
        const bool better = take_max ? values[idx] > best.value : values[idx] < best.value;
        if (better) best = {values[idx], idx / nv, idx % nv};
    }
    return best;
}

AlphaResult alpha_bound(const MatrixFamily& family, const Polytope& polytope, bool take_max,
                        const AlphaOptions& options) {
    if (!(options.delta > 0.0) || !std::isfinite(options.delta)) {
        throw Error(ErrorCode::InvalidArgument, "alpha", "delta must be positive");
    }
    if (family.dim() != polytope.dim) {
        throw Error(ErrorCode::DimensionMismatch, "alpha", "polytope and family dimensions differ");
    }
    AlphaResult r;
    const PairValue full = extremal_alpha(family, polytope, options.delta, take_max, options);
    r.at_delta = full.value;
    r.value = full.value;
    r.delta = options.delta;
    r.matrix = full.matrix;
    r.vertex = full.vertex;
    r.at_half_delta = std::nan("");
    if (options.cross_check) {
        const PairValue half = extremal_alpha(family, polytope, 0.5 * options.delta, take_max, options);
        r.at_half_delta = half.value;
        if (std::abs(full.value - half.value) > options.cross_check_tol) {
            r.value = half.value;
            r.delta = 0.5 * options.delta;
            r.matrix = half.matrix;
            r.vertex = half.vertex;
            r.delta_warning = true;
        }
    }
    return r;
}

}  // namespace

AlphaResult alpha_upper(const MatrixFamily& family, const Polytope& polytope, const AlphaOptions& options) {
    if (polytope.kind == HullKind::Infinite) {
        throw Error(ErrorCode::InvalidArgument, "alpha_upper", "infinite polytopes give lower bounds");
    }
    return alpha_bound(family, polytope, true, options);
}

AlphaResult alpha_lower_infinite(const MatrixFamily& family, const Polytope& polytope,
                                 const AlphaOptions& options) {
    if (polytope.kind != HullKind::Infinite) {
        throw Error(ErrorCode::InvalidArgument, "alpha_lower_infinite", "expected an infinite polytope");
    }
    return alpha_bound(family, polytope, false, options);
}

}  // namespace lyapoly
