#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <optional>
#include <numeric>

#include "lyapoly/error.hpp"
#include "lyapoly/linalg.hpp"
#include "lyapoly/lp.hpp"
#include "support.hpp"

using namespace lyapoly;
using Catch::Approx;

namespace {

// Reference optimum of min c.x, A x <= b, x >= 0 for tiny problems: every
// vertex of the feasible set is the solution of n active constraints, so
// enumerate all of them.
std::optional<double> brute_force_min(const Vector& c, const Matrix& a, const Vector& b) {
    const std::size_t n = c.size();
    const std::size_t m = a.rows();
    // rows of the full system G x <= h: A then -I
    Matrix g(m + n, n);
    Vector h(m + n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) g(i, j) = a(i, j);
        h[i] = b[i];
    }
    for (std::size_t j = 0; j < n; ++j) g(m + j, j) = -1.0;
    std::optional<double> best;
    std::vector<std::size_t> pick(n);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == n) {
            Matrix sys(n, n);
            Matrix rhs(n, 1);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t j = 0; j < n; ++j) sys(r, j) = g(pick[r], j);
                rhs(r, 0) = h[pick[r]];
            }
            if (std::abs(testing::determinant(sys)) < 1e-12) return;
            const Matrix x = solve(sys, rhs);
            for (std::size_t i = 0; i < m + n; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < n; ++j) s += g(i, j) * x(j, 0);
                if (s > h[i] + 1e-9) return;
            }
            double obj = 0.0;
            for (std::size_t j = 0; j < n; ++j) obj += c[j] * x(j, 0);
            if (!best || obj < *best) best = obj;
            return;
        }
        for (std::size_t i = start; i < m + n; ++i) {
            pick[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}


}  // namespace

TEST_CASE("solve_lp on trivial problems") {
    SECTION("equality pins the variable") {
        LpProblem p;
        p.objective = {0.0};
        p.sense = Sense::Maximize;
        p.a_eq = Matrix{{1.0}};
        p.b_eq = {1.0};
        const LpSolution s = solve_lp(p);
        REQUIRE(s.status == LpStatus::Optimal);
        CHECK(s.x[0] == Approx(1.0));
    }
    SECTION("lower bound is active") {
        LpProblem p;
        p.objective = {1.0};
        p.lower = {2.0};
        const LpSolution s = solve_lp(p);
        REQUIRE(s.status == LpStatus::Optimal);
        CHECK(s.objective_value == Approx(2.0));
    }
    SECTION("infeasible") {
        LpProblem p;
        p.objective = {1.0};
        p.a_ub = Matrix{{1.0}};
        p.b_ub = {-1.0};
        CHECK(solve_lp(p).status == LpStatus::Infeasible);
    }
    SECTION("unbounded") {
        LpProblem p;
        p.objective = {-1.0, 0.0};
        p.a_ub = Matrix{{1.0, -1.0}};
        p.b_ub = {1.0};
        CHECK(solve_lp(p).status == LpStatus::Unbounded);
    }
    SECTION("free variable") {
        LpProblem p;
        p.objective = {1.0};
        p.lower = {-kInfinity};
        p.a_ub = Matrix{{-1.0}};
        p.b_ub = {3.0};
        const LpSolution s = solve_lp(p);
        REQUIRE(s.status == LpStatus::Optimal);
        CHECK(s.x[0] == Approx(-3.0));
    }
    SECTION("shape errors") {
        LpProblem p;
        p.objective = {1.0, 2.0};
        p.a_ub = Matrix{{1.0}};
        p.b_ub = {1.0};
        CHECK_THROWS_AS(solve_lp(p), Error);
    }
}

TEST_CASE("solve_lp handles degenerate vertices") {
    // Classic cycling example for the largest-coefficient rule.
    LpProblem p;
    p.objective = {-0.75, 150.0, -0.02, 6.0};
    p.a_ub = Matrix{{0.25, -60.0, -0.04, 9.0}, {0.5, -90.0, -0.02, 3.0}, {0.0, 0.0, 1.0, 0.0}};
    p.b_ub = {0.0, 0.0, 1.0};
    const LpSolution s = solve_lp(p);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.objective_value == Approx(-0.05));
}

TEST_CASE("solve_lp agrees with vertex enumeration") {
    testing::Rng rng(101);
    int compared = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 3));
        const std::size_t m = static_cast<std::size_t>(rng.integer(1, 4));
        Matrix a(m + n, n);
        Vector b(m + n);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
            b[i] = rng.uniform(-0.5, 1.0);
        }
        for (std::size_t j = 0; j < n; ++j) {  // box keeps the region bounded
            a(m + j, j) = 1.0;
            b[m + j] = 5.0;
        }
        const Vector c = rng.vector(n);
        LpProblem p;
        p.objective = c;
        p.a_ub = a;
        p.b_ub = b;
        const LpSolution s = solve_lp(p);
        const auto ref = brute_force_min(c, a, b);
        INFO("trial " << trial);
        if (!ref) {
            CHECK(s.status == LpStatus::Infeasible);
        } else {
            REQUIRE(s.status == LpStatus::Optimal);
            CHECK(s.objective_value == Approx(*ref).margin(1e-9));
            const Vector ax = a * s.x;
            for (std::size_t i = 0; i < ax.size(); ++i) CHECK(ax[i] <= b[i] + 1e-9);
            for (double x : s.x) CHECK(x >= -1e-9);
            ++compared;
        }
    }
    CHECK(compared > 100);
}

TEST_CASE("symmetric membership examples") {
    const std::vector<Vector> v{{1.0, 0.0}, {0.0, 1.0}};
    CHECK(membership_sym(Vector{0.5, 0.5}, v) == Approx(1.0));
    CHECK(membership_sym(Vector{0.0, 0.0}, v) == 0.0);
    CHECK(membership_sym(v[0], v) == Approx(1.0));
    CHECK(membership_sym(Vector{-2.0, 1.0}, v) == Approx(3.0));
    CHECK(membership_sym(Vector{1.0, 1.0}, std::vector<Vector>{{1.0, 0.0}}) == kInfinity);
}

TEST_CASE("monotone membership examples") {
    CHECK(membership_monotone(Vector{0.0, 0.0}, {{1.0, 1.0}}) == 0.0);
    CHECK(membership_monotone(Vector{1.0, 0.5}, {{1.0, 1.0}}) == Approx(1.0));
    CHECK(membership_monotone(Vector{1.0, 1.0}, {{1.0, 0.0}, {0.0, 1.0}}) == Approx(2.0));
    CHECK(membership_monotone(Vector{0.0, 1.0}, {{1.0, 0.0}}) == kInfinity);
}

TEST_CASE("infinite membership examples") {
    CHECK(membership_infinite(Vector{1.0, 1.0}, {{1.0, 1.0}}) == Approx(1.0));
    CHECK(membership_infinite(Vector{2.0, 2.0}, {{1.0, 1.0}}) == Approx(2.0));
    CHECK(membership_infinite(Vector{0.5, 0.5}, {{1.0, 1.0}}) == Approx(0.5));
    CHECK(membership_infinite(Vector{0.0, 0.0}, {{1.0, 1.0}}) == 0.0);
    CHECK(membership_infinite(Vector{3.0, 1.0}, {{1.0, 0.0}, {0.0, 1.0}}) == Approx(4.0));
}

TEST_CASE("symmetric membership is a symmetric gauge") {
    testing::Rng rng(102);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = static_cast<std::size_t>(rng.integer(2, 4));
        std::vector<Vector> v;
        const int k = rng.integer(static_cast<int>(d), 8);
        for (int j = 0; j < k; ++j) v.push_back(rng.vector(d));
        const Vector z = rng.vector(d);
        const double f = membership_sym(z, v);
        const double c = rng.uniform(0.1, 5.0);
        CHECK(membership_sym(scaled(z, c), v) == Approx(c * f).epsilon(1e-9));
        CHECK(membership_sym(scaled(z, -1.0), v) == Approx(f).epsilon(1e-9));
        // f is the smallest scaling of the hull containing z
        if (std::isfinite(f) && f > 0) CHECK(membership_sym(scaled(z, 1.0 / f), v) == Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("monotone membership does not increase when vertices are added") {
    testing::Rng rng(103);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Vector> v;
        const int k = rng.integer(1, 5);
        for (int j = 0; j < k; ++j) v.push_back(rng.vector(3, 0.0, 1.0));
        const Vector z = rng.vector(3, 0.0, 1.0);
        const double before = membership_monotone(z, v);
        v.push_back(rng.vector(3, 0.0, 1.0));
        const double after = membership_monotone(z, v);
        CHECK(after <= before + 1e-9);
    }
}

TEST_CASE("monotone membership matches a grid search") {
    testing::Rng rng(104);
    int decided = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Vector> v;
        const int k = rng.integer(1, 3);
        for (int j = 0; j < k; ++j) v.push_back(rng.vector(3, 0.0, 1.0));
        const Vector z = rng.vector(3, 0.0, 0.8);
        const double f = membership_monotone(z, v);
        if (std::abs(f - 1.0) < 0.05) continue;  // too close for the grid resolution
        CHECK((f <= 1.0) == testing::grid_in_monotone(v, z, 200));
        ++decided;
    }
    CHECK(decided > 100);
}

TEST_CASE("alpha of a scalar family is the scalar") {
    const std::vector<Vector> square{{1.0, 0.0}, {0.0, 1.0}, {0.6, 0.6}};
    for (double s : {-1.5, 0.0, 0.7}) {
        const MatrixFamily fam({Matrix{{s, 0.0}, {0.0, s}}});
        Polytope sym{HullKind::Symmetric, 2, square, {}, {}};
        CHECK(alpha_upper(fam, sym).value == Approx(s).margin(1e-9));
        Polytope mono{HullKind::Monotone, 2, square, {}, {}};
        CHECK(alpha_upper(fam, mono).value == Approx(s).margin(1e-9));
        Polytope inf{HullKind::Infinite, 2, square, {}, {}};
        CHECK(alpha_lower_infinite(fam, inf).value == Approx(s).margin(1e-9));
    }
}

TEST_CASE("alpha of a rotation on a square") {
    const MatrixFamily fam({Matrix{{0.0, 1.0}, {-1.0, 0.0}}});
    Polytope square{HullKind::Symmetric, 2, {{1.0, 1.0}, {1.0, -1.0}}, {}, {}};
    AlphaOptions opt;
    opt.cross_check = false;
    const double a = alpha_upper(fam, square, opt).value;
    // corner (1,1) moves along (1,-1), so |x|_inf grows at rate 1
    CHECK(a == Approx(1.0).margin(1e-6));
    const double a_small = alpha_pair(HullKind::Symmetric, fam[0], square.vertices[0], square.vertices, 1e-6);
    CHECK(a_small == Approx(1.0).margin(1e-6));
}

TEST_CASE("alpha rejects wrong hull kinds and bad steps") {
    const MatrixFamily fam({Matrix{{1.0}}});
    Polytope sym{HullKind::Symmetric, 1, {{1.0}}, {}, {}};
    Polytope inf{HullKind::Infinite, 1, {{1.0}}, {}, {}};
    CHECK_THROWS_AS(alpha_upper(fam, inf), Error);
    CHECK_THROWS_AS(alpha_lower_infinite(fam, sym), Error);
    AlphaOptions bad;
    bad.delta = 0.0;
    CHECK_THROWS_AS(alpha_upper(fam, sym, bad), Error);
}

TEST_CASE("alpha reduction is deterministic across thread counts") {
    testing::Rng rng(105);
    std::vector<Vector> v;
    for (int j = 0; j < 12; ++j) v.push_back(rng.vector(3));
    const MatrixFamily fam({rng.matrix(3), rng.matrix(3), rng.matrix(3)});
    Polytope p{HullKind::Symmetric, 3, v, {}, {}};
    AlphaOptions one;
    AlphaOptions four;
    four.threads = 4;
    const AlphaResult a = alpha_upper(fam, p, one);
    const AlphaResult b = alpha_upper(fam, p, four);
    CHECK(a.value == b.value);
    CHECK(a.matrix == b.matrix);
    CHECK(a.vertex == b.vertex);
}
