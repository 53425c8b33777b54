#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "fixtures.hpp"
#include "lyapoly/bounds.hpp"
#include "lyapoly/error.hpp"
#include "lyapoly/io.hpp"
#include "lyapoly/random.hpp"
#include "lyapoly/report.hpp"
#include "support.hpp"

using namespace lyapoly;

namespace {

ErrorCode code_of(std::string_view text) {
    try {
        io::parse_family(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a parse failure");
    return ErrorCode::Parse;
}

std::string message_of(std::string_view text) {
    try {
        io::parse_family(text, "f.json");
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("family files round-trip bit for bit") {
    testing::Rng rng(501);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = static_cast<std::size_t>(rng.integer(1, 5));
        const MatrixFamily fam({rng.matrix(d, -1e3, 1e3), rng.matrix(d, -1e-7, 1e-7), rng.matrix(d)});
        const MatrixFamily back = io::parse_family(io::family_to_json(fam));
        REQUIRE(back.size() == fam.size());
        for (std::size_t i = 0; i < fam.size(); ++i) CHECK(back[i] == fam[i]);
        CHECK(back.labels() == fam.labels());
    }
    const MatrixFamily planar = io::parse_family(io::family_to_json(fixtures::planar()));
    CHECK(planar[0] == fixtures::planar()[0]);
}

TEST_CASE("bundled family files") {
    const std::filesystem::path dir = LYAPOLY_DATA_DIR;
    CHECK(io::load_family(dir / "planar_general.json").size() == 2);
    CHECK_FALSE(io::load_family(dir / "planar_general.json").metzler());
    CHECK(io::load_family(dir / "metzler3_sparse.json").metzler());
    CHECK(io::load_family(dir / "metzler8.json")[1] == fixtures::metzler8()[1]);
    CHECK(io::load_family(dir / "planar_triangular.json")[0] == fixtures::triangular()[0]);
    CHECK_THROWS_AS(io::load_family(dir / "missing.json"), Error);
}

TEST_CASE("family parse errors name the location") {
    CHECK(code_of("{\"dim\": 2, \"matrices\": []}") == ErrorCode::InvalidArgument);
    CHECK(message_of("{\"dim\": 2, \"matrices\": []}").find("family must be nonempty") != std::string::npos);
    CHECK(code_of("{\"dim\": 2, \"matrices\": [[[1, 2], [3]]]}") == ErrorCode::DimensionMismatch);
    CHECK(message_of("{\"dim\": 2, \"matrices\": [[[1, 2], [3]]]}").find("matrices[0][1]") != std::string::npos);
    CHECK(message_of("{\"dim\": 2, \"matrices\": [[[1, 2], [3, 4]], [[1, 2]]]}").find("matrices[1]") !=
          std::string::npos);
    CHECK(code_of("{\"dim\": 2, \"matrices\": [[[1, \"x\"], [3, 4]]]}") == ErrorCode::Parse);
    CHECK(message_of("{\"dim\": 2, \"matrices\": [[[1, null], [3, 4]]]}").find("matrices[0][0][1]") !=
          std::string::npos);
    CHECK(code_of("{\"dim\": 2, \"matrices\": [[[1, 1e999], [3, 4]]]}") == ErrorCode::NonFinite);
    CHECK(code_of("{\"dim\": 0, \"matrices\": [[[1]]]}") == ErrorCode::Parse);
    CHECK(code_of("{\"dim\": 1, \"matrices\": [[[1]]], \"labels\": [\"a\", \"b\"]}") == ErrorCode::Parse);
    CHECK(message_of("{\"dim\": 1,\n \"matrices\": [[[1]]").find("line 2") != std::string::npos);
    CHECK(io::parse_family("{\"dim\": 1, \"matrices\": [[[1]], [[-2]]], \"labels\": [\"up\", \"down\"]}").labels() ==
          std::vector<std::string>{"up", "down"});
}

TEST_CASE("polytope files round-trip") {
    Polytope p;
    p.kind = HullKind::Monotone;
    p.dim = 3;
    p.vertices = {{0.1, 0.2, 0.3}, {1.0 / 3.0, 0.0, 2.5e-9}};
    const Polytope back = io::parse_polytope(io::polytope_to_json(p));
    CHECK(back.kind == p.kind);
    CHECK(back.dim == 3);
    CHECK(back.vertices == p.vertices);
    CHECK_THROWS_AS(io::parse_polytope("{\"hull\": \"round\", \"dim\": 1, \"vertices\": []}"), Error);
    CHECK_THROWS_AS(io::parse_polytope("{\"hull\": \"symmetric\", \"dim\": 2, \"vertices\": [[1]]}"), Error);
}

TEST_CASE("planar boundaries") {
    Polytope p;
    p.dim = 2;
    SECTION("symmetric diamond") {
        p.kind = HullKind::Symmetric;
        p.vertices = {{1, 0}, {0, 1}, {0.2, 0.2}};
        const auto b = io::boundary2d(p);
        REQUIRE(b.size() == 4);
        CHECK(b[0] == std::array<double, 2>{1, 0});
        CHECK(b[1] == std::array<double, 2>{0, 1});
        CHECK(b[2] == std::array<double, 2>{-1, 0});
        CHECK(b[3] == std::array<double, 2>{0, -1});
    }
    SECTION("monotone hull includes the origin and the axis projections") {
        p.kind = HullKind::Monotone;
        p.vertices = {{1, 0.5}, {0.5, 1}};
        const auto b = io::boundary2d(p);
        CHECK(b.size() == 5);
        CHECK(b[0] == std::array<double, 2>{0, 0});
        CHECK(std::find(b.begin(), b.end(), std::array<double, 2>{1, 0}) != b.end());
    }
    SECTION("infinite hull keeps the lower-left chain") {
        p.kind = HullKind::Infinite;
        p.vertices = {{1, 0.2}, {0.2, 1}, {0.5, 0.5}, {0.9, 0.9}};
        const auto b = io::boundary2d(p);
        for (const auto& v : p.vertices) {
            const bool on = std::find(b.begin(), b.end(), std::array<double, 2>{v[0], v[1]}) != b.end();
            CHECK(on == (v[0] + v[1] < 1.5));
        }
        CHECK(io::boundary2d_csv(p).rfind("x,y\n", 0) == 0);
    }
    SECTION("non-planar polytopes are rejected") {
        p.dim = 3;
        p.vertices = {{1, 0, 0}};
        CHECK_THROWS_AS(io::boundary2d(p), Error);
    }
}

TEST_CASE("numbers are printed with 9 significant digits") {
    CHECK(report::format_number(0.373463076917) == "0.373463077");
    CHECK(report::format_number(-0.0611078048) == "-0.0611078048");
    CHECK(report::format_number(1.0) == "1");
    CHECK(report::format_number(-0.0) == "0");
    CHECK(report::format_number(std::nan("")) == "nan");
    CHECK(report::format_number(-INFINITY) == "-inf");
}

TEST_CASE("reports are deterministic and complete") {
    AnalysisConfig cfg;
    cfg.taus = {1.0, 0.5};
    const auto rows = analyze_sweep(fixtures::metzler3_dense(), cfg, false);
    const auto again = analyze_sweep(fixtures::metzler3_dense(), cfg, false);
    report::RunInfo info;
    info.family_source = "m.json";
    for (report::Format f : {report::Format::Json, report::Format::Csv, report::Format::Markdown})
        CHECK(report::render(rows, info, f) == report::render(again, info, f));

    const std::string csv = report::render(rows, info, report::Format::Csv);
    CHECK(csv.find("tau,beta,alpha,gamma,product,eps,vertices,terminated,verdict\n") == 0);
    CHECK(csv.find("0.5,-0.0611078048,-0.00388984842,") != std::string::npos);
    const std::string md = report::render(rows, info, report::Format::Markdown);
    CHECK(md.find("| 1 | -0.0611078048 |") != std::string::npos);
    CHECK(report::exit_code(rows) == 2);  // tau = 1 is inconclusive
    CHECK(report::exit_code({rows[1]}) == 0);

    const FibrillationReport fib = fibrillation_scan(fixtures::nilpotent_pair(), {0.5, 0.25}, 4);
    CHECK(report::render(fib, info, report::Format::Csv) == "tau,smp_length,beta\n0.5,2,0.494932923\n0.25,2,0.498706988\n");
}

TEST_CASE("random Metzler families") {
    const MatrixFamily a = random_metzler_family(6, 3, 42);
    const MatrixFamily b = random_metzler_family(6, 3, 42);
    const MatrixFamily c = random_metzler_family(6, 3, 43, RandomEntries::Real);
    CHECK(a.metzler());
    CHECK(c.metzler());
    CHECK(a.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(a[i] == b[i]);
    for (double x : a[0].data()) CHECK((x == -1.0 || x == 0.0 || x == 1.0));
    CHECK_FALSE(a[0] == c[0]);
    CHECK_THROWS_AS(random_metzler_family(0, 1, 1), Error);
}
