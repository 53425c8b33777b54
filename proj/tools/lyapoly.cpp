#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lyapoly/bounds.hpp"
#include "lyapoly/error.hpp"
#include "lyapoly/io.hpp"
#include "lyapoly/random.hpp"
#include "lyapoly/report.hpp"

namespace fs = std::filesystem;
using namespace lyapoly;

namespace {

constexpr int kExitError = 1;

// Accepts decimals and fractions such as "1/16".
double parse_tau(const std::string& text) {
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const double v = std::stod(text, &used);
            if (used == text.size()) return v;
        } else {
            const double num = std::stod(text.substr(0, slash), &used);
            if (used == slash) {
                const std::string den_text = text.substr(slash + 1);
                const double den = std::stod(den_text, &used);
                if (used == den_text.size()) return num / den;
            }
        }
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidArgument, "cli", "cannot parse dwell time '" + text + "'");
}

unsigned thread_budget() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("LYAPOLY_THREADS")) {
        unsigned v = 0;
        const auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), v);
        if (ec == std::errc() && *ptr == '\0' && v > 0) n = v;
    }
    return n;
}

SearchStrategy parse_search(const std::string& s) {
    if (s == "exhaustive") return SearchStrategy::Exhaustive;
    if (s == "branch-bound") return SearchStrategy::BranchBound;
    return SearchStrategy::TwoBlock;
}

struct AnalyzeArgs {
    std::string family;
    std::string mode = "stability";
    std::vector<std::string> taus{"1"};
    std::size_t max_length = 8;
    double nu = 0.0;
    double delta = 1e-3;
    std::string search = "exhaustive";
    std::string out;
    std::string format = "markdown";
    bool emit_polytope = false;
    bool emit_boundary2d = false;
    bool force_symmetric = false;
    bool no_admissible_check = false;
    std::size_t max_sweeps = 200;
    std::size_t max_vertices = 50'000;
    double max_seconds = 0.0;
    double tol_add = 1e-8;
    std::size_t max_products = 5'000'000;
};

int run_analyze(const AnalyzeArgs& a) {
    const MatrixFamily family = io::load_family(a.family);
    const report::Format format = *report::parse_format(a.format);
    std::vector<double> taus;
    for (const std::string& t : a.taus) taus.push_back(parse_tau(t));
    if ((a.emit_polytope || a.emit_boundary2d) && a.out.empty()) {
        throw Error(ErrorCode::InvalidArgument, "cli", "--emit-polytope and --emit-boundary2d need --out");
    }

    report::RunInfo info;
    info.family_source = fs::path(a.family).filename().string();
    info.dim = family.dim();
    info.count = family.size();
    info.metzler = family.metzler();
    info.search = a.search;
    info.max_length = a.max_length;
    info.delta = a.delta;

    std::string text;
    std::vector<std::pair<std::string, std::string>> files;
    int code = 0;
    if (a.mode == "fibrillation") {
        const FibrillationReport rep = fibrillation_scan(family, taus, a.max_length, parse_search(a.search));
        text = report::render(rep, info, format);
        files.emplace_back("fibrillation." + std::string(report::extension(format)), text);
    } else {
        AnalysisConfig cfg;
        cfg.taus = taus;
        cfg.max_length = a.max_length;
        cfg.nu = a.nu;
        cfg.search = parse_search(a.search);
        cfg.max_products = a.max_products;
        cfg.alpha.delta = a.delta;
        cfg.build.max_sweeps = a.max_sweeps;
        cfg.build.max_vertices = a.max_vertices;
        cfg.build.max_seconds = a.max_seconds;
        cfg.build.tol_add = a.tol_add;
        cfg.force_symmetric = a.force_symmetric;
        cfg.check_admissible = !a.no_admissible_check;
        cfg.keep_polytope = a.emit_polytope || a.emit_boundary2d;
        const unsigned budget = thread_budget();
        cfg.threads = std::max(1u, std::min<unsigned>(budget, static_cast<unsigned>(taus.size())));
        cfg.build.threads = std::max(1u, budget / cfg.threads);
        cfg.alpha.threads = cfg.build.threads;

        const std::vector<LyapunovBounds> rows = analyze_sweep(family, cfg, a.mode == "stabilizability");
        text = report::render(rows, info, format);
        files.emplace_back("report." + std::string(report::extension(format)), text);
        for (const LyapunovBounds& r : rows) {
            if (!r.polytope) continue;
            const std::string tag = "tau_" + report::format_number(r.tau);
            if (a.emit_polytope) files.emplace_back("polytope_" + tag + ".json", io::polytope_to_json(*r.polytope));
            if (a.emit_boundary2d) {
                if (family.dim() == 2) {
                    files.emplace_back("boundary2d_" + tag + ".csv", io::boundary2d_csv(*r.polytope));
                } else {
                    std::cerr << "warning: --emit-boundary2d ignored for d = " << family.dim() << "\n";
                }
            }
        }
        code = report::exit_code(rows);
    }

    if (a.out.empty()) {
        std::cout << text;
    } else {
        fs::create_directories(a.out);
        for (const auto& [name, body] : files) io::write_text(fs::path(a.out) / name, body);
    }
    return code;
}

struct GenArgs {
    std::size_t dim = 5;
    std::size_t count = 2;
    std::uint64_t seed = 1;
    std::string entries = "sign";
    std::string out;
};

int run_generate(const GenArgs& a) {
    const MatrixFamily fam = random_metzler_family(a.dim, a.count, a.seed, *parse_random_entries(a.entries));
    const std::string text = io::family_to_json(fam);
    if (a.out.empty()) {
        std::cout << text;
    } else {
        io::write_text(a.out, text);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounds on Lyapunov exponents of linear switching systems"};
    app.require_subcommand(1);

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand("analyze", "Bound the (lower) Lyapunov exponent of a matrix family");
    analyze->add_option("--family", an.family, "Family JSON file")->required()->check(CLI::ExistingFile);
    analyze->add_option("--mode", an.mode, "stability | stabilizability | fibrillation")
        ->check(CLI::IsMember({"stability", "stabilizability", "fibrillation"}));
    analyze->add_option("--tau", an.taus, "Dwell times, comma separated (fractions like 1/16 allowed)")
        ->delimiter(',');
    analyze->add_option("--max-word-len", an.max_length, "Longest product searched")->check(CLI::PositiveNumber);
    analyze->add_option("--nu", an.nu, "Relaxation added to the product bound")->check(CLI::NonNegativeNumber);
    analyze->add_option("--delta", an.delta, "Step of the alpha LPs")->check(CLI::PositiveNumber);
    analyze->add_option("--search", an.search, "exhaustive | branch-bound | two-block-template")
        ->check(CLI::IsMember({"exhaustive", "branch-bound", "two-block-template", "two-block"}));
    analyze->add_option("--out", an.out, "Output directory (default: print the report)");
    analyze->add_option("--format", an.format, "json | csv | markdown")
        ->check(CLI::IsMember({"json", "csv", "markdown", "md"}));
    analyze->add_flag("--emit-polytope", an.emit_polytope, "Write the polytope of every dwell time");
    analyze->add_flag("--emit-boundary2d", an.emit_boundary2d, "Write planar hull boundaries as CSV");
    analyze->add_flag("--force-symmetric", an.force_symmetric, "Use symmetric hulls for Metzler families too");
    analyze->add_flag("--no-admissible-check", an.no_admissible_check, "Skip the dwell-time resonance check");
    analyze->add_option("--max-sweeps", an.max_sweeps, "Builder sweep cap");
    analyze->add_option("--max-vertices", an.max_vertices, "Builder vertex cap");
    analyze->add_option("--max-seconds", an.max_seconds, "Builder time budget per dwell time (0 = none)");
    analyze->add_option("--tol-add", an.tol_add, "Membership slack before a vertex is added");
    analyze->add_option("--max-products", an.max_products, "Cap on products evaluated by the search");

    GenArgs gen;
    auto* generate = app.add_subcommand("gen-random-metzler", "Write a random Metzler family as JSON");
    generate->add_option("--dim", gen.dim, "Dimension")->check(CLI::PositiveNumber);
    generate->add_option("--count", gen.count, "Number of matrices")->check(CLI::PositiveNumber);
    generate->add_option("--seed", gen.seed, "Random seed");
    generate->add_option("--entries", gen.entries, "sign | real")->check(CLI::IsMember({"sign", "real"}));
    generate->add_option("--out", gen.out, "Output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitError;
    }

    try {
        if (*analyze) return run_analyze(an);
        return run_generate(gen);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kExitError;
}
