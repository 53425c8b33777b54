#include "lyapoly/report.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace lyapoly::report {

namespace {

using ordered = nlohmann::ordered_json;

ordered number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return std::stod(format_number(x));
}

bool stabilizability(const std::vector<LyapunovBounds>& rows) {
    return !rows.empty() && rows.front().mode == AnalysisMode::Stabilizability;
}

std::size_t extreme_points(const LyapunovBounds& r) {
    return r.hull == HullKind::Symmetric ? 2 * r.vertex_count : r.vertex_count;
}

// alpha for stability rows, alpha-check for stabilizability rows.
double alpha_side(const LyapunovBounds& r) { return r.mode == AnalysisMode::Stabilizability ? r.lower : r.upper; }

ordered info_json(const RunInfo& info) {
    ordered j;
    j["family"] = info.family_source;
    j["dim"] = info.dim;
    j["matrices"] = info.count;
    j["metzler"] = info.metzler;
    j["search"] = info.search;
    j["max_word_length"] = info.max_length;
    j["delta"] = number(info.delta);
    return j;
}

std::string info_markdown(const RunInfo& info, std::string_view title) {
    std::string out = "# " + std::string(title) + "\n\n";
    out += "family: " + info.family_source + " (d = " + std::to_string(info.dim) + ", " + std::to_string(info.count) +
           " matrices" + (info.metzler ? ", Metzler" : "") + ")  \n";
    out += "search: " + info.search + ", l = " + std::to_string(info.max_length) + ", delta = " +
           format_number(info.delta) + "\n\n";
    return out;
}

std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::optional<Format> parse_format(std::string_view text) noexcept {
    if (text == "json") return Format::Json;
    if (text == "csv") return Format::Csv;
    if (text == "markdown" || text == "md") return Format::Markdown;
    return std::nullopt;
}

std::string_view extension(Format format) noexcept {
    switch (format) {
    case Format::Json: return "json";
    case Format::Csv: return "csv";
    case Format::Markdown: return "md";
    }
    return "txt";
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", x == 0.0 ? 0.0 : x);
    return buf;
}

int exit_code(const std::vector<LyapunovBounds>& rows) {
    for (const LyapunovBounds& r : rows)
        if (!r.terminated || r.verdict == Verdict::Inconclusive) return 2;
    return 0;
}

std::string render(const std::vector<LyapunovBounds>& rows, const RunInfo& info, Format format) {
    const bool lower = stabilizability(rows);
    switch (format) {
    case Format::Json: {
        ordered root;
        root["mode"] = rows.empty() ? "stability" : std::string(to_string(rows.front().mode));
        root["run"] = info_json(info);
        ordered list = ordered::array();
        for (const LyapunovBounds& r : rows) {
            ordered j;
            j["tau"] = number(r.tau);
            j["lower"] = number(r.lower);
            j["upper"] = number(r.upper);
            j["gamma"] = number(r.gamma);
            j["beta"] = number(r.beta);
            j["alpha"] = number(alpha_side(r));
            j["product"] = render_word(r.candidate.word);
            j["word"] = r.candidate.word;
            j["word_length"] = r.candidate.length();
            j["averaged_rho"] = number(r.candidate.averaged_rho);
            j["nu"] = number(r.nu);
            j["eps_reported"] = number(r.eps_reported);
            j["hull"] = std::string(to_string(r.hull));
            j["vertices"] = extreme_points(r);
            j["stored_vertices"] = r.vertex_count;
            j["terminated"] = r.terminated;
            j["stop"] = std::string(to_string(r.build.stop));
            j["sweeps"] = r.build.sweeps;
            j["pruned"] = r.build.pruned;
            j["invariance_excess"] = number(r.invariance_excess);
            if (r.alpha) {
                j["alpha_at_delta"] = number(r.alpha->at_delta);
                j["alpha_at_half_delta"] = number(r.alpha->at_half_delta);
                j["delta_warning"] = r.alpha->delta_warning;
            }
            j["verdict"] = std::string(to_string(r.verdict));
            j["warnings"] = r.warnings;
            list.push_back(std::move(j));
        }
        root["rows"] = std::move(list);
        return root.dump(2) + "\n";
    }
    case Format::Csv: {
        std::string out = lower ? "tau,beta_check,alpha_check,gamma,product,eps,vertices,terminated,verdict\n"
                                : "tau,beta,alpha,gamma,product,eps,vertices,terminated,verdict\n";
        for (const LyapunovBounds& r : rows) {
            out += format_number(r.tau) + "," + format_number(r.beta) + "," + format_number(alpha_side(r)) + "," +
                   format_number(r.gamma) + "," + csv_field(render_word(r.candidate.word)) + "," +
                   format_number(r.eps_reported) + "," + std::to_string(extreme_points(r)) + "," +
                   (r.terminated ? "true" : "false") + "," + std::string(to_string(r.verdict)) + "\n";
        }
        return out;
    }
    case Format::Markdown: {
        std::string out = info_markdown(info, lower ? "Lower Lyapunov exponent" : "Lyapunov exponent");
        out += lower ? "| tau | beta_check | alpha_check | gamma | product | eps | #V | terminated | verdict |\n"
                     : "| tau | beta | alpha | gamma | product | eps | #V | terminated | verdict |\n";
        out += "|---|---|---|---|---|---|---|---|---|\n";
        for (const LyapunovBounds& r : rows) {
            out += "| " + format_number(r.tau) + " | " + format_number(r.beta) + " | " + format_number(alpha_side(r)) +
                   " | " + format_number(r.gamma) + " | " + render_word(r.candidate.word) + " | " +
                   format_number(r.eps_reported) + " | " + std::to_string(extreme_points(r)) + " | " +
                   (r.terminated ? "yes" : "no") + " | " + std::string(to_string(r.verdict)) + " |\n";
        }
        bool header = false;
        for (const LyapunovBounds& r : rows)
            for (const std::string& w : r.warnings) {
                if (!header) out += "\nWarnings:\n\n";
                header = true;
                out += "- tau = " + format_number(r.tau) + ": " + w + "\n";
            }
        return out;
    }
    }
    return {};
}

std::string render(const FibrillationReport& rep, const RunInfo& info, Format format) {
    switch (format) {
    case Format::Json: {
        ordered root;
        root["mode"] = "fibrillation";
        root["run"] = info_json(info);
        ordered list = ordered::array();
        for (const FibrillationRow& r : rep.rows) {
            ordered j;
            j["tau"] = number(r.tau);
            j["smp_length"] = r.smp_length;
            j["beta"] = number(r.beta);
            j["product"] = r.word;
            j["transpose_pair_rho"] = r.transpose_pair_rho ? number(*r.transpose_pair_rho) : ordered(nullptr);
            list.push_back(std::move(j));
        }
        root["rows"] = std::move(list);
        root["bounded_length"] = rep.bounded_length;
        root["beta_increasing"] = rep.beta_increasing;
        root["fibrillation"] = rep.fibrillation;
        return root.dump(2) + "\n";
    }
    case Format::Csv: {
        std::string out = "tau,smp_length,beta\n";
        for (const FibrillationRow& r : rep.rows)
            out += format_number(r.tau) + "," + std::to_string(r.smp_length) + "," + format_number(r.beta) + "\n";
        return out;
    }
    case Format::Markdown: {
        std::string out = info_markdown(info, "Fibrillation scan");
        out += "| tau | s.m.p. length | beta | product |\n|---|---|---|---|\n";
        for (const FibrillationRow& r : rep.rows) {
            out += "| " + format_number(r.tau) + " | " + std::to_string(r.smp_length) + " | " + format_number(r.beta) +
                   " | " + r.word + " |\n";
        }
        out += std::string("\nfibrillation: ") + (rep.fibrillation ? "yes" : "no") +
               " (bounded length: " + (rep.bounded_length ? "yes" : "no") +
               ", beta increasing: " + (rep.beta_increasing ? "yes" : "no") + ")\n";
        return out;
    }
    }
    return {};
}

}  // namespace lyapoly::report
