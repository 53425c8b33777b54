#include "lyapoly/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lyapoly/error.hpp"
#include "lyapoly/report.hpp"

namespace lyapoly::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(ErrorCode code, std::string_view source, const std::string& where, const std::string& what) {
    std::string msg(source);
    if (!where.empty()) msg += ": " + where;
    msg += ": " + what;
    throw Error(code, "load", msg);
}

json parse_json(std::string_view text, std::string_view source) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        fail(ErrorCode::Parse, source, "", e.what());
    } catch (const json::out_of_range& e) {
        // number literals beyond double range
        fail(ErrorCode::NonFinite, source, "", e.what());
    }
}

double number_at(const json& j, std::string_view source, const std::string& where) {
    if (!j.is_number()) fail(ErrorCode::Parse, source, where, "expected a number");
    const double x = j.get<double>();
    if (!std::isfinite(x)) fail(ErrorCode::NonFinite, source, where, "non-finite entry");
    return x;
}

std::size_t dim_at(const json& root, std::string_view source) {
    if (!root.is_object()) fail(ErrorCode::Parse, source, "", "expected a JSON object");
    if (!root.contains("dim")) fail(ErrorCode::Parse, source, "dim", "missing");
    const json& d = root["dim"];
    if (!d.is_number_integer() || d.get<long long>() <= 0) {
        fail(ErrorCode::Parse, source, "dim", "expected a positive integer");
    }
    return static_cast<std::size_t>(d.get<long long>());
}

Matrix matrix_at(const json& m, std::size_t dim, std::string_view source, const std::string& where) {
    if (!m.is_array()) fail(ErrorCode::Parse, source, where, "expected an array of rows");
    if (m.size() != dim) {
        fail(ErrorCode::DimensionMismatch, source, where,
             "has " + std::to_string(m.size()) + " rows, expected " + std::to_string(dim));
    }
    Matrix out(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const std::string row_where = where + "[" + std::to_string(i) + "]";
        const json& row = m[i];
        if (!row.is_array()) fail(ErrorCode::Parse, source, row_where, "expected an array of numbers");
        if (row.size() != dim) {
            fail(ErrorCode::DimensionMismatch, source, row_where,
                 "has " + std::to_string(row.size()) + " entries, expected " + std::to_string(dim));
        }
        for (std::size_t k = 0; k < dim; ++k)
            out(i, k) = number_at(row[k], source, row_where + "[" + std::to_string(k) + "]");
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "load", "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double cross(const std::array<double, 2>& o, const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; counterclockwise, collinear points dropped.
std::vector<std::array<double, 2>> convex_hull(std::vector<std::array<double, 2>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<std::array<double, 2>> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0.0) --k;
        h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

double polar_angle(const std::array<double, 2>& p) {
    const double a = std::atan2(p[1], p[0]);
    return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
}

}  // namespace

MatrixFamily parse_family(std::string_view text, std::string_view source) {
    const json root = parse_json(text, source);
    const std::size_t dim = dim_at(root, source);
    if (!root.contains("matrices") || !root["matrices"].is_array()) {
        fail(ErrorCode::Parse, source, "matrices", "expected an array of matrices");
    }
    const json& ms = root["matrices"];
    if (ms.empty()) fail(ErrorCode::InvalidArgument, source, "matrices", "family must be nonempty");
    std::vector<Matrix> mats;
    for (std::size_t i = 0; i < ms.size(); ++i) mats.push_back(matrix_at(ms[i], dim, source, "matrices[" + std::to_string(i) + "]"));

    std::vector<std::string> labels;
    if (root.contains("labels")) {
        const json& ls = root["labels"];
        if (!ls.is_array() || ls.size() != mats.size()) {
            fail(ErrorCode::Parse, source, "labels", "expected one string per matrix");
        }
        for (std::size_t i = 0; i < ls.size(); ++i) {
            if (!ls[i].is_string()) fail(ErrorCode::Parse, source, "labels[" + std::to_string(i) + "]", "expected a string");
            labels.push_back(ls[i].get<std::string>());
        }
    }
    return MatrixFamily(std::move(mats), std::move(labels));
}

MatrixFamily load_family(const std::filesystem::path& path) { return parse_family(read_file(path), path.string()); }

std::string family_to_json(const MatrixFamily& family) {
    json ms = json::array();
    for (const Matrix& m : family) {
        json rows = json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) {
            json row = json::array();
            for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
            rows.push_back(std::move(row));
        }
        ms.push_back(std::move(rows));
    }
    json root;
    root["dim"] = family.dim();
    root["matrices"] = std::move(ms);
    root["labels"] = family.labels();
    return root.dump(2) + "\n";
}

std::string polytope_to_json(const Polytope& polytope) {
    json root;
    root["hull"] = std::string(to_string(polytope.kind));
    root["dim"] = polytope.dim;
    json vs = json::array();
    for (const Vector& v : polytope.vertices) vs.push_back(v);
    root["vertices"] = std::move(vs);
    return root.dump(2) + "\n";
}

Polytope parse_polytope(std::string_view text, std::string_view source) {
    const json root = parse_json(text, source);
    Polytope p;
    p.dim = dim_at(root, source);
    if (!root.contains("hull") || !root["hull"].is_string()) fail(ErrorCode::Parse, source, "hull", "expected a string");
    const auto kind = parse_hull_kind(root["hull"].get<std::string>());
    if (!kind) fail(ErrorCode::Parse, source, "hull", "unknown hull kind");
    p.kind = *kind;
    if (!root.contains("vertices") || !root["vertices"].is_array()) {
        fail(ErrorCode::Parse, source, "vertices", "expected an array of vectors");
    }
    const json& vs = root["vertices"];
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string where = "vertices[" + std::to_string(i) + "]";
        if (!vs[i].is_array() || vs[i].size() != p.dim) {
            fail(ErrorCode::DimensionMismatch, source, where, "expected " + std::to_string(p.dim) + " numbers");
        }
        Vector v(p.dim);
        for (std::size_t k = 0; k < p.dim; ++k) v[k] = number_at(vs[i][k], source, where + "[" + std::to_string(k) + "]");
        p.vertices.push_back(std::move(v));
    }
    p.generation.assign(p.vertices.size(), 0);
    p.origins.assign(p.vertices.size(), VertexOrigin{});
    return p;
}

std::vector<std::array<double, 2>> boundary2d(const Polytope& polytope) {
    if (polytope.dim != 2) throw Error(ErrorCode::DimensionMismatch, "boundary2d", "polytope is not planar");
    std::vector<std::array<double, 2>> pts;
    double far = 0.0;
    for (const Vector& v : polytope.vertices) far = std::max({far, std::abs(v[0]), std::abs(v[1])});
    far = 2.0 * std::max(far, 1e-300);
    for (const Vector& v : polytope.vertices) {
        const std::array<double, 2> p{v[0], v[1]};
        pts.push_back(p);
        switch (polytope.kind) {
        case HullKind::Symmetric: pts.push_back({-v[0], -v[1]}); break;
        case HullKind::Monotone:
            pts.push_back({v[0], 0.0});
            pts.push_back({0.0, v[1]});
            pts.push_back({0.0, 0.0});
            break;
        case HullKind::Infinite:
            pts.push_back({v[0] + far, v[1]});
            pts.push_back({v[0], v[1] + far});
            break;
        }
    }
    auto hull = convex_hull(std::move(pts));
    if (hull.size() > 1) {
        const auto first = std::min_element(hull.begin(), hull.end(), [](const auto& a, const auto& b) {
            return polar_angle(a) < polar_angle(b);
        });
        std::rotate(hull.begin(), first, hull.end());
    }
    return hull;
}

std::string boundary2d_csv(const Polytope& polytope) {
    std::string out = "x,y\n";
    for (const auto& p : boundary2d(polytope)) out += report::format_number(p[0]) + "," + report::format_number(p[1]) + "\n";
    return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "write", "cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::Io, "write", "failed writing " + path.string());
}

}  // namespace lyapoly::io
