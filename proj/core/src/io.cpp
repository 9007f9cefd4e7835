#include "svfa/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace svfa {

using nlohmann::json;

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* norm_name(NormChoice norm) {
    switch (norm) {
        case NormChoice::euclidean: return "euclidean";
        case NormChoice::max: return "max";
        case NormChoice::sum: return "sum";
    }
    return "euclidean";
}

NormChoice norm_from_name(const std::string& name) {
    if (name == "euclidean") return NormChoice::euclidean;
    if (name == "max") return NormChoice::max;
    if (name == "sum") return NormChoice::sum;
    throw std::invalid_argument("unknown norm: " + name);
}

namespace {

json set_to_json_value(const CompactSet& A) {
    json arr = json::array();
    for (const Point& p : A.points()) arr.push_back(p.coords());
    return arr;
}

CompactSet set_from_json_value(const json& arr) {
    if (!arr.is_array() || arr.empty())
        throw std::invalid_argument("CompactSet JSON: expected a nonempty array of arrays");
    std::vector<Point> pts;
    for (const auto& item : arr) {
        if (!item.is_array() || item.empty())
            throw std::invalid_argument("CompactSet JSON: each point must be a nonempty array");
        pts.emplace_back(item.get<std::vector<double>>());
    }
    return CompactSet(std::move(pts));
}

}  // namespace

std::string compact_set_to_json(const CompactSet& A) { return set_to_json_value(A).dump(); }

CompactSet compact_set_from_json(const std::string& text) {
    return set_from_json_value(json::parse(text));
}

std::string svf_to_json(const SetValuedFunction& F) {
    if (!F.is_grid()) throw std::invalid_argument("svf_to_json: only grid-backed SVFs serialize");
    json j;
    j["a"] = F.a();
    j["b"] = F.b();
    j["grid"] = F.grid_nodes().nodes();
    json sets = json::array();
    for (const CompactSet& fiber : F.grid_fibers()) sets.push_back(set_to_json_value(fiber));
    j["sets"] = std::move(sets);
    return j.dump();
}

SetValuedFunction svf_from_json(const std::string& text, const std::string& name) {
    json j = json::parse(text);
    if (!j.contains("grid") || !j.contains("sets"))
        throw std::invalid_argument("SVF JSON: missing grid or sets");
    std::vector<double> grid = j["grid"].get<std::vector<double>>();
    std::vector<CompactSet> fibers;
    for (const auto& s : j["sets"]) fibers.push_back(set_from_json_value(s));
    Partition chi(std::move(grid));
    if (j.contains("a") && std::fabs(j["a"].get<double>() - chi.a()) > 1e-12)
        throw std::invalid_argument("SVF JSON: a does not match grid front");
    if (j.contains("b") && std::fabs(j["b"].get<double>() - chi.b()) > 1e-12)
        throw std::invalid_argument("SVF JSON: b does not match grid back");
    return SetValuedFunction::grid(std::move(chi), std::move(fibers), name);
}

SetValuedFunction load_svf(const std::string& path) { return svf_from_json(read_file(path), path); }

SetValuedFunction catalog_svf(const std::string& name, int fiber_points) {
    if (fiber_points < 1) throw std::invalid_argument("catalog_svf: fiber_points must be positive");
    if (name == "const-c") {
        return SetValuedFunction::closed_form(
            0, 1, 1, [](double) { return CompactSet::singleton(Point{1.0}); }, name);
    }
    if (name == "jump-pair") {
        return SetValuedFunction::closed_form(
            0, 1, 1,
            [](double x) {
                if (x < 0.5) return CompactSet::singleton(Point{0.0});
                return CompactSet({Point{-1.0}, Point{1.0}});
            },
            name);
    }
    if (name == "lipschitz-tube") {
        int m = std::max(2, fiber_points);
        return SetValuedFunction::closed_form(
            0, 1, 1,
            [m](double x) {
                double r = 1 + x * x;
                std::vector<Point> pts;
                pts.reserve(static_cast<std::size_t>(m));
                for (int j = 0; j < m; ++j)
                    pts.push_back(Point{r * (2.0 * j / (m - 1) - 1.0)});
                return CompactSet(std::move(pts));
            },
            name);
    }
    if (name == "annulus-slice") {
        int m = std::max(3, fiber_points);
        return SetValuedFunction::closed_form(
            0, 1, 2,
            [m](double x) {
                double r = 1 + 0.5 * x;
                std::vector<Point> pts;
                pts.reserve(static_cast<std::size_t>(m));
                for (int j = 0; j < m; ++j) {
                    double theta = 1.5 * std::numbers::pi * j / (m - 1);
                    pts.push_back(Point{r * std::cos(theta), r * std::sin(theta)});
                }
                return CompactSet(std::move(pts));
            },
            name);
    }
    throw std::invalid_argument("unknown catalog SVF: " + name);
}

std::vector<std::string> catalog_names() {
    return {"const-c", "jump-pair", "lipschitz-tube", "annulus-slice"};
}

std::string table_to_csv(const ConvergenceTable& table) {
    std::ostringstream out;
    out << "n,x,observed,bound,delta_star,slope\n";
    for (const ExperimentRow& r : table.rows) {
        out << r.n << ',' << format_float(r.x) << ',' << format_float(r.observed) << ','
            << format_float(r.bound) << ',' << format_float(r.delta_star) << ','
            << format_float(r.slope) << '\n';
    }
    return out.str();
}

std::string table_to_json(const ConvergenceTable& table) {
    json j;
    j["metadata"] = {{"kernel", table.kernel_name},
                     {"svf", table.svf_name},
                     {"chi_size", table.chi_size},
                     {"seeds", table.seeds},
                     {"norm", norm_name(table.norm)}};
    json slopes = json::object();
    for (const auto& [x, s] : table.slope_per_x) slopes[format_float(x)] = s;
    j["slopes"] = std::move(slopes);
    json rows = json::array();
    for (const ExperimentRow& r : table.rows)
        rows.push_back({{"n", r.n},
                        {"x", r.x},
                        {"observed", r.observed},
                        {"bound", r.bound},
                        {"delta_star", r.delta_star},
                        {"slope", r.slope}});
    j["rows"] = std::move(rows);
    return j.dump(2);
}

std::vector<std::string> export_selections(const std::vector<Selection>& family,
                                           const std::string& out_dir, const std::string& stem) {
    std::vector<std::string> files;
    json manifest;
    manifest["count"] = family.size();
    json seeds = json::array();
    for (std::size_t i = 0; i < family.size(); ++i) {
        const Selection& s = family[i];
        std::ostringstream name;
        name << stem << '_' << i << ".csv";
        std::ostringstream csv;
        csv << "x";
        for (int c = 1; c <= s.dim(); ++c) csv << ",y_" << c;
        csv << '\n';
        const Partition& chi = s.partition();
        for (std::size_t k = 0; k < chi.size(); ++k) {
            csv << format_float(chi[k]);
            for (int c = 0; c < s.dim(); ++c)
                csv << ',' << format_float(s.values()[k][static_cast<std::size_t>(c)]);
            csv << '\n';
        }
        std::string path = out_dir + "/" + name.str();
        write_file(path, csv.str());
        files.push_back(path);
        seeds.push_back({{"x", s.seed_x()}, {"y", s.seed_y().coords()}, {"file", name.str()}});
    }
    manifest["seeds"] = std::move(seeds);
    std::string manifest_path = out_dir + "/" + stem + "_manifest.json";
    write_file(manifest_path, manifest.dump(2));
    files.push_back(manifest_path);
    return files;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace svfa
