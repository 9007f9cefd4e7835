// svfapprox command-line harness: catalog SVFs, convergence experiments,
// selection export, kernel diagnostics, and the acceptance suite.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "svfa/acceptance.hpp"
#include "svfa/analysis.hpp"
#include "svfa/io.hpp"
#include "svfa/kernels.hpp"

using namespace svfa;

namespace {

struct RunConfig {
    std::string op = "kantorovich";
    std::string svf = "jump-pair";
    std::vector<int> n_list{16, 64, 256, 1024};
    std::vector<double> x_list{0.5};
    int grid = 256;
    int seeds = 4;
    int fiber_points = 5;
    std::string norm = "euclidean";
    std::string delta_rule = "optimize";
    std::string mode = "auto";
    std::string out = "svfa_run";
    int jobs = 1;
    bool strict = false;
};

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

KernelFamily family_by_name(const std::string& name) {
    if (name == "bd") return bernstein_durrmeyer_family();
    if (name == "kantorovich") return kantorovich_family();
    throw std::invalid_argument("unknown operator: " + name + " (expected bd or kantorovich)");
}

SetValuedFunction resolve_svf(const std::string& name_or_path, int fiber_points) {
    for (const std::string& name : catalog_names())
        if (name_or_path == name) return catalog_svf(name_or_path, fiber_points);
    if (!std::filesystem::exists(name_or_path))
        throw std::invalid_argument("unknown SVF: " + name_or_path +
                                    " (not a catalog name and not a readable file)");
    return load_svf(name_or_path);
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(read_file(path));
    if (j.contains("operator")) cfg.op = j["operator"].get<std::string>();
    if (j.contains("svf")) cfg.svf = j["svf"].get<std::string>();
    if (j.contains("n")) cfg.n_list = j["n"].get<std::vector<int>>();
    if (j.contains("x")) cfg.x_list = j["x"].get<std::vector<double>>();
    if (j.contains("grid")) cfg.grid = j["grid"].get<int>();
    if (j.contains("seeds")) cfg.seeds = j["seeds"].get<int>();
    if (j.contains("fiber_points")) cfg.fiber_points = j["fiber_points"].get<int>();
    if (j.contains("norm")) cfg.norm = j["norm"].get<std::string>();
    if (j.contains("delta_rule")) cfg.delta_rule = j["delta_rule"].get<std::string>();
    if (j.contains("mode")) cfg.mode = j["mode"].get<std::string>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
    if (j.contains("strict")) cfg.strict = j["strict"].get<bool>();
}

ExperimentConfig experiment_config(const RunConfig& cfg) {
    ExperimentConfig ec;
    ec.jobs = cfg.jobs;
    if (cfg.mode == "continuity")
        ec.mode = ExperimentMode::continuity;
    else if (cfg.mode == "jump")
        ec.mode = ExperimentMode::jump;
    else if (cfg.mode == "auto")
        ec.mode = ExperimentMode::automatic;
    else
        throw std::invalid_argument("unknown mode: " + cfg.mode);

    if (cfg.delta_rule == "optimize") {
        ec.delta_rule = DeltaRule::optimize;
    } else if (cfg.delta_rule == "ncuberoot") {
        ec.delta_rule = DeltaRule::inv_cuberoot;
    } else if (cfg.delta_rule.rfind("fixed:", 0) == 0) {
        ec.delta_rule = DeltaRule::fixed;
        ec.fixed_delta = std::stod(cfg.delta_rule.substr(6));
    } else {
        throw std::invalid_argument("unknown delta rule: " + cfg.delta_rule +
                                    " (expected optimize, ncuberoot, or fixed:VALUE)");
    }
    return ec;
}

int cmd_run(const RunConfig& cfg) {
    KernelFamily kernels = family_by_name(cfg.op);
    SetValuedFunction F = resolve_svf(cfg.svf, cfg.fiber_points);
    NormChoice norm = norm_from_name(cfg.norm);
    Partition chi = Partition::uniform(F.a(), F.b(), cfg.grid);
    QuadratureRule rule;

    ConvergenceTable table = convergence_experiment(kernels, F, cfg.x_list, cfg.n_list, chi,
                                                    cfg.seeds, norm, rule,
                                                    experiment_config(cfg));
    table.kernel_name = cfg.op;

    write_file(cfg.out + ".csv", table_to_csv(table));
    write_file(cfg.out + ".json", table_to_json(table));
    std::cout << "wrote " << cfg.out << ".csv and " << cfg.out << ".json (" << table.rows.size()
              << " rows)\n";

    if (cfg.strict) {
        for (const ExperimentRow& r : table.rows) {
            if (r.observed > r.bound + 1e-8) {
                std::cerr << "bound violation at n=" << r.n << " x=" << r.x << ": observed "
                          << format_float(r.observed) << " > bound " << format_float(r.bound)
                          << "\n";
                return 3;
            }
        }
    }
    return 0;
}

int cmd_check(const std::string& suite, int jobs) {
    acceptance::Options opts;
    if (suite == "fast")
        opts.fast = true;
    else if (suite == "full")
        opts.fast = false;
    else
        throw std::invalid_argument("unknown suite: " + suite + " (expected fast or full)");
    opts.jobs = jobs;
    if (const char* env = std::getenv("SVFAPPROX_SEED"))
        opts.seed = static_cast<unsigned>(std::atoi(env));
    auto results = acceptance::run(opts);
    std::cout << acceptance::format_report(results);
    bool ok = acceptance::all_passed(results);
    std::cout << (ok ? "ALL PASS" : "FAILURES PRESENT") << "\n";
    return ok ? 0 : 1;
}

int cmd_selections(const RunConfig& cfg) {
    SetValuedFunction F = resolve_svf(cfg.svf, cfg.fiber_points);
    NormChoice norm = norm_from_name(cfg.norm);
    Partition chi = Partition::uniform(F.a(), F.b(), cfg.grid);
    std::vector<Selection> family = selection_family(F, chi, cfg.seeds, norm);

    std::filesystem::create_directories(cfg.out);
    std::vector<std::string> files = export_selections(family, cfg.out);

    double VF = variation(F, chi, norm);
    double NF = sup_norm(F, chi, norm);
    int violations = 0;
    for (const Selection& s : family) {
        MetricFunction sm = as_metric(s, norm);
        if (variation(sm, chi) > VF + 1e-9) ++violations;
        if (sup_norm(sm, chi) > NF + 1e-9) ++violations;
    }
    std::cout << "family size: " << family.size() << "\n"
              << "files: " << files.size() << " under " << cfg.out << "\n"
              << "variation/sup-norm inheritance: "
              << (violations == 0 ? "all members pass" : std::to_string(violations) + " violations")
              << "\n";
    return violations == 0 ? 0 : 3;
}

int cmd_diag(const std::string& op, const std::vector<int>& ns, const std::vector<double>& xs,
             double delta) {
    KernelFamily kernels = family_by_name(op);
    QuadratureRule rule;
    std::cout << "operator,n,x,delta,mass,alpha,beta,beta_bound,sign,sign_bound\n";
    for (int n : ns) {
        Kernel K = kernels(n);
        for (double x : xs) {
            KernelDiagnostics d = diagnostics(K, x, delta, rule);
            std::cout << op << ',' << n << ',' << format_float(x) << ',' << format_float(delta)
                      << ',' << format_float(d.mass_num) << ',' << format_float(d.alpha_num)
                      << ',' << format_float(d.beta_num) << ','
                      << (d.beta_bound_meta ? format_float(*d.beta_bound_meta) : "-") << ','
                      << format_float(d.sign_num) << ','
                      << (d.sign_bound_meta ? format_float(*d.sign_bound_meta) : "-") << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metric approximation of set-valued functions by integral operators"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string n_text, x_text, config_path;

    CLI::App* run = app.add_subcommand("run", "run a convergence experiment, write CSV + JSON");
    run->add_option("--config", config_path, "JSON config file (explicit flags win)");
    run->add_option("--operator", cfg.op, "operator: bd or kantorovich");
    run->add_option("--svf", cfg.svf, "catalog name or grid-SVF JSON file");
    run->add_option("--n", n_text, "comma-separated increasing n list");
    run->add_option("--x", x_text, "comma-separated evaluation points");
    run->add_option("--grid", cfg.grid, "uniform partition segments (default 256)");
    run->add_option("--seeds", cfg.seeds, "selection seeds per fiber (default 4)");
    run->add_option("--fiber-points", cfg.fiber_points, "points per fiber for catalog SVFs");
    run->add_option("--norm", cfg.norm, "euclidean, max, or sum");
    run->add_option("--delta-rule", cfg.delta_rule, "optimize, ncuberoot, or fixed:VALUE");
    run->add_option("--mode", cfg.mode, "auto, continuity, or jump");
    run->add_option("--out", cfg.out, "output prefix (default svfa_run)");
    run->add_option("--jobs", cfg.jobs, "parallel row evaluation");
    run->add_flag("--strict", cfg.strict, "exit 3 on any bound violation");

    std::string suite = "fast";
    int check_jobs = 0;
    CLI::App* check = app.add_subcommand("check", "run the acceptance suite");
    check->add_option("suite", suite, "fast or full (default fast)");
    check->add_option("--jobs", check_jobs, "parallel evaluation");

    CLI::App* selections = app.add_subcommand("selections", "export the selection family as CSV");
    selections->add_option("--svf", cfg.svf, "catalog name or grid-SVF JSON file");
    selections->add_option("--grid", cfg.grid, "uniform partition segments");
    selections->add_option("--seeds", cfg.seeds, "selection seeds per fiber");
    selections->add_option("--fiber-points", cfg.fiber_points, "points per fiber for catalog SVFs");
    selections->add_option("--norm", cfg.norm, "euclidean, max, or sum");
    selections->add_option("--out", cfg.out, "output directory");

    std::string diag_op = "bd";
    std::string diag_n_text = "10,100";
    std::string diag_x_text = "0.25,0.5";
    double diag_delta = 0.1;
    CLI::App* diag = app.add_subcommand("diag", "dump kernel diagnostics");
    diag->add_option("--operator", diag_op, "operator: bd or kantorovich");
    diag->add_option("--n", diag_n_text, "comma-separated n list");
    diag->add_option("--x", diag_x_text, "comma-separated x list");
    diag->add_option("--delta", diag_delta, "window half-width");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (!config_path.empty()) {
                RunConfig from_file = cfg;
                apply_config_file(from_file, config_path);
                // explicit flags win over the config file
                if (run->count("--operator") == 0) cfg.op = from_file.op;
                if (run->count("--svf") == 0) cfg.svf = from_file.svf;
                if (run->count("--n") == 0) cfg.n_list = from_file.n_list;
                if (run->count("--x") == 0) cfg.x_list = from_file.x_list;
                if (run->count("--grid") == 0) cfg.grid = from_file.grid;
                if (run->count("--seeds") == 0) cfg.seeds = from_file.seeds;
                if (run->count("--fiber-points") == 0) cfg.fiber_points = from_file.fiber_points;
                if (run->count("--norm") == 0) cfg.norm = from_file.norm;
                if (run->count("--delta-rule") == 0) cfg.delta_rule = from_file.delta_rule;
                if (run->count("--mode") == 0) cfg.mode = from_file.mode;
                if (run->count("--out") == 0) cfg.out = from_file.out;
                if (run->count("--jobs") == 0) cfg.jobs = from_file.jobs;
                if (run->count("--strict") == 0) cfg.strict = from_file.strict;
            }
            if (!n_text.empty()) cfg.n_list = parse_int_list(n_text);
            if (!x_text.empty()) cfg.x_list = parse_double_list(x_text);
            return cmd_run(cfg);
        }
        if (check->parsed()) return cmd_check(suite, check_jobs);
        if (selections->parsed()) {
            if (cfg.out == "svfa_run") cfg.out = "selections_out";
            return cmd_selections(cfg);
        }
        if (diag->parsed())
            return cmd_diag(diag_op, parse_int_list(diag_n_text), parse_double_list(diag_x_text),
                            diag_delta);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
