// Command-line front end: benchmark harness, single-network solver, JSON
// lint, and the morphism naturality suite.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "compopt/bench.hpp"
#include "compopt/naturality.hpp"
#include "json.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    return file;
}

int run_bench(const compopt::BenchConfig& cfg) {
    std::ofstream file;
    std::ostream& os = open_output(cfg.output_path, file);
    os << compopt::bench_csv_header() << "\n";
    for (const auto& row : compopt::run_benchmark(cfg)) os << compopt::to_csv(row) << "\n";
    return 0;
}

int run_solve(const std::string& path, double gamma, int iters, std::optional<double> tol,
              const std::string& out_path) {
    const auto open_net = compopt::open_network_from_json(slurp(path));
    const auto diagram = [&] {
        compopt::Uwd d = compopt::Uwd::identity(open_net.port_map.dom_size());
        return d;
    }();
    const auto result = compopt::dual_decomposition_standard(
        diagram, {open_net}, gamma, iters, compopt::Vec(), tol, false);

    std::ofstream file;
    std::ostream& os = open_output(out_path, file);
    os << "edge,flow\n";
    os.precision(17);
    for (Eigen::Index e = 0; e < result.flows.size(); ++e) {
        os << e << "," << result.flows[e] << "\n";
    }
    std::cerr << "iterations=" << result.iterations << " residual=" << result.residual_inf
              << " dual=" << result.dual_value << "\n";
    return 0;
}

int run_validate(const std::string& path) {
    const std::string text = slurp(path);
    std::vector<std::string> violations;
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.contains("boxes")) {
            violations = compopt::validate(compopt::uwd_from_json(text));
        } else if (j.contains("V")) {
            compopt::open_network_from_json(text);  // constructor enforces invariants
        } else {
            violations.push_back("unrecognized document: expected a 'boxes' or 'V' key");
        }
    } catch (const std::exception& err) {
        violations.push_back(err.what());
    }
    for (const auto& v : violations) std::cout << v << "\n";
    if (violations.empty()) std::cout << "ok\n";
    return violations.empty() ? 0 : 1;
}

int run_naturality(std::uint64_t seed, int instances, int steps) {
    compopt::SuiteOptions opt;
    opt.seed = seed;
    opt.trajectory_steps = steps;

    bool all_pass = true;
    auto report = [&](const compopt::SuiteResult& r) {
        all_pass = all_pass && r.pass;
        std::cout << "morphism=" << r.morphism << " instances=" << r.instances
                  << " max_discrepancy=" << r.max_discrepancy
                  << (r.detail.empty() ? "" : " " + r.detail)
                  << " pass=" << (r.pass ? "true" : "false") << "\n";
    };
    opt.instances = instances;
    report(compopt::run_descent_suite(opt));
    report(compopt::run_ascent_descent_suite(opt));
    opt.instances = std::max(1, instances / 2);
    report(compopt::run_subgradient_suite(opt));
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"compositional optimization toolkit"};
    app.require_subcommand(1);

    compopt::BenchConfig cfg;
    std::string mode = "both";
    auto* bench = app.add_subcommand("bench", "run the composite network flow benchmark");
    bench->add_option("--seed", cfg.seed, "seed for all randomness");
    bench->add_option("--nodes", cfg.nodes_per_subgraph, "nodes per subgraph");
    bench->add_option("--p", cfg.edge_prob, "edge probability in (0,1]");
    bench->add_option("--gamma", cfg.gamma, "multiplier step size");
    bench->add_option("--iters", cfg.outer_iters, "outer iterations");
    bench->add_option("--mode", mode, "standard | hierarchical | both");
    bench->add_option("--out", cfg.output_path, "output CSV path (default stdout)");
    bench->add_flag("--parallel", cfg.parallel, "step subsystems concurrently (hierarchical)");

    std::string solve_path, solve_out;
    double solve_gamma = 0.01;
    int solve_iters = 100000;
    double solve_tol = -1.0;
    auto* solve = app.add_subcommand("solve", "dual ascent on one network JSON file");
    solve->add_option("file", solve_path, "network JSON")->required();
    solve->add_option("--gamma", solve_gamma, "multiplier step size");
    solve->add_option("--iters", solve_iters, "iteration cap");
    solve->add_option("--tol", solve_tol, "stop at this flow-conservation residual");
    solve->add_option("--out", solve_out, "output CSV path (default stdout)");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "lint a UWD or network JSON file");
    validate->add_option("file", validate_path, "JSON file")->required();

    std::uint64_t nat_seed = 1;
    int nat_instances = 50, nat_steps = 100;
    auto* naturality = app.add_subcommand("naturality", "run the morphism test suite");
    naturality->add_option("--seed", nat_seed, "seed for instance generation");
    naturality->add_option("--instances", nat_instances, "instances per morphism");
    naturality->add_option("--steps", nat_steps, "trajectory length per instance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench->parsed()) {
            cfg.mode = compopt::bench_mode_from_string(mode);
            return run_bench(cfg);
        }
        if (solve->parsed()) {
            const std::optional<double> tol =
                solve_tol > 0 ? std::optional<double>(solve_tol) : std::nullopt;
            return run_solve(solve_path, solve_gamma, solve_iters, tol, solve_out);
        }
        if (validate->parsed()) return run_validate(validate_path);
        if (naturality->parsed()) return run_naturality(nat_seed, nat_instances, nat_steps);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
