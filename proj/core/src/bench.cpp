#include "compopt/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace compopt {

BenchMode bench_mode_from_string(const std::string& s) {
    if (s == "standard") return BenchMode::standard;
    if (s == "hierarchical") return BenchMode::hierarchical;
    if (s == "both") return BenchMode::both;
    throw std::invalid_argument("unknown benchmark mode '" + s + "'");
}

std::string to_string(BenchMode m) {
    switch (m) {
        case BenchMode::standard: return "standard";
        case BenchMode::hierarchical: return "hierarchical";
        default: return "both";
    }
}

std::vector<std::string> validate(const BenchConfig& cfg) {
    std::vector<std::string> bad;
    if (cfg.nodes_per_subgraph < 2) bad.push_back("nodes_per_subgraph must be >= 2");
    if (!(cfg.edge_prob > 0.0 && cfg.edge_prob <= 1.0)) {
        bad.push_back("edge_prob must lie in (0,1]");
    }
    if (!(cfg.gamma > 0.0)) bad.push_back("gamma must be positive");
    if (cfg.outer_iters < 1) bad.push_back("outer_iters must be >= 1");
    return bad;
}

namespace {

bool connected(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (const auto& [u, v] : edges) {
        adj[static_cast<size_t>(u)].push_back(v);
        adj[static_cast<size_t>(v)].push_back(u);
    }
    std::vector<bool> seen(static_cast<size_t>(n), false);
    std::vector<int> stack = {0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adj[static_cast<size_t>(u)]) {
            if (!seen[static_cast<size_t>(v)]) {
                seen[static_cast<size_t>(v)] = true;
                ++reached;
                stack.push_back(v);
            }
        }
    }
    return reached == n;
}

}  // namespace

OpenObject<FlowNetwork> gen_er_flownet(int n, double p, int ports, Rng& rng) {
    if (n < 2) throw std::invalid_argument("gen_er_flownet: need at least 2 nodes");
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::invalid_argument("gen_er_flownet: edge probability must lie in (0,1]");
    }
    if (ports < 0 || ports > n) throw std::invalid_argument("gen_er_flownet: bad port count");

    std::vector<std::pair<int, int>> edges;
    bool ok = false;
    for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
        edges.clear();
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng.bernoulli(p)) edges.emplace_back(i, j);
            }
        }
        ok = connected(n, edges);
    }
    if (!ok) {
        throw std::runtime_error("gen_er_flownet: no connected sample in 1000 attempts (n=" +
                                 std::to_string(n) + ", p=" + std::to_string(p) + ")");
    }

    std::vector<int> src_t, tgt_t;
    std::vector<EdgeCost> costs;
    for (const auto& [u, v] : edges) {
        src_t.push_back(u);
        tgt_t.push_back(v);
        costs.push_back(quadratic_edge_cost(rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0)));
    }
    Vec balance(n);
    for (int i = 0; i < n; ++i) balance[i] = rng.uniform(-1.0, 1.0);
    balance.array() -= balance.mean();

    // Boundary vertices, uniform without replacement.
    std::vector<int> pool(static_cast<size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> chosen;
    for (int k = 0; k < ports; ++k) {
        const int idx = rng.uniform_int(0, static_cast<int>(pool.size()) - 1);
        chosen.push_back(pool[static_cast<size_t>(idx)]);
        pool.erase(pool.begin() + idx);
    }

    FlowNetwork g = make_flow_network(n, FinFunction(std::move(src_t), n),
                                      FinFunction(std::move(tgt_t), n), std::move(costs),
                                      std::move(balance));
    return {n, std::move(g), FinFunction(std::move(chosen), n)};
}

Uwd benchmark_diagram() {
    Uwd d;
    d.box_ports = {3, 2, 2};
    d.junctions = 3;
    // Box 0 meets box 1 at junction 0, box 2 at junction 1; junction 2 joins
    // all three.
    d.inner_map = FinFunction({0, 1, 2, /*box1*/ 0, 2, /*box2*/ 1, 2}, 3);
    d.outer_map = FinFunction::empty(3);
    return d;
}

std::string bench_csv_header() {
    return "mode,nodes,p,seed,iters,wall_ms,residual,final_dual_value,lambda_max_discrepancy";
}

std::string to_csv(const BenchRow& row) {
    std::ostringstream os;
    os.precision(17);
    os << row.mode << ',' << row.nodes << ',' << row.p << ',' << row.seed << ',' << row.iters
       << ',' << row.wall_ms << ',' << row.residual << ',' << row.final_dual_value << ','
       << row.lambda_max_discrepancy;
    return os.str();
}

BenchRow bench_row_from_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) {
        throw std::invalid_argument("bench_row_from_csv: expected 9 cells, got " +
                                    std::to_string(cells.size()));
    }
    BenchRow row;
    row.mode = cells[0];
    row.nodes = std::stoi(cells[1]);
    row.p = std::stod(cells[2]);
    row.seed = std::stoull(cells[3]);
    row.iters = std::stoi(cells[4]);
    row.wall_ms = std::stod(cells[5]);
    row.residual = std::stod(cells[6]);
    row.final_dual_value = std::stod(cells[7]);
    row.lambda_max_discrepancy = std::stod(cells[8]);
    return row;
}

std::vector<BenchRow> run_benchmark(const BenchConfig& cfg) {
    const auto bad = validate(cfg);
    if (!bad.empty()) throw std::invalid_argument("run_benchmark: " + bad.front());

    const Uwd diagram = benchmark_diagram();
    const int port_counts[] = {3, 2, 2};
    std::vector<OpenObject<FlowNetwork>> nets;
    for (int i = 0; i < 3; ++i) {
        Rng rng(mix64(cfg.seed, static_cast<std::uint64_t>(i)));
        nets.push_back(
            gen_er_flownet(cfg.nodes_per_subgraph, cfg.edge_prob, port_counts[i], rng));
    }

    auto base_row = [&](const char* mode) {
        BenchRow row;
        row.mode = mode;
        row.nodes = cfg.nodes_per_subgraph;
        row.p = cfg.edge_prob;
        row.seed = cfg.seed;
        row.iters = cfg.outer_iters;
        row.lambda_max_discrepancy = std::numeric_limits<double>::quiet_NaN();
        return row;
    };

    std::vector<BenchRow> rows;
    DualDecompositionResult std_result, hier_result;
    const bool want_std = cfg.mode != BenchMode::hierarchical;
    const bool want_hier = cfg.mode != BenchMode::standard;

    if (want_std) {
        BenchRow row = base_row("standard");
        std_result = dual_decomposition_standard(diagram, nets, cfg.gamma, cfg.outer_iters,
                                                 Vec(), std::nullopt, true, &row.wall_ms);
        row.residual = std_result.residual_inf;
        row.final_dual_value = std_result.dual_value;
        rows.push_back(std::move(row));
    }
    if (want_hier) {
        BenchRow row = base_row("hierarchical");
        hier_result = dual_decomposition_hierarchical(
            diagram, nets, cfg.gamma, cfg.outer_iters, Vec(), std::nullopt, true, &row.wall_ms,
            cfg.parallel ? ExecMode::parallel : ExecMode::serial);
        row.residual = hier_result.residual_inf;
        row.final_dual_value = hier_result.dual_value;
        rows.push_back(std::move(row));
    }
    if (cfg.mode == BenchMode::both) {
        double gap = 0.0;
        for (size_t k = 0; k < std_result.multipliers.size(); ++k) {
            gap = std::max(gap, (std_result.multipliers[k] - hier_result.multipliers[k])
                                    .cwiseAbs()
                                    .maxCoeff());
        }
        for (auto& row : rows) row.lambda_max_discrepancy = gap;
    }
    return rows;
}

}  // namespace compopt
