#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "compopt/flownet.hpp"
#include "compopt/rng.hpp"
#include "compopt/uwd.hpp"

namespace compopt {

enum class BenchMode { standard, hierarchical, both };

BenchMode bench_mode_from_string(const std::string& s);
std::string to_string(BenchMode m);

struct BenchConfig {
    std::uint64_t seed = 1;
    int nodes_per_subgraph = 10;
    double edge_prob = 0.2;       // in (0, 1]
    double gamma = 0.01;
    int outer_iters = 10;
    BenchMode mode = BenchMode::both;
    std::string output_path;      // empty: caller decides (CLI prints to stdout)
    bool parallel = false;        // hierarchical executor steps subsystems concurrently
};

std::vector<std::string> validate(const BenchConfig& cfg);

/// Connected Erdos-Renyi flow network: G(n,p) resampled until connected
/// (at most 1000 attempts), quadratic costs with a ~ U(0.5,2), b ~ U(-1,1),
/// balance ~ U(-1,1) mean-subtracted, and `ports` boundary vertices chosen
/// uniformly without replacement.
OpenObject<FlowNetwork> gen_er_flownet(int n, double p, int ports, Rng& rng);

/// The three-box benchmark composition pattern [3]+[2]+[2] -> (no outer
/// ports): the 3-port network shares one junction with each 2-port network
/// and one junction joins all three.
Uwd benchmark_diagram();

struct BenchRow {
    std::string mode;
    int nodes = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    int iters = 0;
    double wall_ms = 0.0;
    double residual = 0.0;
    double final_dual_value = 0.0;
    /// Max multiplier gap between the two pipelines; NaN unless mode=both.
    double lambda_max_discrepancy = 0.0;
};

std::string bench_csv_header();
std::string to_csv(const BenchRow& row);
BenchRow bench_row_from_csv(const std::string& line);

/// Builds the three subgraphs and the benchmark diagram from cfg.seed, runs
/// the requested pipelines, and returns one row per pipeline run. All
/// randomness derives from the single seed.
std::vector<BenchRow> run_benchmark(const BenchConfig& cfg);

}  // namespace compopt
