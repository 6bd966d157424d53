#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "compopt/dynamics.hpp"
#include "compopt/opensys.hpp"
#include "compopt/problems.hpp"

namespace compopt {

/// Convex scalar edge cost with first-order oracle. argmin_shifted(w)
/// minimizes value(xi) + w*xi over xi; quadratic costs use the closed form,
/// generic costs bisect the strictly increasing derivative.
struct EdgeCost {
    std::function<double(double)> value;
    std::function<double(double)> deriv;
    std::function<double(double)> argmin_shifted;
    /// Present for quadratic costs a*xi^2 + b*xi; keeps JSON round trips exact.
    std::optional<std::pair<double, double>> quadratic;
};

/// a*xi^2 + b*xi with a > 0. a <= 0 is rejected: the shifted infimum would
/// be -inf and the dual undefined.
EdgeCost quadratic_edge_cost(double a, double b);

/// Cost from oracles; deriv must be strictly increasing. The shifted argmin
/// brackets the root of deriv(xi) + w starting from [-1,1], doubling until
/// a sign change (at most 200 expansions), then bisects to 1e-12 on the
/// derivative.
EdgeCost generic_edge_cost(std::function<double(double)> value,
                           std::function<double(double)> deriv);

/// Directed graph with convex edge costs and a balanced vertex flow vector
/// (positive entries are inflows). Construction checks |sum(balance)| <= 1e-12.
struct FlowNetwork {
    int vertices = 0;
    FinFunction src;
    FinFunction tgt;
    std::vector<EdgeCost> costs;
    Vec balance;

    int edges() const { return src.dom_size(); }
};

FlowNetwork make_flow_network(int vertices, FinFunction src, FinFunction tgt,
                              std::vector<EdgeCost> costs, Vec balance);

/// Networks compose by merging vertices: act relabels endpoints and pushes
/// the balance forward (self-loops may appear and total balance stays 0),
/// combine is disjoint union.
struct FlowNetworkAlgebra {
    using Payload = FlowNetwork;
    int dimension(const FlowNetwork& g) const { return g.vertices; }
    FlowNetwork act(const FinFunction& phi, const FlowNetwork& g) const;
    FlowNetwork combine(const std::vector<FlowNetwork>& gs) const;
    FlowNetwork unit() const;
};

/// Vertex-by-edge matrix with +1 at the source row, -1 at the target row,
/// and a zero column for self-loops.
Eigen::SparseMatrix<double> incidence_matrix(const FlowNetwork& g);

/// The Lagrange dual of the minimum cost flow problem on g:
///   q(lambda) = inf_x sum_e cost_e(x_e) + lambda'(Ax - b),
/// a concave objective on the vertex space. The inner problem separates per
/// edge; grad(lambda) = A x*(lambda) - b, the exact gradient for strictly
/// convex differentiable costs. Inner-solve failures name the edge.
Objective flow_dual_objective(const FlowNetwork& g);

/// Lift to open networks: the dual objective keeps the port map.
OpenObject<Objective> flow_dual_objective(const OpenObject<FlowNetwork>& g);

/// Edge minimizers at the given multipliers.
Vec optimal_flows(const FlowNetwork& g, const Vec& lambda);

struct DualDecompositionResult {
    /// Multiplier iterates; front() is lambda0. With record=false only the
    /// first and final iterates are kept.
    std::vector<Vec> multipliers;
    Vec flows;                  // edge minimizers at the final multipliers
    double residual_inf = 0.0;  // max-norm of A x - b on the composite network
    double dual_value = 0.0;
    int iterations = 0;
};

/// Compose the open networks over the diagram, build the dual of the
/// composite, and run multiplier ascent (ascent-descent with all-concave
/// labels) from lambda0 (zeros when empty). With residual_tol the loop
/// stops early once the per-step residual estimate drops below it; iters
/// caps the count either way. pipeline_wall_ms, when non-null, receives the
/// construction-plus-iteration time, excluding solution recovery.
DualDecompositionResult dual_decomposition_standard(
    const Uwd& diagram, const std::vector<OpenObject<FlowNetwork>>& nets, double gamma,
    int iters, const Vec& lambda0 = Vec(), std::optional<double> residual_tol = std::nullopt,
    bool record = true, double* pipeline_wall_ms = nullptr);

/// Dual of each component network, one ascent system per component,
/// composed into a single system over the diagram and iterated. Follows the
/// same multiplier trajectory as the standard pipeline. ExecMode::parallel
/// steps the subsystems concurrently within each round.
DualDecompositionResult dual_decomposition_hierarchical(
    const Uwd& diagram, const std::vector<OpenObject<FlowNetwork>>& nets, double gamma,
    int iters, const Vec& lambda0 = Vec(), std::optional<double> residual_tol = std::nullopt,
    bool record = true, double* pipeline_wall_ms = nullptr, ExecMode mode = ExecMode::serial);

/// JSON forms:
///   {"V":n,"E":m,"src":[...],"tgt":[...],
///    "costs":[{"type":"quadratic","a":..,"b":..},...],"balance":[...]}
/// Open networks add "ports":[vertex indices].
FlowNetwork network_from_json(const std::string& text);
OpenObject<FlowNetwork> open_network_from_json(const std::string& text);
std::string network_to_json(const FlowNetwork& g);
std::string open_network_to_json(const OpenObject<FlowNetwork>& g);

}  // namespace compopt
