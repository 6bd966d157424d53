#include "compopt/flownet.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "compopt/morphisms.hpp"
#include "json.hpp"

namespace compopt {

EdgeCost quadratic_edge_cost(double a, double b) {
    if (!(a > 0.0)) {
        throw std::invalid_argument("quadratic_edge_cost: leading coefficient must be > 0, got " +
                                    std::to_string(a));
    }
    EdgeCost c;
    c.value = [a, b](double xi) { return a * xi * xi + b * xi; };
    c.deriv = [a, b](double xi) { return 2.0 * a * xi + b; };
    c.argmin_shifted = [a, b](double w) { return -(b + w) / (2.0 * a); };
    c.quadratic = std::make_pair(a, b);
    return c;
}

EdgeCost generic_edge_cost(std::function<double(double)> value,
                           std::function<double(double)> deriv) {
    EdgeCost c;
    c.value = std::move(value);
    c.deriv = deriv;
    c.argmin_shifted = [deriv](double w) {
        auto g = [&](double xi) { return deriv(xi) + w; };
        double lo = -1.0, hi = 1.0;
        int expansions = 0;
        while (g(lo) > 0.0) {
            lo *= 2.0;
            if (++expansions > 200) {
                throw std::runtime_error("edge argmin: no lower bracket after 200 expansions");
            }
        }
        expansions = 0;
        while (g(hi) < 0.0) {
            hi *= 2.0;
            if (++expansions > 200) {
                throw std::runtime_error("edge argmin: no upper bracket after 200 expansions");
            }
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double gm = g(mid);
            if (std::abs(gm) <= 1e-12) return mid;
            (gm > 0.0 ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    };
    return c;
}

FlowNetwork make_flow_network(int vertices, FinFunction src, FinFunction tgt,
                              std::vector<EdgeCost> costs, Vec balance) {
    FlowNetwork g;
    g.vertices = vertices;
    g.src = std::move(src);
    g.tgt = std::move(tgt);
    g.costs = std::move(costs);
    g.balance = std::move(balance);
    if (g.src.codom_size() != vertices || g.tgt.codom_size() != vertices) {
        throw std::invalid_argument("make_flow_network: endpoint maps must target the vertex set");
    }
    if (g.src.dom_size() != g.tgt.dom_size()) {
        throw std::invalid_argument("make_flow_network: src and tgt disagree on the edge count");
    }
    if (static_cast<int>(g.costs.size()) != g.edges()) {
        throw std::invalid_argument("make_flow_network: " + std::to_string(g.costs.size()) +
                                    " costs for " + std::to_string(g.edges()) + " edges");
    }
    if (g.balance.size() != vertices) {
        throw std::invalid_argument("make_flow_network: balance length != vertex count");
    }
    if (vertices > 0 && std::abs(g.balance.sum()) > 1e-12) {
        throw std::invalid_argument("make_flow_network: balance must sum to 0, got " +
                                    std::to_string(g.balance.sum()));
    }
    return g;
}

FlowNetwork FlowNetworkAlgebra::act(const FinFunction& phi, const FlowNetwork& g) const {
    if (phi.dom_size() != g.vertices) {
        throw std::invalid_argument("FlowNetworkAlgebra::act: map domain " +
                                    std::to_string(phi.dom_size()) + " != vertex count " +
                                    std::to_string(g.vertices));
    }
    return make_flow_network(phi.codom_size(), compose(g.src, phi), compose(g.tgt, phi), g.costs,
                             pushforward_apply(phi, g.balance));
}

FlowNetwork FlowNetworkAlgebra::combine(const std::vector<FlowNetwork>& gs) const {
    std::vector<FinFunction> srcs, tgts;
    std::vector<EdgeCost> costs;
    int vertices = 0, edges = 0;
    for (const auto& g : gs) {
        srcs.push_back(g.src);
        tgts.push_back(g.tgt);
        costs.insert(costs.end(), g.costs.begin(), g.costs.end());
        vertices += g.vertices;
        edges += g.edges();
    }
    Vec balance(vertices);
    int off = 0;
    for (const auto& g : gs) {
        balance.segment(off, g.vertices) = g.balance;
        off += g.vertices;
    }
    return make_flow_network(vertices, coproduct(srcs), coproduct(tgts), std::move(costs),
                             std::move(balance));
}

FlowNetwork FlowNetworkAlgebra::unit() const {
    return make_flow_network(0, FinFunction::empty(0), FinFunction::empty(0), {}, Vec(0));
}

Eigen::SparseMatrix<double> incidence_matrix(const FlowNetwork& g) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(2 * g.edges()));
    for (int e = 0; e < g.edges(); ++e) {
        if (g.src(e) == g.tgt(e)) continue;  // self-loops contribute nothing
        trip.emplace_back(g.src(e), e, 1.0);
        trip.emplace_back(g.tgt(e), e, -1.0);
    }
    Eigen::SparseMatrix<double> a(g.vertices, g.edges());
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

namespace {

Vec edge_minimizers(const FlowNetwork& g, const Vec& shift) {
    Vec x(g.edges());
    for (int e = 0; e < g.edges(); ++e) {
        try {
            x[e] = g.costs[static_cast<size_t>(e)].argmin_shifted(shift[e]);
        } catch (const std::exception& err) {
            throw std::runtime_error("flow_dual_objective: inner solve failed at edge " +
                                     std::to_string(e) + ": " + err.what());
        }
    }
    return x;
}

}  // namespace

Objective flow_dual_objective(const FlowNetwork& g) {
    // Dense incidence: desk-scale dims, and the benchmark's point is the
    // inner solves, not the mat-vecs.
    const Mat a = Mat(incidence_matrix(g));
    const Vec b = g.balance;
    const auto costs = g.costs;
    const FlowNetwork net = g;

    Objective q;
    q.dim = g.vertices;
    q.value = [a, b, costs, net](const Vec& lambda) {
        const Vec shift = a.transpose() * lambda;
        const Vec x = edge_minimizers(net, shift);
        double v = 0.0;
        for (int e = 0; e < net.edges(); ++e) v += costs[static_cast<size_t>(e)].value(x[e]);
        return v + lambda.dot(a * x - b);
    };
    q.gradient = [a, b, net](const Vec& lambda) -> Vec {
        const Vec shift = a.transpose() * lambda;
        return a * edge_minimizers(net, shift) - b;
    };
    return q;
}

OpenObject<Objective> flow_dual_objective(const OpenObject<FlowNetwork>& g) {
    return {g.domain_size, flow_dual_objective(g.payload), g.port_map};
}

Vec optimal_flows(const FlowNetwork& g, const Vec& lambda) {
    if (lambda.size() != g.vertices) {
        throw std::invalid_argument("optimal_flows: multiplier dimension != vertex count");
    }
    const Mat a = Mat(incidence_matrix(g));
    return edge_minimizers(g, a.transpose() * lambda);
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct AscentLoop {
    std::vector<Vec> multipliers;
    int iterations = 0;
};

AscentLoop run_ascent(const DiscreteMap& step_map, Vec lambda, int iters,
                      std::optional<double> residual_tol, double gamma, bool record) {
    AscentLoop loop;
    loop.multipliers.push_back(lambda);
    for (int k = 0; k < iters; ++k) {
        Vec next = step_map.step(lambda);
        if (residual_tol) {
            const double est = (next - lambda).cwiseAbs().maxCoeff() / gamma;
            if (est <= *residual_tol) break;
        }
        lambda = std::move(next);
        if (record) loop.multipliers.push_back(lambda);
        ++loop.iterations;
    }
    if (!record) loop.multipliers.push_back(lambda);
    return loop;
}

DualDecompositionResult finish(const Uwd& diagram,
                               const std::vector<OpenObject<FlowNetwork>>& nets,
                               AscentLoop&& loop) {
    const auto composite = oapply(FlowNetworkAlgebra{}, diagram, nets);
    DualDecompositionResult out;
    out.multipliers = std::move(loop.multipliers);
    out.iterations = loop.iterations;
    const Vec& lambda = out.multipliers.back();
    out.flows = optimal_flows(composite.payload, lambda);
    const Mat a = Mat(incidence_matrix(composite.payload));
    out.residual_inf =
        (a * out.flows - composite.payload.balance).cwiseAbs().maxCoeff();
    out.dual_value = flow_dual_objective(composite.payload).value(lambda);
    return out;
}

Vec default_lambda0(const Vec& lambda0, int dim, const char* who) {
    if (lambda0.size() == 0) return Vec::Zero(dim);
    if (lambda0.size() != dim) {
        throw std::invalid_argument(std::string(who) + ": lambda0 has dimension " +
                                    std::to_string(lambda0.size()) + ", composite has " +
                                    std::to_string(dim));
    }
    return lambda0;
}

}  // namespace

DualDecompositionResult dual_decomposition_standard(
    const Uwd& diagram, const std::vector<OpenObject<FlowNetwork>>& nets, double gamma,
    int iters, const Vec& lambda0, std::optional<double> residual_tol, bool record,
    double* pipeline_wall_ms) {
    const auto t0 = Clock::now();
    const auto composite = oapply(FlowNetworkAlgebra{}, diagram, nets);
    const Objective dual = flow_dual_objective(composite.payload);
    const DiscreteMap ascend =
        gradient_ascent_descent(with_uniform_label(dual, VarLabel::concave), gamma);
    const Vec start = default_lambda0(lambda0, dual.dim, "dual_decomposition_standard");
    AscentLoop loop = run_ascent(ascend, start, iters, residual_tol, gamma, record);
    if (pipeline_wall_ms) *pipeline_wall_ms = ms_since(t0);
    return finish(diagram, nets, std::move(loop));
}

DualDecompositionResult dual_decomposition_hierarchical(
    const Uwd& diagram, const std::vector<OpenObject<FlowNetwork>>& nets, double gamma,
    int iters, const Vec& lambda0, std::optional<double> residual_tol, bool record,
    double* pipeline_wall_ms, ExecMode mode) {
    const auto t0 = Clock::now();
    std::vector<OpenObject<DiscreteMap>> systems;
    systems.reserve(nets.size());
    for (const auto& net : nets) {
        const Objective dual = flow_dual_objective(net.payload);
        systems.push_back(
            {net.domain_size,
             gradient_ascent_descent(with_uniform_label(dual, VarLabel::concave), gamma),
             net.port_map});
    }
    AscentLoop loop;
    if (mode == ExecMode::parallel && !residual_tol) {
        ComposeGlue glue = compose_glue(diagram, systems);
        const Vec start =
            default_lambda0(lambda0, glue.apex_size, "dual_decomposition_hierarchical");
        auto traj = simulate_message_passing(diagram, systems, start, iters, mode);
        loop.iterations = iters;
        if (record) {
            loop.multipliers = std::move(traj);
        } else {
            loop.multipliers = {traj.front(), traj.back()};
        }
    } else {
        const auto composite = oapply(DiscreteMapAlgebra{}, diagram, systems);
        const Vec start =
            default_lambda0(lambda0, composite.domain_size, "dual_decomposition_hierarchical");
        loop = run_ascent(composite.payload, start, iters, residual_tol, gamma, record);
    }
    if (pipeline_wall_ms) *pipeline_wall_ms = ms_since(t0);
    return finish(diagram, nets, std::move(loop));
}

namespace {

nlohmann::json network_json(const FlowNetwork& g) {
    nlohmann::json j;
    j["V"] = g.vertices;
    j["E"] = g.edges();
    j["src"] = g.src.table();
    j["tgt"] = g.tgt.table();
    nlohmann::json costs = nlohmann::json::array();
    for (size_t e = 0; e < g.costs.size(); ++e) {
        if (!g.costs[e].quadratic) {
            throw std::invalid_argument("network_to_json: edge " + std::to_string(e) +
                                        " has a non-quadratic cost with no JSON form");
        }
        costs.push_back({{"type", "quadratic"},
                         {"a", g.costs[e].quadratic->first},
                         {"b", g.costs[e].quadratic->second}});
    }
    j["costs"] = std::move(costs);
    j["balance"] = std::vector<double>(g.balance.data(), g.balance.data() + g.balance.size());
    return j;
}

FlowNetwork network_from(const nlohmann::json& j) {
    const int v = j.at("V").get<int>();
    const int e = j.at("E").get<int>();
    FinFunction src(j.at("src").get<std::vector<int>>(), v);
    FinFunction tgt(j.at("tgt").get<std::vector<int>>(), v);
    if (src.dom_size() != e || tgt.dom_size() != e) {
        throw std::invalid_argument("network_from_json: src/tgt lengths disagree with E");
    }
    std::vector<EdgeCost> costs;
    for (const auto& c : j.at("costs")) {
        const auto type = c.at("type").get<std::string>();
        if (type != "quadratic") {
            throw std::invalid_argument("network_from_json: unsupported cost type '" + type + "'");
        }
        costs.push_back(quadratic_edge_cost(c.at("a").get<double>(), c.at("b").get<double>()));
    }
    const auto bal = j.at("balance").get<std::vector<double>>();
    Vec balance(static_cast<Eigen::Index>(bal.size()));
    for (size_t i = 0; i < bal.size(); ++i) balance[static_cast<Eigen::Index>(i)] = bal[i];
    return make_flow_network(v, std::move(src), std::move(tgt), std::move(costs),
                             std::move(balance));
}

}  // namespace

FlowNetwork network_from_json(const std::string& text) {
    return network_from(nlohmann::json::parse(text));
}

OpenObject<FlowNetwork> open_network_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    FlowNetwork g = network_from(j);
    std::vector<int> ports;
    if (j.contains("ports")) ports = j.at("ports").get<std::vector<int>>();
    const int v = g.vertices;
    return {v, std::move(g), FinFunction(std::move(ports), v)};
}

std::string network_to_json(const FlowNetwork& g) { return network_json(g).dump(); }

std::string open_network_to_json(const OpenObject<FlowNetwork>& g) {
    nlohmann::json j = network_json(g.payload);
    j["ports"] = g.port_map.table();
    return j.dump();
}

}  // namespace compopt
