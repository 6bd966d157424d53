#include "doctest.h"

#include <cmath>

#include "compopt/bench.hpp"
#include "compopt/flownet.hpp"
#include "support.hpp"

using namespace compopt;
using testkit::random_vec;

TEST_SUITE_BEGIN("flownet");

namespace {

FlowNetwork two_vertex_unit_network() {
    // One edge 0 -> 1, cost xi^2, supply 1 at vertex 0, demand 1 at vertex 1.
    Vec b(2);
    b << 1.0, -1.0;
    return make_flow_network(2, FinFunction({0}, 2), FinFunction({1}, 2),
                             {quadratic_edge_cost(1.0, 0.0)}, b);
}

FlowNetwork random_network(Rng& rng, int vertices, int edges) {
    std::vector<int> src(static_cast<size_t>(edges)), tgt(static_cast<size_t>(edges));
    std::vector<EdgeCost> costs;
    for (int e = 0; e < edges; ++e) {
        src[static_cast<size_t>(e)] = rng.uniform_int(0, vertices - 1);
        tgt[static_cast<size_t>(e)] = rng.uniform_int(0, vertices - 1);
        costs.push_back(quadratic_edge_cost(rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0)));
    }
    Vec balance = random_vec(rng, vertices);
    balance.array() -= balance.mean();
    return make_flow_network(vertices, FinFunction(std::move(src), vertices),
                             FinFunction(std::move(tgt), vertices), std::move(costs),
                             std::move(balance));
}

}  // namespace

TEST_CASE("quadratic costs expose the closed-form shifted argmin") {
    const EdgeCost c = quadratic_edge_cost(1.5, -0.5);
    // Stationarity of 1.5 xi^2 - 0.5 xi + w xi.
    for (double w : {-2.0, 0.0, 3.0}) {
        const double xi = c.argmin_shifted(w);
        CHECK(xi == doctest::Approx((0.5 - w) / 3.0));
        CHECK(c.deriv(xi) + w == doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(quadratic_edge_cost(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(quadratic_edge_cost(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("generic costs bisect the derivative") {
    const EdgeCost quartic = generic_edge_cost(
        [](double xi) { return xi * xi * xi * xi; }, [](double xi) { return 4.0 * xi * xi * xi; });
    for (double w : {-32.0, -0.5, 0.5, 2.0, 32.0}) {
        const double xi = quartic.argmin_shifted(w);
        CHECK(xi == doctest::Approx(std::cbrt(-w / 4.0)).epsilon(1e-6));
    }
}

TEST_CASE("network constructor enforces balance") {
    Vec bad(2);
    bad << 1.0, -0.5;
    CHECK_THROWS_AS(make_flow_network(2, FinFunction({0}, 2), FinFunction({1}, 2),
                                      {quadratic_edge_cost(1.0, 0.0)}, bad),
                    std::invalid_argument);
}

TEST_CASE("act relabels endpoints, merges balances and preserves zero sum") {
    Rng rng(111);
    const FlowNetwork g = two_vertex_unit_network();
    const FlowNetworkAlgebra alg;
    const FlowNetwork same = alg.act(FinFunction::identity(2), g);
    CHECK(same.src == g.src);
    CHECK(same.balance == g.balance);

    // Merging both endpoints creates a self-loop and sums the balances.
    const FlowNetwork merged = alg.act(FinFunction({0, 0}, 1), g);
    CHECK(merged.vertices == 1);
    CHECK(merged.src(0) == merged.tgt(0));
    CHECK(merged.balance[0] == doctest::Approx(0.0));

    for (int trial = 0; trial < 20; ++trial) {
        const FlowNetwork net = random_network(rng, rng.uniform_int(2, 8), rng.uniform_int(1, 10));
        const auto phi = testkit::random_fin_function(rng, net.vertices, rng.uniform_int(1, 8));
        CHECK(std::abs(alg.act(phi, net).balance.sum()) <= 1e-12);
    }
}

TEST_CASE("combine forms the disjoint union") {
    const FlowNetworkAlgebra alg;
    const FlowNetwork empty = alg.combine({});
    CHECK(empty.vertices == 0);
    CHECK(empty.edges() == 0);

    const FlowNetwork g = two_vertex_unit_network();
    const FlowNetwork gg = alg.combine({g, g});
    CHECK(gg.vertices == 4);
    CHECK(gg.edges() == 2);
    CHECK(gg.src(1) == 2);
    CHECK(gg.tgt(1) == 3);
}

TEST_CASE("incidence matrix columns carry +1/-1 and vanish on self-loops") {
    const Mat a = Mat(incidence_matrix(two_vertex_unit_network()));
    CHECK(a(0, 0) == 1.0);
    CHECK(a(1, 0) == -1.0);

    Vec zero1(1);
    zero1 << 0.0;
    const FlowNetwork loop = make_flow_network(1, FinFunction({0}, 1), FinFunction({0}, 1),
                                               {quadratic_edge_cost(1.0, 0.0)}, zero1);
    CHECK(Mat(incidence_matrix(loop)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("incidence of a relabelled network is the pushforward of the incidence") {
    Rng rng(112);
    for (int trial = 0; trial < 40; ++trial) {
        const FlowNetwork g = random_network(rng, rng.uniform_int(1, 12), rng.uniform_int(0, 12));
        const auto phi = testkit::random_fin_function(rng, g.vertices, rng.uniform_int(1, 12));
        const Mat a = Mat(incidence_matrix(FlowNetworkAlgebra{}.act(phi, g)));
        const Mat kt_c = pushforward_matrix(phi) * Mat(incidence_matrix(g));
        CHECK(a == kt_c);  // exact integer equality
    }
}

TEST_CASE("the dual objective solves the scalar subproblems in closed form") {
    const FlowNetwork g = two_vertex_unit_network();
    const Objective q = flow_dual_objective(g);
    Vec lambda(2);
    lambda << 0.3, -0.2;
    // Inner argmin: xi* = -(A'lambda)_e / 2 = -(lambda_0 - lambda_1)/2.
    const double xi = -(lambda[0] - lambda[1]) / 2.0;
    const double want = xi * xi + lambda[0] * (xi - 1.0) + lambda[1] * (-xi + 1.0);
    CHECK(q.value(lambda) == doctest::Approx(want).epsilon(1e-12));
    const Vec grad = q.gradient(lambda);
    CHECK(grad[0] == doctest::Approx(xi - 1.0));
    CHECK(grad[1] == doctest::Approx(-xi + 1.0));
}

TEST_CASE("dual ascent on the unit network reaches the known flow") {
    const FlowNetwork g = two_vertex_unit_network();
    const Objective q = flow_dual_objective(g);
    Vec lambda = Vec::Zero(2);
    for (int k = 0; k < 20000; ++k) lambda += 0.05 * q.gradient(lambda);
    const Vec flows = optimal_flows(g, lambda);
    CHECK(flows[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK((flows - testkit::kkt_flows(g)).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("the dual objective is natural in vertex relabelings") {
    Rng rng(113);
    for (int trial = 0; trial < 20; ++trial) {
        const FlowNetwork g = random_network(rng, rng.uniform_int(2, 6), rng.uniform_int(1, 8));
        const auto phi = testkit::random_fin_function(rng, g.vertices, rng.uniform_int(1, 6));
        const Objective top = flow_dual_objective(FlowNetworkAlgebra{}.act(phi, g));
        const Objective bottom = ObjectiveAlgebra{}.act(phi, flow_dual_objective(g));
        for (int t = 0; t < 10; ++t) {
            const Vec lambda = random_vec(rng, phi.codom_size());
            CHECK(top.value(lambda) == doctest::Approx(bottom.value(lambda)).epsilon(1e-9));
            CHECK((top.gradient(lambda) - bottom.gradient(lambda)).cwiseAbs().maxCoeff() <= 1e-9);
        }
    }
}

TEST_CASE("the dual objective is monoidal") {
    Rng rng(114);
    const FlowNetwork g1 = random_network(rng, 3, 4), g2 = random_network(rng, 2, 2);
    const Objective lhs = flow_dual_objective(FlowNetworkAlgebra{}.combine({g1, g2}));
    const Objective rhs =
        ObjectiveAlgebra{}.combine({flow_dual_objective(g1), flow_dual_objective(g2)});
    for (int t = 0; t < 10; ++t) {
        const Vec lambda = random_vec(rng, 5);
        CHECK(lhs.value(lambda) == doctest::Approx(rhs.value(lambda)).epsilon(1e-10));
        CHECK((lhs.gradient(lambda) - rhs.gradient(lambda)).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("single-box composition is plain dual ascent") {
    Rng rng(115);
    Rng gen(7);
    const auto open_net = gen_er_flownet(5, 0.6, 2, gen);
    const Uwd d = [&] {
        Uwd id2 = Uwd::identity(2);
        return id2;
    }();
    const auto composed = dual_decomposition_standard(d, {open_net}, 0.02, 50);

    // By hand on the underlying closed network (vertex order is preserved:
    // the pushout of the identity wiring keeps payload coordinates first).
    const Objective q = flow_dual_objective(open_net.payload);
    Vec lambda = Vec::Zero(5);
    std::vector<Vec> iterates = {lambda};
    for (int k = 0; k < 50; ++k) {
        lambda += 0.02 * q.gradient(lambda);
        iterates.push_back(lambda);
    }
    REQUIRE(composed.multipliers.size() == iterates.size());
    CHECK(testkit::max_gap(composed.multipliers, iterates) <= 1e-12);
    CHECK((composed.flows - optimal_flows(open_net.payload, lambda)).cwiseAbs().maxCoeff() <=
          1e-12);
}

TEST_CASE("the multiplier update is lambda + gamma (A x* - b)") {
    Rng gen(8);
    const auto net = gen_er_flownet(4, 0.7, 0, gen);
    const auto result = dual_decomposition_standard(Uwd{{0}, 0, FinFunction::empty(0),
                                                        FinFunction::empty(0), std::nullopt},
                                                    {net}, 0.05, 3);
    const Mat a = Mat(incidence_matrix(net.payload));
    Vec lambda = Vec::Zero(4);
    for (int k = 0; k < 3; ++k) {
        const Vec x = optimal_flows(net.payload, lambda);
        lambda = lambda + 0.05 * (a * x - net.payload.balance);
        CHECK((result.multipliers[static_cast<size_t>(k + 1)] - lambda).cwiseAbs().maxCoeff() <=
              1e-12);
    }
}

TEST_CASE("residuals on a fixed composite instance decrease across iterations") {
    // Regression data for these seeds, not a theorem.
    const BenchConfig cfg{.seed = 21, .nodes_per_subgraph = 8, .edge_prob = 0.5, .gamma = 0.02,
                          .outer_iters = 1, .mode = BenchMode::standard};
    const Uwd diagram = benchmark_diagram();
    std::vector<OpenObject<FlowNetwork>> nets;
    const int ports[] = {3, 2, 2};
    for (int i = 0; i < 3; ++i) {
        Rng rng(mix64(cfg.seed, static_cast<std::uint64_t>(i)));
        nets.push_back(gen_er_flownet(cfg.nodes_per_subgraph, cfg.edge_prob, ports[i], rng));
    }
    const auto composite = oapply(FlowNetworkAlgebra{}, diagram, nets);
    const Mat a = Mat(incidence_matrix(composite.payload));
    const auto run = dual_decomposition_standard(diagram, nets, cfg.gamma, 40);
    double prev = std::numeric_limits<double>::infinity();
    for (const Vec& lambda : run.multipliers) {
        const double r =
            (a * optimal_flows(composite.payload, lambda) - composite.payload.balance).norm();
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("hierarchical and standard pipelines follow the same trajectory") {
    const Uwd diagram = benchmark_diagram();
    std::vector<OpenObject<FlowNetwork>> nets;
    const int ports[] = {3, 2, 2};
    for (int i = 0; i < 3; ++i) {
        Rng rng(mix64(33, static_cast<std::uint64_t>(i)));
        nets.push_back(gen_er_flownet(6, 0.5, ports[i], rng));
    }
    const auto std_run = dual_decomposition_standard(diagram, nets, 0.01, 25);
    const auto hier_run = dual_decomposition_hierarchical(diagram, nets, 0.01, 25);
    REQUIRE(std_run.multipliers.size() == hier_run.multipliers.size());
    CHECK(testkit::max_gap(std_run.multipliers, hier_run.multipliers) <= 1e-8);
    CHECK((std_run.flows - hier_run.flows).cwiseAbs().maxCoeff() <= 1e-6);

    // Parallel execution of the hierarchical pipeline matches serial.
    const auto par_run = dual_decomposition_hierarchical(diagram, nets, 0.01, 25, Vec(),
                                                         std::nullopt, true, nullptr,
                                                         ExecMode::parallel);
    CHECK(testkit::max_gap(hier_run.multipliers, par_run.multipliers) <= 1e-12);
}

TEST_CASE("single-box hierarchical equals single-box standard") {
    Rng gen(9);
    const auto net = gen_er_flownet(5, 0.6, 2, gen);
    const Uwd d = Uwd::identity(2);
    const auto a = dual_decomposition_standard(d, {net}, 0.02, 30);
    const auto b = dual_decomposition_hierarchical(d, {net}, 0.02, 30);
    CHECK(testkit::max_gap(a.multipliers, b.multipliers) <= 1e-10);
}

TEST_CASE("converged flows satisfy conservation and match the saddle solve") {
    Rng gen(10);
    const auto net = gen_er_flownet(6, 0.6, 0, gen);
    const auto run = dual_decomposition_standard(
        Uwd{{0}, 0, FinFunction::empty(0), FinFunction::empty(0), std::nullopt}, {net}, 0.01,
        2000000, Vec(), 1e-6, false);
    CHECK(run.residual_inf <= 1e-6);
    CHECK((run.flows - testkit::kkt_flows(net.payload)).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("network JSON round trips, open ports included") {
    Rng gen(11);
    const auto net = gen_er_flownet(5, 0.7, 3, gen);
    const auto back = open_network_from_json(open_network_to_json(net));
    CHECK(back.payload.vertices == net.payload.vertices);
    CHECK(back.payload.src == net.payload.src);
    CHECK(back.payload.tgt == net.payload.tgt);
    CHECK(back.port_map == net.port_map);
    CHECK((back.payload.balance - net.payload.balance).cwiseAbs().maxCoeff() == 0.0);
    for (int e = 0; e < net.payload.edges(); ++e) {
        CHECK(back.payload.costs[static_cast<size_t>(e)].quadratic->first ==
              net.payload.costs[static_cast<size_t>(e)].quadratic->first);
    }

    const char* degenerate = R"({"V":2,"E":1,"src":[0],"tgt":[1],
        "costs":[{"type":"quadratic","a":0.0,"b":1.0}],"balance":[1.0,-1.0]})";
    CHECK_THROWS_AS(network_from_json(degenerate), std::invalid_argument);
}

TEST_SUITE_END();
