#include "compopt/naturality.hpp"

#include <algorithm>
#include <cmath>

namespace compopt {

namespace {

Vec random_vec(Rng& rng, int dim, double lo = -1.0, double hi = 1.0) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.uniform(lo, hi);
    return v;
}

double max_trajectory_gap(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    double gap = 0.0;
    for (size_t k = 0; k < a.size(); ++k) gap = std::max(gap, (a[k] - b[k]).cwiseAbs().maxCoeff());
    return gap;
}

}  // namespace

Uwd random_diagram(Rng& rng, const RandomDiagramOptions& opt) {
    Uwd d;
    const int boxes = rng.uniform_int(1, opt.max_boxes);
    for (int b = 0; b < boxes; ++b) d.box_ports.push_back(rng.uniform_int(1, opt.max_ports_per_box));
    const int junction_budget = rng.uniform_int(1, opt.max_junctions);

    std::vector<int> inner(static_cast<size_t>(d.total_inner_ports()));
    for (auto& j : inner) j = rng.uniform_int(0, junction_budget - 1);

    // Compact to referenced junctions so every junction carries a port.
    std::vector<int> renum(static_cast<size_t>(junction_budget), -1);
    int used = 0;
    for (auto& j : inner) {
        if (renum[static_cast<size_t>(j)] < 0) renum[static_cast<size_t>(j)] = used++;
        j = renum[static_cast<size_t>(j)];
    }
    d.junctions = used;
    d.inner_map = FinFunction(std::move(inner), used);

    const int outer = rng.uniform_int(0, std::min(3, used));
    std::vector<int> outer_table(static_cast<size_t>(outer));
    for (auto& j : outer_table) j = rng.uniform_int(0, used - 1);
    d.outer_map = FinFunction(std::move(outer_table), used);

    if (opt.typed) {
        LabelVec labels(static_cast<size_t>(used));
        for (auto& l : labels) l = rng.bernoulli(0.5) ? VarLabel::convex : VarLabel::concave;
        d.junction_labels = std::move(labels);
    }
    return d;
}

OpenObject<Objective> random_quadratic_filler(Rng& rng, const Uwd& d, int b, int max_dim) {
    const int ports = d.box_ports[static_cast<size_t>(b)];
    const int dim = std::max(ports, rng.uniform_int(1, max_dim));
    Mat a(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) a(r, c) = rng.uniform(-1.0, 1.0);
    }
    const Mat p = a.transpose() * a / dim + 0.5 * Mat::Identity(dim, dim);
    const Vec q = random_vec(rng, dim);

    std::vector<int> port_table(static_cast<size_t>(ports));
    for (auto& t : port_table) t = rng.uniform_int(0, dim - 1);
    return {dim, quadratic_objective(p, q), FinFunction(std::move(port_table), dim)};
}

namespace {

LabelVec port_labels(const Uwd& d, int b) {
    const int ports = d.box_ports[static_cast<size_t>(b)];
    const int off = d.port_offset(b);
    LabelVec labels(static_cast<size_t>(ports));
    for (int p = 0; p < ports; ++p) {
        labels[static_cast<size_t>(p)] = (*d.junction_labels)[static_cast<size_t>(d.inner_map(off + p))];
    }
    return labels;
}

}  // namespace

OpenObject<SaddleObjective> random_saddle_filler(Rng& rng, const Uwd& d, int b) {
    const LabelVec labels = port_labels(d, b);
    const int dim = static_cast<int>(labels.size());

    // Positive curvature on the convex block, negative on the concave block,
    // arbitrary bilinear coupling between them.
    Mat a(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) a(r, c) = rng.uniform(-1.0, 1.0);
    }
    const Mat psd = a.transpose() * a / std::max(dim, 1) + 0.5 * Mat::Identity(dim, dim);
    Mat m = Mat::Zero(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            const bool rc = labels[static_cast<size_t>(r)] == VarLabel::convex;
            const bool cc = labels[static_cast<size_t>(c)] == VarLabel::convex;
            if (rc && cc) {
                m(r, c) = psd(r, c);
            } else if (!rc && !cc) {
                m(r, c) = -psd(r, c);
            } else {
                m(r, c) = rng.uniform(-0.5, 0.5);
            }
        }
    }
    m = Mat(0.5 * (m + m.transpose()));
    const Vec q = random_vec(rng, dim);

    const Objective quad = quadratic_objective(m, q);
    SaddleObjective f;
    f.dim = dim;
    f.labels = labels;
    f.value = quad.value;
    f.gradient = quad.gradient;
    return {dim, std::move(f), FinFunction::identity(dim)};
}

OpenObject<SaddleObjective> random_nonsmooth_saddle_filler(Rng& rng, const Uwd& d, int b) {
    const LabelVec labels = port_labels(d, b);
    const int dim = static_cast<int>(labels.size());

    Vec alpha(dim), beta(dim);
    for (int i = 0; i < dim; ++i) {
        alpha[i] = rng.uniform(0.5, 1.5);
        beta[i] = rng.uniform(0.1, 1.0);
    }
    Mat coupling = Mat::Zero(dim, dim);  // convex row, concave column
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            if (labels[static_cast<size_t>(r)] == VarLabel::convex &&
                labels[static_cast<size_t>(c)] == VarLabel::concave) {
                coupling(r, c) = rng.uniform(-0.1, 0.1);
            }
        }
    }

    SaddleObjective f;
    f.dim = dim;
    f.labels = labels;
    f.smoothness = Smoothness::subdifferentiable;
    const LabelVec ls = labels;
    f.value = [alpha, beta, coupling, ls, dim](const Vec& z) {
        double v = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double block = alpha[i] * std::abs(z[i]) + beta[i] * z[i] * z[i];
            v += (ls[static_cast<size_t>(i)] == VarLabel::convex) ? block : -block;
        }
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) v += coupling(r, c) * z[r] * z[c];
        }
        return v;
    };
    // Canonical subgradient selector: sign(0) = 0.
    f.gradient = [alpha, beta, coupling, ls, dim](const Vec& z) {
        Vec g(dim);
        for (int i = 0; i < dim; ++i) {
            const double s = (z[i] > 0) - (z[i] < 0);
            const double block = alpha[i] * s + 2.0 * beta[i] * z[i];
            g[i] = (ls[static_cast<size_t>(i)] == VarLabel::convex) ? block : -block;
        }
        g += (coupling + coupling.transpose()) * z;
        return g;
    };
    return {dim, std::move(f), FinFunction::identity(dim)};
}

double stable_step_size(const std::function<Vec(const Vec&)>& grad, int dim, double cap) {
    if (dim == 0) return cap;
    const Vec g0 = grad(Vec::Zero(dim));
    Mat h(dim, dim);
    for (int j = 0; j < dim; ++j) {
        Vec e = Vec::Zero(dim);
        e[j] = 1.0;
        h.col(j) = grad(e) - g0;
    }
    return std::min(cap, 1.0 / (h.norm() + 1.0));
}

SuiteResult run_descent_suite(const SuiteOptions& opt) {
    SuiteResult result;
    result.morphism = "gradient_descent";
    result.instances = opt.instances;
    for (int inst = 0; inst < opt.instances; ++inst) {
        Rng rng(mix64(opt.seed, static_cast<std::uint64_t>(inst)));
        RandomDiagramOptions dopt;
        const Uwd d = random_diagram(rng, dopt);
        std::vector<OpenObject<Objective>> fillers;
        for (int b = 0; b < d.box_count(); ++b) {
            fillers.push_back(random_quadratic_filler(rng, d, b, dopt.max_box_dim));
        }
        const auto composite = oapply(ObjectiveAlgebra{}, d, fillers);
        const double gamma =
            stable_step_size(composite.payload.gradient, composite.domain_size, 0.1);
        const Vec x0 = random_vec(rng, composite.domain_size);

        const auto direct = simulate(gradient_descent(composite.payload, gamma), x0,
                                     opt.trajectory_steps);
        const auto distributed =
            simulate(generate_solver(d, fillers, gamma).payload, x0, opt.trajectory_steps);
        result.max_discrepancy =
            std::max(result.max_discrepancy, max_trajectory_gap(direct, distributed));
    }
    result.pass = result.max_discrepancy <= opt.tol;
    return result;
}

SuiteResult run_ascent_descent_suite(const SuiteOptions& opt) {
    SuiteResult result;
    result.morphism = "gradient_ascent_descent";
    result.instances = opt.instances;
    for (int inst = 0; inst < opt.instances; ++inst) {
        Rng rng(mix64(opt.seed, 1000003ULL + static_cast<std::uint64_t>(inst)));
        RandomDiagramOptions dopt;
        dopt.typed = true;
        const Uwd d = random_diagram(rng, dopt);
        std::vector<OpenObject<SaddleObjective>> fillers;
        for (int b = 0; b < d.box_count(); ++b) fillers.push_back(random_saddle_filler(rng, d, b));
        const auto composite = oapply(SaddleAlgebra{}, d, fillers);
        const double gamma =
            stable_step_size(composite.payload.gradient, composite.domain_size, 0.02);
        const Vec x0 = random_vec(rng, composite.domain_size);

        const auto direct = simulate(gradient_ascent_descent(composite.payload, gamma), x0,
                                     opt.trajectory_steps);
        std::vector<OpenObject<DiscreteMap>> systems;
        for (const auto& f : fillers) {
            systems.push_back(
                {f.domain_size, gradient_ascent_descent(f.payload, gamma), f.port_map});
        }
        const auto distributed = simulate(oapply(DiscreteMapAlgebra{}, d, systems).payload, x0,
                                          opt.trajectory_steps);
        result.max_discrepancy =
            std::max(result.max_discrepancy, max_trajectory_gap(direct, distributed));
    }
    result.pass = result.max_discrepancy <= opt.tol;
    return result;
}

SuiteResult run_subgradient_suite(const SuiteOptions& opt, int inequality_samples) {
    SuiteResult result;
    result.morphism = "primal_dual_subgradient";
    result.instances = opt.instances;
    int inequality_failures = 0;
    for (int inst = 0; inst < opt.instances; ++inst) {
        Rng rng(mix64(opt.seed, 2000003ULL + static_cast<std::uint64_t>(inst)));
        RandomDiagramOptions dopt;
        dopt.typed = true;
        const Uwd d = random_diagram(rng, dopt);
        std::vector<OpenObject<SaddleObjective>> fillers;
        for (int b = 0; b < d.box_count(); ++b) {
            fillers.push_back(rng.bernoulli(0.5) ? random_nonsmooth_saddle_filler(rng, d, b)
                                                 : random_saddle_filler(rng, d, b));
        }
        const auto composite = oapply(SaddleAlgebra{}, d, fillers);
        const double gamma = 0.02;
        const Vec x0 = random_vec(rng, composite.domain_size);
        const std::uint64_t run_seed = rng.bits();

        const SelectorField direct_sel =
            euler_selector(primal_dual_subgradient(composite.payload), gamma);
        const auto direct = simulate(direct_sel, x0, opt.trajectory_steps, run_seed);

        std::vector<OpenObject<SelectorField>> systems;
        for (const auto& f : fillers) {
            systems.push_back({f.domain_size,
                               euler_selector(primal_dual_subgradient(f.payload), gamma),
                               f.port_map});
        }
        const auto distributed =
            simulate(oapply(DiscreteSelectorAlgebra{}, d, systems).payload, x0,
                     opt.trajectory_steps, run_seed);
        result.max_discrepancy =
            std::max(result.max_discrepancy, max_trajectory_gap(direct, distributed));

        // Each emitted subgradient must under-approximate the convex block
        // and over-approximate the concave block.
        const auto& f = composite.payload;
        for (const Vec& x : direct) {
            const Vec g = f.gradient(x);
            const double fx = f.value(x);
            for (int s = 0; s < inequality_samples; ++s) {
                Vec y_cvx = x, y_ccv = x;
                for (int i = 0; i < f.dim; ++i) {
                    if (f.labels[static_cast<size_t>(i)] == VarLabel::convex) {
                        y_cvx[i] += rng.uniform(-2.0, 2.0);
                    } else {
                        y_ccv[i] += rng.uniform(-2.0, 2.0);
                    }
                }
                if (f.value(y_cvx) - fx < g.dot(y_cvx - x) - 1e-9) ++inequality_failures;
                if (f.value(y_ccv) - fx > g.dot(y_ccv - x) + 1e-9) ++inequality_failures;
            }
        }
    }
    result.pass = result.max_discrepancy <= opt.tol && inequality_failures == 0;
    result.detail = "inequality_failures=" + std::to_string(inequality_failures);
    return result;
}

}  // namespace compopt
