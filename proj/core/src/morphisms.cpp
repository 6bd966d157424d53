#include "compopt/morphisms.hpp"

#include <algorithm>
#include <stdexcept>

namespace compopt {

VectorField gradient_flow(const Objective& f) {
    if (f.smoothness != Smoothness::differentiable) {
        throw std::invalid_argument(
            "gradient_flow: objective is subdifferentiable; use subgradient_flow");
    }
    VectorField out;
    out.dim = f.dim;
    out.field = [f](const Vec& x) -> Vec { return -f.gradient(x); };
    return out;
}

DiscreteMap gradient_descent(const Objective& f, double gamma) {
    return euler(gradient_flow(f), gamma);
}

VectorField saddle_flow(const SaddleObjective& f) {
    if (f.smoothness != Smoothness::differentiable) {
        throw std::invalid_argument(
            "saddle_flow: objective is subdifferentiable; use primal_dual_subgradient");
    }
    VectorField out;
    out.dim = f.dim;
    out.field = [f](const Vec& x) {
        Vec g = f.gradient(x);
        for (int i = 0; i < f.dim; ++i) {
            if (f.labels[static_cast<size_t>(i)] == VarLabel::convex) g[i] = -g[i];
        }
        return g;
    };
    return out;
}

DiscreteMap gradient_ascent_descent(const SaddleObjective& f, double gamma) {
    return euler(saddle_flow(f), gamma);
}

SelectorField subgradient_flow(const Objective& f) {
    SelectorField out;
    out.dim = f.dim;
    out.select = [f](const Vec& x, std::uint64_t) -> Vec { return -f.gradient(x); };
    return out;
}

SelectorField supergradient_flow(const Objective& f) {
    SelectorField out;
    out.dim = f.dim;
    out.select = [f](const Vec& x, std::uint64_t) -> Vec { return f.gradient(x); };
    return out;
}

SelectorField primal_dual_subgradient(const SaddleObjective& f) {
    SelectorField out;
    out.dim = f.dim;
    out.select = [f](const Vec& x, std::uint64_t) {
        Vec g = f.gradient(x);
        for (int i = 0; i < f.dim; ++i) {
            if (f.labels[static_cast<size_t>(i)] == VarLabel::convex) g[i] = -g[i];
        }
        return g;
    };
    return out;
}

OpenObject<DiscreteMap> generate_solver(const Uwd& diagram,
                                        const std::vector<OpenObject<Objective>>& objectives,
                                        double gamma, ComposeGlue* glue_out) {
    std::vector<OpenObject<DiscreteMap>> systems;
    systems.reserve(objectives.size());
    for (const auto& o : objectives) {
        systems.push_back({o.domain_size, gradient_descent(o.payload, gamma), o.port_map});
    }
    return oapply(DiscreteMapAlgebra{}, diagram, systems, glue_out);
}

namespace {

struct SplitCoords {
    std::vector<int> shared;
    std::vector<int> inner;
};

SplitCoords split_coords(int dim, const std::vector<int>& shared_coords) {
    std::vector<bool> is_shared(static_cast<size_t>(dim), false);
    for (int c : shared_coords) {
        if (c < 0 || c >= dim) {
            throw std::invalid_argument("make_inf_objective: coordinate " + std::to_string(c) +
                                        " outside [0," + std::to_string(dim) + ")");
        }
        if (is_shared[static_cast<size_t>(c)]) {
            throw std::invalid_argument("make_inf_objective: duplicate coordinate " +
                                        std::to_string(c));
        }
        is_shared[static_cast<size_t>(c)] = true;
    }
    SplitCoords s;
    s.shared = shared_coords;
    for (int c = 0; c < dim; ++c) {
        if (!is_shared[static_cast<size_t>(c)]) s.inner.push_back(c);
    }
    return s;
}

}  // namespace

Objective make_inf_objective(const Objective& f, const std::vector<int>& shared_coords,
                             InnerSolve opts) {
    const SplitCoords coords = split_coords(f.dim, shared_coords);

    auto embed = [coords](const Vec& w, const Vec& xi) {
        Vec z(static_cast<Eigen::Index>(coords.shared.size() + coords.inner.size()));
        for (size_t k = 0; k < coords.shared.size(); ++k) z[coords.shared[k]] = w[static_cast<Eigen::Index>(k)];
        for (size_t k = 0; k < coords.inner.size(); ++k) z[coords.inner[k]] = xi[static_cast<Eigen::Index>(k)];
        return z;
    };
    auto solve_inner = [f, coords, opts, embed](const Vec& w) -> Vec {
        if (opts.argmin) return opts.argmin(w);
        Vec xi = Vec::Zero(static_cast<Eigen::Index>(coords.inner.size()));
        for (int it = 0; it < opts.max_iters; ++it) {
            const Vec g_full = f.gradient(embed(w, xi));
            Vec g(xi.size());
            for (size_t k = 0; k < coords.inner.size(); ++k) g[static_cast<Eigen::Index>(k)] = g_full[coords.inner[k]];
            if (g.norm() <= opts.grad_tol) return xi;
            xi -= opts.gamma * g;
        }
        throw std::runtime_error("make_inf_objective: inner solve did not reach gradient norm " +
                                 std::to_string(opts.grad_tol) + " in " +
                                 std::to_string(opts.max_iters) + " iterations");
    };

    Objective out;
    out.dim = static_cast<int>(coords.shared.size());
    out.smoothness = f.smoothness;
    out.value = [f, embed, solve_inner](const Vec& w) { return f.value(embed(w, solve_inner(w))); };
    out.gradient = [f, coords, embed, solve_inner](const Vec& w) {
        const Vec g_full = f.gradient(embed(w, solve_inner(w)));
        Vec g(static_cast<Eigen::Index>(coords.shared.size()));
        for (size_t k = 0; k < coords.shared.size(); ++k) g[static_cast<Eigen::Index>(k)] = g_full[coords.shared[k]];
        return g;
    };
    return out;
}

}  // namespace compopt
