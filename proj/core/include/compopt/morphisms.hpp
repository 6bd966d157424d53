#pragma once

#include <functional>
#include <vector>

#include "compopt/dynamics.hpp"
#include "compopt/problems.hpp"

namespace compopt {

/// Steepest-descent vector field x -> -grad f(x). Rejects subdifferentiable
/// objectives; use subgradient_flow for those.
VectorField gradient_flow(const Objective& f);

/// Fixed-step gradient descent x -> x - gamma * grad f(x). Built as the
/// Euler discretization of gradient_flow, so the two routes share their
/// floating-point operations exactly.
DiscreteMap gradient_descent(const Objective& f, double gamma);

/// Descent on convex-labelled coordinates, ascent on concave-labelled ones
/// (continuous form).
VectorField saddle_flow(const SaddleObjective& f);

/// Discrete ascent-descent: x_i -> x_i -+ gamma * grad(x)_i by label.
DiscreteMap gradient_ascent_descent(const SaddleObjective& f, double gamma);

/// x -> -(subgradient of f at x), as a selection. The objective's oracle
/// supplies the choice at nondifferentiable points.
SelectorField subgradient_flow(const Objective& f);

/// x -> +(supergradient of f at x) for concave objectives.
SelectorField supergradient_flow(const Objective& f);

/// Signed selection for saddle objectives: minus the subgradient on
/// convex-labelled coordinates, plus the supergradient on concave ones.
SelectorField primal_dual_subgradient(const SaddleObjective& f);

/// Builds the message-passing minimizer for a composite problem: descent
/// maps for every subproblem, composed over the diagram.
OpenObject<DiscreteMap> generate_solver(const Uwd& diagram,
                                        const std::vector<OpenObject<Objective>>& objectives,
                                        double gamma, ComposeGlue* glue_out = nullptr);

/// Inner minimization used to build decomposition subproblems.
struct InnerSolve {
    double gamma = 0.05;
    double grad_tol = 1e-10;
    int max_iters = 100000;
    /// Optional closed-form minimizer: shared block -> inner block optimum.
    std::function<Vec(const Vec&)> argmin;
};

/// Partial minimization g(w) = inf over the non-shared coordinates of f.
/// shared_coords lists f's coordinates kept as g's arguments, in order.
/// eval runs the inner solve (nested descent unless opts.argmin is given);
/// grad returns the shared block of f's gradient at the inner optimum.
/// Strict convexity of f in the inner block is the caller's obligation.
Objective make_inf_objective(const Objective& f, const std::vector<int>& shared_coords,
                             InnerSolve opts = {});

}  // namespace compopt
