#pragma once

#include <functional>
#include <string>
#include <vector>

#include "compopt/freevect.hpp"
#include "compopt/labels.hpp"
#include "compopt/opensys.hpp"

namespace compopt {

enum class Smoothness { differentiable, subdifferentiable };

/// An objective with a first-order oracle. For subdifferentiable objectives
/// the gradient is a single-valued subgradient selector; its choice at
/// nondifferentiable points is the caller's (e.g. 0 for |x| at 0).
/// Convexity cannot be decided from oracles and is a caller obligation;
/// spot checks are available below.
struct Objective {
    int dim = 0;
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    Smoothness smoothness = Smoothness::differentiable;
};

/// An objective convex in its convex-labelled coordinates and concave in
/// its concave-labelled ones, for fixed values of the other block.
struct SaddleObjective {
    int dim = 0;
    LabelVec labels;
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;
    Smoothness smoothness = Smoothness::differentiable;
};

/// Problems compose by summing objectives over shared coordinates:
/// act precomposes with the pullback and pushes the gradient forward
/// (chain rule), combine sums over coordinate blocks.
struct ObjectiveAlgebra {
    using Payload = Objective;
    int dimension(const Objective& f) const { return f.dim; }
    Objective act(const FinFunction& phi, const Objective& f) const;
    Objective combine(const std::vector<Objective>& fs) const;
    Objective unit() const;
};

/// Typed variant: coordinates carry convex/concave labels and every map
/// must preserve them. act infers target labels by transport and rejects
/// maps whose target has a coordinate no source coordinate reaches; use
/// the explicit-label overload for those.
struct SaddleAlgebra {
    using Payload = SaddleObjective;
    int dimension(const SaddleObjective& f) const { return f.dim; }
    SaddleObjective act(const FinFunction& phi, const SaddleObjective& f) const;
    SaddleObjective act(const FinFunction& phi, const LabelVec& target_labels,
                        const SaddleObjective& f) const;
    SaddleObjective combine(const std::vector<SaddleObjective>& fs) const;
    SaddleObjective unit() const;
};

/// Label-aware composition: junction labels of a typed diagram and payload
/// labels are transported to the composite; any disagreement is rejected
/// naming the offending junction. For untyped diagrams every composite
/// coordinate must be reachable from some payload coordinate.
OpenObject<SaddleObjective> oapply(const SaddleAlgebra& alg, const Uwd& d,
                                   const std::vector<OpenObject<SaddleObjective>>& fillers,
                                   ComposeGlue* glue_out = nullptr);

/// Quadratic form 0.5 x'Px + q'x with exact gradient 0.5(P+P')x + q.
Objective quadratic_objective(const Mat& P, const Vec& q);

/// JSON form {"P": [[...]], "q": [...]} used by the CLI and tests.
Objective objective_from_json(const std::string& text);
std::string quadratic_to_json(const Mat& P, const Vec& q);

/// Midpoint Jensen spot check at sampled pairs; returns the number of
/// violations beyond tol. Opt-in strictness, not a decision procedure.
int convexity_violations(const Objective& f, const std::vector<std::pair<Vec, Vec>>& pairs,
                         double tol = 1e-9);

/// Saddle spot check: Jensen on the convex-labelled block with the concave
/// block fixed and vice versa, at t in {0.25, 0.5, 0.75}.
int saddle_violations(const SaddleObjective& f, const std::vector<std::pair<Vec, Vec>>& pairs,
                      double tol = 1e-9);

/// Forgets labels; the underlying objective data is unchanged.
Objective forget_labels(const SaddleObjective& f);

/// All-convex (or all-concave) labelling of a plain objective.
SaddleObjective with_uniform_label(const Objective& f, VarLabel label);

}  // namespace compopt
