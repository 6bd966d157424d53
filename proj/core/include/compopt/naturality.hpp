#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "compopt/morphisms.hpp"
#include "compopt/opensys.hpp"
#include "compopt/rng.hpp"

namespace compopt {

struct NaturalityReport {
    double max_discrepancy = 0.0;
    double tolerance = 1e-9;
    bool pass = true;
    /// Max discrepancy over composite coordinates reached only from box i's
    /// private coordinates; blames a box when the square fails.
    std::vector<double> per_box_exclusive;
    int located_box = -1;
};

/// Commutation check for one square: compose-then-transform against
/// transform-then-compose, compared extensionally at the given points.
/// morph is called as morph(payload, box) with box = -1 for the composite;
/// eval as eval(transformed_payload, point) -> Vec.
template <class SrcAlg, class DstAlg, class Morph, class EvalFn>
NaturalityReport check_naturality(const SrcAlg& src, const DstAlg& dst, Morph&& morph,
                                  EvalFn&& eval, const Uwd& diagram,
                                  const std::vector<OpenObject<typename SrcAlg::Payload>>& fillers,
                                  const std::vector<Vec>& points, double tol = 1e-9) {
    ComposeGlue glue;
    const auto composite_problem = oapply(src, diagram, fillers, &glue);
    const auto via_composite = morph(composite_problem.payload, -1);

    std::vector<OpenObject<typename DstAlg::Payload>> transformed;
    transformed.reserve(fillers.size());
    for (size_t i = 0; i < fillers.size(); ++i) {
        transformed.push_back({fillers[i].domain_size,
                               morph(fillers[i].payload, static_cast<int>(i)),
                               fillers[i].port_map});
    }
    const auto via_parts = oapply(dst, diagram, transformed);

    NaturalityReport report;
    report.tolerance = tol;
    Vec coord_max = Vec::Zero(glue.apex_size);
    for (const Vec& x : points) {
        const Vec a = eval(via_composite, x);
        const Vec b = eval(via_parts.payload, x);
        const Vec d = (a - b).cwiseAbs();
        report.max_discrepancy = std::max(report.max_discrepancy, d.maxCoeff());
        coord_max = coord_max.cwiseMax(d);
    }
    report.pass = report.max_discrepancy <= tol;

    // Attribute coordinates owned by exactly one box.
    std::vector<int> owner(static_cast<size_t>(glue.apex_size), -2);  // -2 unseen, -1 shared
    for (size_t i = 0; i < fillers.size(); ++i) {
        for (int c = 0; c < fillers[i].domain_size; ++c) {
            const int a = glue.proj_domain(glue.domain_offsets[i] + c);
            if (owner[static_cast<size_t>(a)] == -2) {
                owner[static_cast<size_t>(a)] = static_cast<int>(i);
            } else if (owner[static_cast<size_t>(a)] != static_cast<int>(i)) {
                owner[static_cast<size_t>(a)] = -1;
            }
        }
    }
    report.per_box_exclusive.assign(fillers.size(), 0.0);
    for (int a = 0; a < glue.apex_size; ++a) {
        if (owner[static_cast<size_t>(a)] >= 0) {
            auto& slot = report.per_box_exclusive[static_cast<size_t>(owner[static_cast<size_t>(a)])];
            slot = std::max(slot, coord_max[a]);
        }
    }
    if (!report.pass) {
        double best = tol;
        for (size_t i = 0; i < report.per_box_exclusive.size(); ++i) {
            if (report.per_box_exclusive[i] > best) {
                best = report.per_box_exclusive[i];
                report.located_box = static_cast<int>(i);
            }
        }
    }
    return report;
}

inline auto eval_field() {
    return [](const VectorField& v, const Vec& x) { return v.field(x); };
}
inline auto eval_step() {
    return [](const DiscreteMap& v, const Vec& x) { return v.step(x); };
}
inline auto eval_select(std::uint64_t seed) {
    return [seed](const SelectorField& v, const Vec& x) { return v.select(x, seed); };
}

/// Random instances for the trajectory suites below.

struct RandomDiagramOptions {
    int max_boxes = 4;
    int max_junctions = 6;
    int max_ports_per_box = 3;
    int max_box_dim = 5;
    bool identity_port_maps = false;  // filler domain == ports
    bool typed = false;
};

/// Random diagram with every junction reached by at least one inner port.
Uwd random_diagram(Rng& rng, const RandomDiagramOptions& opt);

/// Random open positive-definite quadratic for box `b` of the diagram.
OpenObject<Objective> random_quadratic_filler(Rng& rng, const Uwd& d, int b, int max_dim);

/// Random open saddle quadratic whose labels come from the typed diagram.
OpenObject<SaddleObjective> random_saddle_filler(Rng& rng, const Uwd& d, int b);

/// Random open saddle objective mixing absolute-value and quadratic terms;
/// the gradient is the canonical subgradient selector (0 at kinks).
OpenObject<SaddleObjective> random_nonsmooth_saddle_filler(Rng& rng, const Uwd& d, int b);

/// Step size keeping descent trajectories of an affine-gradient composite
/// bounded: 1/(||H||_F + 1), capped at `cap`.
double stable_step_size(const std::function<Vec(const Vec&)>& grad, int dim, double cap);

struct SuiteOptions {
    int instances = 50;
    std::uint64_t seed = 1;
    int trajectory_steps = 100;
    double tol = 1e-9;
};

struct SuiteResult {
    std::string morphism;
    int instances = 0;
    double max_discrepancy = 0.0;
    bool pass = true;
    std::string detail;
};

/// Trajectory equality of descent on the composite problem against the
/// composite of per-box descent systems, over random diagrams.
SuiteResult run_descent_suite(const SuiteOptions& opt);

/// Same for ascent-descent on random typed diagrams.
SuiteResult run_ascent_descent_suite(const SuiteOptions& opt);

/// Same for the signed subgradient selection under fixed seed splitting;
/// also verifies every emitted direction against the sub/supergradient
/// inequality at sampled comparison points.
SuiteResult run_subgradient_suite(const SuiteOptions& opt, int inequality_samples = 100);

}  // namespace compopt
