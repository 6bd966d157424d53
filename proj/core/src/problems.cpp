#include "compopt/problems.hpp"

#include <stdexcept>

#include "json.hpp"

namespace compopt {

namespace {

Smoothness combined_smoothness(const std::vector<Objective>& fs) {
    for (const auto& f : fs) {
        if (f.smoothness == Smoothness::subdifferentiable) return Smoothness::subdifferentiable;
    }
    return Smoothness::differentiable;
}

}  // namespace

Objective ObjectiveAlgebra::act(const FinFunction& phi, const Objective& f) const {
    if (phi.dom_size() != f.dim) {
        throw std::invalid_argument("ObjectiveAlgebra::act: map domain " +
                                    std::to_string(phi.dom_size()) + " != objective dimension " +
                                    std::to_string(f.dim));
    }
    Objective out;
    out.dim = phi.codom_size();
    out.smoothness = f.smoothness;
    out.value = [phi, f](const Vec& y) { return f.value(pullback_apply(phi, y)); };
    out.gradient = [phi, f](const Vec& y) {
        return pushforward_apply(phi, f.gradient(pullback_apply(phi, y)));
    };
    return out;
}

Objective ObjectiveAlgebra::combine(const std::vector<Objective>& fs) const {
    Objective out;
    out.smoothness = combined_smoothness(fs);
    std::vector<int> offsets;
    int dim = 0;
    for (const auto& f : fs) {
        offsets.push_back(dim);
        dim += f.dim;
    }
    out.dim = dim;
    out.value = [fs, offsets](const Vec& z) {
        double v = 0.0;
        for (size_t i = 0; i < fs.size(); ++i) {
            v += fs[i].value(z.segment(offsets[i], fs[i].dim));
        }
        return v;
    };
    out.gradient = [fs, offsets, dim](const Vec& z) {
        Vec g(dim);
        for (size_t i = 0; i < fs.size(); ++i) {
            g.segment(offsets[i], fs[i].dim) = fs[i].gradient(z.segment(offsets[i], fs[i].dim));
        }
        return g;
    };
    return out;
}

Objective ObjectiveAlgebra::unit() const {
    Objective out;
    out.dim = 0;
    out.value = [](const Vec&) { return 0.0; };
    out.gradient = [](const Vec&) { return Vec(0); };
    return out;
}

SaddleObjective SaddleAlgebra::act(const FinFunction& phi, const SaddleObjective& f) const {
    LabelVec target(static_cast<size_t>(phi.codom_size()), VarLabel::convex);
    std::vector<bool> set(static_cast<size_t>(phi.codom_size()), false);
    for (int i = 0; i < phi.dom_size(); ++i) {
        const VarLabel l = f.labels[static_cast<size_t>(i)];
        const int j = phi(i);
        if (set[static_cast<size_t>(j)] && target[static_cast<size_t>(j)] != l) {
            throw std::invalid_argument("SaddleAlgebra::act: label mismatch at coordinate " +
                                        std::to_string(j));
        }
        target[static_cast<size_t>(j)] = l;
        set[static_cast<size_t>(j)] = true;
    }
    for (int j = 0; j < phi.codom_size(); ++j) {
        if (!set[static_cast<size_t>(j)]) {
            throw std::invalid_argument("SaddleAlgebra::act: cannot infer label for coordinate " +
                                        std::to_string(j) + "; pass target labels explicitly");
        }
    }
    return act(phi, target, f);
}

SaddleObjective SaddleAlgebra::act(const FinFunction& phi, const LabelVec& target_labels,
                                   const SaddleObjective& f) const {
    if (phi.dom_size() != f.dim) {
        throw std::invalid_argument("SaddleAlgebra::act: map domain " +
                                    std::to_string(phi.dom_size()) + " != objective dimension " +
                                    std::to_string(f.dim));
    }
    if (static_cast<int>(target_labels.size()) != phi.codom_size()) {
        throw std::invalid_argument("SaddleAlgebra::act: target label count mismatch");
    }
    for (int i = 0; i < phi.dom_size(); ++i) {
        if (f.labels[static_cast<size_t>(i)] != target_labels[static_cast<size_t>(phi(i))]) {
            throw std::invalid_argument("SaddleAlgebra::act: map does not preserve labels at coordinate " +
                                        std::to_string(phi(i)));
        }
    }
    SaddleObjective out;
    out.dim = phi.codom_size();
    out.labels = target_labels;
    out.smoothness = f.smoothness;
    out.value = [phi, f](const Vec& y) { return f.value(pullback_apply(phi, y)); };
    out.gradient = [phi, f](const Vec& y) {
        return pushforward_apply(phi, f.gradient(pullback_apply(phi, y)));
    };
    return out;
}

SaddleObjective SaddleAlgebra::combine(const std::vector<SaddleObjective>& fs) const {
    std::vector<Objective> plain;
    plain.reserve(fs.size());
    for (const auto& f : fs) plain.push_back(forget_labels(f));
    const Objective summed = ObjectiveAlgebra{}.combine(plain);

    SaddleObjective out;
    out.dim = summed.dim;
    out.value = summed.value;
    out.gradient = summed.gradient;
    out.smoothness = summed.smoothness;
    for (const auto& f : fs) out.labels.insert(out.labels.end(), f.labels.begin(), f.labels.end());
    return out;
}

SaddleObjective SaddleAlgebra::unit() const {
    return with_uniform_label(ObjectiveAlgebra{}.unit(), VarLabel::convex);
}

OpenObject<SaddleObjective> oapply(const SaddleAlgebra& alg, const Uwd& d,
                                   const std::vector<OpenObject<SaddleObjective>>& fillers,
                                   ComposeGlue* glue_out) {
    check_oapply_arity(d, fillers);
    for (size_t i = 0; i < fillers.size(); ++i) {
        if (alg.dimension(fillers[i].payload) != fillers[i].domain_size ||
            static_cast<int>(fillers[i].payload.labels.size()) != fillers[i].domain_size) {
            throw std::invalid_argument("oapply(Saddle): box " + std::to_string(i) +
                                        " payload dimension or label count != declared domain");
        }
    }
    const ComposeGlue glue = compose_glue(d, fillers);

    // Transport labels to the composite; every disagreement names a junction.
    LabelVec apex_labels(static_cast<size_t>(glue.apex_size), VarLabel::convex);
    std::vector<bool> set(static_cast<size_t>(glue.apex_size), false);
    auto junction_of = [&](int apex_coord) {
        for (int j = 0; j < d.junctions; ++j) {
            if (glue.proj_junction(j) == apex_coord) return j;
        }
        return -1;
    };
    auto assign = [&](int apex_coord, VarLabel l) {
        if (set[static_cast<size_t>(apex_coord)] && apex_labels[static_cast<size_t>(apex_coord)] != l) {
            throw std::invalid_argument("oapply(Saddle): label mismatch at junction " +
                                        std::to_string(junction_of(apex_coord)));
        }
        apex_labels[static_cast<size_t>(apex_coord)] = l;
        set[static_cast<size_t>(apex_coord)] = true;
    };
    for (size_t i = 0; i < fillers.size(); ++i) {
        const int off = glue.domain_offsets[i];
        for (int c = 0; c < fillers[i].domain_size; ++c) {
            assign(glue.proj_domain(off + c), fillers[i].payload.labels[static_cast<size_t>(c)]);
        }
    }
    if (d.typed()) {
        for (int j = 0; j < d.junctions; ++j) {
            assign(glue.proj_junction(j), (*d.junction_labels)[static_cast<size_t>(j)]);
        }
    }
    for (int a = 0; a < glue.apex_size; ++a) {
        if (!set[static_cast<size_t>(a)]) {
            throw std::invalid_argument(
                "oapply(Saddle): junction " + std::to_string(junction_of(a)) +
                " reaches no labelled coordinate; type the diagram to label it");
        }
    }

    std::vector<SaddleObjective> payloads;
    payloads.reserve(fillers.size());
    for (const auto& f : fillers) payloads.push_back(f.payload);

    OpenObject<SaddleObjective> out;
    out.domain_size = glue.apex_size;
    out.payload = alg.act(glue.proj_domain, apex_labels, alg.combine(payloads));
    out.port_map = compose(d.outer_map, glue.proj_junction);
    if (glue_out) *glue_out = glue;
    return out;
}

Objective quadratic_objective(const Mat& P, const Vec& q) {
    if (P.rows() != P.cols() || P.rows() != q.size()) {
        throw std::invalid_argument("quadratic_objective: P must be square and match q");
    }
    Objective out;
    out.dim = static_cast<int>(q.size());
    const Mat H = 0.5 * (P + P.transpose());
    out.value = [P, q](const Vec& x) { return 0.5 * x.dot(P * x) + q.dot(x); };
    out.gradient = [H, q](const Vec& x) -> Vec { return H * x + q; };
    return out;
}

Objective objective_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const auto rows = j.at("P").get<std::vector<std::vector<double>>>();
    const auto qv = j.at("q").get<std::vector<double>>();
    const int n = static_cast<int>(qv.size());
    if (static_cast<int>(rows.size()) != n) {
        throw std::invalid_argument("objective_from_json: P and q dimensions differ");
    }
    Mat P(n, n);
    for (int r = 0; r < n; ++r) {
        if (static_cast<int>(rows[static_cast<size_t>(r)].size()) != n) {
            throw std::invalid_argument("objective_from_json: P is not square");
        }
        for (int c = 0; c < n; ++c) P(r, c) = rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
    }
    Vec q(n);
    for (int r = 0; r < n; ++r) q[r] = qv[static_cast<size_t>(r)];
    return quadratic_objective(P, q);
}

std::string quadratic_to_json(const Mat& P, const Vec& q) {
    nlohmann::json j;
    std::vector<std::vector<double>> rows;
    for (Eigen::Index r = 0; r < P.rows(); ++r) {
        std::vector<double> row;
        for (Eigen::Index c = 0; c < P.cols(); ++c) row.push_back(P(r, c));
        rows.push_back(std::move(row));
    }
    j["P"] = rows;
    j["q"] = std::vector<double>(q.data(), q.data() + q.size());
    return j.dump();
}

int convexity_violations(const Objective& f, const std::vector<std::pair<Vec, Vec>>& pairs,
                         double tol) {
    int bad = 0;
    for (const auto& [x, y] : pairs) {
        const Vec mid = 0.5 * (x + y);
        if (f.value(mid) > 0.5 * (f.value(x) + f.value(y)) + tol) ++bad;
    }
    return bad;
}

int saddle_violations(const SaddleObjective& f, const std::vector<std::pair<Vec, Vec>>& pairs,
                      double tol) {
    int bad = 0;
    const double ts[] = {0.25, 0.5, 0.75};
    for (const auto& [x, y] : pairs) {
        for (double t : ts) {
            // Blend the convex block with the concave block held at x's values:
            // value must lie below the chord. Dually for the concave block.
            Vec cvx_blend = x, ccv_blend = x;
            Vec cvx_a = x, cvx_b = x, ccv_a = x, ccv_b = x;
            for (int i = 0; i < f.dim; ++i) {
                if (f.labels[static_cast<size_t>(i)] == VarLabel::convex) {
                    cvx_blend[i] = t * x[i] + (1 - t) * y[i];
                    cvx_b[i] = y[i];
                } else {
                    ccv_blend[i] = t * x[i] + (1 - t) * y[i];
                    ccv_b[i] = y[i];
                }
            }
            if (f.value(cvx_blend) > t * f.value(cvx_a) + (1 - t) * f.value(cvx_b) + tol) ++bad;
            if (f.value(ccv_blend) < t * f.value(ccv_a) + (1 - t) * f.value(ccv_b) - tol) ++bad;
        }
    }
    return bad;
}

Objective forget_labels(const SaddleObjective& f) {
    Objective out;
    out.dim = f.dim;
    out.value = f.value;
    out.gradient = f.gradient;
    out.smoothness = f.smoothness;
    return out;
}

SaddleObjective with_uniform_label(const Objective& f, VarLabel label) {
    SaddleObjective out;
    out.dim = f.dim;
    out.labels.assign(static_cast<size_t>(f.dim), label);
    out.value = f.value;
    out.gradient = f.gradient;
    out.smoothness = f.smoothness;
    return out;
}

}  // namespace compopt
