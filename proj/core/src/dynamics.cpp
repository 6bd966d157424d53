#include "compopt/dynamics.hpp"

#include <ostream>
#include <stdexcept>
#include <thread>

namespace compopt {

namespace {

void check_dim(const char* who, int expected, int got) {
    if (expected != got) {
        throw std::invalid_argument(std::string(who) + ": map domain " + std::to_string(got) +
                                    " != system dimension " + std::to_string(expected));
    }
}

void check_gamma(double gamma) {
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("euler: step size must be positive, got " +
                                    std::to_string(gamma));
    }
}

struct BlockLayout {
    std::vector<int> offsets;
    std::vector<int> dims;
    int total = 0;
};

template <class S>
BlockLayout layout_of(const std::vector<S>& vs) {
    BlockLayout b;
    for (const auto& v : vs) {
        b.offsets.push_back(b.total);
        b.dims.push_back(v.dim);
        b.total += v.dim;
    }
    return b;
}

}  // namespace

VectorField VectorFieldAlgebra::act(const FinFunction& phi, const VectorField& v) const {
    check_dim("VectorFieldAlgebra::act", v.dim, phi.dom_size());
    VectorField out;
    out.dim = phi.codom_size();
    out.field = [phi, v](const Vec& y) {
        return pushforward_apply(phi, v.field(pullback_apply(phi, y)));
    };
    return out;
}

VectorField VectorFieldAlgebra::combine(const std::vector<VectorField>& vs) const {
    const BlockLayout b = layout_of(vs);
    VectorField out;
    out.dim = b.total;
    out.field = [vs, b](const Vec& x) {
        Vec r(b.total);
        for (size_t i = 0; i < vs.size(); ++i) {
            r.segment(b.offsets[i], b.dims[i]) = vs[i].field(x.segment(b.offsets[i], b.dims[i]));
        }
        return r;
    };
    return out;
}

VectorField VectorFieldAlgebra::unit() const {
    return VectorField{0, [](const Vec&) { return Vec(0); }};
}

DiscreteMap DiscreteMapAlgebra::act(const FinFunction& phi, const DiscreteMap& v) const {
    check_dim("DiscreteMapAlgebra::act", v.dim, phi.dom_size());
    DiscreteMap out;
    out.dim = phi.codom_size();
    out.step = [phi, v](const Vec& y) -> Vec {
        const Vec t = pullback_apply(phi, y);
        const Vec delta = v.step(t) - t;
        return y + pushforward_apply(phi, delta);
    };
    return out;
}

DiscreteMap DiscreteMapAlgebra::combine(const std::vector<DiscreteMap>& vs) const {
    const BlockLayout b = layout_of(vs);
    DiscreteMap out;
    out.dim = b.total;
    out.step = [vs, b](const Vec& x) {
        Vec r(b.total);
        for (size_t i = 0; i < vs.size(); ++i) {
            r.segment(b.offsets[i], b.dims[i]) = vs[i].step(x.segment(b.offsets[i], b.dims[i]));
        }
        return r;
    };
    return out;
}

DiscreteMap DiscreteMapAlgebra::unit() const {
    return DiscreteMap{0, [](const Vec&) { return Vec(0); }};
}

SelectorField SelectorAlgebra::act(const FinFunction& phi, const SelectorField& v) const {
    check_dim("SelectorAlgebra::act", v.dim, phi.dom_size());
    SelectorField out;
    out.dim = phi.codom_size();
    out.select = [phi, v](const Vec& y, std::uint64_t seed) {
        return pushforward_apply(phi, v.select(pullback_apply(phi, y), seed));
    };
    return out;
}

SelectorField SelectorAlgebra::combine(const std::vector<SelectorField>& vs) const {
    const BlockLayout b = layout_of(vs);
    SelectorField out;
    out.dim = b.total;
    out.select = [vs, b](const Vec& x, std::uint64_t seed) {
        Vec r(b.total);
        for (size_t i = 0; i < vs.size(); ++i) {
            r.segment(b.offsets[i], b.dims[i]) =
                vs[i].select(x.segment(b.offsets[i], b.dims[i]), mix64(seed, i));
        }
        return r;
    };
    return out;
}

SelectorField SelectorAlgebra::unit() const {
    return SelectorField{0, [](const Vec&, std::uint64_t) { return Vec(0); }};
}

SelectorField DiscreteSelectorAlgebra::act(const FinFunction& phi, const SelectorField& v) const {
    check_dim("DiscreteSelectorAlgebra::act", v.dim, phi.dom_size());
    SelectorField out;
    out.dim = phi.codom_size();
    out.select = [phi, v](const Vec& y, std::uint64_t seed) -> Vec {
        const Vec t = pullback_apply(phi, y);
        const Vec delta = v.select(t, seed) - t;
        return y + pushforward_apply(phi, delta);
    };
    return out;
}

SelectorField DiscreteSelectorAlgebra::combine(const std::vector<SelectorField>& vs) const {
    return SelectorAlgebra{}.combine(vs);
}

SelectorField DiscreteSelectorAlgebra::unit() const {
    return SelectorAlgebra{}.unit();
}

DiscreteMap euler(const VectorField& v, double gamma) {
    check_gamma(gamma);
    DiscreteMap out;
    out.dim = v.dim;
    out.step = [v, gamma](const Vec& x) -> Vec { return x + gamma * v.field(x); };
    return out;
}

SelectorField euler_selector(const SelectorField& v, double gamma) {
    check_gamma(gamma);
    SelectorField out;
    out.dim = v.dim;
    out.select = [v, gamma](const Vec& x, std::uint64_t seed) -> Vec {
        return x + gamma * v.select(x, seed);
    };
    return out;
}

namespace {

void check_state(const Vec& x, int step) {
    if (!x.allFinite()) {
        throw std::runtime_error("simulate: non-finite state at step " + std::to_string(step));
    }
}

void check_x0(const DiscreteMap& v, const Vec& x0, int steps) {
    if (x0.size() != v.dim) {
        throw std::invalid_argument("simulate: initial state dimension " +
                                    std::to_string(x0.size()) + " != system dimension " +
                                    std::to_string(v.dim));
    }
    if (steps < 0) throw std::invalid_argument("simulate: negative step count");
}

}  // namespace

void simulate(const DiscreteMap& v, const Vec& x0, int steps, const StepVisitor& visit) {
    check_x0(v, x0, steps);
    Vec x = x0;
    check_state(x, 0);
    visit(0, x);
    for (int k = 1; k <= steps; ++k) {
        x = v.step(x);
        check_state(x, k);
        visit(k, x);
    }
}

std::vector<Vec> simulate(const DiscreteMap& v, const Vec& x0, int steps) {
    std::vector<Vec> out;
    out.reserve(static_cast<size_t>(steps) + 1);
    simulate(v, x0, steps, [&](int, const Vec& x) { out.push_back(x); });
    return out;
}

void simulate(const SelectorField& v, const Vec& x0, int steps, std::uint64_t seed,
              const StepVisitor& visit) {
    if (x0.size() != v.dim) {
        throw std::invalid_argument("simulate: initial state dimension " +
                                    std::to_string(x0.size()) + " != system dimension " +
                                    std::to_string(v.dim));
    }
    if (steps < 0) throw std::invalid_argument("simulate: negative step count");
    Vec x = x0;
    check_state(x, 0);
    visit(0, x);
    for (int k = 1; k <= steps; ++k) {
        x = v.select(x, mix64(seed, static_cast<std::uint64_t>(k - 1)));
        check_state(x, k);
        visit(k, x);
    }
}

std::vector<Vec> simulate(const SelectorField& v, const Vec& x0, int steps, std::uint64_t seed) {
    std::vector<Vec> out;
    out.reserve(static_cast<size_t>(steps) + 1);
    simulate(v, x0, steps, seed, [&](int, const Vec& x) { out.push_back(x); });
    return out;
}

std::vector<Vec> simulate_message_passing(const Uwd& diagram,
                                          const std::vector<OpenObject<DiscreteMap>>& subsystems,
                                          const Vec& x0, int steps, ExecMode mode) {
    check_oapply_arity(diagram, subsystems);
    const ComposeGlue glue = compose_glue(diagram, subsystems);
    if (x0.size() != glue.apex_size) {
        throw std::invalid_argument("simulate_message_passing: composite state dimension is " +
                                    std::to_string(glue.apex_size) + ", initial state has " +
                                    std::to_string(x0.size()));
    }
    if (steps < 0) throw std::invalid_argument("simulate_message_passing: negative step count");

    const FinFunction& p = glue.proj_domain;
    const auto& off = glue.domain_offsets;
    const size_t n = subsystems.size();

    std::vector<Vec> out;
    out.reserve(static_cast<size_t>(steps) + 1);
    Vec x = x0;
    check_state(x, 0);
    out.push_back(x);
    for (int k = 1; k <= steps; ++k) {
        const Vec t = pullback_apply(p, x);  // distribute
        Vec stepped(t.size());
        auto run_box = [&](size_t i) {
            stepped.segment(off[i], subsystems[i].domain_size) =
                subsystems[i].payload.step(t.segment(off[i], subsystems[i].domain_size));
        };
        if (mode == ExecMode::parallel && n > 1) {
            std::vector<std::thread> workers;
            workers.reserve(n);
            for (size_t i = 0; i < n; ++i) workers.emplace_back(run_box, i);
            for (auto& w : workers) w.join();  // one barrier per round
        } else {
            for (size_t i = 0; i < n; ++i) run_box(i);
        }
        const Vec delta = stepped - t;
        x = x + pushforward_apply(p, delta);  // collect
        check_state(x, k);
        out.push_back(x);
    }
    return out;
}

void write_trajectory_csv(std::ostream& os, const std::vector<Vec>& trajectory) {
    const Eigen::Index dim = trajectory.empty() ? 0 : trajectory.front().size();
    os << "step";
    for (Eigen::Index i = 0; i < dim; ++i) os << ",x" << i;
    os << "\n";
    os.precision(17);
    for (size_t k = 0; k < trajectory.size(); ++k) {
        os << k;
        for (Eigen::Index i = 0; i < dim; ++i) os << "," << trajectory[k][i];
        os << "\n";
    }
}

}  // namespace compopt
