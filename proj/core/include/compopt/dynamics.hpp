#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "compopt/freevect.hpp"
#include "compopt/opensys.hpp"
#include "compopt/rng.hpp"

namespace compopt {

/// Continuous dynamics dx/dt = field(x).
struct VectorField {
    int dim = 0;
    std::function<Vec(const Vec&)> field;
};

/// Discrete dynamics x_{k+1} = step(x_k).
struct DiscreteMap {
    int dim = 0;
    std::function<Vec(const Vec&)> step;
};

/// Non-deterministic dynamics represented by a measurable selection: select
/// returns one element of the direction set at x. The seed makes runs
/// reproducible; composition splits it per component with mix64, so
/// selectors derived from single-valued subgradient oracles may ignore it.
struct SelectorField {
    int dim = 0;
    std::function<Vec(const Vec&, std::uint64_t)> select;
};

/// Continuous systems: act conjugates by distribute/collect, so the change
/// of a shared coordinate is the sum of the incident subsystems' changes.
struct VectorFieldAlgebra {
    using Payload = VectorField;
    int dimension(const VectorField& v) const { return v.dim; }
    VectorField act(const FinFunction& phi, const VectorField& v) const;
    VectorField combine(const std::vector<VectorField>& vs) const;
    VectorField unit() const;
};

/// Discrete systems: act transports the state *increment* so fixed points
/// are preserved: step'(y) = y + push(step(pull y) - pull y).
struct DiscreteMapAlgebra {
    using Payload = DiscreteMap;
    int dimension(const DiscreteMap& v) const { return v.dim; }
    DiscreteMap act(const FinFunction& phi, const DiscreteMap& v) const;
    DiscreteMap combine(const std::vector<DiscreteMap>& vs) const;
    DiscreteMap unit() const;
};

/// Non-deterministic continuous systems. combine realizes the Minkowski sum
/// of direction sets as the stacked selection with child seeds
/// mix64(seed, i); act passes the seed through unchanged.
struct SelectorAlgebra {
    using Payload = SelectorField;
    int dimension(const SelectorField& v) const { return v.dim; }
    SelectorField act(const FinFunction& phi, const SelectorField& v) const;
    SelectorField combine(const std::vector<SelectorField>& vs) const;
    SelectorField unit() const;
};

/// Non-deterministic discrete systems (increment transport, as above).
struct DiscreteSelectorAlgebra {
    using Payload = SelectorField;
    int dimension(const SelectorField& v) const { return v.dim; }
    SelectorField act(const FinFunction& phi, const SelectorField& v) const;
    SelectorField combine(const std::vector<SelectorField>& vs) const;
    SelectorField unit() const;
};

/// Explicit Euler step map x + gamma * field(x). Fixed step size only.
DiscreteMap euler(const VectorField& v, double gamma);

/// Euler for selections: (x, seed) -> x + gamma * select(x, seed).
SelectorField euler_selector(const SelectorField& v, double gamma);

using StepVisitor = std::function<void(int step, const Vec& state)>;

/// Iterates the map for `steps` steps; result[0] == x0. Throws with the
/// offending step index if a non-finite state appears.
std::vector<Vec> simulate(const DiscreteMap& v, const Vec& x0, int steps);
void simulate(const DiscreteMap& v, const Vec& x0, int steps, const StepVisitor& visit);

/// Trajectory of a discrete selector; step k selects with seed mix64(seed, k).
std::vector<Vec> simulate(const SelectorField& v, const Vec& x0, int steps, std::uint64_t seed);
void simulate(const SelectorField& v, const Vec& x0, int steps, std::uint64_t seed,
              const StepVisitor& visit);

enum class ExecMode { serial, parallel };

/// Runs the composite of the subsystems over the diagram by message passing:
/// distribute the state to subsystems, step each (concurrently in parallel
/// mode, one barrier per round), and collect the increments. Serial mode
/// reproduces simulate() on the composed closure bit for bit.
std::vector<Vec> simulate_message_passing(const Uwd& diagram,
                                          const std::vector<OpenObject<DiscreteMap>>& subsystems,
                                          const Vec& x0, int steps,
                                          ExecMode mode = ExecMode::serial);

/// CSV dump with header step,x0,...,x{N-1}.
void write_trajectory_csv(std::ostream& os, const std::vector<Vec>& trajectory);

}  // namespace compopt
