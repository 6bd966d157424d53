#pragma once

#include <concepts>
#include <stdexcept>
#include <string>
#include <vector>

#include "compopt/finset.hpp"
#include "compopt/uwd.hpp"

namespace compopt {

/// A payload together with the map attaching a box's ports to the payload's
/// coordinate set. The payload's domain may be larger than the port set;
/// unmapped coordinates are private state.
template <class T>
struct OpenObject {
    int domain_size = 0;
    T payload;
    FinFunction port_map;  // box ports -> payload domain
};

/// A finset algebra: the minimal data generating UWD composition. `act`
/// transports a payload along a map of coordinate sets, `combine` forms the
/// disjoint union of payloads (left-associated fold of the binary product),
/// `unit` is the empty payload.
template <class A>
concept finset_algebra = requires(const A& alg, const typename A::Payload& p,
                                  const FinFunction& phi,
                                  const std::vector<typename A::Payload>& ps) {
    { alg.dimension(p) } -> std::convertible_to<int>;
    { alg.act(phi, p) } -> std::convertible_to<typename A::Payload>;
    { alg.combine(ps) } -> std::convertible_to<typename A::Payload>;
    { alg.unit() } -> std::convertible_to<typename A::Payload>;
};

/// The gluing data behind one composition: the pushout of the stacked port
/// maps against the diagram's inner leg, plus each filler's offset into the
/// stacked domain. proj_domain maps stacked filler coordinates to the
/// composite domain; proj_junction maps diagram junctions there.
struct ComposeGlue {
    int apex_size = 0;
    FinFunction proj_domain;
    FinFunction proj_junction;
    std::vector<int> domain_offsets;
};

template <class T>
void check_oapply_arity(const Uwd& d, const std::vector<OpenObject<T>>& fillers) {
    auto bad = validate(d);
    if (!bad.empty()) throw std::invalid_argument("oapply: ill-formed diagram: " + bad.front());
    if (static_cast<int>(fillers.size()) != d.box_count()) {
        throw std::invalid_argument("oapply: " + std::to_string(fillers.size()) +
                                    " fillers for " + std::to_string(d.box_count()) + " boxes");
    }
    for (int i = 0; i < d.box_count(); ++i) {
        const auto& f = fillers[static_cast<size_t>(i)];
        if (f.port_map.dom_size() != d.box_ports[static_cast<size_t>(i)]) {
            throw std::invalid_argument("oapply: box " + std::to_string(i) + " has " +
                                        std::to_string(d.box_ports[static_cast<size_t>(i)]) +
                                        " ports, filler port map covers " +
                                        std::to_string(f.port_map.dom_size()));
        }
        if (f.port_map.codom_size() != f.domain_size) {
            throw std::invalid_argument("oapply: box " + std::to_string(i) +
                                        " port map targets a domain of size " +
                                        std::to_string(f.port_map.codom_size()) + ", payload domain is " +
                                        std::to_string(f.domain_size));
        }
    }
}

template <class T>
ComposeGlue compose_glue(const Uwd& d, const std::vector<OpenObject<T>>& fillers) {
    std::vector<FinFunction> port_maps;
    port_maps.reserve(fillers.size());
    ComposeGlue glue;
    int off = 0;
    for (const auto& f : fillers) {
        port_maps.push_back(f.port_map);
        glue.domain_offsets.push_back(off);
        off += f.domain_size;
    }
    const PushoutResult po = pushout(coproduct(port_maps), d.inner_map);
    glue.apex_size = po.apex_size;
    glue.proj_domain = po.proj_left;
    glue.proj_junction = po.proj_right;
    return glue;
}

/// Compose fillers along a diagram: stack the payloads, glue coordinates by
/// the pushout, and re-attach the outer ports. Fillers are never mutated.
template <finset_algebra A>
OpenObject<typename A::Payload> oapply(const A& alg, const Uwd& d,
                                       const std::vector<OpenObject<typename A::Payload>>& fillers,
                                       ComposeGlue* glue_out = nullptr) {
    check_oapply_arity(d, fillers);
    for (size_t i = 0; i < fillers.size(); ++i) {
        if (alg.dimension(fillers[i].payload) != fillers[i].domain_size) {
            throw std::invalid_argument("oapply: box " + std::to_string(i) +
                                        " payload dimension " +
                                        std::to_string(alg.dimension(fillers[i].payload)) +
                                        " != declared domain " + std::to_string(fillers[i].domain_size));
        }
    }
    const ComposeGlue glue = compose_glue(d, fillers);

    std::vector<typename A::Payload> payloads;
    payloads.reserve(fillers.size());
    for (const auto& f : fillers) payloads.push_back(f.payload);

    OpenObject<typename A::Payload> out;
    out.domain_size = glue.apex_size;
    out.payload = alg.act(glue.proj_domain, alg.combine(payloads));
    out.port_map = compose(d.outer_map, glue.proj_junction);
    if (glue_out) *glue_out = glue;
    return out;
}

}  // namespace compopt
