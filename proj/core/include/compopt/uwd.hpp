#pragma once

#include <optional>
#include <string>
#include <vector>

#include "compopt/finset.hpp"
#include "compopt/labels.hpp"

namespace compopt {

/// An undirected wiring diagram: inner boxes with ports, a junction set,
/// and the two legs of the cospan  (total inner ports) -> J <- (outer ports).
/// junction_labels, when present, type the diagram for saddle composition.
struct Uwd {
    std::vector<int> box_ports;
    int junctions = 0;
    FinFunction inner_map;  // total inner ports -> junctions
    FinFunction outer_map;  // outer ports -> junctions
    std::optional<LabelVec> junction_labels;

    int box_count() const { return static_cast<int>(box_ports.size()); }
    int total_inner_ports() const;
    int outer_ports() const { return outer_map.dom_size(); }
    bool typed() const { return junction_labels.has_value(); }

    /// Offset of box b's first port in the concatenated inner port set.
    int port_offset(int b) const;

    Cospan cospan() const { return Cospan(inner_map, outer_map); }

    /// One box with n ports, junctions = outer ports = n, both legs identities.
    static Uwd identity(int n);
};

/// Structural lint: empty iff all type invariants hold. Reports, never throws.
std::vector<std::string> validate(const Uwd& d);

/// Operadic substitution: plug fillers[i] into box i of target. Junctions are
/// glued by pushout of (coproduct of filler outer maps) against the target's
/// inner map; the composite boxes are the fillers' boxes concatenated in
/// order. Throws on arity mismatch or (typed case) label mismatch.
Uwd substitute(const Uwd& target, const std::vector<Uwd>& fillers);

/// Reorder boxes by perm (box i of the result is box perm[i] of the input).
Uwd permute_boxes(const Uwd& d, const std::vector<int>& perm);

/// Renumber junctions by first appearance scanning inner_map then outer_map;
/// junctions referenced by no port are appended in their original order.
Uwd canonicalize_junctions(const Uwd& d);

/// Search-based isomorphism-up-to-junction-relabeling for small diagrams.
/// Box order and port counts must match exactly.
bool iso_check(const Uwd& a, const Uwd& b);

/// JSON interchange:
///   {"boxes":[2,3,3],"junctions":5,"inner_map":[...],"outer_map":[...],
///    "labels":["cx","cc",...]?}
Uwd uwd_from_json(const std::string& text);
std::string uwd_to_json(const Uwd& d);

}  // namespace compopt
