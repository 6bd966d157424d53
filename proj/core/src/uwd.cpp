#include "compopt/uwd.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace compopt {

int Uwd::total_inner_ports() const {
    return std::accumulate(box_ports.begin(), box_ports.end(), 0);
}

int Uwd::port_offset(int b) const {
    return std::accumulate(box_ports.begin(), box_ports.begin() + b, 0);
}

Uwd Uwd::identity(int n) {
    Uwd d;
    d.box_ports = {n};
    d.junctions = n;
    d.inner_map = FinFunction::identity(n);
    d.outer_map = FinFunction::identity(n);
    return d;
}

std::vector<std::string> validate(const Uwd& d) {
    std::vector<std::string> bad;
    for (size_t i = 0; i < d.box_ports.size(); ++i) {
        if (d.box_ports[i] < 0) {
            bad.push_back("box " + std::to_string(i) + " has negative port count");
        }
    }
    if (d.junctions < 0) bad.push_back("negative junction count");
    if (d.inner_map.dom_size() != d.total_inner_ports()) {
        bad.push_back("inner_map domain " + std::to_string(d.inner_map.dom_size()) +
                      " != total inner ports " + std::to_string(d.total_inner_ports()));
    }
    if (d.inner_map.codom_size() != d.junctions) {
        bad.push_back("inner_map codomain " + std::to_string(d.inner_map.codom_size()) +
                      " != junctions " + std::to_string(d.junctions));
    }
    if (d.outer_map.codom_size() != d.junctions) {
        bad.push_back("outer_map codomain " + std::to_string(d.outer_map.codom_size()) +
                      " != junctions " + std::to_string(d.junctions));
    }
    if (d.junction_labels && static_cast<int>(d.junction_labels->size()) != d.junctions) {
        bad.push_back("label array length " + std::to_string(d.junction_labels->size()) +
                      " != junctions " + std::to_string(d.junctions));
    }
    return bad;
}

namespace {

void require_valid(const Uwd& d, const char* who) {
    auto bad = validate(d);
    if (!bad.empty()) {
        throw std::invalid_argument(std::string(who) + ": ill-formed diagram: " + bad.front());
    }
}

}  // namespace

Uwd substitute(const Uwd& target, const std::vector<Uwd>& fillers) {
    require_valid(target, "substitute");
    if (static_cast<int>(fillers.size()) != target.box_count()) {
        throw std::invalid_argument("substitute: " + std::to_string(fillers.size()) +
                                    " fillers for " + std::to_string(target.box_count()) +
                                    " boxes");
    }
    const bool typed = target.typed();
    for (int i = 0; i < target.box_count(); ++i) {
        require_valid(fillers[static_cast<size_t>(i)], "substitute");
        if (fillers[static_cast<size_t>(i)].outer_ports() != target.box_ports[static_cast<size_t>(i)]) {
            throw std::invalid_argument(
                "substitute: box " + std::to_string(i) + " expects " +
                std::to_string(target.box_ports[static_cast<size_t>(i)]) + " ports, filler has " +
                std::to_string(fillers[static_cast<size_t>(i)].outer_ports()));
        }
        if (fillers[static_cast<size_t>(i)].typed() != typed) {
            throw std::invalid_argument("substitute: typed/untyped mix at box " + std::to_string(i));
        }
    }

    // Filler outer legs, concatenated: total target inner ports -> total filler junctions.
    std::vector<FinFunction> outer_legs, inner_legs;
    outer_legs.reserve(fillers.size());
    inner_legs.reserve(fillers.size());
    for (const auto& f : fillers) {
        outer_legs.push_back(f.outer_map);
        inner_legs.push_back(f.inner_map);
    }
    const FinFunction m = coproduct(outer_legs);
    const PushoutResult po = pushout(m, target.inner_map);

    if (typed) {
        // Ports tie a filler junction to a target junction; their labels must agree.
        for (int p = 0; p < m.dom_size(); ++p) {
            const VarLabel filler_label = [&] {
                int box = 0, off = 0;
                while (p >= off + target.box_ports[static_cast<size_t>(box)]) {
                    off += target.box_ports[static_cast<size_t>(box)];
                    ++box;
                }
                const auto& f = fillers[static_cast<size_t>(box)];
                return (*f.junction_labels)[static_cast<size_t>(f.outer_map(p - off))];
            }();
            const VarLabel target_label =
                (*target.junction_labels)[static_cast<size_t>(target.inner_map(p))];
            if (filler_label != target_label) {
                throw std::invalid_argument("substitute: label mismatch at target junction " +
                                            std::to_string(target.inner_map(p)));
            }
        }
    }

    Uwd out;
    for (const auto& f : fillers) {
        out.box_ports.insert(out.box_ports.end(), f.box_ports.begin(), f.box_ports.end());
    }
    out.junctions = po.apex_size;
    out.inner_map = compose(coproduct(inner_legs), po.proj_left);
    out.outer_map = compose(target.outer_map, po.proj_right);

    if (typed) {
        LabelVec labels(static_cast<size_t>(po.apex_size), VarLabel::convex);
        std::vector<bool> set(static_cast<size_t>(po.apex_size), false);
        int off = 0;
        for (const auto& f : fillers) {
            for (int j = 0; j < f.junctions; ++j) {
                const int a = po.proj_left(off + j);
                labels[static_cast<size_t>(a)] = (*f.junction_labels)[static_cast<size_t>(j)];
                set[static_cast<size_t>(a)] = true;
            }
            off += f.junctions;
        }
        for (int j = 0; j < target.junctions; ++j) {
            const int a = po.proj_right(j);
            const VarLabel l = (*target.junction_labels)[static_cast<size_t>(j)];
            if (set[static_cast<size_t>(a)] && labels[static_cast<size_t>(a)] != l) {
                throw std::invalid_argument("substitute: label mismatch at target junction " +
                                            std::to_string(j));
            }
            labels[static_cast<size_t>(a)] = l;
            set[static_cast<size_t>(a)] = true;
        }
        out.junction_labels = std::move(labels);
    }
    return out;
}

Uwd permute_boxes(const Uwd& d, const std::vector<int>& perm) {
    require_valid(d, "permute_boxes");
    if (static_cast<int>(perm.size()) != d.box_count()) {
        throw std::invalid_argument("permute_boxes: permutation length mismatch");
    }
    std::vector<bool> seen(perm.size(), false);
    for (int p : perm) {
        if (p < 0 || p >= d.box_count() || seen[static_cast<size_t>(p)]) {
            throw std::invalid_argument("permute_boxes: not a permutation");
        }
        seen[static_cast<size_t>(p)] = true;
    }
    Uwd out = d;
    out.box_ports.clear();
    std::vector<int> table;
    for (int b : perm) {
        out.box_ports.push_back(d.box_ports[static_cast<size_t>(b)]);
        const int off = d.port_offset(b);
        for (int p = 0; p < d.box_ports[static_cast<size_t>(b)]; ++p) {
            table.push_back(d.inner_map(off + p));
        }
    }
    out.inner_map = FinFunction(std::move(table), d.junctions);
    return out;
}

Uwd canonicalize_junctions(const Uwd& d) {
    require_valid(d, "canonicalize_junctions");
    std::vector<int> renum(static_cast<size_t>(d.junctions), -1);
    int next = 0;
    auto visit = [&](int j) {
        if (renum[static_cast<size_t>(j)] < 0) renum[static_cast<size_t>(j)] = next++;
    };
    for (int p = 0; p < d.inner_map.dom_size(); ++p) visit(d.inner_map(p));
    for (int p = 0; p < d.outer_map.dom_size(); ++p) visit(d.outer_map(p));
    for (int j = 0; j < d.junctions; ++j) visit(j);

    Uwd out = d;
    std::vector<int> inner(static_cast<size_t>(d.inner_map.dom_size()));
    for (int p = 0; p < d.inner_map.dom_size(); ++p) inner[static_cast<size_t>(p)] = renum[static_cast<size_t>(d.inner_map(p))];
    std::vector<int> outer(static_cast<size_t>(d.outer_map.dom_size()));
    for (int p = 0; p < d.outer_map.dom_size(); ++p) outer[static_cast<size_t>(p)] = renum[static_cast<size_t>(d.outer_map(p))];
    out.inner_map = FinFunction(std::move(inner), d.junctions);
    out.outer_map = FinFunction(std::move(outer), d.junctions);
    if (d.junction_labels) {
        LabelVec labels(static_cast<size_t>(d.junctions), VarLabel::convex);
        for (int j = 0; j < d.junctions; ++j) {
            labels[static_cast<size_t>(renum[static_cast<size_t>(j)])] = (*d.junction_labels)[static_cast<size_t>(j)];
        }
        out.junction_labels = std::move(labels);
    }
    return out;
}

bool iso_check(const Uwd& a, const Uwd& b) {
    if (a.box_ports != b.box_ports || a.junctions != b.junctions) return false;
    if (a.typed() != b.typed()) return false;

    // Backtracking over a partial junction bijection driven by port order.
    std::vector<int> a2b(static_cast<size_t>(a.junctions), -1);
    std::vector<int> b2a(static_cast<size_t>(b.junctions), -1);
    auto ports_a = a.inner_map.table();
    ports_a.insert(ports_a.end(), a.outer_map.table().begin(), a.outer_map.table().end());
    auto ports_b = b.inner_map.table();
    ports_b.insert(ports_b.end(), b.outer_map.table().begin(), b.outer_map.table().end());
    if (ports_a.size() != ports_b.size()) return false;

    for (size_t p = 0; p < ports_a.size(); ++p) {
        const int ja = ports_a[p];
        const int jb = ports_b[p];
        if (a2b[static_cast<size_t>(ja)] < 0 && b2a[static_cast<size_t>(jb)] < 0) {
            a2b[static_cast<size_t>(ja)] = jb;
            b2a[static_cast<size_t>(jb)] = ja;
        } else if (a2b[static_cast<size_t>(ja)] != jb) {
            return false;
        }
    }
    if (a.typed()) {
        for (int j = 0; j < a.junctions; ++j) {
            if (a2b[static_cast<size_t>(j)] >= 0 &&
                (*a.junction_labels)[static_cast<size_t>(j)] !=
                    (*b.junction_labels)[static_cast<size_t>(a2b[static_cast<size_t>(j)])]) {
                return false;
            }
        }
        // Unreferenced junctions pair up freely within a label class.
        int free_cx_a = 0, free_cc_a = 0, free_cx_b = 0, free_cc_b = 0;
        for (int j = 0; j < a.junctions; ++j) {
            if (a2b[static_cast<size_t>(j)] < 0) {
                ((*a.junction_labels)[static_cast<size_t>(j)] == VarLabel::convex ? free_cx_a : free_cc_a)++;
            }
            if (b2a[static_cast<size_t>(j)] < 0) {
                ((*b.junction_labels)[static_cast<size_t>(j)] == VarLabel::convex ? free_cx_b : free_cc_b)++;
            }
        }
        return free_cx_a == free_cx_b && free_cc_a == free_cc_b;
    }
    return true;
}

Uwd uwd_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Uwd d;
    d.box_ports = j.at("boxes").get<std::vector<int>>();
    d.junctions = j.at("junctions").get<int>();
    d.inner_map = FinFunction(j.at("inner_map").get<std::vector<int>>(), d.junctions);
    d.outer_map = FinFunction(j.at("outer_map").get<std::vector<int>>(), d.junctions);
    if (j.contains("labels")) {
        LabelVec labels;
        for (const auto& s : j.at("labels")) {
            const auto name = s.get<std::string>();
            if (name == "cx") {
                labels.push_back(VarLabel::convex);
            } else if (name == "cc") {
                labels.push_back(VarLabel::concave);
            } else {
                throw std::invalid_argument("uwd_from_json: unknown label '" + name + "'");
            }
        }
        d.junction_labels = std::move(labels);
    }
    auto bad = validate(d);
    if (!bad.empty()) throw std::invalid_argument("uwd_from_json: " + bad.front());
    return d;
}

std::string uwd_to_json(const Uwd& d) {
    nlohmann::json j;
    j["boxes"] = d.box_ports;
    j["junctions"] = d.junctions;
    j["inner_map"] = d.inner_map.table();
    j["outer_map"] = d.outer_map.table();
    if (d.junction_labels) {
        std::vector<std::string> names;
        names.reserve(d.junction_labels->size());
        for (VarLabel l : *d.junction_labels) names.emplace_back(label_name(l));
        j["labels"] = names;
    }
    return j.dump();
}

}  // namespace compopt
