#pragma once

// Shared oracles and generators for the test suites. Everything here is
// deliberately independent of the library's implementation paths: the
// pushout oracle closes the relation by hand, gradients come from central
// differences, and flow solutions from a direct saddle linear solve.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "compopt/finset.hpp"
#include "compopt/flownet.hpp"
#include "compopt/freevect.hpp"
#include "compopt/problems.hpp"
#include "compopt/rng.hpp"
#include "compopt/uwd.hpp"

namespace testkit {

using compopt::FinFunction;
using compopt::Mat;
using compopt::Rng;
using compopt::Vec;

inline Vec random_vec(Rng& rng, int dim, double lo = -1.0, double hi = 1.0) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.uniform(lo, hi);
    return v;
}

inline FinFunction random_fin_function(Rng& rng, int dom, int codom) {
    std::vector<int> t(static_cast<size_t>(dom));
    for (auto& x : t) x = rng.uniform_int(0, codom - 1);
    return FinFunction(std::move(t), codom);
}

/// Central finite differences with h = 1e-6 * max(1, |x_i|).
inline Vec fd_gradient(const compopt::Objective& f, const Vec& x) {
    Vec g(f.dim);
    for (int i = 0; i < f.dim; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
        Vec hi = x, lo = x;
        hi[i] += h;
        lo[i] -= h;
        g[i] = (f.value(hi) - f.value(lo)) / (2.0 * h);
    }
    return g;
}

/// Pushout oracle: reflexive-symmetric-transitive closure of the relation
/// m(x) ~ l(x) over the disjoint union, then the same first-appearance
/// numbering the library documents.
inline compopt::PushoutResult brute_force_pushout(const FinFunction& m, const FinFunction& l) {
    const int s = m.codom_size(), j = l.codom_size(), n = s + j;
    std::vector<std::vector<bool>> rel(static_cast<size_t>(n),
                                       std::vector<bool>(static_cast<size_t>(n), false));
    for (int i = 0; i < n; ++i) rel[static_cast<size_t>(i)][static_cast<size_t>(i)] = true;
    for (int x = 0; x < m.dom_size(); ++x) {
        rel[static_cast<size_t>(m(x))][static_cast<size_t>(s + l(x))] = true;
        rel[static_cast<size_t>(s + l(x))][static_cast<size_t>(m(x))] = true;
    }
    for (int k = 0; k < n; ++k) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (rel[static_cast<size_t>(a)][static_cast<size_t>(k)] &&
                    rel[static_cast<size_t>(k)][static_cast<size_t>(b)]) {
                    rel[static_cast<size_t>(a)][static_cast<size_t>(b)] = true;
                }
            }
        }
    }
    std::vector<int> cls(static_cast<size_t>(n), -1);
    int next = 0;
    for (int a = 0; a < n; ++a) {
        if (cls[static_cast<size_t>(a)] >= 0) continue;
        for (int b = a; b < n; ++b) {
            if (rel[static_cast<size_t>(a)][static_cast<size_t>(b)]) cls[static_cast<size_t>(b)] = next;
        }
        ++next;
    }
    compopt::PushoutResult out;
    out.apex_size = next;
    out.proj_left = FinFunction(std::vector<int>(cls.begin(), cls.begin() + s), next);
    out.proj_right = FinFunction(std::vector<int>(cls.begin() + s, cls.end()), next);
    return out;
}

/// The running three-box example: subproblems f(w,x), g(u,w,y), h(u,w,z)
/// over junctions (u,w,x,y,z), outer boundary exposing all five.
inline compopt::Uwd three_box_diagram() {
    compopt::Uwd d;
    d.box_ports = {2, 3, 3};
    d.junctions = 5;
    d.inner_map = FinFunction({1, 2, 0, 1, 3, 0, 1, 4}, 5);
    d.outer_map = FinFunction::identity(5);
    return d;
}

/// Exact minimum cost flow for quadratic costs: solve the KKT saddle system
/// [diag(2a) A'; A 0] (x, lambda) = (-b_cost, balance). The incidence matrix
/// is rank deficient, so we take the least-squares solution; flows are
/// unique by strict convexity.
inline Vec kkt_flows(const compopt::FlowNetwork& g) {
    const Mat a = Mat(compopt::incidence_matrix(g));
    const int e = g.edges(), v = g.vertices;
    Mat kkt = Mat::Zero(e + v, e + v);
    Vec rhs(e + v);
    for (int i = 0; i < e; ++i) {
        kkt(i, i) = 2.0 * g.costs[static_cast<size_t>(i)].quadratic->first;
        rhs[i] = -g.costs[static_cast<size_t>(i)].quadratic->second;
    }
    kkt.block(0, e, e, v) = a.transpose();
    kkt.block(e, 0, v, e) = a;
    rhs.segment(e, v) = g.balance;
    const Vec sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    return sol.head(e);
}

/// Identifies the composite coordinates of a flattened two-level composition
/// with those of the nested one, through the shared leaf domains. Both
/// compositions quotient the same stacked leaf coordinates, so the pairing
/// (flat class, nested class) of each leaf coordinate induces the bijection;
/// consistency and totality certify the two quotients have equal kernels.
struct NestBijection {
    std::vector<int> flat_to_nested;
    bool consistent = true;
    bool total = true;
};

inline NestBijection nest_bijection(const compopt::ComposeGlue& glue_flat,
                                    const compopt::ComposeGlue& glue_outer,
                                    const std::vector<compopt::ComposeGlue>& glue_inner,
                                    const std::vector<std::vector<int>>& leaf_dims) {
    NestBijection out;
    out.flat_to_nested.assign(static_cast<size_t>(glue_flat.apex_size), -1);
    size_t global_leaf = 0;
    for (size_t box = 0; box < leaf_dims.size(); ++box) {
        for (size_t leaf = 0; leaf < leaf_dims[box].size(); ++leaf, ++global_leaf) {
            for (int c = 0; c < leaf_dims[box][leaf]; ++c) {
                const int flat_coord =
                    glue_flat.proj_domain(glue_flat.domain_offsets[global_leaf] + c);
                const int inner_coord =
                    glue_inner[box].proj_domain(glue_inner[box].domain_offsets[leaf] + c);
                const int nested_coord =
                    glue_outer.proj_domain(glue_outer.domain_offsets[box] + inner_coord);
                auto& slot = out.flat_to_nested[static_cast<size_t>(flat_coord)];
                if (slot < 0) {
                    slot = nested_coord;
                } else if (slot != nested_coord) {
                    out.consistent = false;
                }
            }
        }
    }
    for (int v : out.flat_to_nested) {
        if (v < 0) out.total = false;
    }
    return out;
}

inline Vec permute_to_nested(const NestBijection& bij, const Vec& flat) {
    Vec nested(flat.size());
    for (Eigen::Index c = 0; c < flat.size(); ++c) {
        nested[bij.flat_to_nested[static_cast<size_t>(c)]] = flat[c];
    }
    return nested;
}

inline double max_gap(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    double gap = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
        gap = std::max(gap, (a[k] - b[k]).cwiseAbs().maxCoeff());
    }
    return gap;
}

inline bool bitwise_equal(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return false;
    }
    return true;
}

}  // namespace testkit
