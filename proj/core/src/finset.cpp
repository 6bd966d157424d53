#include "compopt/finset.hpp"

#include <numeric>
#include <stdexcept>

namespace compopt {

FinFunction::FinFunction(std::vector<int> table, int codom_size)
    : table_(std::move(table)), codom_(codom_size) {
    if (codom_ < 0) {
        throw std::invalid_argument("FinFunction: negative codomain size " +
                                    std::to_string(codom_));
    }
    for (size_t i = 0; i < table_.size(); ++i) {
        if (table_[i] < 0 || table_[i] >= codom_) {
            throw std::invalid_argument(
                "FinFunction: entry " + std::to_string(table_[i]) + " at index " +
                std::to_string(i) + " outside codomain [0," + std::to_string(codom_) + ")");
        }
    }
}

FinFunction FinFunction::identity(int n) {
    std::vector<int> t(static_cast<size_t>(n));
    std::iota(t.begin(), t.end(), 0);
    return FinFunction(std::move(t), n);
}

Cospan::Cospan(FinFunction l, FinFunction r) : left(std::move(l)), right(std::move(r)) {
    if (left.codom_size() != right.codom_size()) {
        throw std::invalid_argument("Cospan: legs target different apexes (" +
                                    std::to_string(left.codom_size()) + " vs " +
                                    std::to_string(right.codom_size()) + ")");
    }
}

FinFunction compose(const FinFunction& f, const FinFunction& g) {
    if (f.codom_size() != g.dom_size()) {
        throw std::invalid_argument("compose: codomain of first (" +
                                    std::to_string(f.codom_size()) +
                                    ") != domain of second (" +
                                    std::to_string(g.dom_size()) + ")");
    }
    std::vector<int> t(static_cast<size_t>(f.dom_size()));
    for (int i = 0; i < f.dom_size(); ++i) t[static_cast<size_t>(i)] = g(f(i));
    return FinFunction(std::move(t), g.codom_size());
}

FinFunction coproduct(const FinFunction& f, const FinFunction& g) {
    std::vector<int> t;
    t.reserve(static_cast<size_t>(f.dom_size() + g.dom_size()));
    for (int i = 0; i < f.dom_size(); ++i) t.push_back(f(i));
    for (int i = 0; i < g.dom_size(); ++i) t.push_back(g(i) + f.codom_size());
    return FinFunction(std::move(t), f.codom_size() + g.codom_size());
}

FinFunction coproduct(const std::vector<FinFunction>& fs) {
    FinFunction acc = FinFunction::empty(0);
    for (const auto& f : fs) acc = coproduct(acc, f);
    return acc;
}

namespace {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }
};

}  // namespace

PushoutResult pushout(const FinFunction& m, const FinFunction& l) {
    if (m.dom_size() != l.dom_size()) {
        throw std::invalid_argument("pushout: span legs have different domains (" +
                                    std::to_string(m.dom_size()) + " vs " +
                                    std::to_string(l.dom_size()) + ")");
    }
    const int s_size = m.codom_size();
    const int j_size = l.codom_size();
    UnionFind uf(s_size + j_size);
    for (int x = 0; x < m.dom_size(); ++x) uf.unite(m(x), s_size + l(x));

    // Canonical apex numbering: first appearance of each class, S then J.
    std::vector<int> apex_index(static_cast<size_t>(s_size + j_size), -1);
    int next = 0;
    std::vector<int> left(static_cast<size_t>(s_size)), right(static_cast<size_t>(j_size));
    for (int i = 0; i < s_size + j_size; ++i) {
        const int root = uf.find(i);
        if (apex_index[static_cast<size_t>(root)] < 0) apex_index[static_cast<size_t>(root)] = next++;
        const int ai = apex_index[static_cast<size_t>(root)];
        if (i < s_size) {
            left[static_cast<size_t>(i)] = ai;
        } else {
            right[static_cast<size_t>(i - s_size)] = ai;
        }
    }
    PushoutResult out;
    out.apex_size = next;
    out.proj_left = FinFunction(std::move(left), next);
    out.proj_right = FinFunction(std::move(right), next);
    return out;
}

std::vector<int> preimage(const FinFunction& f, int j) {
    if (j < 0 || j >= f.codom_size()) {
        throw std::out_of_range("preimage: index " + std::to_string(j) +
                                " outside codomain [0," + std::to_string(f.codom_size()) + ")");
    }
    std::vector<int> fiber;
    for (int i = 0; i < f.dom_size(); ++i) {
        if (f(i) == j) fiber.push_back(i);
    }
    return fiber;
}

}  // namespace compopt
