#pragma once

#include <string>
#include <vector>

namespace compopt {

/// A function between finite sets [n] = {0,...,n-1}. Immutable after
/// construction; every entry of the underlying table is checked to lie in
/// [0, codom_size).
class FinFunction {
public:
    FinFunction() = default;

    /// dom_size is the table length; throws std::invalid_argument on an
    /// out-of-range entry or negative codomain.
    FinFunction(std::vector<int> table, int codom_size);

    static FinFunction identity(int n);

    /// The unique map out of the empty set.
    static FinFunction empty(int codom_size) { return FinFunction({}, codom_size); }

    int dom_size() const { return static_cast<int>(table_.size()); }
    int codom_size() const { return codom_; }
    int operator()(int i) const { return table_[static_cast<size_t>(i)]; }
    const std::vector<int>& table() const { return table_; }

    bool operator==(const FinFunction& other) const = default;

private:
    std::vector<int> table_;
    int codom_ = 0;
};

/// A pair of functions into a common codomain (the apex).
struct Cospan {
    FinFunction left;
    FinFunction right;

    Cospan(FinFunction l, FinFunction r);
};

/// Result of gluing two sets along a shared source: the quotient apex and
/// the two projection maps into it. proj_left comes from the codomain of
/// the first map passed to pushout(), proj_right from the second.
struct PushoutResult {
    int apex_size = 0;
    FinFunction proj_left;
    FinFunction proj_right;
};

/// Composite g . f in diagrammatic order: result(i) = g(f(i)).
FinFunction compose(const FinFunction& f, const FinFunction& g);

/// Disjoint union f + g; g's entries are offset by f's codomain.
FinFunction coproduct(const FinFunction& f, const FinFunction& g);
FinFunction coproduct(const std::vector<FinFunction>& fs);

/// Pushout of the span  codom(m) <-m- X -l-> codom(l).
///
/// Computed by union-find over the disjoint union S + J (S = codom(m)
/// listed first), merging m(x) ~ l(x) for every x. Apex elements are
/// numbered by first appearance of their class scanning S then J, which
/// makes the result deterministic and reproducible.
PushoutResult pushout(const FinFunction& m, const FinFunction& l);

/// Fiber f^{-1}(j) in ascending order. Throws if j is out of range.
std::vector<int> preimage(const FinFunction& f, int j);

}  // namespace compopt
