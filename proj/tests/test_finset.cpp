#include "doctest.h"

#include <map>

#include "compopt/finset.hpp"
#include "support.hpp"

using namespace compopt;
using testkit::brute_force_pushout;
using testkit::random_fin_function;

TEST_SUITE_BEGIN("finset");

TEST_CASE("FinFunction rejects out-of-range entries") {
    CHECK_THROWS_AS(FinFunction({0, 3}, 3), std::invalid_argument);
    CHECK_THROWS_AS(FinFunction({-1}, 2), std::invalid_argument);
    CHECK_NOTHROW(FinFunction({}, 0));
}

TEST_CASE("compose of identities is the identity") {
    const auto id3 = FinFunction::identity(3);
    CHECK(compose(id3, id3) == id3);
}

TEST_CASE("compose is pointwise") {
    const FinFunction f({0, 2}, 3);
    const FinFunction g({1, 0, 0}, 2);
    CHECK(compose(f, g) == FinFunction({1, 0}, 2));
}

TEST_CASE("compose rejects dimension mismatch with sizes in the message") {
    const FinFunction f({0}, 2);
    const FinFunction g({0}, 1);
    try {
        compose(f, g);
        FAIL("expected throw");
    } catch (const std::invalid_argument& err) {
        const std::string msg = err.what();
        CHECK(msg.find('2') != std::string::npos);
        CHECK(msg.find('1') != std::string::npos);
    }
}

TEST_CASE("compose matches exhaustive pointwise evaluation on random pairs") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int a = rng.uniform_int(0, 6), b = rng.uniform_int(1, 6), c = rng.uniform_int(1, 6);
        const auto f = random_fin_function(rng, a, b);
        const auto g = random_fin_function(rng, b, c);
        const auto fg = compose(f, g);
        for (int i = 0; i < a; ++i) CHECK(fg(i) == g(f(i)));
    }
}

TEST_CASE("compose is associative and unital on random triples") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const int a = rng.uniform_int(0, 8), b = rng.uniform_int(1, 8);
        const int c = rng.uniform_int(1, 8), d = rng.uniform_int(1, 8);
        const auto f = random_fin_function(rng, a, b);
        const auto g = random_fin_function(rng, b, c);
        const auto h = random_fin_function(rng, c, d);
        CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
        CHECK(compose(FinFunction::identity(a), f) == f);
        CHECK(compose(f, FinFunction::identity(b)) == f);
    }
}

TEST_CASE("coproduct offsets the second block") {
    CHECK(coproduct(FinFunction({0}, 1), FinFunction({0}, 1)) == FinFunction({0, 1}, 2));
    CHECK(coproduct(FinFunction({1, 0}, 2), FinFunction({2}, 3)) == FinFunction({1, 0, 4}, 5));
}

TEST_CASE("coproduct with the empty function is the identity operation") {
    const FinFunction f({2, 0, 1}, 3);
    CHECK(coproduct(FinFunction::empty(0), f) == f);
    CHECK(coproduct(f, FinFunction::empty(0)) == f);
}

TEST_CASE("pushout of identities is the identity cocone") {
    const auto id4 = FinFunction::identity(4);
    const auto po = pushout(id4, id4);
    CHECK(po.apex_size == 4);
    CHECK(po.proj_left == id4);
    CHECK(po.proj_right == id4);
}

TEST_CASE("pushout glues one shared point") {
    // X=[1], S=[2], J=[2], m=[0], l=[1]: classes {S0,J1}, {S1}, {J0}.
    const auto po = pushout(FinFunction({0}, 2), FinFunction({1}, 2));
    CHECK(po.apex_size == 3);
    CHECK(po.proj_left == FinFunction({0, 1}, 3));
    CHECK(po.proj_right == FinFunction({2, 0}, 3));
}

TEST_CASE("pushout agrees with the transitive-closure oracle") {
    Rng rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const int x = rng.uniform_int(0, 6), s = rng.uniform_int(1, 6), j = rng.uniform_int(1, 6);
        const auto m = random_fin_function(rng, x, s);
        const auto l = random_fin_function(rng, x, j);
        const auto got = pushout(m, l);
        const auto want = brute_force_pushout(m, l);
        CHECK(got.apex_size == want.apex_size);
        CHECK(got.proj_left == want.proj_left);
        CHECK(got.proj_right == want.proj_right);
    }
}

TEST_CASE("pushout is deterministic") {
    Rng rng(14);
    const auto m = random_fin_function(rng, 5, 4);
    const auto l = random_fin_function(rng, 5, 3);
    const auto a = pushout(m, l);
    const auto b = pushout(m, l);
    CHECK(a.proj_left == b.proj_left);
    CHECK(a.proj_right == b.proj_right);
}

TEST_CASE("pushout is symmetric up to apex relabeling") {
    Rng rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        const int x = rng.uniform_int(0, 5), s = rng.uniform_int(1, 5), j = rng.uniform_int(1, 5);
        const auto m = random_fin_function(rng, x, s);
        const auto l = random_fin_function(rng, x, j);
        const auto ab = pushout(m, l);
        const auto ba = pushout(l, m);
        REQUIRE(ab.apex_size == ba.apex_size);
        // The relabeling is forced pointwise; it must be consistent and bijective.
        std::map<int, int> bij;
        auto relate = [&](int from, int to) {
            auto [it, inserted] = bij.emplace(from, to);
            CHECK(it->second == to);
            (void)inserted;
        };
        for (int i = 0; i < s; ++i) relate(ab.proj_left(i), ba.proj_right(i));
        for (int i = 0; i < j; ++i) relate(ab.proj_right(i), ba.proj_left(i));
        std::map<int, int> inverse;
        for (auto [from, to] : bij) inverse.emplace(to, from);
        CHECK(inverse.size() == bij.size());
    }
}

TEST_CASE("pushout satisfies the universal property on small instances") {
    Rng rng(16);
    int tested = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int x = rng.uniform_int(0, 4), s = rng.uniform_int(1, 4), j = rng.uniform_int(1, 4);
        const auto m = random_fin_function(rng, x, s);
        const auto l = random_fin_function(rng, x, j);
        const auto po = pushout(m, l);
        const int q = rng.uniform_int(1, 3);
        if (std::pow(q, po.apex_size) > 2e5) continue;
        ++tested;
        // Any commuting cocone factors as h . projections for some h.
        const auto h = random_fin_function(rng, po.apex_size, q);
        const auto q_s = compose(po.proj_left, h);
        const auto q_j = compose(po.proj_right, h);
        // Exhaustively count mediating maps u with u.p_S = q_S and u.p_J = q_J.
        int solutions = 0;
        std::vector<int> u(static_cast<size_t>(po.apex_size), 0);
        while (true) {
            const FinFunction cand(u, q);
            if (compose(po.proj_left, cand) == q_s && compose(po.proj_right, cand) == q_j) {
                ++solutions;
            }
            int pos = 0;
            while (pos < po.apex_size) {
                if (++u[static_cast<size_t>(pos)] < q) break;
                u[static_cast<size_t>(pos)] = 0;
                ++pos;
            }
            if (pos == po.apex_size) break;
        }
        CHECK(solutions == 1);
    }
    CHECK(tested > 20);
}

TEST_CASE("preimage returns ascending fibers and rejects bad indices") {
    const FinFunction f({0, 0, 1}, 3);
    CHECK(preimage(f, 0) == std::vector<int>{0, 1});
    CHECK(preimage(f, 2).empty());
    CHECK_THROWS_AS(preimage(f, 3), std::out_of_range);
}

TEST_CASE("preimages partition the domain") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const auto f = random_fin_function(rng, rng.uniform_int(0, 8), rng.uniform_int(1, 8));
        std::vector<int> all;
        for (int j = 0; j < f.codom_size(); ++j) {
            const auto fiber = preimage(f, j);
            all.insert(all.end(), fiber.begin(), fiber.end());
        }
        std::sort(all.begin(), all.end());
        std::vector<int> want(static_cast<size_t>(f.dom_size()));
        std::iota(want.begin(), want.end(), 0);
        CHECK(all == want);
    }
}

TEST_SUITE_END();
