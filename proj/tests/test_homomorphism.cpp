#include "epq/errors.hpp"
#include "epq/homomorphism.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace epq;
using namespace testing;

TEST_SUITE("hom-engine") {

TEST_CASE("small witnesses and refutations") {
    const auto h = find_homomorphism(edge(), digraph({"c"}, {{"c", "c"}}));
    REQUIRE(h);
    CHECK(h->image == std::vector<int>{0, 0});
    CHECK_FALSE(find_homomorphism(loop(), edge()));
    CHECK_FALSE(find_homomorphism(cycle(5), cycle(3)));
    const auto six = find_homomorphism(cycle(6), cycle(3));
    REQUIRE(six);
    CHECK(verify_homomorphism(cycle(6), cycle(3), *six));
    CHECK_THROWS_AS(find_homomorphism(loop(), S("signature P/1\nuniverse a\n")), SignatureMismatch);
}

TEST_CASE("verify") {
    CHECK_FALSE(verify_homomorphism(loop(), edge(), Homomorphism{{0}}));
    Homomorphism id{{0, 1, 2}};
    CHECK(verify_homomorphism(cycle(3), cycle(3), id));
    CHECK_FALSE(verify_homomorphism(cycle(3), cycle(3), Homomorphism{{0, 1}}));
    CHECK_FALSE(verify_homomorphism(cycle(3), cycle(3), Homomorphism{{0, 1, 7}}));
}

TEST_CASE("hom equivalence") {
    CHECK_FALSE(hom_equivalent(edge(), loop()));
    CHECK(hom_equivalent(cycle(4), cycle(4)));
    CHECK_FALSE(hom_equivalent(cycle(6), cycle(3)));
    CHECK(hom_equivalent(cycle(2), digraph({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "a"}, {"c", "d"}, {"d", "c"}})));
}

TEST_CASE("retractions") {
    const auto ab = digraph({"a", "b"}, {{"a", "b"}, {"b", "b"}});
    const std::vector<int> just_b{1};
    const auto r = find_retraction(ab, just_b);
    REQUIRE(r);
    CHECK(r->image == std::vector<int>{1, 1});
    const auto k3 = clique(3);
    for (const std::vector<int>& subset : {std::vector<int>{0}, {1}, {0, 1}, {1, 2}})
        CHECK_FALSE(find_retraction(k3, subset));
    const std::vector<int> all{0, 1, 2};
    const auto id = find_retraction(k3, all);
    REQUIRE(id);
    CHECK(id->image == all);
    CHECK_THROWS_AS(find_retraction(k3, std::vector<int>{}), InvalidArgument);
    CHECK_THROWS_AS(find_retraction(k3, std::vector<int>{5}), InvalidArgument);
}

TEST_CASE("cores") {
    const auto ab = digraph({"a", "b"}, {{"a", "b"}, {"b", "b"}});
    CHECK(core(ab) == digraph({"b"}, {{"b", "b"}}));
    CHECK(core(clique(3)) == clique(3));
    CHECK(core(digraph({"l", "v"}, {{"l", "l"}})) == digraph({"l"}, {{"l", "l"}}));
    CHECK(isomorphic(core(cycle(6)), cycle(6)));
    CHECK(core(path(4)).size() == 4);
    CHECK(core(digraph({"a", "b", "c"}, {{"a", "b"}, {"c", "b"}})).size() == 2);

    // Two disjoint triangles: no single vertex can be dropped by a retraction, yet the
    // core is one triangle.
    auto two = digraph({"a0", "a1", "a2", "b0", "b1", "b2"},
                       {{"a0", "a1"}, {"a1", "a2"}, {"a2", "a0"}, {"b0", "b1"}, {"b1", "b2"}, {"b2", "b0"}});
    CHECK(isomorphic(core(two), cycle(3)));

    Limits tight;
    tight.max_core = 3;
    CHECK_THROWS_AS(core(cycle(4), tight), ResourceLimit);
}

TEST_CASE("node budget surfaces as ResourceLimit") {
    Limits tight;
    tight.max_nodes = 3;
    CHECK_THROWS_AS(find_homomorphism(clique(5), clique(4), tight), ResourceLimit);
}

TEST_CASE("agreement with exhaustive enumeration on all small digraph pairs") {
    const Signature sig({{"E", 2}});
    const auto all = oracle::all_structures_up_to(sig, 2);
    std::mt19937 rng(5);
    std::vector<Structure> pool = all;
    for (int i = 0; i < 40; ++i) pool.push_back(oracle::random_structure(rng, sig, 3, 3));
    for (const auto& a : pool)
        for (const auto& b : pool) {
            Stats stats;
            const auto h = find_homomorphism(a, b, {}, &stats);
            CHECK(h.has_value() == oracle::hom_exists(a, b));
            if (h) CHECK(verify_homomorphism(a, b, *h));
        }
}

TEST_CASE("determinism and stats") {
    Stats s1, s2;
    const auto h1 = find_homomorphism(cycle(6), cycle(3), {}, &s1);
    const auto h2 = find_homomorphism(cycle(6), cycle(3), {}, &s2);
    CHECK(h1 == h2);
    CHECK(s1.nodes == s2.nodes);
    CHECK(s1.searches == 1);
}

TEST_CASE("core properties on random structures") {
    std::mt19937 rng(23);
    const Signature sig({{"E", 2}, {"P", 1}});
    for (int i = 0; i < 60; ++i) {
        const auto a = oracle::random_structure(rng, sig, 1, 5, 0.25);
        const auto c = core(a);
        CHECK(oracle::hom_exists(a, c));
        CHECK(oracle::hom_exists(c, a));
        CHECK(isomorphic(core(c), c));
        // No proper retraction: every endomorphism of the core is onto, so no map into a
        // one-smaller induced substructure exists.
        for (std::size_t drop = 0; drop < c.size() && c.size() > 1; ++drop) {
            std::vector<int> rest;
            for (std::size_t x = 0; x < c.size(); ++x)
                if (x != drop) rest.push_back(static_cast<int>(x));
            CHECK_FALSE(oracle::hom_exists(c, induced_substructure(c, rest)));
        }
        // Reversing the universe order gives an isomorphic core.
        auto spec = a.spec();
        std::reverse(spec.universe.begin(), spec.universe.end());
        CHECK(isomorphic(core(Structure(spec)), c));
    }
}

}
