#include "epq/errors.hpp"
#include "epq/homomorphism.hpp"
#include "epq/structure.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace epq;
using namespace testing;

namespace {

bool mentions(const std::vector<std::string>& report, const std::string& needle) {
    return std::any_of(report.begin(), report.end(), [&](const auto& m) { return m.find(needle) != std::string::npos; });
}

} // namespace

TEST_SUITE("relational-core") {

TEST_CASE("validate reports the broken invariants") {
    CHECK(validate(loop()).empty());

    StructureSpec empty{Signature({{"E", 2}}), {}, {}};
    CHECK(mentions(validate(empty), "empty universe"));

    StructureSpec wide{Signature({{"E", 2}}), {"a", "b"}, {{"E", {{"a", "b", "a"}}}}};
    CHECK(mentions(validate(wide), "arity violation"));

    StructureSpec stray{Signature({{"E", 2}}), {"a"}, {{"E", {{"a", "z"}}}, {"R", {{"a"}}}}};
    const auto report = validate(stray);
    CHECK(mentions(report, "not in the universe"));
    CHECK(mentions(report, "unknown symbol"));

    StructureSpec twice{Signature({{"E", 2}}), {"a", "a"}, {}};
    CHECK(mentions(validate(twice), "duplicate element"));
    CHECK_THROWS_AS(Structure{twice}, InvalidArgument);
}

TEST_CASE("signatures merge, detect conflicts and sort by name") {
    Signature a({{"P", 1}, {"E", 2}});
    CHECK(a[0].name == "E");
    CHECK(a.to_string() == "E/2 P/1");
    CHECK(a.merged(Signature({{"Q", 1}})).size() == 3);
    CHECK_THROWS_AS(a.merged(Signature({{"P", 2}})), SignatureMismatch);
    CHECK_THROWS_AS(Signature({{"E", 2}, {"E", 1}}), InvalidArgument);
    CHECK_THROWS_AS(Signature({{"E", 0}}), InvalidArgument);
    CHECK(a.includes(Signature({{"E", 2}})));
    CHECK_FALSE(a.includes(Signature({{"E", 3}})));
}

TEST_CASE("parse and serialize") {
    const auto s = S("# a comment\nsignature E/2 P/1\nuniverse b a\ntuple E b a  # trailing\ntuple P a\n");
    CHECK(s.size() == 2);
    CHECK(s.universe() == std::vector<std::string>{"b", "a"});
    CHECK(serialize(s) == "signature E/2 P/1\nuniverse a b\ntuple E b a\ntuple P a\n");
    CHECK(parse_structure(serialize(s)) == s);
    CHECK(s.relation("P").size() == 1);

    // Symbols absent from the file default to empty relations.
    CHECK(S("signature E/2 P/1\nuniverse a\n").tuple_count() == 0);

    CHECK_THROWS_AS(S("universe a\n"), ParseError);
    CHECK_THROWS_AS(S("signature E/2\nuniverse a\ntuple R a\n"), ParseError);
    CHECK_THROWS_AS(S("signature E/2\nuniverse a\ntuple E a\n"), ParseError);
    CHECK_THROWS_AS(S("signature E/2\nuniverse\n"), ParseError);
    CHECK_THROWS_AS(S("signature E\nuniverse a\n"), ParseError);
    try {
        S("signature E/2\nuniverse a\nbogus line\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).rfind("3:", 0) == 0);
    }
}

TEST_CASE("product") {
    const auto a = digraph({"a1", "a2"}, {{"a1", "a2"}});
    const auto b = digraph({"b1"}, {{"b1", "b1"}});
    const auto p = product(a, b);
    CHECK(p.universe() == std::vector<std::string>{"a1|b1", "a2|b1"});
    CHECK(oracle::named(p, "E") == std::set<std::vector<std::string>>{{"a1|b1", "a2|b1"}});

    CHECK(product(cycle(2), cycle(3)).relation("E").size() == 6);
    CHECK_THROWS_AS(product(a, S("signature P/1\nuniverse x\n")), SignatureMismatch);

    // '|' inside names is escaped so distinct pairs stay distinct.
    CHECK(pair_name("a|b", "c") != pair_name("a", "b|c"));
    CHECK(pair_name("a\\", "b") == "a\\\\|b");
}

TEST_CASE("product properties on random inputs") {
    std::mt19937 rng(11);
    const Signature sig({{"E", 2}, {"P", 1}});
    for (int i = 0; i < 60; ++i) {
        const auto a = oracle::random_structure(rng, sig, 1, 3);
        const auto b = oracle::random_structure(rng, sig, 1, 3);
        const auto ab = product(a, b);
        CHECK(ab.size() == a.size() * b.size());
        CHECK(validate(ab).empty());
        CHECK(isomorphic(ab, product(b, a)));
        // Tuple by tuple against the definition.
        for (const auto& sym : {"E", "P"}) {
            std::set<std::vector<std::string>> expected;
            for (const auto& ta : oracle::named(a, sym))
                for (const auto& tb : oracle::named(b, sym)) {
                    std::vector<std::string> t;
                    for (std::size_t k = 0; k < ta.size(); ++k) t.push_back(ta[k] + "|" + tb[k]);
                    expected.insert(t);
                }
            CHECK(oracle::named(ab, sym) == expected);
        }
    }
}

TEST_CASE("induced substructure") {
    CHECK(induced_substructure(loop(), std::vector<std::string>{"a"}) == loop());
    const auto one = induced_substructure(edge(), std::vector<std::string>{"a"});
    CHECK(one.size() == 1);
    CHECK(one.tuple_count() == 0);
    const auto ab = digraph({"a", "b"}, {{"a", "b"}, {"b", "b"}});
    CHECK(induced_substructure(ab, std::vector<std::string>{"b"}) == digraph({"b"}, {{"b", "b"}}));
    CHECK_THROWS_AS(induced_substructure(ab, std::vector<std::string>{}), InvalidArgument);
    CHECK_THROWS_AS(induced_substructure(ab, std::vector<std::string>{"zz"}), InvalidArgument);
}

TEST_CASE("isomorphism") {
    CHECK(isomorphic(cycle(3), cycle(3)));
    CHECK_FALSE(isomorphic(loop(), digraph({"a"}, {})));
    CHECK(isomorphic(cycle(3, "x"), digraph({"p", "q", "r"}, {{"q", "p"}, {"p", "r"}, {"r", "q"}})));
    CHECK_FALSE(isomorphic(cycle(3), path(3)));
    CHECK_FALSE(isomorphic(cycle(4), cycle(3)));
    Limits tight;
    tight.max_isomorphism = 2;
    CHECK_THROWS_AS(isomorphic(cycle(3), cycle(3), tight), ResourceLimit);
}

TEST_CASE("builder") {
    StructureBuilder b(Signature({{"E", 2}}));
    CHECK(b.add_element("x") == 0);
    CHECK(b.add_element("y") == 1);
    CHECK(b.add_element("x") == 0);
    b.add_tuple("E", {"x", "y"});
    b.add_tuple("E", {"x", "y"});
    const auto s = std::move(b).build();
    CHECK(s.relation("E").size() == 1);
    CHECK(s.contains(0, {0, 1}));
    CHECK_FALSE(s.contains(0, {1, 0}));
    CHECK_THROWS_AS(StructureBuilder(Signature({{"E", 2}})).build(), InvalidArgument);
    CHECK(s.with_signature(Signature({{"E", 2}, {"P", 1}})).signature().size() == 2);
}

}
