#include "epq/cli.hpp"
#include "epq/gadgets.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = epq::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return (fs::path(EPQ_TEST_DATA) / name).string(); }

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("epq-cli-" + std::to_string(std::rand()) + "-" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_SUITE("cli") {

TEST_CASE("eval") {
    auto r = run({"eval", "--sentence", data("loop.epq"), "--structure", data("loop.str"), "--strategy", "naive"});
    CHECK(r.code == 0);
    CHECK(r.out == "true\n");
    for (const auto* s : {"naive", "kvar", "dnf-hom", "pp-reduction"})
        CHECK(run({"eval", "--sentence", data("p_or_q.epq"), "--structure", data("loop.str"), "--strategy", s}).code == 2);
    r = run({"eval", "--sentence", data("loop.epq"), "--structure", data("two_cycle.str")});
    CHECK(r.code == 1);
    CHECK(r.out == "false\n");
    r = run({"eval", "--sentence", data("loop.epq"), "--structure", data("loop.str"), "--strategy", "magic"});
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown strategy") != std::string::npos);
}

TEST_CASE("treewidth") {
    auto r = run({"treewidth", "--structure", data("k4.str"), "--exact"});
    CHECK(r.code == 0);
    CHECK(r.out == "3\n");
    r = run({"treewidth", "--structure", data("k4.str"), "--witness"});
    CHECK(r.out.rfind("3\nnode 0 ", 0) == 0);

    TempDir dir;
    {
        std::ofstream f(dir / "d.td");
        f << "node 0 k0 k1 k2 k3\n";
    }
    CHECK(run({"treewidth", "--structure", data("k4.str"), "--check", dir / "d.td"}).code == 0);
    {
        std::ofstream f(dir / "bad.td");
        f << "node 0 k0 k1\nnode 1 k2 k3\nedge 0 1\n";
    }
    r = run({"treewidth", "--structure", data("k4.str"), "--check", dir / "bad.td"});
    CHECK(r.code == 1);
    CHECK(r.out.rfind("false\n", 0) == 0);
}

TEST_CASE("reduction bundles") {
    TempDir dir;
    auto r = run({"reduce", "sat", "--cnf", data("unsat.cnf"), "--mode", "unary", "--out", dir / "b"});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "b/sentence.epq"));
    CHECK(fs::exists(dir / "b/structure.str"));
    r = run({"eval", "--bundle", dir / "b"});
    CHECK(r.code == 1);
    CHECK(r.out == "false\n");
    CHECK(run({"eval", "--bundle", dir / "b", "--strategy", "naive"}).code == 1);

    r = run({"reduce", "ham", "--digraph", data("two_cycle.str"), "--out", dir / "h"});
    CHECK(r.code == 0);
    CHECK(run({"eval", "--bundle", dir / "h"}).code == 0);
    CHECK(run({"reduce", "ham", "--digraph", data("two_cycle.str"), "--lift-arity", "3", "--out", dir / "h3"}).code == 0);
    CHECK(run({"eval", "--bundle", dir / "h3"}).code == 0);

    const auto inst = epq::cli::read_bundle(dir / "h3");
    CHECK(inst.structure.signature().to_string() == "F/3");
    CHECK(run({"eval", "--bundle", dir / "missing"}).code == 2);
    CHECK(run({"reduce", "sat", "--cnf", data("unsat.cnf"), "--mode", "nope", "--out", dir / "x"}).code == 2);
}

TEST_CASE("json records") {
    auto r = run({"eval", "--sentence", data("loop.epq"), "--structure", data("loop.str"), "--format", "json"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "eval");
    CHECK(j["verdict"] == true);
    CHECK(j["stats"].contains("nodes-searched"));
    CHECK(j["stats"].contains("disjuncts"));
    CHECK(j["stats"]["width"].is_null());
    CHECK(j["limits-hit"] == false);

    r = run({"treewidth", "--structure", data("k4.str"), "--exact", "--format", "json"});
    const auto t = nlohmann::json::parse(r.out);
    CHECK(t["result"]["width"] == 3);
    CHECK(t["stats"]["width"] == 3);

    r = run({"treewidth", "--structure", data("k4.str"), "--exact", "--format", "json", "--max-exact-tw", "2"});
    CHECK(r.code == 2);
    const auto e = nlohmann::json::parse(r.out);
    CHECK(e.contains("error"));
    CHECK(e["limits-hit"] == true);

    r = run({"normalize", "--sentence", data("p_or_q.epq"), "--format", "json"});
    CHECK(nlohmann::json::parse(r.out)["result"].size() == 2);
}

TEST_CASE("other commands") {
    auto r = run({"hom", "--from", data("two_cycle.str"), "--to", data("loop.str")});
    CHECK(r.code == 0);
    CHECK(r.out == "true\na -> a\nb -> a\n");
    CHECK(run({"hom", "--from", data("loop.str"), "--to", data("two_cycle.str")}).code == 1);
    r = run({"core", "--structure", data("k4.str")});
    CHECK(r.out.find("universe k0 k1 k2 k3") != std::string::npos);
    r = run({"canonical-query", "--structure", data("loop.str")});
    CHECK(r.out == "exists x_a . E(x_a,x_a)\n");
    r = run({"normalize", "--sentence", data("p_or_q.epq")});
    CHECK(r.out == "exists x . P(x)\nexists x . Q(x)\n");
    r = run({"compile-unary", "--sentence", data("p_or_q.epq"), "--signature", "P/1 Q/1"});
    CHECK(r.code == 0);
    CHECK(run({"compile-unary", "--sentence", data("loop.epq")}).code == 2);
    r = run({"pp-structure", "--sentence", data("loop.epq")});
    CHECK(r.out.find("tuple E x x") != std::string::npos);
    r = run({"hn", "--n", "2", "--format", "json"});
    CHECK(nlohmann::json::parse(r.out)["result"]["variables"] == 20);
    CHECK(run({"hn", "--n", "1"}).code == 2);
    CHECK(run({"gadget", "star", "--structure", data("loop.str")}).code == 2);
    CHECK(run({"gdnf", "product", data("left.gdnf"), data("right.gdnf")}).out ==
          "arity 2\nuniverse a|x a|y a|z b|x b|y b|z c|x c|y c|z\nblock {a|x b|x} {c|y c|z}\n");
    CHECK(run({"gdnf", "expand", data("left.gdnf")}).out == "tuple a c\ntuple b c\n");
    CHECK(run({"gdnf", "member", data("left.gdnf"), "--tuple", "a,c"}).code == 0);
    CHECK(run({"gdnf", "member", data("left.gdnf"), "--tuple", "c a"}).code == 1);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"eval"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("limits from the environment") {
    TempDir dir;
    {
        std::ofstream f(dir / "big.epq");
        f << "exists x . ((P(x) | Q(x)) & (P(x) | Q(x)) & (P(x) | Q(x)))\n";
    }
    ::setenv("EPQ_MAX_DISJUNCTS", "4", 1);
    auto r = run({"normalize", "--sentence", dir / "big.epq"});
    ::unsetenv("EPQ_MAX_DISJUNCTS");
    CHECK(r.code == 2);
    CHECK(r.err.find("resource limit") != std::string::npos);
    CHECK(run({"normalize", "--sentence", dir / "big.epq"}).code == 0);
}

TEST_CASE("determinism") {
    const std::vector<std::string> args{"hn", "--n", "2", "--ep6"};
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    TempDir d1, d2;
    run({"reduce", "ham", "--digraph", data("k4.str"), "--out", d1 / "x"});
    run({"reduce", "ham", "--digraph", data("k4.str"), "--out", d2 / "x"});
    std::ifstream f1(d1 / "x/structure.str"), f2(d2 / "x/structure.str");
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK_FALSE(s1.str().empty());
}

}
