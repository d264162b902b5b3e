// Runs the twelve acceptance checks with their time limits; one PASS/FAIL line each.

#include "epq/evaluator.hpp"
#include "epq/gadgets.hpp"
#include "epq/gdnf.hpp"
#include "epq/homomorphism.hpp"
#include "epq/normalizer.hpp"
#include "epq/queries.hpp"
#include "epq/treewidth.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace epq;

namespace {

// Collects mismatches; the first few are printed.
struct Check {
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::vector<std::string> notes;

    void expect(bool ok, const std::function<std::string()>& what) {
        ++cases;
        if (ok) return;
        ++failures;
        if (notes.size() < 3) notes.push_back(what());
    }
};

const Signature kDigraph({{"E", 2}});
const Signature kEP({{"E", 2}, {"P", 1}});
const Signature kEPQ({{"E", 2}, {"P", 1}, {"Q", 1}});
const Signature kPQ({{"P", 1}, {"Q", 1}});

std::vector<Formula> corpus() {
    static const std::vector<Formula> sentences = [] {
        std::mt19937 rng(2024);
        oracle::FormulaShape shape;
        shape.depth = 6;
        std::vector<Formula> out;
        for (int i = 0; i < 200; ++i) out.push_back(oracle::random_sentence(rng, kEPQ, shape));
        return out;
    }();
    return sentences;
}

std::string show(const Structure& s) { return serialize(s); }

void chandra_merlin(Check& c) {
    std::mt19937 rng(1);
    for (int i = 0; i < 500; ++i) {
        const auto a = oracle::random_structure(rng, kDigraph, 1, 3);
        const auto b = oracle::random_structure(rng, kDigraph, 1, 3);
        const bool hom = oracle::hom_exists(a, b);
        const bool engine = find_homomorphism(a, b).has_value();
        const bool eval = eval_naive(canonical_query(a), b);
        const bool entails = pp_entails(canonical_query(b), canonical_query(a));
        c.expect(hom == engine && hom == eval && hom == entails, [&] { return "A:\n" + show(a) + "B:\n" + show(b); });
    }
}

void round_trips(Check& c) {
    for (const auto& a : oracle::all_structures_up_to(kEP, 2)) {
        const auto back = structure_of_pp(canonical_query(a), &kEP);
        c.expect(hom_equivalent(a, back), [&] { return "C[Q[A]] for\n" + show(a); });
    }
    std::mt19937 rng(2);
    oracle::FormulaShape pp;
    pp.disjunction = false;
    const auto structures = oracle::all_structures_up_to(kEP, 2);
    std::vector<Structure> extra;
    for (int i = 0; i < 20; ++i) extra.push_back(oracle::random_structure(rng, kEP, 3, 3));
    for (int i = 0; i < 200; ++i) {
        const auto psi = oracle::random_sentence(rng, kEP, pp);
        const auto q = canonical_query(structure_of_pp(psi, &kEP));
        bool same = true;
        for (const auto& b : structures) same = same && oracle::holds(psi, b) == oracle::holds(q, b);
        for (const auto& b : extra) same = same && oracle::holds(psi, b) == oracle::holds(q, b);
        c.expect(same, [&] { return "Q[C[psi]] for " + render(psi); });
    }
}

void normal_form(Check& c) {
    const auto structures = oracle::all_structures_up_to(kEPQ, 2);
    for (const auto& phi : corpus()) {
        const auto m = m_normalize(phi);
        const auto joined = Formula::disjunction(m);
        bool same = true;
        for (const auto& b : structures) same = same && oracle::holds(phi, b) == oracle::holds(joined, b);
        c.expect(same, [&] { return "M not equivalent for " + render(phi); });
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) {
                if (i == j) continue;
                const bool entails = oracle::hom_exists(structure_of_pp(m[j], &kEPQ), structure_of_pp(m[i], &kEPQ));
                c.expect(!entails && !pp_entails(m[i], m[j]),
                         [&] { return render(m[i]) + " entails " + render(m[j]); });
            }
    }
}

void many_one(Check& c) {
    std::mt19937 rng(4);
    for (const auto& phi : corpus()) {
        for (const auto& psi : m_normalize(phi))
            for (int i = 0; i < 20; ++i) {
                const auto b = oracle::random_structure(rng, kEPQ, 1, 3);
                const auto inst = pp_to_ep_instance(psi, phi, b);
                c.expect(eval_dnf_hom(inst.sentence, inst.structure) == oracle::holds(psi, b),
                         [&] { return "phi " + render(phi) + ", psi " + render(psi) + ", B\n" + show(b); });
            }
    }
}

void products(Check& c) {
    std::mt19937 rng(5);
    for (int i = 0; i < 500; ++i) {
        const auto a = oracle::random_structure(rng, kEP, 1, 3);
        const auto b = oracle::random_structure(rng, kEP, 1, 3);
        const auto b2 = oracle::random_structure(rng, kEP, 1, 3);
        const bool both = oracle::hom_exists(a, b) && oracle::hom_exists(a, b2);
        const auto p = product(b, b2);
        c.expect(both == find_homomorphism(a, p).has_value() && both == oracle::hom_exists(a, p),
                 [&] { return "A:\n" + show(a) + "B:\n" + show(b) + "B':\n" + show(b2); });
    }
}

void gadget_preservation(Check& c) {
    std::mt19937 rng(6);
    for (int i = 0; i < 200; ++i) {
        const auto a = oracle::labelled_digraph(rng, 2, 1, 3);
        const auto b = oracle::labelled_digraph(rng, 2, 1, 3);
        const bool hom = oracle::hom_exists(a, b);
        c.expect(hom == find_homomorphism(gadget_star(a), gadget_star(b)).has_value(),
                 [&] { return "A:\n" + show(a) + "B:\n" + show(b); });
    }
}

void hamiltonian(Check& c) {
    auto one = [&](const Structure& g, std::optional<std::size_t> lift) {
        const bool expected = oracle::hamiltonian(g);
        const auto inst = reduce_hamiltonian(g, lift);
        c.expect(brute_force_hamiltonian(g) == expected && eval_dnf_hom(inst.sentence, inst.structure) == expected,
                 [&] { return "digraph\n" + show(g); });
        return expected;
    };
    for (std::uint32_t mask = 0; mask < 16; ++mask) one(oracle::digraph_from_mask(2, mask), std::nullopt);
    std::mt19937 rng(7);
    std::set<std::uint32_t> seen;
    while (seen.size() < 100) seen.insert(std::uniform_int_distribution<std::uint32_t>(0, 511)(rng));
    for (auto mask : seen) one(oracle::digraph_from_mask(3, mask), std::nullopt);
    // One lifted instance per verdict.
    c.expect(one(testing::cycle(2), 3), [] { return std::string("lifted 2-cycle should be true"); });
    c.expect(!one(testing::digraph({"a", "b"}, {{"a", "b"}}), 3), [] { return std::string("lifted edge should be false"); });
}

void six_variables(Check& c) {
    for (std::size_t n : {2, 3}) {
        std::vector<std::size_t> f(n, 0);
        while (true) {
            const auto af = functional_digraph(f);
            const auto plus_graph = gadget_plus(af);
            const auto plus = outdeg1_decomposition(plus_graph);
            const auto star = star_decomposition(af, plus);
            const auto gstar = gadget_star(af);
            const auto q = pp_from_decomposition(gstar, star, 6);
            auto name = [&] {
                std::string s = "f =";
                for (auto x : f) s += " " + std::to_string(x + 1);
                return s;
            };
            c.expect(validate_decomposition(plus_graph, plus) && plus.width() <= 2, [&] { return name() + ": B+ decomposition"; });
            c.expect(validate_decomposition(gstar, star) && star.width() <= 5, [&] { return name() + ": B* decomposition"; });
            c.expect(classify(q).variables <= 6, [&] { return name() + ": too many variables"; });
            c.expect(hom_equivalent(structure_of_pp(q), gstar), [&] { return name() + ": sentence not equivalent"; });
            std::size_t i = n;
            while (i > 0 && f[i - 1] == n - 1) f[--i] = 0;
            if (i == 0) break;
            ++f[i - 1];
        }
    }
    const auto ep6 = hamiltonian_sentence_ep6(2);
    for (std::uint32_t mask = 0; mask < 16; ++mask) {
        const auto inst = reduce_hamiltonian(oracle::digraph_from_mask(2, mask));
        Stats stats;
        const bool six = eval_kvar(ep6, inst.structure, 6, &stats);
        c.expect(six == eval_dnf_hom(inst.sentence, inst.structure) && stats.max_arity <= 6,
                 [&] { return "mask " + std::to_string(mask); });
    }
}

void satisfiability(Check& c) {
    std::mt19937 rng(9);
    auto arity = [&](std::size_t lo, std::size_t hi) { return std::to_string(std::uniform_int_distribution<std::size_t>(lo, hi)(rng)); };
    for (int i = 0; i < 200; ++i) {
        std::size_t vars = 0;
        const auto clauses = oracle::random_cnf(rng, 3, 3, vars);
        const CnfFormula cnf{vars, clauses};
        const bool sat = oracle::satisfiable(vars, clauses);
        const std::string two = "two-symbols:" + arity(1, 3) + "," + arity(1, 3);
        const std::string single = "single-symbol:" + arity(2, 4);
        for (const auto& mode : {two, single, std::string("unary")}) {
            const auto inst = reduce_sat(cnf, parse_sat_mode(mode));
            c.expect(eval_dnf_hom(inst.sentence, inst.structure) == sat, [&] { return mode + " on CNF #" + std::to_string(i); });
        }
        for (const auto& d : m_normalize(reduce_sat(cnf, parse_sat_mode(two)).sentence))
            c.expect(decide_ppk(d, 1), [&] { return "not in PP^1: " + render(d); });
        for (const auto& d : m_normalize(reduce_sat(cnf, parse_sat_mode(single)).sentence))
            c.expect(decide_ppk(d, 2), [&] { return "not in PP^2: " + render(d); });
    }
}

void unary(Check& c) {
    std::mt19937 rng(10);
    oracle::FormulaShape shape;
    const auto structures = oracle::all_structures_up_to(kPQ, 3);
    for (int i = 0; i < 100; ++i) {
        const auto phi = oracle::random_sentence(rng, kPQ, shape);
        const auto u = compile_unary(phi, &kPQ);
        c.expect(variable_names(u).size() == 1, [&] { return "more than one variable: " + render(u); });
        c.expect(little_sentence_count(u) <= little_sentence_bound(kPQ.size()), [&] { return "too long: " + render(u); });
        bool same = true;
        for (const auto& b : structures) same = same && oracle::holds(phi, b) == oracle::holds(u, b);
        c.expect(same, [&] { return render(phi) + " vs " + render(u); });
    }
}

void gdnf(Check& c) {
    std::mt19937 rng(11);
    auto random_relation = [&](std::size_t arity, char base) {
        const auto n = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        std::vector<std::string> u;
        for (std::size_t i = 0; i < n; ++i) u.push_back(std::string(1, static_cast<char>(base + i)));
        std::size_t count = 1;
        for (std::size_t i = 0; i < arity; ++i) count *= n;
        std::vector<NamedTuple> tuples;
        for (std::size_t code = 0; code < count; ++code) {
            if (!std::bernoulli_distribution(0.3)(rng)) continue;
            NamedTuple t;
            for (std::size_t x = code, i = 0; i < arity; ++i, x /= n) t.push_back(u[x % n]);
            tuples.push_back(t);
        }
        return std::pair{tuples, u};
    };
    for (int i = 0; i < 200; ++i) {
        const auto arity = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
        const auto [ta, ua] = random_relation(arity, 'a');
        const auto [tb, ub] = random_relation(arity, 'p');
        const auto ga = gdnf_from_explicit(ta, ua, arity);
        const auto gb = gdnf_from_explicit(tb, ub, arity);
        const std::set<NamedTuple> sa(ta.begin(), ta.end());
        const auto back = gdnf_to_explicit(ga);
        c.expect(std::set<NamedTuple>(back.begin(), back.end()) == sa && back.size() == sa.size() &&
                     parse_gdnf(serialize(ga)) == ga,
                 [&] { return "round trip #" + std::to_string(i); });
        const auto p = gdnf_product(ga, gb);
        std::set<NamedTuple> expected;
        for (const auto& x : ta)
            for (const auto& y : tb) {
                NamedTuple t;
                for (std::size_t k = 0; k < arity; ++k) t.push_back(pair_name(x[k], y[k]));
                expected.insert(t);
            }
        const auto got = gdnf_to_explicit(p);
        c.expect(std::set<NamedTuple>(got.begin(), got.end()) == expected, [&] { return "product #" + std::to_string(i); });
        c.expect(p.blocks.size() == ga.blocks.size() * gb.blocks.size(), [&] { return "block count #" + std::to_string(i); });
    }
}

void cross_agreement(Check& c) {
    std::mt19937 rng(12);
    oracle::FormulaShape wide;
    oracle::FormulaShape two;
    two.variables = {"x", "y"};
    for (int i = 0; i < 300; ++i) {
        const auto phi = oracle::random_sentence(rng, kEPQ, i % 2 ? two : wide);
        const auto b = oracle::random_structure(rng, kEPQ, 1, 4);
        const bool expected = oracle::holds(phi, b);
        const bool naive = eval_naive(phi, b);
        const bool dnf = eval_dnf_hom(phi, b);
        const bool pp = eval_via_pp_turing(phi, b);
        c.expect(naive == expected && dnf == expected && pp == expected, [&] { return render(phi) + " on\n" + show(b); });
        if (variable_names(phi).size() <= 2) {
            Stats stats;
            const bool k = eval_kvar(phi, b, 2, &stats);
            c.expect(k == expected && stats.max_arity <= 2, [&] { return "kvar: " + render(phi); });
        }
    }
    const std::vector<std::pair<Structure, long>> known{{testing::path(4), 1}, {testing::cycle(5), 2}, {testing::clique(4), 3}};
    for (const auto& [s, w] : known) {
        const auto r = treewidth_exact(s);
        c.expect(r.width == w && oracle::treewidth_by_orders(s) == w && validate_decomposition(s, r.decomposition),
                 [&] { return "treewidth of\n" + show(s); });
    }
}

struct Criterion {
    int number;
    const char* name;
    double limit_seconds;
    void (*body)(Check&);
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Chandra-Merlin", 10, chandra_merlin},
        {2, "round trips", 10, round_trips},
        {3, "normal form M", 60, normal_form},
        {4, "PP to EP instances", 60, many_one},
        {5, "products", 10, products},
        {6, "gadget homomorphisms", 120, gadget_preservation},
        {7, "Hamiltonian circuit reduction", 300, hamiltonian},
        {8, "six-variable decompositions", 300, six_variables},
        {9, "SAT reductions", 120, satisfiability},
        {10, "unary compilation", 30, unary},
        {11, "GDNF", 10, gdnf},
        {12, "evaluator agreement", 60, cross_agreement},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Check c;
        std::string error;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.body(c);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool ok = error.empty() && c.failures == 0 && secs < cr.limit_seconds;
        failed += !ok;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.2f s of %.0f s", secs, cr.limit_seconds);
        std::cout << "criterion " << cr.number << " (" << cr.name << "): " << (ok ? "PASS" : "FAIL") << " [" << c.cases
                  << " checks, " << timing << "]\n";
        if (!error.empty()) std::cout << "  exception: " << error << '\n';
        if (c.failures) std::cout << "  " << c.failures << " mismatches\n";
        for (const auto& n : c.notes) std::cout << "  " << n << '\n';
        std::cout.flush();
    }
    return failed == 0 ? 0 : 1;
}
