#include "epq/gadgets.hpp"

#include "epq/errors.hpp"
#include "epq/queries.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <numeric>

namespace epq {

Signature sigma(std::size_t n) {
    std::vector<RelationSymbol> symbols{{"E", 2}};
    for (std::size_t i = 1; i <= n; ++i) symbols.push_back({"L" + std::to_string(i), 1});
    return Signature(std::move(symbols));
}

std::size_t label_count(const Structure& labelled) {
    const auto& sig = labelled.signature();
    const std::size_t n = sig.size() == 0 ? 0 : sig.size() - 1;
    if (n == 0 || sig != sigma(n))
        throw InvalidArgument("expected a labelled digraph over {E/2, L1/1, ..., Ln/1}, got {" + sig.to_string() + "}");
    return n;
}

namespace {

const Signature& digraph_signature() {
    static const Signature sig({{"E", 2}});
    return sig;
}

void require_digraph(const Structure& g) {
    if (g.signature() != digraph_signature())
        throw InvalidArgument("expected a digraph over {E/2}, got {" + g.signature().to_string() + "}");
}

void require_plain_names(const Structure& s) {
    for (const auto& e : s.universe())
        if (e.find('^') != std::string::npos) throw InvalidArgument("element name '" + e + "' contains the reserved '^'");
}

std::string tag(std::string_view base, std::size_t i) { return std::string(base) + std::to_string(i); }

} // namespace

std::string gadget_element(std::string_view element, std::string_view t) {
    return std::string(element) + "^" + std::string(t);
}

Structure gadget_star(const Structure& b) {
    const std::size_t n = label_count(b);
    require_plain_names(b);
    StructureBuilder out(digraph_signature());
    auto edge = [&](const std::string& x, const std::string& y) { out.add_tuple(0, {out.add_element(x), out.add_element(y)}); };
    std::vector<std::vector<char>> has(b.size(), std::vector<char>(n + 1, 0));
    for (std::size_t i = 1; i <= n; ++i)
        for (const auto& t : b.relation(*b.signature().find("L" + std::to_string(i))))
            has[static_cast<std::size_t>(t[0])][i] = 1;

    for (std::size_t e = 0; e < b.size(); ++e) {
        const auto& name = b.universe()[e];
        auto v = [&](std::string_view t) { return gadget_element(name, t); };
        for (const std::string t : {"s", "c", "d"}) out.add_element(v(t));
        for (std::size_t i = 1; i <= n; ++i) {
            out.add_element(v(tag("s", i)));
            out.add_element(v(tag("t", i)));
        }
        out.add_element(v("t"));
        for (std::size_t i = 1; i <= n; ++i)
            if (has[e][i]) {
                out.add_element(v(tag("u", i)));
                out.add_element(v(tag("v", i)));
            }
        edge(v("c"), v("s"));
        edge(v("c"), v("d"));
        edge(v("s"), v("d"));
        edge(v("d"), v("s1"));
        for (std::size_t i = 1; i <= n; ++i) {
            edge(v(tag("s", i)), v(tag("t", i)));
            if (i < n) edge(v(tag("t", i)), v(tag("s", i + 1)));
        }
        edge(v(tag("t", n)), v("t"));
        for (std::size_t i = 1; i <= n; ++i)
            if (has[e][i]) {
                edge(v(tag("u", i)), v(tag("s", i)));
                edge(v(tag("v", i)), v(tag("t", i)));
                edge(v(tag("v", i)), v(tag("u", i)));
            }
    }
    for (const auto& t : b.relation(*b.signature().find("E")))
        edge(gadget_element(b.name(t[0]), "t"), gadget_element(b.name(t[1]), "s"));
    return std::move(out).build();
}

Structure gadget_plus(const Structure& b) {
    label_count(b);
    require_plain_names(b);
    StructureBuilder out(digraph_signature());
    for (const auto& name : b.universe()) {
        const int s = out.add_element(gadget_element(name, "s"));
        const int t = out.add_element(gadget_element(name, "t"));
        out.add_tuple(0, {s, t});
    }
    for (const auto& t : b.relation(*b.signature().find("E")))
        out.add_tuple(0, {out.add_element(gadget_element(b.name(t[0]), "t")),
                          out.add_element(gadget_element(b.name(t[1]), "s"))});
    return std::move(out).build();
}

Structure cycle_all_labels(std::size_t n) {
    if (n < 2) throw InvalidArgument("cycle_all_labels needs n >= 2");
    StructureBuilder out(sigma(n));
    for (std::size_t i = 0; i < n; ++i) out.add_element(std::to_string(i));
    for (std::size_t i = 0; i < n; ++i) {
        out.add_tuple(0, {static_cast<int>(i), static_cast<int>((i + 1) % n)});
        for (std::size_t l = 1; l <= n; ++l) out.add_tuple(l, {static_cast<int>(i)});
    }
    return std::move(out).build();
}

Structure unique_label_digraph(const Structure& g) {
    require_digraph(g);
    const std::size_t n = g.size();
    if (n < 2) throw InvalidArgument("unique_label_digraph needs at least 2 vertices");
    std::vector<std::string> names = g.universe();
    std::sort(names.begin(), names.end());
    const Signature sig = sigma(n);
    StructureBuilder out(sig);
    for (std::size_t i = 0; i < n; ++i) {
        out.add_element(names[i]);
        out.add_tuple("L" + std::to_string(i + 1), NamedTuple{names[i]});
    }
    for (const auto& t : g.relation(0)) out.add_tuple("E", NamedTuple{g.name(t[0]), g.name(t[1])});
    return std::move(out).build();
}

Structure functional_digraph(const std::vector<std::size_t>& f) {
    const std::size_t n = f.size();
    if (n == 0) throw InvalidArgument("functional_digraph needs n >= 1");
    const Signature sig = sigma(n);
    StructureBuilder out(sig);
    for (std::size_t i = 0; i < n; ++i) out.add_element(tag("v", i + 1));
    for (std::size_t i = 0; i < n; ++i) {
        if (f[i] >= n) throw InvalidArgument("functional_digraph: value out of range");
        out.add_tuple(0, {static_cast<int>(i), static_cast<int>(f[i])});
        out.add_tuple(*sig.find("L" + std::to_string(i + 1)), {static_cast<int>(i)});
    }
    return std::move(out).build();
}

Formula hamiltonian_sentence(std::size_t n) {
    if (n < 2) throw InvalidArgument("H_n needs n >= 2");
    const Signature sig = sigma(n);
    StructureBuilder a(sig);
    for (std::size_t i = 0; i < n; ++i) {
        a.add_element(tag("v", i + 1));
        a.add_tuple(*sig.find("L" + std::to_string(i + 1)), {static_cast<int>(i)});
    }
    const Formula q = canonical_query(gadget_star(std::move(a).build()));

    std::vector<std::string> prefix;
    Formula body = q;
    while (body.kind() == NodeKind::Exists) {
        prefix.push_back(body.name());
        body = body.body();
    }
    std::vector<Formula> parts{body};
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<Formula> options;
        for (std::size_t j = 1; j <= n; ++j)
            options.push_back(Formula::predicate("E", {element_variable(gadget_element(tag("v", i), "t")),
                                                       element_variable(gadget_element(tag("v", j), "s"))}));
        parts.push_back(Formula::disjunction(std::move(options)));
    }
    return Formula::exists_all(prefix, Formula::conjunction(std::move(parts)));
}

Formula hamiltonian_sentence_ep6(std::size_t n, const Limits& limits) {
    if (n < 2) throw InvalidArgument("H_n needs n >= 2");
    if (n > limits.max_functions_n)
        throw ResourceLimit("the EP^6 form of H_" + std::to_string(n) + " has n^n disjuncts; limit is n <= " +
                            std::to_string(limits.max_functions_n));
    std::vector<Formula> disjuncts;
    std::vector<std::size_t> f(n, 0);
    while (true) {
        const Structure af = functional_digraph(f);
        const auto plus = outdeg1_decomposition(gadget_plus(af));
        const auto star = star_decomposition(af, plus);
        disjuncts.push_back(pp_from_decomposition(gadget_star(af), star, 6));
        std::size_t i = n;
        while (i > 0 && f[i - 1] == n - 1) f[--i] = 0;
        if (i == 0) break;
        ++f[i - 1];
    }
    return Formula::disjunction(std::move(disjuncts));
}

namespace {

Formula rebuild(const Formula& f, std::size_t arity) {
    switch (f.kind()) {
    case NodeKind::Predicate: {
        if (f.name() != "E" || f.arguments().size() != 2) return f;
        std::vector<std::string> args{f.arguments()[0]};
        args.resize(arity, f.arguments()[1]);
        return Formula::predicate("F", std::move(args));
    }
    case NodeKind::Equality: return f;
    case NodeKind::And:
    case NodeKind::Or: {
        std::vector<Formula> kids;
        for (const auto& c : f.children()) kids.push_back(rebuild(c, arity));
        return f.kind() == NodeKind::And ? Formula::conjunction(std::move(kids)) : Formula::disjunction(std::move(kids));
    }
    case NodeKind::Not: return Formula::negation(rebuild(f.body(), arity));
    case NodeKind::Exists: return Formula::exists(f.name(), rebuild(f.body(), arity));
    case NodeKind::Forall: return Formula::forall(f.name(), rebuild(f.body(), arity));
    }
    return f;
}

void require_lift_arity(std::size_t arity) {
    if (arity < 2) throw InvalidArgument("lift arity must be at least 2");
}

} // namespace

Formula lift_sentence(const Formula& f, std::size_t arity) {
    require_lift_arity(arity);
    return rebuild(f, arity);
}

Structure lift_structure(const Structure& g, std::size_t arity) {
    require_lift_arity(arity);
    require_digraph(g);
    StructureBuilder out(Signature({{"F", arity}}));
    for (const auto& e : g.universe()) out.add_element(e);
    for (const auto& t : g.relation(0)) {
        Tuple wide{t[0]};
        wide.resize(arity, t[1]);
        out.add_tuple(0, std::move(wide));
    }
    return std::move(out).build();
}

Instance reduce_hamiltonian(const Structure& g, std::optional<std::size_t> lift_arity) {
    require_digraph(g);
    const std::size_t n = g.size();
    if (n < 2) throw InvalidArgument("reduce_hamiltonian needs at least 2 vertices");
    if (lift_arity) require_lift_arity(*lift_arity);
    const Structure b = unique_label_digraph(g);
    Instance inst{hamiltonian_sentence(n), gadget_star(product(b, cycle_all_labels(n)))};
    if (lift_arity && *lift_arity > 2) {
        inst.sentence = lift_sentence(inst.sentence, *lift_arity);
        inst.structure = lift_structure(inst.structure, *lift_arity);
    }
    return inst;
}

bool brute_force_hamiltonian(const Structure& g) {
    require_digraph(g);
    const std::size_t n = g.size();
    if (n < 2 || n > 8) throw InvalidArgument("brute_force_hamiltonian supports 2 to 8 vertices");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) ok = g.contains(0, {order[i], order[(i + 1) % n]});
        if (ok) return true;
    } while (std::next_permutation(order.begin() + 1, order.end()));
    return false;
}

// ---------------------------------------------------------------------------
// CNF

std::vector<std::string> validate(const CnfFormula& cnf) {
    std::vector<std::string> out;
    if (cnf.variables == 0) out.push_back("a CNF needs at least one variable");
    for (std::size_t c = 0; c < cnf.clauses.size(); ++c) {
        if (cnf.clauses[c].empty()) out.push_back("clause " + std::to_string(c + 1) + " is empty");
        for (int lit : cnf.clauses[c])
            if (lit == 0 || static_cast<std::size_t>(std::abs(lit)) > cnf.variables)
                out.push_back("clause " + std::to_string(c + 1) + " has literal " + std::to_string(lit) + " out of range");
    }
    return out;
}

CnfFormula parse_dimacs(std::string_view text) {
    CnfFormula cnf;
    bool have_header = false;
    std::size_t declared = 0;
    std::vector<int> current;
    std::size_t line_no = 0;
    for (auto line : detail::split_lines(text)) {
        ++line_no;
        auto start = line.find_first_not_of(" \t\r");
        if (start == std::string_view::npos) continue;
        line.remove_prefix(start);
        if (line.front() == 'c' || line.front() == '%') continue;
        auto tokens = detail::tokenize_line(line);
        if (tokens[0] == "p") {
            if (have_header) throw ParseError("duplicate problem line", line_no, 1);
            if (tokens.size() != 4 || tokens[1] != "cnf") throw ParseError("expected 'p cnf VARIABLES CLAUSES'", line_no, 1);
            try {
                cnf.variables = std::stoul(tokens[2]);
                declared = std::stoul(tokens[3]);
            } catch (const std::exception&) {
                throw ParseError("bad numbers in the problem line", line_no, 1);
            }
            have_header = true;
            continue;
        }
        if (!have_header) throw ParseError("clause before the problem line", line_no, 1);
        for (const auto& tok : tokens) {
            int lit = 0;
            try {
                std::size_t used = 0;
                lit = std::stoi(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ParseError("bad literal '" + tok + "'", line_no);
            }
            if (lit == 0) {
                if (current.empty()) throw ParseError("empty clause", line_no);
                cnf.clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            if (static_cast<std::size_t>(std::abs(lit)) > cnf.variables)
                throw ParseError("literal " + tok + " exceeds the declared variable count", line_no);
            current.push_back(lit);
        }
    }
    if (!have_header) throw ParseError("missing problem line");
    if (!current.empty()) cnf.clauses.push_back(std::move(current));
    if (cnf.clauses.size() != declared)
        throw ParseError("problem line declares " + std::to_string(declared) + " clauses, found " +
                         std::to_string(cnf.clauses.size()));
    auto report = validate(cnf);
    if (!report.empty()) throw ParseError(report.front());
    return cnf;
}

bool brute_force_satisfiable(const CnfFormula& cnf) {
    auto report = validate(cnf);
    if (!report.empty()) throw InvalidArgument("malformed CNF: " + report.front());
    if (cnf.variables > 24) throw ResourceLimit("brute-force satisfiability supports at most 24 variables");
    for (std::uint32_t mask = 0; mask < (1u << cnf.variables); ++mask) {
        auto value = [&](int lit) {
            const bool v = (mask >> (std::abs(lit) - 1)) & 1u;
            return lit > 0 ? v : !v;
        };
        if (std::all_of(cnf.clauses.begin(), cnf.clauses.end(),
                        [&](const auto& c) { return std::any_of(c.begin(), c.end(), value); }))
            return true;
    }
    return false;
}

SatMode parse_sat_mode(std::string_view text) {
    auto number = [&](std::string_view s) {
        std::size_t v = 0;
        try {
            std::size_t used = 0;
            v = std::stoul(std::string(s), &used);
            if (used != s.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw InvalidArgument("bad arity '" + std::string(s) + "' in mode '" + std::string(text) + "'");
        }
        return v;
    };
    SatMode mode;
    const auto colon = text.find(':');
    const auto head = text.substr(0, colon);
    const auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    if (head == "unary" && colon == std::string_view::npos) {
        mode.kind = SatMode::Unary;
    } else if (head == "two-symbols") {
        mode.kind = SatMode::TwoSymbols;
        if (colon != std::string_view::npos) {
            const auto comma = rest.find(',');
            mode.true_arity = number(rest.substr(0, comma));
            mode.false_arity = comma == std::string_view::npos ? mode.true_arity : number(rest.substr(comma + 1));
        }
        if (mode.true_arity < 1 || mode.false_arity < 1) throw InvalidArgument("two-symbols arities must be positive");
    } else if (head == "single-symbol") {
        mode.kind = SatMode::SingleSymbol;
        if (colon != std::string_view::npos) mode.arity = number(rest);
        if (mode.arity < 2) throw InvalidArgument("single-symbol arity must be at least 2");
    } else {
        throw InvalidArgument("unknown reduction mode '" + std::string(text) +
                              "' (expected two-symbols[:K[,L]], single-symbol:K or unary)");
    }
    return mode;
}

Instance reduce_sat(const CnfFormula& cnf, const SatMode& mode) {
    auto report = validate(cnf);
    if (!report.empty()) throw InvalidArgument("malformed CNF: " + report.front());
    auto var = [](int lit) { return "v" + std::to_string(std::abs(lit)); };

    std::vector<std::string> prefix;
    for (std::size_t i = 1; i <= cnf.variables; ++i) prefix.push_back("v" + std::to_string(i));
    std::vector<Formula> clauses;
    std::optional<Structure> b;

    switch (mode.kind) {
    case SatMode::TwoSymbols: {
        if (mode.true_arity < 1 || mode.false_arity < 1) throw InvalidArgument("two-symbols arities must be positive");
        StructureBuilder sb(Signature({{"T", mode.true_arity}, {"F", mode.false_arity}}));
        sb.add_element("0");
        sb.add_element("1");
        sb.add_tuple("T", NamedTuple(mode.true_arity, "1"));
        sb.add_tuple("F", NamedTuple(mode.false_arity, "0"));
        b = std::move(sb).build();
        for (const auto& c : cnf.clauses) {
            std::vector<Formula> lits;
            for (int lit : c)
                lits.push_back(lit > 0 ? Formula::predicate("T", std::vector<std::string>(mode.true_arity, var(lit)))
                                       : Formula::predicate("F", std::vector<std::string>(mode.false_arity, var(lit))));
            clauses.push_back(Formula::disjunction(std::move(lits)));
        }
        break;
    }
    case SatMode::SingleSymbol: {
        if (mode.arity < 2) throw InvalidArgument("single-symbol arity must be at least 2");
        StructureBuilder sb(Signature({{"S", mode.arity}}));
        sb.add_element("0");
        sb.add_element("1");
        NamedTuple t(mode.arity, "1");
        t[0] = "0";
        sb.add_tuple("S", t);
        b = std::move(sb).build();
        for (const auto& c : cnf.clauses) {
            std::vector<Formula> lits;
            for (int lit : c) {
                std::vector<std::string> args(mode.arity, lit > 0 ? var(lit) : "x");
                args[0] = lit > 0 ? "x" : var(lit);
                lits.push_back(Formula::exists("x", Formula::predicate("S", std::move(args))));
            }
            clauses.push_back(Formula::disjunction(std::move(lits)));
        }
        break;
    }
    case SatMode::Unary: {
        // R{i}_{j}: clause i, variable j.
        auto symbol = [](std::size_t i, std::size_t j) { return "R" + std::to_string(i) + "_" + std::to_string(j); };
        std::vector<RelationSymbol> symbols;
        for (std::size_t i = 1; i <= cnf.clauses.size(); ++i)
            for (std::size_t j = 1; j <= cnf.variables; ++j) symbols.push_back({symbol(i, j), 1});
        StructureBuilder sb{Signature(std::move(symbols))};
        sb.add_element("0");
        sb.add_element("1");
        for (std::size_t i = 1; i <= cnf.clauses.size(); ++i) {
            for (int lit : cnf.clauses[i - 1])
                sb.add_tuple(symbol(i, static_cast<std::size_t>(std::abs(lit))), NamedTuple{lit > 0 ? "1" : "0"});
            std::vector<Formula> lits;
            for (std::size_t j = 1; j <= cnf.variables; ++j)
                lits.push_back(Formula::predicate(symbol(i, j), {"v" + std::to_string(j)}));
            clauses.push_back(Formula::disjunction(std::move(lits)));
        }
        b = std::move(sb).build();
        break;
    }
    }
    if (clauses.empty()) clauses.push_back(Formula::equality(prefix.front(), prefix.front()));
    return Instance{Formula::exists_all(prefix, Formula::conjunction(std::move(clauses))), std::move(*b)};
}

// ---------------------------------------------------------------------------
// Decompositions

TreeDecomposition outdeg1_decomposition(const Structure& g) {
    require_digraph(g);
    const std::size_t n = g.size();
    std::vector<int> succ(n, -1);
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& t : g.relation(0)) {
        auto& s = succ[static_cast<std::size_t>(t[0])];
        if (s >= 0) throw InvalidArgument("vertex '" + g.name(t[0]) + "' has outdegree above 1");
        s = t[1];
        ++indegree[static_cast<std::size_t>(t[1])];
    }
    for (std::size_t v = 0; v < n; ++v)
        if (succ[v] < 0) throw InvalidArgument("vertex '" + g.name(static_cast<int>(v)) + "' has outdegree 0");

    // Peel indegree-0 vertices until only disjoint cycles remain.
    std::vector<char> removed(n, 0);
    std::vector<std::size_t> peeled;
    for (bool again = true; again;) {
        again = false;
        for (std::size_t v = 0; v < n; ++v)
            if (!removed[v] && indegree[v] == 0) {
                removed[v] = 1;
                peeled.push_back(v);
                --indegree[static_cast<std::size_t>(succ[v])];
                again = true;
            }
    }

    TreeDecomposition d;
    std::vector<char> placed(n, 0);
    std::size_t previous_root = 0;
    bool have_root = false;
    auto link = [&](std::size_t a, std::size_t b) { d.edges.emplace_back(a, b); };
    for (std::size_t c0 = 0; c0 < n; ++c0) {
        if (removed[c0] || placed[c0]) continue;
        std::vector<std::size_t> cycle{c0};
        for (auto v = static_cast<std::size_t>(succ[c0]); v != c0; v = static_cast<std::size_t>(succ[v])) cycle.push_back(v);
        for (auto v : cycle) placed[v] = 1;
        auto nm = [&](std::size_t v) { return g.name(static_cast<int>(v)); };
        std::size_t first = 0;
        if (cycle.size() <= 2) {
            std::vector<std::string> bag;
            for (auto v : cycle) bag.push_back(nm(v));
            first = d.add_node(std::move(bag));
        } else {
            for (std::size_t i = 1; i + 1 < cycle.size(); ++i) {
                const auto node = d.add_node({nm(cycle[0]), nm(cycle[i]), nm(cycle[i + 1])});
                if (i == 1)
                    first = node;
                else
                    link(node - 1, node);
            }
        }
        if (have_root) link(previous_root, first);
        previous_root = first;
        have_root = true;
    }

    for (auto it = peeled.rbegin(); it != peeled.rend(); ++it) {
        const auto v = *it;
        const auto& target = g.name(succ[v]);
        std::size_t host = d.node_count();
        for (std::size_t t = 0; t < d.node_count() && host == d.node_count(); ++t)
            if (std::find(d.bags[t].begin(), d.bags[t].end(), target) != d.bags[t].end()) host = t;
        const auto node = d.add_node({g.name(static_cast<int>(v)), target});
        link(host, node);
    }
    return d;
}

TreeDecomposition star_decomposition(const Structure& b, const TreeDecomposition& plus) {
    const std::size_t n = label_count(b);
    const Structure bplus = gadget_plus(b);
    auto problems = decomposition_violations(bplus, plus);
    if (!problems.empty())
        throw InvalidArgument("not a tree decomposition of the B+ digraph: " + problems.front());

    std::vector<std::vector<char>> has(b.size(), std::vector<char>(n + 1, 0));
    for (std::size_t i = 1; i <= n; ++i)
        for (const auto& t : b.relation(*b.signature().find("L" + std::to_string(i))))
            has[static_cast<std::size_t>(t[0])][i] = 1;

    TreeDecomposition d = plus;
    for (std::size_t e = 0; e < b.size(); ++e) {
        const auto& name = b.universe()[e];
        auto v = [&](std::string_view t) { return gadget_element(name, t); };
        const auto s = v("s");
        const auto t = v("t");
        std::size_t host = plus.node_count();
        for (std::size_t x = 0; x < plus.node_count() && host == plus.node_count(); ++x) {
            const auto& bag = plus.bags[x];
            if (std::find(bag.begin(), bag.end(), s) != bag.end() && std::find(bag.begin(), bag.end(), t) != bag.end())
                host = x;
        }
        std::vector<std::vector<std::string>> path;
        path.push_back({s, t, v("c"), v("d")});
        path.push_back({s, t, v("d"), v("s1")});
        for (std::size_t i = 1; i <= n; ++i) {
            std::vector<std::string> bag{s, t, v(tag("s", i)), v(tag("t", i))};
            if (has[e][i]) {
                bag.push_back(v(tag("u", i)));
                bag.push_back(v(tag("v", i)));
            }
            path.push_back(std::move(bag));
            if (i < n) path.push_back({s, t, v(tag("t", i)), v(tag("s", i + 1))});
        }
        std::size_t prev = host;
        for (auto& bag : path) {
            const auto node = d.add_node(std::move(bag));
            d.edges.emplace_back(prev, node);
            prev = node;
        }
    }
    return d;
}

} // namespace epq
