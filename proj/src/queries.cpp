#include "epq/queries.hpp"

#include "epq/errors.hpp"
#include "epq/homomorphism.hpp"

#include <cctype>
#include <map>
#include <unordered_map>

namespace epq {

std::string element_variable(std::string_view element) {
    static constexpr char hex[] = "0123456789abcdef";
    std::string out = "x_";
    for (char c : element) {
        const auto u = static_cast<unsigned char>(c);
        if (c == '_') {
            out += "__";
        } else if (std::isalnum(u) || c == '^' || c == '\'') {
            out += c;
        } else {
            out += '_';
            out += hex[u >> 4];
            out += hex[u & 0xF];
        }
    }
    return out;
}

Formula canonical_query(const Structure& a) {
    std::vector<std::string> vars;
    vars.reserve(a.size());
    for (const auto& e : a.universe()) vars.push_back(element_variable(e));
    std::vector<Formula> atoms;
    for (std::size_t s = 0; s < a.signature().size(); ++s) {
        for (const auto& t : a.relation(s)) {
            std::vector<std::string> args;
            for (int e : t) args.push_back(vars[static_cast<std::size_t>(e)]);
            atoms.push_back(Formula::predicate(a.signature()[s].name, std::move(args)));
        }
    }
    if (atoms.empty()) atoms.push_back(Formula::equality(vars.front(), vars.front()));
    return Formula::exists_all(vars, Formula::conjunction(std::move(atoms)));
}

namespace {

struct PrenexCollector {
    std::vector<std::string> quantified;                  // renamed, in quantifier order
    std::vector<std::pair<std::string, std::vector<std::string>>> atoms;
    std::vector<std::pair<std::string, std::string>> equalities;
    std::map<std::string, int> uses;
    std::map<std::string, std::vector<std::string>> scope;

    std::string fresh(const std::string& var) {
        const int n = ++uses[var];
        return n == 1 ? var : var + "~" + std::to_string(n);
    }

    const std::string& resolve(const std::string& var) const {
        auto it = scope.find(var);
        if (it == scope.end() || it->second.empty()) throw InvalidArgument("free variable " + var + " in sentence");
        return it->second.back();
    }

    void walk(const Formula& f) {
        switch (f.kind()) {
        case NodeKind::Predicate: {
            std::vector<std::string> args;
            for (const auto& a : f.arguments()) args.push_back(resolve(a));
            atoms.emplace_back(f.name(), std::move(args));
            return;
        }
        case NodeKind::Equality:
            equalities.emplace_back(resolve(f.arguments()[0]), resolve(f.arguments()[1]));
            return;
        case NodeKind::And:
            for (const auto& c : f.children()) walk(c);
            return;
        case NodeKind::Exists: {
            std::string renamed = fresh(f.name());
            quantified.push_back(renamed);
            scope[f.name()].push_back(renamed);
            walk(f.body());
            scope[f.name()].pop_back();
            return;
        }
        default:
            throw InvalidArgument("not a primitive positive sentence");
        }
    }
};

} // namespace

Structure structure_of_pp(const Formula& sentence, const Signature* signature) {
    const auto c = classify(sentence);
    if (c.fragment != Fragment::PP) throw InvalidArgument("structure_of_pp: sentence is not primitive positive");
    if (!c.closed) throw InvalidArgument("structure_of_pp: formula has free variables");

    PrenexCollector walk;
    walk.walk(sentence);
    if (walk.quantified.empty()) throw InvalidArgument("structure_of_pp: sentence quantifies no variable");

    std::unordered_map<std::string, std::string> parent;
    for (const auto& v : walk.quantified) parent[v] = v;
    auto find = [&](std::string v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& [x, y] : walk.equalities) {
        auto rx = find(x);
        auto ry = find(y);
        if (rx == ry) continue;
        if (ry < rx) std::swap(rx, ry);
        parent[ry] = rx;
    }

    Signature sig = signature_of(sentence);
    if (signature) {
        if (!signature->includes(sig))
            throw SignatureMismatch("sentence over {" + sig.to_string() + "} is not within {" +
                                    signature->to_string() + "}");
        sig = *signature;
    }
    StructureBuilder builder(sig);
    for (const auto& v : walk.quantified)
        if (find(v) == v) builder.add_element(v);
    for (const auto& [symbol, args] : walk.atoms) {
        NamedTuple t;
        for (const auto& a : args) t.push_back(find(a));
        builder.add_tuple(symbol, t);
    }
    return std::move(builder).build();
}

bool pp_entails(const Formula& stronger, const Formula& weaker, const Limits& limits, Stats* stats) {
    const Signature sig = signature_of(stronger).merged(signature_of(weaker));
    const Structure strong = structure_of_pp(stronger, &sig);
    const Structure weak = structure_of_pp(weaker, &sig);
    return find_homomorphism(weak, strong, limits, stats).has_value();
}

} // namespace epq
