#include "epq/normalizer.hpp"

#include "epq/errors.hpp"
#include "epq/homomorphism.hpp"
#include "epq/queries.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace epq {

namespace {

void require_ep_sentence(const Formula& sentence) {
    const auto c = classify(sentence);
    if (c.fragment == Fragment::FO) throw InvalidArgument("sentence is not existential positive");
    if (!c.closed) throw InvalidArgument("formula has free variables");
}

std::vector<Formula> dnf(const Formula& f, const Limits& limits) {
    switch (f.kind()) {
    case NodeKind::Predicate:
    case NodeKind::Equality:
        return {f};
    case NodeKind::Or: {
        std::vector<Formula> out;
        for (const auto& c : f.children()) {
            auto part = dnf(c, limits);
            if (out.size() + part.size() > limits.max_disjuncts)
                throw ResourceLimit("DNF exceeds " + std::to_string(limits.max_disjuncts) + " disjuncts");
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    }
    case NodeKind::And: {
        std::vector<Formula> acc = dnf(f.children().front(), limits);
        for (std::size_t i = 1; i < f.children().size(); ++i) {
            auto part = dnf(f.children()[i], limits);
            if (acc.size() * part.size() > limits.max_disjuncts)
                throw ResourceLimit("DNF exceeds " + std::to_string(limits.max_disjuncts) + " disjuncts");
            std::vector<Formula> next;
            next.reserve(acc.size() * part.size());
            for (const auto& a : acc)
                for (const auto& b : part) next.push_back(Formula::conjunction({a, b}));
            acc = std::move(next);
        }
        return acc;
    }
    case NodeKind::Exists: {
        auto inner = dnf(f.body(), limits);
        for (auto& d : inner) d = Formula::exists(f.name(), std::move(d));
        return inner;
    }
    default:
        throw InvalidArgument("sentence is not existential positive");
    }
}

} // namespace

std::vector<Formula> to_pp_disjunction(const Formula& sentence, const Limits& limits, Stats* stats) {
    require_ep_sentence(sentence);
    auto out = dnf(sentence, limits);
    if (stats) stats->disjuncts += out.size();
    return out;
}

std::vector<Formula> m_normalize(const Formula& sentence, const Limits& limits, Stats* stats) {
    const auto disjuncts = to_pp_disjunction(sentence, limits, stats);
    const Signature sig = signature_of(sentence);

    // Syntactically identical structures are trivially equivalent; only distinct ones
    // need homomorphism tests.
    std::vector<Structure> distinct;
    std::map<std::string, std::size_t> by_text;
    std::vector<std::size_t> slot(disjuncts.size());
    for (std::size_t i = 0; i < disjuncts.size(); ++i) {
        Structure c = structure_of_pp(disjuncts[i], &sig);
        auto [it, fresh] = by_text.emplace(serialize(c), distinct.size());
        if (fresh) distinct.push_back(std::move(c));
        slot[i] = it->second;
    }

    const std::size_t n = distinct.size();
    // entails[i][j]: distinct[i] as a sentence entails distinct[j], i.e. C_j -> C_i.
    std::vector<std::vector<char>> entails(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            entails[i][j] = i == j || find_homomorphism(distinct[j], distinct[i], limits, stats).has_value();

    std::vector<std::size_t> klass(n);
    for (std::size_t i = 0; i < n; ++i) {
        klass[i] = i;
        for (std::size_t j = 0; j < i; ++j)
            if (entails[i][j] && entails[j][i]) {
                klass[i] = klass[j];
                break;
            }
    }
    std::vector<char> extremal(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (klass[i] != i) continue;
        bool ok = true;
        for (std::size_t j = 0; j < n && ok; ++j)
            if (entails[i][j] && klass[j] != i) ok = false;
        extremal[i] = ok;
    }

    std::vector<Formula> out;
    std::set<std::size_t> emitted;
    for (std::size_t i = 0; i < disjuncts.size(); ++i) {
        const auto k = klass[slot[i]];
        if (extremal[k] && emitted.insert(k).second) out.push_back(disjuncts[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Unary compilation

namespace {

using LabelSet = std::vector<std::size_t>;      // sorted symbol indices
using Antichain = std::vector<LabelSet>;        // sorted, inclusion-maximal, no empty set

bool subset_of(const LabelSet& small, const LabelSet& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

Antichain maximal_sets(std::set<LabelSet> sets) {
    sets.erase(LabelSet{});
    Antichain out;
    for (const auto& s : sets) {
        bool dominated = false;
        for (const auto& t : sets)
            if (t != s && subset_of(s, t)) {
                dominated = true;
                break;
            }
        if (!dominated) out.push_back(s);
    }
    return out;
}

// The conjunction `strong` entails `weak` iff every little sentence of `weak` is
// implied by one of `strong`.
bool antichain_entails(const Antichain& strong, const Antichain& weak) {
    return std::all_of(weak.begin(), weak.end(), [&](const LabelSet& w) {
        return std::any_of(strong.begin(), strong.end(), [&](const LabelSet& s) { return subset_of(w, s); });
    });
}

Formula little_sentence(const LabelSet& labels, const Signature& sig) {
    const std::string v = kUnaryVariable;
    if (labels.empty()) return Formula::exists(v, Formula::equality(v, v));
    std::vector<Formula> atoms;
    for (auto s : labels) atoms.push_back(Formula::predicate(sig[s].name, {v}));
    return Formula::exists(v, Formula::conjunction(std::move(atoms)));
}

void collect_little(const Formula& f, std::set<std::string>& out) {
    if (f.kind() == NodeKind::Exists) {
        out.insert(render(f));
        return;
    }
    for (const auto& c : f.children()) collect_little(c, out);
}

} // namespace

Formula compile_unary(const Formula& sentence, const Signature* signature, const Limits& limits) {
    Signature sig = signature_of(sentence);
    if (signature) sig = signature->merged(sig);
    for (const auto& s : sig.symbols())
        if (s.arity != 1) throw InvalidArgument("compile_unary: symbol " + s.name + " is not unary");

    std::vector<Antichain> disjuncts;
    for (const auto& pp : to_pp_disjunction(sentence, limits)) {
        const Structure c = structure_of_pp(pp, &sig);
        std::vector<LabelSet> labels(c.size());
        for (std::size_t s = 0; s < sig.size(); ++s)
            for (const auto& t : c.relation(s)) labels[static_cast<std::size_t>(t[0])].push_back(s);
        std::set<LabelSet> sets;
        for (auto& l : labels) {
            std::sort(l.begin(), l.end());
            l.erase(std::unique(l.begin(), l.end()), l.end());
            sets.insert(l);
        }
        auto chain = maximal_sets(std::move(sets));
        if (std::find(disjuncts.begin(), disjuncts.end(), chain) == disjuncts.end()) disjuncts.push_back(std::move(chain));
    }

    std::vector<Formula> kept;
    for (std::size_t i = 0; i < disjuncts.size(); ++i) {
        bool extremal = true;
        for (std::size_t j = 0; j < disjuncts.size() && extremal; ++j)
            if (j != i && antichain_entails(disjuncts[i], disjuncts[j])) extremal = false;
        if (!extremal) continue;
        std::vector<Formula> conj;
        for (const auto& l : disjuncts[i]) conj.push_back(little_sentence(l, sig));
        if (conj.empty()) conj.push_back(little_sentence({}, sig));
        kept.push_back(Formula::conjunction(std::move(conj)));
    }
    return Formula::disjunction(std::move(kept));
}

std::size_t little_sentence_count(const Formula& compiled) {
    std::set<std::string> seen;
    collect_little(compiled, seen);
    return seen.size();
}

std::uint64_t little_sentence_bound(std::size_t signature_size) {
    if (signature_size >= 63) return ~std::uint64_t{0};
    return std::uint64_t{1} << signature_size;
}

} // namespace epq
