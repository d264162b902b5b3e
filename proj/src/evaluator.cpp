#include "epq/evaluator.hpp"

#include "epq/errors.hpp"
#include "epq/homomorphism.hpp"
#include "epq/normalizer.hpp"
#include "epq/queries.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace epq {

void require_compatible(const Formula& sentence, const Structure& b) {
    const Signature used = signature_of(sentence);
    if (!b.signature().includes(used))
        throw SignatureMismatch("sentence over {" + used.to_string() + "} does not fit a structure over {" +
                                b.signature().to_string() + "}");
}

namespace {

void require_closed(const Formula& sentence) {
    if (!free_variables(sentence).empty()) throw InvalidArgument("formula has free variables; a sentence is required");
}

/// Formula with symbols resolved against a structure and variables numbered.
struct Compiled {
    NodeKind kind;
    std::size_t symbol = 0;
    std::vector<int> vars;  // predicate/equality arguments, or the quantified variable
    std::vector<Compiled> kids;
};

class Compiler {
public:
    explicit Compiler(const Structure& b, const Formula& f) : b_(b) {
        for (const auto& name : variable_names(f)) ids_.emplace(name, static_cast<int>(ids_.size()));
    }
    std::size_t variable_count() const { return ids_.size(); }

    Compiled compile(const Formula& f) const {
        Compiled c{f.kind(), 0, {}, {}};
        if (f.kind() == NodeKind::Predicate) c.symbol = *b_.signature().find(f.name());
        if (f.is_atom())
            for (const auto& a : f.arguments()) c.vars.push_back(ids_.at(a));
        if (f.is_quantifier()) c.vars.push_back(ids_.at(f.name()));
        for (const auto& ch : f.children()) c.kids.push_back(compile(ch));
        return c;
    }

private:
    const Structure& b_;
    std::map<std::string, int> ids_;
};

std::size_t quantifier_depth(const Formula& f) {
    std::size_t d = 0;
    for (const auto& c : f.children()) d = std::max(d, quantifier_depth(c));
    return d + (f.is_quantifier() ? 1 : 0);
}

class NaiveEvaluator {
public:
    NaiveEvaluator(const Structure& b, std::size_t vars) : b_(b), assignment_(vars, 0) {}

    bool eval(const Compiled& c) {
        switch (c.kind) {
        case NodeKind::Predicate: {
            tuple_.clear();
            for (int v : c.vars) tuple_.push_back(assignment_[static_cast<std::size_t>(v)]);
            return b_.contains(c.symbol, tuple_);
        }
        case NodeKind::Equality:
            return assignment_[static_cast<std::size_t>(c.vars[0])] == assignment_[static_cast<std::size_t>(c.vars[1])];
        case NodeKind::And:
            return std::all_of(c.kids.begin(), c.kids.end(), [&](const Compiled& k) { return eval(k); });
        case NodeKind::Or:
            return std::any_of(c.kids.begin(), c.kids.end(), [&](const Compiled& k) { return eval(k); });
        case NodeKind::Not:
            return !eval(c.kids[0]);
        case NodeKind::Exists:
        case NodeKind::Forall: {
            const bool want = c.kind == NodeKind::Exists;
            auto& slot = assignment_[static_cast<std::size_t>(c.vars[0])];
            const int saved = slot;
            bool result = !want;
            for (std::size_t x = 0; x < b_.size(); ++x) {
                slot = static_cast<int>(x);
                if (eval(c.kids[0]) == want) {
                    result = want;
                    break;
                }
            }
            slot = saved;
            return result;
        }
        }
        return false;
    }

private:
    const Structure& b_;
    std::vector<int> assignment_;
    Tuple tuple_;
};

// ---------------------------------------------------------------------------
// k-variable evaluation

struct Relation {
    std::vector<int> vars;               // sorted variable ids
    std::vector<std::vector<int>> rows;  // sorted, unique; columns follow `vars`
};

struct RowHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept {
        std::size_t h = v.size();
        for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

void normalize_rows(Relation& r) {
    std::sort(r.rows.begin(), r.rows.end());
    r.rows.erase(std::unique(r.rows.begin(), r.rows.end()), r.rows.end());
}

class BottomUpEvaluator {
public:
    BottomUpEvaluator(const Structure& b, std::size_t k) : b_(b), k_(k) {}

    std::size_t max_arity() const { return max_arity_; }

    Relation eval(const Compiled& c) {
        Relation r = dispatch(c);
        max_arity_ = std::max(max_arity_, r.vars.size());
        if (r.vars.size() > k_) throw Error("k-variable evaluation produced a relation wider than k");
        return r;
    }

private:
    Relation dispatch(const Compiled& c) {
        switch (c.kind) {
        case NodeKind::Predicate: return atom(c);
        case NodeKind::Equality: return equality(c);
        case NodeKind::And: return conjunction(c);
        case NodeKind::Or: return disjunction(c);
        case NodeKind::Not: return complement(eval(c.kids[0]));
        case NodeKind::Exists: return project(eval(c.kids[0]), c.vars[0]);
        case NodeKind::Forall: {
            Relation inner = eval(c.kids[0]);
            if (!std::binary_search(inner.vars.begin(), inner.vars.end(), c.vars[0])) return inner;
            return complement(project(complement(std::move(inner)), c.vars[0]));
        }
        }
        return {};
    }

    Relation atom(const Compiled& c) {
        Relation r;
        r.vars = c.vars;
        std::sort(r.vars.begin(), r.vars.end());
        r.vars.erase(std::unique(r.vars.begin(), r.vars.end()), r.vars.end());
        for (const auto& t : b_.relation(c.symbol)) {
            std::vector<int> row(r.vars.size(), -1);
            bool ok = true;
            for (std::size_t i = 0; i < t.size() && ok; ++i) {
                const auto col = static_cast<std::size_t>(
                    std::lower_bound(r.vars.begin(), r.vars.end(), c.vars[i]) - r.vars.begin());
                if (row[col] < 0)
                    row[col] = t[i];
                else
                    ok = row[col] == t[i];
            }
            if (ok) r.rows.push_back(std::move(row));
        }
        normalize_rows(r);
        return r;
    }

    Relation equality(const Compiled& c) {
        Relation r;
        const int x = c.vars[0];
        const int y = c.vars[1];
        if (x == y) {
            r.vars = {x};
            for (std::size_t e = 0; e < b_.size(); ++e) r.rows.push_back({static_cast<int>(e)});
        } else {
            r.vars = {std::min(x, y), std::max(x, y)};
            for (std::size_t e = 0; e < b_.size(); ++e) r.rows.push_back({static_cast<int>(e), static_cast<int>(e)});
        }
        return r;
    }

    static std::vector<int> merged_vars(const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> out;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    }

    Relation join(const Relation& left, const Relation& right) {
        Relation out;
        out.vars = merged_vars(left.vars, right.vars);
        std::vector<int> shared;
        std::set_intersection(left.vars.begin(), left.vars.end(), right.vars.begin(), right.vars.end(),
                              std::back_inserter(shared));
        auto columns = [](const std::vector<int>& from, const std::vector<int>& wanted) {
            std::vector<std::size_t> cols;
            for (int v : wanted)
                cols.push_back(static_cast<std::size_t>(std::lower_bound(from.begin(), from.end(), v) - from.begin()));
            return cols;
        };
        const auto left_key = columns(left.vars, shared);
        const auto right_key = columns(right.vars, shared);
        std::unordered_map<std::vector<int>, std::vector<std::size_t>, RowHash> index;
        std::vector<int> key;
        for (std::size_t i = 0; i < right.rows.size(); ++i) {
            key.clear();
            for (auto col : right_key) key.push_back(right.rows[i][col]);
            index[key].push_back(i);
        }
        // Position of each output column in the left row (or, if absent there, the right row).
        std::vector<std::pair<bool, std::size_t>> source;
        for (int v : out.vars) {
            auto it = std::lower_bound(left.vars.begin(), left.vars.end(), v);
            if (it != left.vars.end() && *it == v)
                source.emplace_back(true, static_cast<std::size_t>(it - left.vars.begin()));
            else
                source.emplace_back(false, static_cast<std::size_t>(
                                               std::lower_bound(right.vars.begin(), right.vars.end(), v) - right.vars.begin()));
        }
        for (const auto& lrow : left.rows) {
            key.clear();
            for (auto col : left_key) key.push_back(lrow[col]);
            auto hit = index.find(key);
            if (hit == index.end()) continue;
            for (auto ri : hit->second) {
                std::vector<int> row;
                row.reserve(source.size());
                for (const auto& [from_left, col] : source) row.push_back(from_left ? lrow[col] : right.rows[ri][col]);
                out.rows.push_back(std::move(row));
            }
        }
        normalize_rows(out);
        return out;
    }

    Relation conjunction(const Compiled& c) {
        std::vector<Relation> parts;
        for (const auto& k : c.kids) {
            parts.push_back(eval(k));
            if (parts.back().rows.empty()) {
                Relation empty;
                for (const auto& p : parts) empty.vars = merged_vars(empty.vars, p.vars);
                for (std::size_t i = parts.size(); i < c.kids.size(); ++i) {
                    auto more = free_ids(c.kids[i]);
                    empty.vars = merged_vars(empty.vars, more);
                }
                return empty;
            }
        }
        // Greedy join order: smallest first, then whatever shares most columns with the result.
        std::vector<char> used(parts.size(), 0);
        std::size_t start = 0;
        for (std::size_t i = 1; i < parts.size(); ++i)
            if (parts[i].rows.size() < parts[start].rows.size()) start = i;
        used[start] = 1;
        Relation acc = std::move(parts[start]);
        for (std::size_t step = 1; step < parts.size(); ++step) {
            std::size_t pick = parts.size();
            std::size_t pick_shared = 0;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (used[i]) continue;
                std::vector<int> shared;
                std::set_intersection(acc.vars.begin(), acc.vars.end(), parts[i].vars.begin(), parts[i].vars.end(),
                                      std::back_inserter(shared));
                if (pick == parts.size() || shared.size() > pick_shared ||
                    (shared.size() == pick_shared && parts[i].rows.size() < parts[pick].rows.size())) {
                    pick = i;
                    pick_shared = shared.size();
                }
            }
            used[pick] = 1;
            acc = join(acc, parts[pick]);
            max_arity_ = std::max(max_arity_, acc.vars.size());
            if (acc.vars.size() > k_) throw Error("k-variable evaluation produced a relation wider than k");
        }
        return acc;
    }

    Relation extend(const Relation& r, const std::vector<int>& vars) {
        Relation out = r;
        for (int v : vars) {
            if (std::binary_search(out.vars.begin(), out.vars.end(), v)) continue;
            const auto col = static_cast<std::size_t>(std::lower_bound(out.vars.begin(), out.vars.end(), v) - out.vars.begin());
            Relation next;
            next.vars = out.vars;
            next.vars.insert(next.vars.begin() + static_cast<std::ptrdiff_t>(col), v);
            for (const auto& row : out.rows)
                for (std::size_t e = 0; e < b_.size(); ++e) {
                    auto wide = row;
                    wide.insert(wide.begin() + static_cast<std::ptrdiff_t>(col), static_cast<int>(e));
                    next.rows.push_back(std::move(wide));
                }
            out = std::move(next);
        }
        normalize_rows(out);
        return out;
    }

    Relation disjunction(const Compiled& c) {
        std::vector<Relation> parts;
        std::vector<int> vars;
        for (const auto& k : c.kids) {
            parts.push_back(eval(k));
            vars = merged_vars(vars, parts.back().vars);
        }
        Relation out;
        out.vars = vars;
        for (const auto& p : parts) {
            auto wide = extend(p, vars);
            out.rows.insert(out.rows.end(), wide.rows.begin(), wide.rows.end());
        }
        normalize_rows(out);
        return out;
    }

    Relation complement(Relation r) {
        Relation out;
        out.vars = r.vars;
        std::vector<int> row(r.vars.size(), 0);
        const int n = static_cast<int>(b_.size());
        while (true) {
            if (!std::binary_search(r.rows.begin(), r.rows.end(), row)) out.rows.push_back(row);
            std::size_t i = row.size();
            while (i > 0 && row[i - 1] == n - 1) row[--i] = 0;
            if (i == 0) break;
            ++row[i - 1];
        }
        return out;
    }

    Relation project(Relation r, int var) {
        auto it = std::lower_bound(r.vars.begin(), r.vars.end(), var);
        if (it == r.vars.end() || *it != var) return r;
        const auto col = static_cast<std::ptrdiff_t>(it - r.vars.begin());
        Relation out;
        out.vars = r.vars;
        out.vars.erase(out.vars.begin() + col);
        for (auto& row : r.rows) {
            row.erase(row.begin() + col);
            out.rows.push_back(std::move(row));
        }
        normalize_rows(out);
        return out;
    }

    static std::vector<int> free_ids(const Compiled& c) {
        std::vector<int> out;
        if (c.kind == NodeKind::Predicate || c.kind == NodeKind::Equality) {
            out = c.vars;
        } else {
            for (const auto& k : c.kids) out = merged_vars(out, free_ids(k));
            if (c.kind == NodeKind::Exists || c.kind == NodeKind::Forall)
                out.erase(std::remove(out.begin(), out.end(), c.vars[0]), out.end());
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    const Structure& b_;
    std::size_t k_;
    std::size_t max_arity_ = 0;
};

bool holds_somewhere(const std::vector<Formula>& disjuncts, const Structure& b, const Limits& limits, Stats* stats) {
    for (const auto& psi : disjuncts) {
        const Structure c = structure_of_pp(psi, &b.signature());
        if (find_homomorphism(c, b, limits, stats)) return true;
    }
    return false;
}

} // namespace

bool eval_naive(const Formula& sentence, const Structure& b, const Limits& limits) {
    require_closed(sentence);
    require_compatible(sentence, b);
    const auto depth = quantifier_depth(sentence);
    std::uint64_t work = 1;
    for (std::size_t i = 0; i < depth; ++i) {
        work *= b.size();
        if (work > limits.max_naive_work)
            throw ResourceLimit("naive evaluation needs about |B|^" + std::to_string(depth) +
                                " steps, above the configured limit");
    }
    Compiler compiler(b, sentence);
    NaiveEvaluator ev(b, compiler.variable_count());
    return ev.eval(compiler.compile(sentence));
}

bool eval_kvar(const Formula& sentence, const Structure& b, std::size_t k, Stats* stats) {
    require_closed(sentence);
    require_compatible(sentence, b);
    const auto vars = classify(sentence).variables;
    if (vars > k)
        throw InvalidArgument("sentence uses " + std::to_string(vars) + " variables, more than k = " + std::to_string(k));
    Compiler compiler(b, sentence);
    BottomUpEvaluator ev(b, k);
    const Relation r = ev.eval(compiler.compile(sentence));
    if (stats) stats->max_arity = std::max(stats->max_arity, ev.max_arity());
    return !r.rows.empty();
}

bool eval_dnf_hom(const Formula& sentence, const Structure& b, const Limits& limits, Stats* stats) {
    require_closed(sentence);
    require_compatible(sentence, b);
    return holds_somewhere(to_pp_disjunction(sentence, limits, stats), b, limits, stats);
}

bool eval_via_pp_turing(const Formula& sentence, const Structure& b, const Limits& limits, Stats* stats) {
    require_closed(sentence);
    require_compatible(sentence, b);
    return holds_somewhere(m_normalize(sentence, limits, stats), b, limits, stats);
}

Instance pp_to_ep_instance(const Formula& psi, const Formula& phi, const Structure& b, const Limits& limits) {
    require_compatible(phi, b);
    require_compatible(psi, b);
    const Structure c = structure_of_pp(psi, &b.signature());
    bool member = false;
    for (const auto& m : m_normalize(phi, limits)) {
        if (hom_equivalent(c, structure_of_pp(m, &b.signature()), limits)) {
            member = true;
            break;
        }
    }
    if (!member) throw InvalidArgument("psi is not equivalent to any member of M(phi)");
    return Instance{phi, product(c, b)};
}

std::optional<Strategy> parse_strategy(std::string_view name) {
    if (name == "naive") return Strategy::Naive;
    if (name == "kvar") return Strategy::KVar;
    if (name == "dnf-hom") return Strategy::DnfHom;
    if (name == "pp-reduction") return Strategy::PpReduction;
    return std::nullopt;
}

std::string strategy_name(Strategy s) {
    switch (s) {
    case Strategy::Naive: return "naive";
    case Strategy::KVar: return "kvar";
    case Strategy::DnfHom: return "dnf-hom";
    case Strategy::PpReduction: return "pp-reduction";
    }
    return "?";
}

bool evaluate(const Formula& sentence, const Structure& b, Strategy strategy, const Limits& limits, Stats* stats,
              std::size_t k) {
    switch (strategy) {
    case Strategy::Naive: return eval_naive(sentence, b, limits);
    case Strategy::KVar: return eval_kvar(sentence, b, k == 0 ? classify(sentence).variables : k, stats);
    case Strategy::DnfHom: return eval_dnf_hom(sentence, b, limits, stats);
    case Strategy::PpReduction: return eval_via_pp_turing(sentence, b, limits, stats);
    }
    return false;
}

} // namespace epq
