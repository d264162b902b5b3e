#include "epq/homomorphism.hpp"

#include "epq/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <numeric>

namespace epq {

namespace {

using Word = std::uint64_t;

/// One search over a fixed (source, target) pair. Domains are bitsets over target
/// positions, stored back to back in a single vector so a search state copies cheaply.
class Search {
public:
    Search(const Structure& a, const Structure& b, bool injective, const Limits& limits)
        : a_(a), b_(b), injective_(injective), limits_(limits), n_(a.size()), m_(b.size()),
          words_((b.size() + 63) / 64), var_constraints_(a.size()) {
        for (std::size_t s = 0; s < a.signature().size(); ++s) {
            for (const auto& t : a.relation(s)) {
                Constraint c{s, t, std::vector<int>(t.size(), -1)};
                for (std::size_t j = 0; j < t.size(); ++j)
                    for (std::size_t i = 0; i < j; ++i)
                        if (t[i] == t[j]) {
                            c.same[j] = static_cast<int>(i);
                            break;
                        }
                const std::size_t id = constraints_.size();
                constraints_.push_back(std::move(c));
                for (std::size_t j = 0; j < t.size(); ++j) {
                    auto& list = var_constraints_[static_cast<std::size_t>(t[j])];
                    if (list.empty() || list.back() != id) list.push_back(id);
                }
            }
        }
    }

    std::optional<Homomorphism> run(const std::vector<std::vector<int>>* candidates) {
        std::vector<Word> state(n_ * words_, 0);
        for (std::size_t v = 0; v < n_; ++v) {
            if (candidates) {
                for (int x : (*candidates)[v])
                    if (x >= 0 && static_cast<std::size_t>(x) < m_) set(state, v, static_cast<std::size_t>(x));
            } else {
                for (std::size_t x = 0; x < m_; ++x) set(state, v, x);
            }
            if (count(state, v) == 0) return std::nullopt;
        }
        std::vector<std::size_t> all(constraints_.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        if (!propagate(state, all)) return std::nullopt;
        std::vector<char> assigned(n_, 0);
        if (!dfs(state, assigned)) return std::nullopt;
        Homomorphism h;
        h.image.resize(n_);
        for (std::size_t v = 0; v < n_; ++v) h.image[v] = static_cast<int>(first(state, v));
        return h;
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    struct Constraint {
        std::size_t symbol;
        Tuple vars;
        std::vector<int> same;  // earlier position holding the same variable, or -1
    };

    Word* dom(std::vector<Word>& s, std::size_t v) const { return s.data() + v * words_; }
    const Word* dom(const std::vector<Word>& s, std::size_t v) const { return s.data() + v * words_; }
    void set(std::vector<Word>& s, std::size_t v, std::size_t x) const { dom(s, v)[x / 64] |= Word{1} << (x % 64); }
    bool test(const std::vector<Word>& s, std::size_t v, std::size_t x) const {
        return (dom(s, v)[x / 64] >> (x % 64)) & 1U;
    }
    std::size_t count(const std::vector<Word>& s, std::size_t v) const {
        std::size_t c = 0;
        for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::size_t>(std::popcount(dom(s, v)[w]));
        return c;
    }
    std::size_t first(const std::vector<Word>& s, std::size_t v) const {
        for (std::size_t w = 0; w < words_; ++w)
            if (Word bits = dom(s, v)[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        return m_;
    }

    // Narrows every variable of constraint `c` to values supported by some target tuple.
    bool revise(std::vector<Word>& s, std::size_t c, std::vector<std::size_t>& changed) {
        const auto& con = constraints_[c];
        const std::size_t k = con.vars.size();
        support_.assign(k * words_, 0);
        for (const auto& t : b_.relation(con.symbol)) {
            bool ok = true;
            for (std::size_t j = 0; j < k && ok; ++j) {
                if (con.same[j] >= 0)
                    ok = t[j] == t[static_cast<std::size_t>(con.same[j])];
                else
                    ok = test(s, static_cast<std::size_t>(con.vars[j]), static_cast<std::size_t>(t[j]));
            }
            if (!ok) continue;
            for (std::size_t j = 0; j < k; ++j)
                if (con.same[j] < 0) support_[j * words_ + static_cast<std::size_t>(t[j]) / 64] |= Word{1} << (t[j] % 64);
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (con.same[j] >= 0) continue;
            const auto v = static_cast<std::size_t>(con.vars[j]);
            Word* d = dom(s, v);
            bool diff = false;
            bool any = false;
            for (std::size_t w = 0; w < words_; ++w) {
                const Word next = d[w] & support_[j * words_ + w];
                if (next != d[w]) diff = true;
                if (next) any = true;
                d[w] = next;
            }
            if (!any) return false;
            if (diff) changed.push_back(v);
        }
        return true;
    }

    bool propagate(std::vector<Word>& s, const std::vector<std::size_t>& initial) {
        std::deque<std::size_t> queue;
        std::vector<char> queued(constraints_.size(), 0);
        for (auto c : initial)
            if (!queued[c]) {
                queued[c] = 1;
                queue.push_back(c);
            }
        std::vector<std::size_t> changed;
        while (!queue.empty()) {
            const auto c = queue.front();
            queue.pop_front();
            queued[c] = 0;
            changed.clear();
            if (!revise(s, c, changed)) return false;
            for (auto v : changed)
                for (auto other : var_constraints_[v])
                    if (other != c && !queued[other]) {
                        queued[other] = 1;
                        queue.push_back(other);
                    }
        }
        return true;
    }

    std::optional<std::size_t> choose(const std::vector<Word>& s, const std::vector<char>& assigned) const {
        std::optional<std::size_t> best;
        std::size_t best_size = 0;
        for (std::size_t v = 0; v < n_; ++v) {
            if (assigned[v]) continue;
            const auto size = count(s, v);
            if (!best || size < best_size ||
                (size == best_size && var_constraints_[v].size() > var_constraints_[*best].size())) {
                best = v;
                best_size = size;
            }
        }
        return best;
    }

    bool dfs(std::vector<Word>& s, std::vector<char>& assigned) {
        const auto var = choose(s, assigned);
        if (!var) return true;
        const std::size_t v = *var;
        for (std::size_t x = 0; x < m_; ++x) {
            if (!test(s, v, x)) continue;
            if (++nodes_ > limits_.max_nodes)
                throw ResourceLimit("homomorphism search exceeded " + std::to_string(limits_.max_nodes) + " nodes");
            std::vector<Word> next = s;
            std::fill(dom(next, v), dom(next, v) + words_, Word{0});
            set(next, v, x);
            assigned[v] = 1;
            std::vector<std::size_t> touched = var_constraints_[v];
            bool ok = true;
            if (injective_) {
                for (std::size_t u = 0; u < n_ && ok; ++u) {
                    if (u == v || !test(next, u, x)) continue;
                    if (assigned[u]) {
                        ok = false;
                        break;
                    }
                    dom(next, u)[x / 64] &= ~(Word{1} << (x % 64));
                    if (count(next, u) == 0) ok = false;
                    touched.insert(touched.end(), var_constraints_[u].begin(), var_constraints_[u].end());
                }
            }
            if (ok && propagate(next, touched) && dfs(next, assigned)) {
                s = std::move(next);
                return true;
            }
            assigned[v] = 0;
        }
        return false;
    }

    const Structure& a_;
    const Structure& b_;
    bool injective_;
    const Limits& limits_;
    std::size_t n_;
    std::size_t m_;
    std::size_t words_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<std::size_t>> var_constraints_;
    std::vector<Word> support_;
    std::uint64_t nodes_ = 0;
};

void require_similar(const Structure& a, const Structure& b) {
    if (a.signature() != b.signature())
        throw SignatureMismatch("structures over {" + a.signature().to_string() + "} and {" +
                                b.signature().to_string() + "} are not similar");
}

std::optional<Homomorphism> run_search(const Structure& a, const Structure& b,
                                       const std::vector<std::vector<int>>* candidates, bool injective,
                                       const Limits& limits, Stats* stats) {
    require_similar(a, b);
    Search search(a, b, injective, limits);
    std::optional<Homomorphism> result;
    try {
        result = search.run(candidates);
    } catch (...) {
        if (stats) {
            stats->nodes += search.nodes();
            ++stats->searches;
        }
        throw;
    }
    if (stats) {
        stats->nodes += search.nodes();
        ++stats->searches;
    }
    return result;
}

} // namespace

std::map<std::string, std::string> named_map(const Structure& source, const Structure& target,
                                             const Homomorphism& h) {
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < h.image.size() && i < source.size(); ++i)
        out[source.universe()[i]] = target.name(h.image[i]);
    return out;
}

std::optional<Homomorphism> find_homomorphism(const Structure& a, const Structure& b, const Limits& limits,
                                              Stats* stats) {
    return run_search(a, b, nullptr, false, limits, stats);
}

std::optional<Homomorphism> find_homomorphism_restricted(const Structure& a, const Structure& b,
                                                         const std::vector<std::vector<int>>& candidates,
                                                         bool injective, const Limits& limits, Stats* stats) {
    if (candidates.size() != a.size()) throw InvalidArgument("candidate list size differs from the source universe");
    return run_search(a, b, &candidates, injective, limits, stats);
}

bool verify_homomorphism(const Structure& a, const Structure& b, const Homomorphism& h) {
    if (a.signature() != b.signature() || h.image.size() != a.size()) return false;
    for (int x : h.image)
        if (x < 0 || static_cast<std::size_t>(x) >= b.size()) return false;
    Tuple mapped;
    for (std::size_t s = 0; s < a.signature().size(); ++s) {
        for (const auto& t : a.relation(s)) {
            mapped.clear();
            for (int e : t) mapped.push_back(h.image[static_cast<std::size_t>(e)]);
            if (!b.contains(s, mapped)) return false;
        }
    }
    return true;
}

bool hom_equivalent(const Structure& a, const Structure& b, const Limits& limits, Stats* stats) {
    return find_homomorphism(a, b, limits, stats) && find_homomorphism(b, a, limits, stats);
}

std::optional<Homomorphism> find_retraction(const Structure& a, std::span<const int> subset, const Limits& limits,
                                            Stats* stats) {
    if (subset.empty()) throw InvalidArgument("retraction onto an empty subset");
    std::vector<char> inside(a.size(), 0);
    for (int e : subset) {
        if (e < 0 || static_cast<std::size_t>(e) >= a.size())
            throw InvalidArgument("retraction subset element out of the universe");
        inside[static_cast<std::size_t>(e)] = 1;
    }
    std::vector<int> members;
    for (std::size_t e = 0; e < a.size(); ++e)
        if (inside[e]) members.push_back(static_cast<int>(e));
    std::vector<std::vector<int>> candidates(a.size());
    for (std::size_t e = 0; e < a.size(); ++e)
        candidates[e] = inside[e] ? std::vector<int>{static_cast<int>(e)} : members;
    return find_homomorphism_restricted(a, a, candidates, false, limits, stats);
}

Structure core(const Structure& a, const Limits& limits, Stats* stats) {
    if (a.size() > limits.max_core)
        throw ResourceLimit("core computation limited to " + std::to_string(limits.max_core) + " elements, got " +
                            std::to_string(a.size()));
    std::vector<int> kept(a.size());
    std::iota(kept.begin(), kept.end(), 0);
    Structure current = a;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < kept.size() && kept.size() > 1;) {
            std::vector<int> rest = kept;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
            Structure smaller = induced_substructure(a, rest);
            if (find_homomorphism(current, smaller, limits, stats)) {
                kept = std::move(rest);
                current = std::move(smaller);
                changed = true;
            } else {
                ++i;
            }
        }
    }
    return current;
}

bool isomorphic(const Structure& a, const Structure& b, const Limits& limits) {
    require_similar(a, b);
    if (a.size() > limits.max_isomorphism || b.size() > limits.max_isomorphism)
        throw ResourceLimit("isomorphism test limited to " + std::to_string(limits.max_isomorphism) + " elements");
    if (a.size() != b.size()) return false;
    for (std::size_t s = 0; s < a.signature().size(); ++s)
        if (a.relation(s).size() != b.relation(s).size()) return false;
    std::vector<int> all(b.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::vector<int>> candidates(a.size(), all);
    // An injective map between equally sized structures with equal tuple counts that
    // preserves every relation maps each relation onto its counterpart.
    return find_homomorphism_restricted(a, b, candidates, true, limits).has_value();
}

} // namespace epq
