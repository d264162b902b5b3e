#include "epq/treewidth.hpp"

#include "epq/errors.hpp"
#include "epq/homomorphism.hpp"
#include "epq/queries.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>

namespace epq {

long TreeDecomposition::width() const {
    long w = -1;
    for (const auto& b : bags) w = std::max(w, static_cast<long>(b.size()) - 1);
    return w;
}

std::size_t TreeDecomposition::add_node(std::vector<std::string> bag) {
    bags.push_back(std::move(bag));
    return bags.size() - 1;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<std::string> decomposition_violations(const Structure& a, const TreeDecomposition& d) {
    std::vector<std::string> out;
    const std::size_t n = d.node_count();
    if (n == 0) {
        out.emplace_back("decomposition has no nodes");
        return out;
    }
    std::vector<std::vector<int>> members(n);
    for (std::size_t t = 0; t < n; ++t) {
        if (d.bags[t].empty()) out.push_back("bag of node " + std::to_string(t) + " is empty");
        for (const auto& e : d.bags[t]) {
            if (auto i = a.find(e))
                members[t].push_back(*i);
            else
                out.push_back("bag of node " + std::to_string(t) + " holds '" + e + "', which is not in the universe");
        }
        std::sort(members[t].begin(), members[t].end());
    }

    std::vector<std::vector<std::size_t>> adj(n);
    bool edges_ok = true;
    for (const auto& [u, v] : d.edges) {
        if (u >= n || v >= n || u == v) {
            out.emplace_back("edge with an invalid endpoint");
            edges_ok = false;
            continue;
        }
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    if (d.edges.size() != n - 1) {
        out.emplace_back("a tree on " + std::to_string(n) + " nodes needs " + std::to_string(n - 1) + " edges, got " +
                         std::to_string(d.edges.size()));
        edges_ok = false;
    }
    if (edges_ok) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (auto v : adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    ++reached;
                    stack.push_back(v);
                }
        }
        if (reached != n) {
            out.emplace_back("decomposition graph is not connected");
            edges_ok = false;
        }
    }

    auto holds = [&](std::size_t t, int e) { return std::binary_search(members[t].begin(), members[t].end(), e); };
    for (std::size_t e = 0; e < a.size(); ++e) {
        std::vector<std::size_t> nodes;
        for (std::size_t t = 0; t < n; ++t)
            if (holds(t, static_cast<int>(e))) nodes.push_back(t);
        if (nodes.empty()) {
            out.push_back("element '" + a.universe()[e] + "' is in no bag");
            continue;
        }
        if (!edges_ok) continue;
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{nodes.front()};
        seen[nodes.front()] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (auto v : adj[u])
                if (!seen[v] && holds(v, static_cast<int>(e))) {
                    seen[v] = 1;
                    ++reached;
                    stack.push_back(v);
                }
        }
        if (reached != nodes.size()) out.push_back("nodes holding '" + a.universe()[e] + "' are not connected");
    }

    for (std::size_t s = 0; s < a.signature().size(); ++s) {
        for (const auto& tup : a.relation(s)) {
            bool covered = false;
            for (std::size_t t = 0; t < n && !covered; ++t)
                covered = std::all_of(tup.begin(), tup.end(), [&](int e) { return holds(t, e); });
            if (!covered) {
                std::string text = a.signature()[s].name + "(";
                for (std::size_t i = 0; i < tup.size(); ++i) text += (i ? "," : "") + a.name(tup[i]);
                out.push_back("tuple " + text + ") is not covered by any bag");
            }
        }
    }
    return out;
}

bool validate_decomposition(const Structure& a, const TreeDecomposition& d) {
    return decomposition_violations(a, d).empty();
}

// ---------------------------------------------------------------------------
// Treewidth

std::vector<std::vector<int>> gaifman_graph(const Structure& a) {
    std::vector<std::set<int>> adj(a.size());
    for (std::size_t s = 0; s < a.signature().size(); ++s)
        for (const auto& t : a.relation(s))
            for (int x : t)
                for (int y : t)
                    if (x != y) adj[static_cast<std::size_t>(x)].insert(y);
    std::vector<std::vector<int>> out;
    for (auto& s : adj) out.emplace_back(s.begin(), s.end());
    return out;
}

TreeDecomposition decomposition_from_order(const Structure& a, const std::vector<int>& order) {
    const std::size_t n = a.size();
    if (order.size() != n) throw InvalidArgument("elimination order must list every element once");
    std::vector<std::size_t> pos(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = static_cast<std::size_t>(order[i]);
        if (v >= n || pos[v] != n) throw InvalidArgument("elimination order must list every element once");
        pos[v] = i;
    }
    std::vector<std::set<int>> adj(n);
    const auto g = gaifman_graph(a);
    for (std::size_t v = 0; v < n; ++v) adj[v].insert(g[v].begin(), g[v].end());

    TreeDecomposition d;
    std::vector<std::optional<int>> parent(n);  // by elimination step
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = static_cast<std::size_t>(order[i]);
        std::vector<int> later;
        for (int u : adj[v])
            if (pos[static_cast<std::size_t>(u)] > i) later.push_back(u);
        std::sort(later.begin(), later.end(), [&](int x, int y) { return pos[static_cast<std::size_t>(x)] < pos[static_cast<std::size_t>(y)]; });
        for (int x : later)
            for (int y : later)
                if (x != y) adj[static_cast<std::size_t>(x)].insert(y);
        std::vector<std::string> bag{a.universe()[v]};
        for (int u : later) bag.push_back(a.name(u));
        d.add_node(std::move(bag));
        if (!later.empty()) parent[i] = static_cast<int>(pos[static_cast<std::size_t>(later.front())]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
        d.edges.emplace_back(i, parent[i] ? static_cast<std::size_t>(*parent[i]) : n - 1);
    return d;
}

TreewidthResult treewidth_exact(const Structure& a, const Limits& limits) {
    const std::size_t n = a.size();
    if (n > limits.max_exact_tw || n > 30)
        throw ResourceLimit("exact treewidth limited to " + std::to_string(limits.max_exact_tw) + " elements, got " +
                            std::to_string(n));
    const auto g = gaifman_graph(a);
    std::vector<std::uint32_t> adj(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        for (int u : g[v]) adj[v] |= std::uint32_t{1} << u;

    // best[S]: least width of eliminating S first; last[S]: element of S eliminated last.
    const std::size_t subsets = std::size_t{1} << n;
    std::vector<std::int8_t> best(subsets, 0);
    std::vector<std::int8_t> last(subsets, 0);
    best[0] = -1;
    for (std::size_t s = 1; s < subsets; ++s) {
        const auto set = static_cast<std::uint32_t>(s);
        int best_value = 127;
        int best_v = -1;
        for (std::uint32_t rest = set; rest; rest &= rest - 1) {
            const int v = std::countr_zero(rest);
            const std::uint32_t before = set & ~(std::uint32_t{1} << v);
            // Neighbours of v once `before` has been eliminated: vertices outside
            // before ∪ {v} reachable from v through `before`.
            std::uint32_t comp = std::uint32_t{1} << v;
            std::uint32_t frontier = comp;
            while (frontier) {
                const int u = std::countr_zero(frontier);
                frontier &= frontier - 1;
                const std::uint32_t next = adj[static_cast<std::size_t>(u)] & before & ~comp;
                comp |= next;
                frontier |= next;
            }
            std::uint32_t reach = 0;
            for (std::uint32_t c = comp; c; c &= c - 1) reach |= adj[static_cast<std::size_t>(std::countr_zero(c))];
            const int q = std::popcount(reach & ~set);
            const int value = std::max<int>(best[before], q);
            if (value < best_value) {
                best_value = value;
                best_v = v;
            }
        }
        best[s] = static_cast<std::int8_t>(best_value);
        last[s] = static_cast<std::int8_t>(best_v);
    }

    std::vector<int> order(n);
    std::uint32_t set = static_cast<std::uint32_t>(subsets - 1);
    for (std::size_t i = n; i-- > 0;) {
        const int v = last[set];
        order[i] = v;
        set &= ~(std::uint32_t{1} << v);
    }
    TreewidthResult result;
    result.width = best[subsets - 1];
    result.decomposition = decomposition_from_order(a, order);
    return result;
}

TreewidthResult treewidth_upper(const Structure& a) {
    const std::size_t n = a.size();
    const auto g = gaifman_graph(a);
    std::vector<std::set<int>> adj(n);
    for (std::size_t v = 0; v < n; ++v) adj[v].insert(g[v].begin(), g[v].end());
    std::vector<char> gone(n, 0);
    std::vector<int> order;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t pick = n;
        std::size_t pick_fill = 0;
        std::size_t pick_degree = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (gone[v]) continue;
            std::size_t fill = 0;
            for (auto x = adj[v].begin(); x != adj[v].end(); ++x)
                for (auto y = std::next(x); y != adj[v].end(); ++y)
                    if (!adj[static_cast<std::size_t>(*x)].contains(*y)) ++fill;
            const std::size_t degree = adj[v].size();
            if (pick == n || fill < pick_fill || (fill == pick_fill && degree < pick_degree)) {
                pick = v;
                pick_fill = fill;
                pick_degree = degree;
            }
        }
        gone[pick] = 1;
        order.push_back(static_cast<int>(pick));
        for (int x : adj[pick])
            for (int y : adj[pick])
                if (x != y) adj[static_cast<std::size_t>(x)].insert(y);
        for (int x : adj[pick]) adj[static_cast<std::size_t>(x)].erase(static_cast<int>(pick));
        adj[pick].clear();
    }
    TreewidthResult result;
    result.decomposition = decomposition_from_order(a, order);
    result.width = result.decomposition.width();
    return result;
}

// ---------------------------------------------------------------------------
// Bounded-variable sentences from decompositions

namespace {

class DecompositionWriter {
public:
    DecompositionWriter(const Structure& a, const TreeDecomposition& d, std::size_t k) : a_(a), d_(d), k_(k) {
        const std::size_t n = d.node_count();
        bags_.resize(n);
        for (std::size_t t = 0; t < n; ++t)
            for (const auto& e : d.bags[t]) {
                const int i = a.index(e);
                if (std::find(bags_[t].begin(), bags_[t].end(), i) == bags_[t].end()) bags_[t].push_back(i);
            }
        std::vector<std::vector<std::size_t>> adj(n);
        for (const auto& [u, v] : d.edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        children_.resize(n);
        depth_.assign(n, 0);
        parent_.assign(n, n);
        std::vector<char> seen(n, 0);
        std::queue<std::size_t> queue;
        queue.push(0);
        seen[0] = 1;
        while (!queue.empty()) {
            const auto u = queue.front();
            queue.pop();
            std::sort(adj[u].begin(), adj[u].end());
            for (auto v : adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    parent_[v] = u;
                    depth_[v] = depth_[u] + 1;
                    children_[u].push_back(v);
                    queue.push(v);
                }
        }
        atoms_.resize(n);
        for (std::size_t s = 0; s < a.signature().size(); ++s) {
            for (const auto& tup : a.relation(s)) {
                std::size_t home = n;
                for (std::size_t t = 0; t < n; ++t) {
                    const bool covers = std::all_of(tup.begin(), tup.end(), [&](int e) {
                        return std::find(bags_[t].begin(), bags_[t].end(), e) != bags_[t].end();
                    });
                    if (covers && (home == n || depth_[t] < depth_[home])) home = t;
                }
                atoms_[home].emplace_back(s, tup);
            }
        }
        for (std::size_t i = 1; i <= k; ++i) pool_.push_back("x" + std::to_string(i));
    }

    Formula write() {
        auto f = emit(0, {});
        return *f;
    }

private:
    std::optional<Formula> emit(std::size_t node, const std::map<int, std::string>& inherited) {
        std::map<int, std::string> live;
        std::set<std::string> taken;
        for (int e : bags_[node]) {
            if (auto it = inherited.find(e); it != inherited.end()) {
                live[e] = it->second;
                taken.insert(it->second);
            }
        }
        std::vector<std::string> introduced;
        for (int e : bags_[node]) {
            if (live.contains(e)) continue;
            auto name = std::find_if(pool_.begin(), pool_.end(), [&](const std::string& p) { return !taken.contains(p); });
            live[e] = *name;
            taken.insert(*name);
            introduced.push_back(*name);
        }
        std::vector<Formula> parts;
        for (const auto& [s, tup] : atoms_[node]) {
            std::vector<std::string> args;
            for (int e : tup) args.push_back(live.at(e));
            parts.push_back(Formula::predicate(a_.signature()[s].name, std::move(args)));
        }
        for (auto c : children_[node])
            if (auto sub = emit(c, live)) parts.push_back(std::move(*sub));
        if (introduced.empty() && parts.empty()) return std::nullopt;
        if (parts.empty()) parts.push_back(Formula::equality(introduced.front(), introduced.front()));
        return Formula::exists_all(introduced, Formula::conjunction(std::move(parts)));
    }

    const Structure& a_;
    const TreeDecomposition& d_;
    std::size_t k_;
    std::vector<std::vector<int>> bags_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::size_t> depth_;
    std::vector<std::size_t> parent_;
    std::vector<std::vector<std::pair<std::size_t, Tuple>>> atoms_;
    std::vector<std::string> pool_;
};

} // namespace

Formula pp_from_decomposition(const Structure& a, const TreeDecomposition& d, std::size_t k) {
    if (k == 0) throw InvalidArgument("variable budget k must be positive");
    auto problems = decomposition_violations(a, d);
    if (!problems.empty()) throw InvalidArgument("invalid tree decomposition: " + problems.front());
    for (const auto& bag : d.bags) {
        std::set<std::string> distinct(bag.begin(), bag.end());
        if (distinct.size() > k)
            throw InvalidArgument("decomposition width " + std::to_string(d.width()) + " is not below k = " +
                                  std::to_string(k));
    }
    DecompositionWriter writer(a, d, k);
    return writer.write();
}

bool decide_ppk(const Formula& sentence, std::size_t k, const Limits& limits, Stats* stats) {
    const Structure c = core(structure_of_pp(sentence), limits, stats);
    const auto tw = treewidth_exact(c, limits);
    if (stats) stats->width = tw.width;
    return tw.width < static_cast<long>(k);
}

// ---------------------------------------------------------------------------
// Text format

TreeDecomposition parse_decomposition(std::string_view text) {
    TreeDecomposition d;
    std::map<std::string, std::size_t> ids;
    std::vector<std::pair<std::string, std::string>> pending;
    std::size_t line_no = 0;
    for (auto line : detail::split_lines(text)) {
        ++line_no;
        auto tokens = detail::tokenize_line(line);
        if (tokens.empty()) continue;
        if (tokens[0] == "node") {
            if (tokens.size() < 2) throw ParseError("node line without an id", line_no);
            if (ids.contains(tokens[1])) throw ParseError("duplicate node id '" + tokens[1] + "'", line_no);
            ids[tokens[1]] = d.add_node({tokens.begin() + 2, tokens.end()});
        } else if (tokens[0] == "edge") {
            if (tokens.size() != 3) throw ParseError("edge line needs two node ids", line_no);
            pending.emplace_back(tokens[1], tokens[2]);
        } else {
            throw ParseError("unexpected line starting with '" + tokens[0] + "'", line_no, 1);
        }
    }
    for (const auto& [u, v] : pending) {
        if (!ids.contains(u) || !ids.contains(v)) throw ParseError("edge refers to an unknown node");
        d.edges.emplace_back(ids[u], ids[v]);
    }
    return d;
}

std::string serialize(const TreeDecomposition& d) {
    std::ostringstream out;
    for (std::size_t t = 0; t < d.node_count(); ++t) {
        out << "node " << t;
        for (const auto& e : d.bags[t]) out << ' ' << e;
        out << '\n';
    }
    for (const auto& [u, v] : d.edges) out << "edge " << u << ' ' << v << '\n';
    return out.str();
}

} // namespace epq
