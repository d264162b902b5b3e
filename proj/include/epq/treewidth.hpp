#pragma once

#include "epq/formula.hpp"
#include "epq/limits.hpp"
#include "epq/structure.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epq {

/// A tree of bags over the element names of some structure.
struct TreeDecomposition {
    std::vector<std::vector<std::string>> bags;           // bag of node i
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    std::size_t node_count() const { return bags.size(); }
    /// Largest bag size minus one; -1 for an empty decomposition.
    long width() const;
    /// Adds a node and returns its index.
    std::size_t add_node(std::vector<std::string> bag);
};

/// Reasons why `d` is not a tree decomposition of `a`; empty iff valid.
std::vector<std::string> decomposition_violations(const Structure& a, const TreeDecomposition& d);
bool validate_decomposition(const Structure& a, const TreeDecomposition& d);

struct TreewidthResult {
    long width = 0;
    TreeDecomposition decomposition;
};

/// Adjacency of the Gaifman graph: elements adjacent iff they share a tuple.
std::vector<std::vector<int>> gaifman_graph(const Structure& a);

/// Exact treewidth by dynamic programming over vertex subsets (elimination orderings),
/// with a witness decomposition. Throws ResourceLimit above limits.max_exact_tw elements.
TreewidthResult treewidth_exact(const Structure& a, const Limits& limits = {});

/// Min-fill elimination heuristic; always a valid decomposition, width >= treewidth.
TreewidthResult treewidth_upper(const Structure& a);

/// Decomposition induced by eliminating elements in `order` (positions in `a`).
TreeDecomposition decomposition_from_order(const Structure& a, const std::vector<int>& order);

/// A PP sentence equivalent to canonical_query(a) that uses at most k variable names,
/// read off a decomposition of width < k. The decomposition is rooted at node 0 and
/// walked depth first; each element keeps one name while it is in scope, freed names
/// are reused (least first), and each tuple's atom is emitted at the shallowest bag
/// covering it. Throws InvalidArgument if d is invalid or too wide.
Formula pp_from_decomposition(const Structure& a, const TreeDecomposition& d, std::size_t k);

/// Whether the core of the sentence's structure has treewidth < k.
bool decide_ppk(const Formula& sentence, std::size_t k, const Limits& limits = {}, Stats* stats = nullptr);

/// Text form: `node ID e1 e2 ...` and `edge ID ID` lines, '#' comments.
TreeDecomposition parse_decomposition(std::string_view text);
std::string serialize(const TreeDecomposition& d);

} // namespace epq
