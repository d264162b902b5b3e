#pragma once

#include "epq/evaluator.hpp"
#include "epq/formula.hpp"
#include "epq/limits.hpp"
#include "epq/structure.hpp"
#include "epq/treewidth.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace epq {

// Labelled digraphs are structures over sigma_n = {E/2, L1/1, ..., Ln/1}, n >= 1.
// Plain digraphs are structures over {E/2}.

Signature sigma(std::size_t n);
/// The n with signature == sigma(n); throws InvalidArgument otherwise.
std::size_t label_count(const Structure& labelled);

/// Name of a gadget vertex: "ELEM^TAG". Element names must not contain '^'.
std::string gadget_element(std::string_view element, std::string_view tag);

/// B*: one gadget per element plus an edge (b^t, b'^s) for every edge (b, b').
Structure gadget_star(const Structure& labelled);
/// B+: vertices b^s, b^t with edges (b^s, b^t) and (b^t, b'^s) for every edge (b, b').
Structure gadget_plus(const Structure& labelled);

/// Directed n-cycle on 0..n-1 where every vertex carries every label.
Structure cycle_all_labels(std::size_t n);
/// The same digraph over sigma_n with label Li on the i-th vertex (vertices sorted by name).
Structure unique_label_digraph(const Structure& digraph);
/// A_f over sigma_n: vertices v1..vn, edges (vi, v f(i)), label Li on vi. f is 0-based.
Structure functional_digraph(const std::vector<std::size_t>& f);

/// H_n: the canonical query of A* for the edgeless uniquely labelled A, with the
/// conjunct that every v_i^t has an edge to some v_j^s.
Formula hamiltonian_sentence(std::size_t n);
/// A disjunction, over all f : [n] -> [n], of a 6-variable PP sentence equivalent to
/// the canonical query of A_f*. Throws ResourceLimit when n > limits.max_functions_n.
Formula hamiltonian_sentence_ep6(std::size_t n, const Limits& limits = {});

/// Replaces every atom E(x, y) by F(x, y, ..., y) with F of the given arity.
Formula lift_sentence(const Formula& f, std::size_t arity);
/// F = {(a, b, ..., b) | (a, b) in E}.
Structure lift_structure(const Structure& digraph, std::size_t arity);

/// (H_n, (B x C_n)*) for B = unique_label_digraph(g); lifted to arity m when m > 2.
Instance reduce_hamiltonian(const Structure& digraph, std::optional<std::size_t> lift_arity = std::nullopt);

/// Exhaustive search for a directed Hamiltonian circuit; 2 <= n <= 8.
bool brute_force_hamiltonian(const Structure& digraph);

struct CnfFormula {
    std::size_t variables = 0;
    std::vector<std::vector<int>> clauses;  // literals are +-(1..variables)
};

std::vector<std::string> validate(const CnfFormula& cnf);
CnfFormula parse_dimacs(std::string_view text);
bool brute_force_satisfiable(const CnfFormula& cnf);

struct SatMode {
    enum Kind { TwoSymbols, SingleSymbol, Unary } kind = TwoSymbols;
    std::size_t true_arity = 2;   // two-symbols: arity of T
    std::size_t false_arity = 2;  // two-symbols: arity of F
    std::size_t arity = 2;        // single-symbol: arity of S
};

/// "two-symbols", "two-symbols:K", "two-symbols:K,L", "single-symbol:K", "unary".
SatMode parse_sat_mode(std::string_view text);

/// Instance that evaluates to true iff the CNF is satisfiable.
Instance reduce_sat(const CnfFormula& cnf, const SatMode& mode);

/// Width <= 2 decomposition of a digraph in which every vertex has outdegree exactly 1.
TreeDecomposition outdeg1_decomposition(const Structure& digraph);

/// Extends a decomposition of gadget_plus(b) to one of gadget_star(b) by hanging a path
/// of gadget bags (each containing b^s and b^t) off the first node holding both.
TreeDecomposition star_decomposition(const Structure& labelled, const TreeDecomposition& plus);

} // namespace epq
