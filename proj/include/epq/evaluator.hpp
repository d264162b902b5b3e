#pragma once

#include "epq/formula.hpp"
#include "epq/limits.hpp"
#include "epq/structure.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace epq {

/// A model-checking instance: does `structure` satisfy `sentence`?
struct Instance {
    Formula sentence;
    Structure structure;
};

/// Recursive evaluation over all assignments. Refuses (ResourceLimit) when
/// |B|^(quantifier depth) exceeds limits.max_naive_work.
bool eval_naive(const Formula& sentence, const Structure& b, const Limits& limits = {});

/// Bottom-up evaluation computing, per subformula, the relation of satisfying
/// assignments to its free variables (at most k of them). Handles full first-order
/// logic. Throws InvalidArgument if the sentence uses more than k variable names.
/// stats->max_arity records the widest intermediate relation.
bool eval_kvar(const Formula& sentence, const Structure& b, std::size_t k, Stats* stats = nullptr);

/// True iff some disjunct of to_pp_disjunction(sentence) maps homomorphically into b.
bool eval_dnf_hom(const Formula& sentence, const Structure& b, const Limits& limits = {}, Stats* stats = nullptr);

/// Turing-style reduction to PP model checking: one homomorphism query per member of
/// m_normalize(sentence), answered yes iff one of them is.
bool eval_via_pp_turing(const Formula& sentence, const Structure& b, const Limits& limits = {},
                        Stats* stats = nullptr);

/// Many-one direction: for psi in m_normalize(phi) (up to equivalence), the instance
/// (phi, C[psi] x b), which phi satisfies iff b satisfies psi.
/// Throws InvalidArgument if psi is not equivalent to a member of m_normalize(phi).
Instance pp_to_ep_instance(const Formula& psi, const Formula& phi, const Structure& b, const Limits& limits = {});

enum class Strategy { Naive, KVar, DnfHom, PpReduction };

std::optional<Strategy> parse_strategy(std::string_view name);
std::string strategy_name(Strategy s);

/// Dispatches to one strategy. For KVar, k = 0 means "the sentence's own variable count".
bool evaluate(const Formula& sentence, const Structure& b, Strategy strategy, const Limits& limits = {},
              Stats* stats = nullptr, std::size_t k = 0);

/// Throws SignatureMismatch unless every symbol of the sentence occurs in b's signature
/// with the same arity.
void require_compatible(const Formula& sentence, const Structure& b);

} // namespace epq
