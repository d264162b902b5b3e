#pragma once

#include "epq/formula.hpp"
#include "epq/limits.hpp"

#include <cstdint>
#include <vector>

namespace epq {

/// Rewrites an EP sentence into a list of PP sentences whose disjunction is equivalent,
/// by pushing existentials through disjunctions and distributing conjunction over
/// disjunction, bottom-up. Disjuncts appear in generation order (left operand outer);
/// variable names are left untouched. Throws InvalidArgument on non-EP or open input
/// and ResourceLimit past limits.max_disjuncts.
std::vector<Formula> to_pp_disjunction(const Formula& sentence, const Limits& limits = {}, Stats* stats = nullptr);

/// One representative (the first generated) of every extremal logical-equivalence class
/// of the DNF disjuncts. A class is extremal when everything its members entail lies in
/// the class. The members are pairwise non-entailing and their disjunction is
/// equivalent to the input.
std::vector<Formula> m_normalize(const Formula& sentence, const Limits& limits = {}, Stats* stats = nullptr);

/// Name of the single variable used by compile_unary output.
inline constexpr const char* kUnaryVariable = "v";

/// Compiles an EP sentence over unary symbols into an equivalent one-variable sentence:
/// a disjunction of conjunctions of "little sentences" exists v . (P1(v) & ... & Pj(v)).
/// Each little sentence is keyed by a sorted symbol subset; conjunctions keep only
/// inclusion-maximal subsets and disjuncts are filtered as in m_normalize.
/// Throws InvalidArgument if a symbol of the sentence (or of `signature`) is not unary.
Formula compile_unary(const Formula& sentence, const Signature* signature = nullptr, const Limits& limits = {});

/// Little sentences occurring in a compile_unary result (distinct, as symbol sets).
std::size_t little_sentence_count(const Formula& compiled);

/// 2^|sigma|: the number of little sentences up to equivalence.
std::uint64_t little_sentence_bound(std::size_t signature_size);

} // namespace epq
