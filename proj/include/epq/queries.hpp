#pragma once

#include "epq/formula.hpp"
#include "epq/limits.hpp"
#include "epq/structure.hpp"

#include <string>
#include <string_view>

namespace epq {

/// Variable standing for a structure element in a canonical query: "x_" followed by
/// the element name with '_' doubled and characters outside [A-Za-z0-9^'] written as
/// "_hh" (two hex digits). Injective, so distinct elements get distinct variables.
std::string element_variable(std::string_view element);

/// The canonical query: one existential per element (universe order), one atom per
/// tuple (signature order, then tuple order). A structure without tuples yields the
/// equality of its first element's variable with itself.
Formula canonical_query(const Structure& a);

/// The structure of a closed PP sentence: bound variables are renamed apart, equalities
/// are merged with the lexicographically least variable as representative, and the
/// remaining variables become the universe in quantifier order. The signature is the
/// one used by the sentence, widened to `signature` when given.
/// Throws InvalidArgument if the sentence is not closed or not PP.
Structure structure_of_pp(const Formula& sentence, const Signature* signature = nullptr);

/// Whether `stronger` logically entails `weaker` (both closed PP): decided by a
/// homomorphism from the structure of `weaker` to that of `stronger`.
bool pp_entails(const Formula& stronger, const Formula& weaker, const Limits& limits = {}, Stats* stats = nullptr);

} // namespace epq
