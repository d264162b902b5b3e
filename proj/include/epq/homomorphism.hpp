#pragma once

#include "epq/limits.hpp"
#include "epq/structure.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace epq {

/// A total map from the universe of a source structure to that of a target,
/// stored as element positions: image[a] is the position of h(a) in the target.
struct Homomorphism {
    std::vector<int> image;

    bool operator==(const Homomorphism&) const = default;
};

/// Element names of a map, for printing.
std::map<std::string, std::string> named_map(const Structure& source, const Structure& target,
                                             const Homomorphism& h);

/// Backtracking search with arc-consistency propagation.
///
/// Variables are chosen by minimum remaining candidates, ties broken by the number of
/// constraints the variable occurs in and then by position; values are tried in target
/// universe order. The result is therefore a deterministic function of the inputs.
/// Throws SignatureMismatch for dissimilar structures and ResourceLimit once
/// limits.max_nodes search nodes have been expanded.
std::optional<Homomorphism> find_homomorphism(const Structure& a, const Structure& b, const Limits& limits = {},
                                              Stats* stats = nullptr);

/// Search restricted to per-element candidate lists (candidates[a] lists allowed target
/// positions). With `injective` set only one-to-one maps are returned.
std::optional<Homomorphism> find_homomorphism_restricted(const Structure& a, const Structure& b,
                                                         const std::vector<std::vector<int>>& candidates,
                                                         bool injective, const Limits& limits = {},
                                                         Stats* stats = nullptr);

/// Totality and preservation check; false (never throws) on any defect.
bool verify_homomorphism(const Structure& a, const Structure& b, const Homomorphism& h);

bool hom_equivalent(const Structure& a, const Structure& b, const Limits& limits = {}, Stats* stats = nullptr);

/// A homomorphism a -> a whose image lies in `subset` and which fixes every element of
/// `subset`. Positions in the result refer to `a`.
std::optional<Homomorphism> find_retraction(const Structure& a, std::span<const int> subset,
                                            const Limits& limits = {}, Stats* stats = nullptr);

/// The core of `a`, as an induced substructure of `a` (universe order preserved).
///
/// Elements are examined in universe order; an element is dropped whenever the current
/// structure maps homomorphically into the substructure without it. The loop stops when no
/// single element can be dropped, at which point every endomorphism is onto and the result
/// is a core. Throws ResourceLimit if a.size() > limits.max_core.
Structure core(const Structure& a, const Limits& limits = {}, Stats* stats = nullptr);

/// True iff there is a bijective homomorphism whose inverse is a homomorphism.
/// Throws ResourceLimit if either universe exceeds limits.max_isomorphism.
bool isomorphic(const Structure& a, const Structure& b, const Limits& limits = {});

} // namespace epq
