#pragma once

#include "epq/limits.hpp"
#include "epq/structure.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace epq {

/// One box P_1 x ... x P_k; each coordinate set is sorted and duplicate-free.
using GdnfBlock = std::vector<std::vector<std::string>>;

/// A relation written as a union of boxes over a declared universe.
struct GdnfRelation {
    std::size_t arity = 1;
    std::vector<std::string> universe;
    std::vector<GdnfBlock> blocks;

    bool operator==(const GdnfRelation&) const = default;
};

/// Empty iff the block list respects the arity and the universe.
std::vector<std::string> validate(const GdnfRelation& g);

/// One singleton block per tuple, in the given order.
GdnfRelation gdnf_from_explicit(const std::vector<NamedTuple>& tuples, const std::vector<std::string>& universe,
                                std::size_t arity);

/// Block (i, j) is the coordinatewise product of block i of g and block j of h, over
/// pair_name elements. Exactly |g.blocks| * |h.blocks| blocks.
GdnfRelation gdnf_product(const GdnfRelation& g, const GdnfRelation& h);

/// Sorted, duplicate-free tuples. Throws ResourceLimit beyond limits.max_gdnf_tuples.
std::vector<NamedTuple> gdnf_to_explicit(const GdnfRelation& g, const Limits& limits = {});

bool gdnf_member(const GdnfRelation& g, const NamedTuple& tuple);

/// Drops repeated blocks (keeping the first copy); nothing else is merged.
GdnfRelation compact(const GdnfRelation& g);

/// Representation length: total size of all coordinate sets.
std::size_t length(const GdnfRelation& g);

/// Text form: `arity K`, optional `universe e1 e2 ...`, then `block {a b} {c} ...` lines.
/// Without a universe line the universe is the set of elements mentioned.
GdnfRelation parse_gdnf(std::string_view text);
std::string serialize(const GdnfRelation& g);

/// A structure whose relations are all held in GDNF form.
struct GdnfStructure {
    Signature signature;
    std::vector<std::string> universe;
    std::map<std::string, GdnfRelation> relations;
};

GdnfStructure to_gdnf(const Structure& s);
Structure to_explicit(const GdnfStructure& s, const Limits& limits = {});
GdnfStructure product(const GdnfStructure& a, const GdnfStructure& b);

} // namespace epq
