#pragma once

#include <cstddef>
#include <cstdint>

namespace epq {

/// Resource budgets shared by every operation that can blow up.
/// Exceeding any of them raises ResourceLimit.
struct Limits {
    std::uint64_t max_nodes = 10'000'000;       // homomorphism search nodes per search
    std::size_t max_disjuncts = 10'000;         // DNF expansion size
    std::size_t max_exact_tw = 20;              // universe size for exact treewidth
    std::size_t max_core = 24;                  // universe size for core computation
    std::size_t max_isomorphism = 12;           // universe size for isomorphism tests
    std::uint64_t max_naive_work = 1'000'000'000;  // |B|^depth estimate for naive evaluation
    std::size_t max_gdnf_tuples = 1'000'000;    // explicit expansion of a GDNF relation
    std::size_t max_functions_n = 4;            // n for the n^n family behind the EP^6 form of H_n
};

/// Counters filled in by operations that accept a Stats pointer.
struct Stats {
    std::uint64_t nodes = 0;       // search nodes across all homomorphism searches
    std::size_t searches = 0;      // homomorphism searches started
    std::size_t disjuncts = 0;     // PP disjuncts produced or inspected
    std::size_t max_arity = 0;     // widest intermediate relation in k-variable evaluation
    long width = -1;               // decomposition width, when one was computed

    void absorb(const Stats& other) {
        nodes += other.nodes;
        searches += other.searches;
        disjuncts += other.disjuncts;
        if (other.max_arity > max_arity) max_arity = other.max_arity;
        if (other.width > width) width = other.width;
    }
};

} // namespace epq
