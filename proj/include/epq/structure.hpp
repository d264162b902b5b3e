#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace epq {

struct RelationSymbol {
    std::string name;
    std::size_t arity = 1;

    auto operator<=>(const RelationSymbol&) const = default;
};

/// A finite set of relation symbols with pairwise distinct names, kept sorted by name.
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<RelationSymbol> symbols);

    const std::vector<RelationSymbol>& symbols() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    bool empty() const noexcept { return symbols_.empty(); }
    const RelationSymbol& operator[](std::size_t i) const { return symbols_[i]; }

    std::optional<std::size_t> find(std::string_view name) const;
    /// True iff every symbol of `other` is present here with the same arity.
    bool includes(const Signature& other) const;
    /// Union of both signatures; throws SignatureMismatch on an arity conflict.
    Signature merged(const Signature& other) const;
    std::string to_string() const;

    bool operator==(const Signature&) const = default;

private:
    std::vector<RelationSymbol> symbols_;
};

using Tuple = std::vector<int>;
using NamedTuple = std::vector<std::string>;

/// Unchecked description of a structure. validate() reports what is wrong with it;
/// Structure refuses to be built from an invalid one.
struct StructureSpec {
    Signature signature;
    std::vector<std::string> universe;
    std::map<std::string, std::vector<NamedTuple>> relations;
};

std::vector<std::string> validate(const StructureSpec& spec);

/// A finite relational structure. Elements are addressed by their position in the
/// universe, which keeps insertion order; relations are sorted, duplicate-free tuple lists.
class Structure {
public:
    explicit Structure(const StructureSpec& spec);

    const Signature& signature() const noexcept { return signature_; }
    const std::vector<std::string>& universe() const noexcept { return universe_; }
    std::size_t size() const noexcept { return universe_.size(); }
    const std::string& name(int element) const { return universe_[static_cast<std::size_t>(element)]; }

    std::optional<int> find(std::string_view element) const;
    /// Position of a named element; throws InvalidArgument when absent.
    int index(std::string_view element) const;

    const std::vector<Tuple>& relation(std::size_t symbol) const { return relations_[symbol]; }
    const std::vector<Tuple>& relation(std::string_view symbol) const;
    bool contains(std::size_t symbol, const Tuple& tuple) const;
    std::size_t tuple_count() const;

    StructureSpec spec() const;
    /// The same structure over a signature that includes the current one.
    Structure with_signature(const Signature& wider) const;

    /// Equality as sets: universe and relations compared by element names.
    bool operator==(const Structure& other) const;

private:
    friend class StructureBuilder;
    Structure() = default;

    Signature signature_;
    std::vector<std::string> universe_;
    std::unordered_map<std::string, int> positions_;
    std::vector<std::vector<Tuple>> relations_;
};

/// Incremental construction for code that generates structures.
class StructureBuilder {
public:
    explicit StructureBuilder(Signature signature);

    /// Adds an element (or returns the existing position of that name).
    int add_element(std::string name);
    void add_tuple(std::size_t symbol, Tuple tuple);
    void add_tuple(std::string_view symbol, const NamedTuple& tuple);
    std::size_t element_count() const { return universe_.size(); }

    /// Throws InvalidArgument if the universe is empty.
    Structure build() &&;

private:
    Signature signature_;
    std::vector<std::string> universe_;
    std::unordered_map<std::string, int> positions_;
    std::vector<std::vector<Tuple>> relations_;
};

/// Report of violated invariants; always empty for a constructed Structure.
std::vector<std::string> validate(const Structure& structure);

/// Name of the pair (left, right) in a product universe: "left|right", with '|' and
/// '\' escaped inside each component so that distinct pairs get distinct names.
std::string pair_name(std::string_view left, std::string_view right);

Structure product(const Structure& a, const Structure& b);
Structure induced_substructure(const Structure& a, std::span<const int> subset);
Structure induced_substructure(const Structure& a, const std::vector<std::string>& subset);

/// Line-oriented text form: `signature E/2 ...`, `universe a b ...`, `tuple E a b`.
Structure parse_structure(std::string_view text);
/// Canonical text: universe, symbols and tuples sorted lexicographically.
std::string serialize(const Structure& structure);
Structure read_structure_file(const std::string& path);

} // namespace epq
