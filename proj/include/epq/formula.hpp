#pragma once

#include "epq/structure.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace epq {

enum class NodeKind { Predicate, Equality, And, Or, Not, Exists, Forall };

/// Immutable first-order formula over a relational signature.
///
/// Nodes are shared, so copies are cheap. Conjunction and disjunction are n-ary and
/// flattened on construction: a child of an And is never an And, and a one-child
/// conjunction is the child itself.
class Formula {
public:
    static Formula predicate(std::string symbol, std::vector<std::string> arguments);
    static Formula equality(std::string left, std::string right);
    static Formula conjunction(std::vector<Formula> children);
    static Formula disjunction(std::vector<Formula> children);
    static Formula negation(Formula child);
    static Formula exists(std::string variable, Formula body);
    static Formula forall(std::string variable, Formula body);
    /// exists v1 . exists v2 . ... body
    static Formula exists_all(const std::vector<std::string>& variables, Formula body);

    NodeKind kind() const noexcept { return node_->kind; }
    /// Predicate symbol, or the bound variable of a quantifier.
    const std::string& name() const noexcept { return node_->name; }
    /// Arguments of a predicate or the two sides of an equality.
    const std::vector<std::string>& arguments() const noexcept { return node_->arguments; }
    /// Children of And/Or; the single child of Not/Exists/Forall.
    const std::vector<Formula>& children() const noexcept { return node_->children; }
    const Formula& body() const { return node_->children.front(); }

    bool is_atom() const noexcept { return kind() == NodeKind::Predicate || kind() == NodeKind::Equality; }
    bool is_quantifier() const noexcept { return kind() == NodeKind::Exists || kind() == NodeKind::Forall; }

    bool operator==(const Formula& other) const;

private:
    struct Node {
        NodeKind kind;
        std::string name;
        std::vector<std::string> arguments;
        std::vector<Formula> children;
    };
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Formula make(NodeKind kind, std::string name, std::vector<std::string> arguments,
                        std::vector<Formula> children);

    std::shared_ptr<const Node> node_;
};

enum class Fragment { FO, EP, PP };

struct Classification {
    Fragment fragment = Fragment::PP;
    std::size_t variables = 0;   // distinct variable names, bound or free
    bool equality_free = true;
    bool closed = true;
};

Classification classify(const Formula& f);
std::string fragment_name(Fragment fragment);

std::set<std::string> free_variables(const Formula& f);
std::set<std::string> variable_names(const Formula& f);

/// Symbols used by the formula; throws SignatureMismatch if a symbol is used with two arities.
Signature signature_of(const Formula& f);

/// Parses the sentence grammar:
///   formula := 'exists' VAR '.' formula | 'forall' VAR '.' formula | 'not' formula | disj
///   disj := conj ('|' conj)* ;  conj := unit ('&' unit)*
///   unit := NAME '(' VAR (',' VAR)* ')' | VAR '=' VAR | '(' formula ')'
/// Quantifiers and 'not' are also accepted in unit position, with maximal scope.
/// If `signature` is given, predicate arities are checked against it.
Formula parse_formula(std::string_view text, const Signature* signature = nullptr);
Formula read_formula_file(const std::string& path, const Signature* signature = nullptr);

/// Canonical text; parse_formula(render(f)) == f.
std::string render(const Formula& f);

/// True iff `token` is usable as a variable or symbol name in the grammar.
bool is_identifier(std::string_view token);

} // namespace epq
