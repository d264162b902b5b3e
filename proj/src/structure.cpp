#include "epq/structure.hpp"

#include "epq/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace epq {

namespace {

bool is_token(std::string_view s) {
    if (s.empty()) return false;
    return std::none_of(s.begin(), s.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == '#';
    });
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

void sort_unique(std::vector<Tuple>& tuples) {
    std::sort(tuples.begin(), tuples.end());
    tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
}

void escape_component(std::string& out, std::string_view part) {
    for (char c : part) {
        if (c == '|' || c == '\\') out += '\\';
        out += c;
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(std::vector<RelationSymbol> symbols) : symbols_(std::move(symbols)) {
    for (const auto& s : symbols_) {
        if (!is_token(s.name)) throw InvalidArgument("invalid relation symbol name '" + s.name + "'");
        if (s.name.find('/') != std::string::npos)
            throw InvalidArgument("relation symbol name may not contain '/': " + s.name);
        if (s.arity < 1) throw InvalidArgument("relation symbol " + s.name + " has arity 0");
    }
    std::sort(symbols_.begin(), symbols_.end());
    for (std::size_t i = 1; i < symbols_.size(); ++i)
        if (symbols_[i].name == symbols_[i - 1].name)
            throw InvalidArgument("duplicate relation symbol " + symbols_[i].name);
}

std::optional<std::size_t> Signature::find(std::string_view name) const {
    auto it = std::lower_bound(symbols_.begin(), symbols_.end(), name,
                               [](const RelationSymbol& s, std::string_view n) { return s.name < n; });
    if (it == symbols_.end() || it->name != name) return std::nullopt;
    return static_cast<std::size_t>(it - symbols_.begin());
}

bool Signature::includes(const Signature& other) const {
    for (const auto& s : other.symbols_) {
        auto i = find(s.name);
        if (!i || symbols_[*i].arity != s.arity) return false;
    }
    return true;
}

Signature Signature::merged(const Signature& other) const {
    std::vector<RelationSymbol> all = symbols_;
    for (const auto& s : other.symbols_) {
        if (auto i = find(s.name)) {
            if (symbols_[*i].arity != s.arity)
                throw SignatureMismatch("symbol " + s.name + " used with arities " +
                                        std::to_string(symbols_[*i].arity) + " and " + std::to_string(s.arity));
        } else {
            all.push_back(s);
        }
    }
    return Signature(std::move(all));
}

std::string Signature::to_string() const {
    std::vector<std::string> parts;
    for (const auto& s : symbols_) parts.push_back(s.name + "/" + std::to_string(s.arity));
    return join(parts, " ");
}

// ---------------------------------------------------------------------------
// Validation

std::vector<std::string> validate(const StructureSpec& spec) {
    std::vector<std::string> report;
    if (spec.universe.empty()) report.emplace_back("empty universe");
    std::set<std::string_view> seen;
    for (const auto& e : spec.universe) {
        if (!is_token(e)) report.push_back("invalid element identifier '" + e + "'");
        if (!seen.insert(e).second) report.push_back("duplicate element '" + e + "'");
    }
    for (const auto& [name, tuples] : spec.relations) {
        auto sym = spec.signature.find(name);
        if (!sym) {
            report.push_back("unknown symbol '" + name + "'");
            continue;
        }
        const auto arity = spec.signature[*sym].arity;
        for (const auto& t : tuples) {
            if (t.size() != arity) {
                report.push_back("arity violation: tuple of length " + std::to_string(t.size()) + " under " + name +
                                 "/" + std::to_string(arity));
                continue;
            }
            for (const auto& e : t)
                if (!seen.contains(e)) report.push_back("element '" + e + "' in a " + name + " tuple is not in the universe");
        }
    }
    return report;
}

std::vector<std::string> validate(const Structure& s) {
    StructureSpec spec = s.spec();
    return validate(spec);
}

// ---------------------------------------------------------------------------
// Structure

Structure::Structure(const StructureSpec& spec) {
    auto report = validate(spec);
    if (!report.empty()) throw InvalidArgument("invalid structure: " + join(report, "; "));
    signature_ = spec.signature;
    universe_ = spec.universe;
    for (std::size_t i = 0; i < universe_.size(); ++i) positions_.emplace(universe_[i], static_cast<int>(i));
    relations_.resize(signature_.size());
    for (const auto& [name, tuples] : spec.relations) {
        auto& rel = relations_[*signature_.find(name)];
        for (const auto& t : tuples) {
            Tuple idx;
            idx.reserve(t.size());
            for (const auto& e : t) idx.push_back(positions_.at(e));
            rel.push_back(std::move(idx));
        }
        sort_unique(rel);
    }
}

std::optional<int> Structure::find(std::string_view element) const {
    auto it = positions_.find(std::string(element));
    if (it == positions_.end()) return std::nullopt;
    return it->second;
}

int Structure::index(std::string_view element) const {
    if (auto i = find(element)) return *i;
    throw InvalidArgument("element '" + std::string(element) + "' is not in the universe");
}

const std::vector<Tuple>& Structure::relation(std::string_view symbol) const {
    auto i = signature_.find(symbol);
    if (!i) throw SignatureMismatch("symbol '" + std::string(symbol) + "' is not in the signature");
    return relations_[*i];
}

bool Structure::contains(std::size_t symbol, const Tuple& tuple) const {
    const auto& rel = relations_[symbol];
    return std::binary_search(rel.begin(), rel.end(), tuple);
}

std::size_t Structure::tuple_count() const {
    std::size_t n = 0;
    for (const auto& r : relations_) n += r.size();
    return n;
}

StructureSpec Structure::spec() const {
    StructureSpec spec{signature_, universe_, {}};
    for (std::size_t s = 0; s < signature_.size(); ++s) {
        auto& out = spec.relations[signature_[s].name];
        for (const auto& t : relations_[s]) {
            NamedTuple named;
            for (int e : t) named.push_back(name(e));
            out.push_back(std::move(named));
        }
    }
    return spec;
}

Structure Structure::with_signature(const Signature& wider) const {
    if (!wider.includes(signature_))
        throw SignatureMismatch("signature {" + wider.to_string() + "} does not include {" + signature_.to_string() + "}");
    Structure out;
    out.signature_ = wider;
    out.universe_ = universe_;
    out.positions_ = positions_;
    out.relations_.resize(wider.size());
    for (std::size_t s = 0; s < signature_.size(); ++s) out.relations_[*wider.find(signature_[s].name)] = relations_[s];
    return out;
}

bool Structure::operator==(const Structure& other) const {
    if (signature_ != other.signature_ || size() != other.size()) return false;
    std::vector<int> to_other(size());
    for (std::size_t i = 0; i < size(); ++i) {
        auto j = other.find(universe_[i]);
        if (!j) return false;
        to_other[i] = *j;
    }
    for (std::size_t s = 0; s < signature_.size(); ++s) {
        if (relations_[s].size() != other.relations_[s].size()) return false;
        for (const auto& t : relations_[s]) {
            Tuple mapped;
            for (int e : t) mapped.push_back(to_other[static_cast<std::size_t>(e)]);
            if (!other.contains(s, mapped)) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Builder

StructureBuilder::StructureBuilder(Signature signature)
    : signature_(std::move(signature)), relations_(signature_.size()) {}

int StructureBuilder::add_element(std::string name) {
    if (auto it = positions_.find(name); it != positions_.end()) return it->second;
    if (!is_token(name)) throw InvalidArgument("invalid element identifier '" + name + "'");
    const int id = static_cast<int>(universe_.size());
    positions_.emplace(name, id);
    universe_.push_back(std::move(name));
    return id;
}

void StructureBuilder::add_tuple(std::size_t symbol, Tuple tuple) {
    if (symbol >= signature_.size()) throw InvalidArgument("symbol index out of range");
    if (tuple.size() != signature_[symbol].arity)
        throw InvalidArgument("arity violation: tuple of length " + std::to_string(tuple.size()) + " under " +
                              signature_[symbol].name);
    for (int e : tuple)
        if (e < 0 || static_cast<std::size_t>(e) >= universe_.size())
            throw InvalidArgument("tuple element out of range");
    relations_[symbol].push_back(std::move(tuple));
}

void StructureBuilder::add_tuple(std::string_view symbol, const NamedTuple& tuple) {
    auto s = signature_.find(symbol);
    if (!s) throw SignatureMismatch("symbol '" + std::string(symbol) + "' is not in the signature");
    Tuple idx;
    for (const auto& e : tuple) {
        auto it = positions_.find(e);
        if (it == positions_.end()) throw InvalidArgument("element '" + e + "' is not in the universe");
        idx.push_back(it->second);
    }
    add_tuple(*s, std::move(idx));
}

Structure StructureBuilder::build() && {
    if (universe_.empty()) throw InvalidArgument("invalid structure: empty universe");
    Structure out;
    out.signature_ = std::move(signature_);
    out.universe_ = std::move(universe_);
    out.positions_ = std::move(positions_);
    out.relations_ = std::move(relations_);
    for (auto& r : out.relations_) sort_unique(r);
    return out;
}

// ---------------------------------------------------------------------------
// Algebra

std::string pair_name(std::string_view left, std::string_view right) {
    std::string out;
    out.reserve(left.size() + right.size() + 1);
    escape_component(out, left);
    out += '|';
    escape_component(out, right);
    return out;
}

Structure product(const Structure& a, const Structure& b) {
    if (a.signature() != b.signature())
        throw SignatureMismatch("product of structures over {" + a.signature().to_string() + "} and {" +
                                b.signature().to_string() + "}");
    StructureBuilder builder(a.signature());
    const int nb = static_cast<int>(b.size());
    for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t y = 0; y < b.size(); ++y) builder.add_element(pair_name(a.universe()[x], b.universe()[y]));
    for (std::size_t s = 0; s < a.signature().size(); ++s) {
        for (const auto& ta : a.relation(s)) {
            for (const auto& tb : b.relation(s)) {
                Tuple t(ta.size());
                for (std::size_t i = 0; i < ta.size(); ++i) t[i] = ta[i] * nb + tb[i];
                builder.add_tuple(s, std::move(t));
            }
        }
    }
    return std::move(builder).build();
}

Structure induced_substructure(const Structure& a, std::span<const int> subset) {
    if (subset.empty()) throw InvalidArgument("induced substructure of an empty subset");
    std::vector<int> keep(a.size(), -1);
    StructureBuilder builder(a.signature());
    for (int e : subset) {
        if (e < 0 || static_cast<std::size_t>(e) >= a.size())
            throw InvalidArgument("subset element out of the universe");
        if (keep[static_cast<std::size_t>(e)] < 0) keep[static_cast<std::size_t>(e)] = builder.add_element(a.name(e));
    }
    for (std::size_t s = 0; s < a.signature().size(); ++s) {
        for (const auto& t : a.relation(s)) {
            Tuple mapped;
            bool inside = true;
            for (int e : t) {
                int m = keep[static_cast<std::size_t>(e)];
                if (m < 0) {
                    inside = false;
                    break;
                }
                mapped.push_back(m);
            }
            if (inside) builder.add_tuple(s, std::move(mapped));
        }
    }
    return std::move(builder).build();
}

Structure induced_substructure(const Structure& a, const std::vector<std::string>& subset) {
    std::vector<int> idx;
    for (const auto& e : subset) idx.push_back(a.index(e));
    return induced_substructure(a, idx);
}

// ---------------------------------------------------------------------------
// Text format

Structure parse_structure(std::string_view text) {
    StructureSpec spec;
    bool have_signature = false;
    bool have_universe = false;
    std::size_t line_no = 0;
    for (auto line : detail::split_lines(text)) {
        ++line_no;
        auto tokens = detail::tokenize_line(line);
        if (tokens.empty()) continue;
        const auto& head = tokens[0];
        if (head == "signature") {
            if (have_signature) throw ParseError("duplicate signature line", line_no, 1);
            std::vector<RelationSymbol> symbols;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                auto slash = tokens[i].rfind('/');
                if (slash == std::string::npos || slash == 0 || slash + 1 == tokens[i].size())
                    throw ParseError("expected NAME/ARITY, got '" + tokens[i] + "'", line_no);
                std::size_t arity = 0;
                try {
                    arity = std::stoul(tokens[i].substr(slash + 1));
                } catch (const std::exception&) {
                    throw ParseError("bad arity in '" + tokens[i] + "'", line_no);
                }
                symbols.push_back({tokens[i].substr(0, slash), arity});
            }
            try {
                spec.signature = Signature(std::move(symbols));
            } catch (const InvalidArgument& e) {
                throw ParseError(e.what(), line_no);
            }
            have_signature = true;
        } else if (head == "universe") {
            if (!have_signature) throw ParseError("universe line before signature line", line_no, 1);
            if (have_universe) throw ParseError("duplicate universe line", line_no, 1);
            spec.universe.assign(tokens.begin() + 1, tokens.end());
            have_universe = true;
        } else if (head == "tuple") {
            if (!have_universe) throw ParseError("tuple line before universe line", line_no, 1);
            if (tokens.size() < 2) throw ParseError("tuple line without a symbol", line_no);
            if (!spec.signature.find(tokens[1])) throw ParseError("unknown symbol '" + tokens[1] + "'", line_no);
            spec.relations[tokens[1]].emplace_back(tokens.begin() + 2, tokens.end());
        } else {
            throw ParseError("unexpected line starting with '" + head + "'", line_no, 1);
        }
    }
    if (!have_signature) throw ParseError("missing signature line");
    if (!have_universe) throw ParseError("missing universe line");
    auto report = validate(spec);
    if (!report.empty()) throw ParseError("invalid structure: " + join(report, "; "));
    return Structure(spec);
}

std::string serialize(const Structure& s) {
    std::ostringstream out;
    out << "signature";
    for (const auto& sym : s.signature().symbols()) out << ' ' << sym.name << '/' << sym.arity;
    out << "\nuniverse";
    std::vector<std::string> universe = s.universe();
    std::sort(universe.begin(), universe.end());
    for (const auto& e : universe) out << ' ' << e;
    out << '\n';
    for (std::size_t i = 0; i < s.signature().size(); ++i) {
        std::vector<NamedTuple> tuples;
        for (const auto& t : s.relation(i)) {
            NamedTuple named;
            for (int e : t) named.push_back(s.name(e));
            tuples.push_back(std::move(named));
        }
        std::sort(tuples.begin(), tuples.end());
        for (const auto& t : tuples) {
            out << "tuple " << s.signature()[i].name;
            for (const auto& e : t) out << ' ' << e;
            out << '\n';
        }
    }
    return out.str();
}

Structure read_structure_file(const std::string& path) { return parse_structure(detail::read_file(path)); }

} // namespace epq
