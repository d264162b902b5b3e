#include "epq/formula.hpp"

#include "epq/errors.hpp"
#include "text_util.hpp"

#include <cctype>
#include <map>

namespace epq {

// ---------------------------------------------------------------------------
// Construction

Formula Formula::make(NodeKind kind, std::string name, std::vector<std::string> arguments,
                      std::vector<Formula> children) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->name = std::move(name);
    node->arguments = std::move(arguments);
    node->children = std::move(children);
    return Formula(std::move(node));
}

Formula Formula::predicate(std::string symbol, std::vector<std::string> arguments) {
    if (!is_identifier(symbol)) throw InvalidArgument("invalid predicate symbol '" + symbol + "'");
    if (arguments.empty()) throw InvalidArgument("predicate " + symbol + " applied to no variables");
    for (const auto& a : arguments)
        if (!is_identifier(a)) throw InvalidArgument("invalid variable name '" + a + "'");
    return make(NodeKind::Predicate, std::move(symbol), std::move(arguments), {});
}

Formula Formula::equality(std::string left, std::string right) {
    if (!is_identifier(left) || !is_identifier(right))
        throw InvalidArgument("invalid variable in equality " + left + " = " + right);
    return make(NodeKind::Equality, {}, {std::move(left), std::move(right)}, {});
}

namespace {

std::vector<Formula> flatten(std::vector<Formula> children, NodeKind kind) {
    std::vector<Formula> flat;
    flat.reserve(children.size());
    for (auto& c : children) {
        if (c.kind() == kind)
            flat.insert(flat.end(), c.children().begin(), c.children().end());
        else
            flat.push_back(std::move(c));
    }
    return flat;
}

} // namespace

Formula Formula::conjunction(std::vector<Formula> children) {
    if (children.empty()) throw InvalidArgument("empty conjunction");
    auto flat = flatten(std::move(children), NodeKind::And);
    if (flat.size() == 1) return flat.front();
    return make(NodeKind::And, {}, {}, std::move(flat));
}

Formula Formula::disjunction(std::vector<Formula> children) {
    if (children.empty()) throw InvalidArgument("empty disjunction");
    auto flat = flatten(std::move(children), NodeKind::Or);
    if (flat.size() == 1) return flat.front();
    return make(NodeKind::Or, {}, {}, std::move(flat));
}

Formula Formula::negation(Formula child) { return make(NodeKind::Not, {}, {}, {std::move(child)}); }

Formula Formula::exists(std::string variable, Formula body) {
    if (!is_identifier(variable)) throw InvalidArgument("invalid variable name '" + variable + "'");
    return make(NodeKind::Exists, std::move(variable), {}, {std::move(body)});
}

Formula Formula::forall(std::string variable, Formula body) {
    if (!is_identifier(variable)) throw InvalidArgument("invalid variable name '" + variable + "'");
    return make(NodeKind::Forall, std::move(variable), {}, {std::move(body)});
}

Formula Formula::exists_all(const std::vector<std::string>& variables, Formula body) {
    for (auto it = variables.rbegin(); it != variables.rend(); ++it) body = exists(*it, std::move(body));
    return body;
}

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    if (kind() != other.kind() || name() != other.name() || arguments() != other.arguments() ||
        children().size() != other.children().size())
        return false;
    for (std::size_t i = 0; i < children().size(); ++i)
        if (!(children()[i] == other.children()[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Inspection

namespace {

bool is_keyword(std::string_view s) { return s == "exists" || s == "forall" || s == "not"; }

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (f.kind()) {
    case NodeKind::Predicate:
    case NodeKind::Equality:
        for (const auto& a : f.arguments())
            if (!bound.contains(a)) out.insert(a);
        return;
    case NodeKind::Exists:
    case NodeKind::Forall: {
        const bool fresh = bound.insert(f.name()).second;
        collect_free(f.body(), bound, out);
        if (fresh) bound.erase(f.name());
        return;
    }
    default:
        for (const auto& c : f.children()) collect_free(c, bound, out);
    }
}

void collect_names(const Formula& f, std::set<std::string>& out) {
    if (f.is_atom()) {
        out.insert(f.arguments().begin(), f.arguments().end());
        return;
    }
    if (f.is_quantifier()) out.insert(f.name());
    for (const auto& c : f.children()) collect_names(c, out);
}

void classify_into(const Formula& f, Classification& c) {
    switch (f.kind()) {
    case NodeKind::Equality:
        c.equality_free = false;
        return;
    case NodeKind::Predicate:
        return;
    case NodeKind::Not:
    case NodeKind::Forall:
        c.fragment = Fragment::FO;
        break;
    case NodeKind::Or:
        if (c.fragment == Fragment::PP) c.fragment = Fragment::EP;
        break;
    default:
        break;
    }
    for (const auto& ch : f.children()) classify_into(ch, c);
}

void collect_symbols(const Formula& f, std::map<std::string, std::size_t>& out) {
    if (f.kind() == NodeKind::Predicate) {
        auto [it, fresh] = out.emplace(f.name(), f.arguments().size());
        if (!fresh && it->second != f.arguments().size())
            throw SignatureMismatch("symbol " + f.name() + " used with arities " + std::to_string(it->second) +
                                    " and " + std::to_string(f.arguments().size()));
        return;
    }
    for (const auto& c : f.children()) collect_symbols(c, out);
}

} // namespace

bool is_identifier(std::string_view token) {
    if (token.empty() || is_keyword(token)) return false;
    const auto first = static_cast<unsigned char>(token.front());
    if (!std::isalpha(first) && first != '_') return false;
    for (char ch : token) {
        const auto u = static_cast<unsigned char>(ch);
        if (!std::isalnum(u) && ch != '_' && ch != '^' && ch != '\'') return false;
    }
    return true;
}

std::set<std::string> free_variables(const Formula& f) {
    std::set<std::string> bound;
    std::set<std::string> out;
    collect_free(f, bound, out);
    return out;
}

std::set<std::string> variable_names(const Formula& f) {
    std::set<std::string> out;
    collect_names(f, out);
    return out;
}

Classification classify(const Formula& f) {
    Classification c;
    classify_into(f, c);
    c.variables = variable_names(f).size();
    c.closed = free_variables(f).empty();
    return c;
}

std::string fragment_name(Fragment fragment) {
    switch (fragment) {
    case Fragment::FO: return "FO";
    case Fragment::EP: return "EP";
    case Fragment::PP: return "PP";
    }
    return "?";
}

Signature signature_of(const Formula& f) {
    std::map<std::string, std::size_t> symbols;
    collect_symbols(f, symbols);
    std::vector<RelationSymbol> list;
    for (const auto& [name, arity] : symbols) list.push_back({name, arity});
    return Signature(std::move(list));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
    enum class Type { Ident, LParen, RParen, Comma, Dot, Equal, Amp, Bar, End } type;
    std::string text;
    std::size_t line;
    std::size_t column;
};

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t line = 1;
    std::size_t col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token::Type type{};
        switch (c) {
        case '(': type = Token::Type::LParen; break;
        case ')': type = Token::Type::RParen; break;
        case ',': type = Token::Type::Comma; break;
        case '.': type = Token::Type::Dot; break;
        case '=': type = Token::Type::Equal; break;
        case '&': type = Token::Type::Amp; break;
        case '|': type = Token::Type::Bar; break;
        default: {
            const auto u = static_cast<unsigned char>(c);
            if (!std::isalpha(u) && c != '_') throw ParseError(std::string("unexpected character '") + c + "'", line, col);
            std::size_t j = i;
            while (j < text.size()) {
                const auto v = static_cast<unsigned char>(text[j]);
                if (!std::isalnum(v) && text[j] != '_' && text[j] != '^' && text[j] != '\'') break;
                ++j;
            }
            out.push_back({Token::Type::Ident, std::string(text.substr(i, j - i)), line, col});
            advance(j - i);
            continue;
        }
        }
        out.push_back({type, std::string(1, c), line, col});
        advance(1);
    }
    out.push_back({Token::Type::End, "", line, col});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, const Signature* signature)
        : tokens_(std::move(tokens)), signature_(signature) {}

    Formula parse() {
        Formula f = formula();
        if (peek().type != Token::Type::End) fail("unexpected '" + peek().text + "' after formula");
        return f;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    Token take() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(message, peek().line, peek().column);
    }
    bool at_keyword(std::string_view kw) const { return peek().type == Token::Type::Ident && peek().text == kw; }

    void expect(Token::Type type, std::string_view what) {
        if (peek().type != type) fail("expected " + std::string(what) + ", got '" + peek().text + "'");
        take();
    }

    std::string variable() {
        if (peek().type != Token::Type::Ident || is_keyword(peek().text))
            fail("expected a variable, got '" + peek().text + "'");
        return take().text;
    }

    Formula formula() {
        if (at_keyword("exists") || at_keyword("forall")) {
            const bool ex = take().text == "exists";
            std::string var = variable();
            expect(Token::Type::Dot, "'.'");
            Formula body = formula();
            return ex ? Formula::exists(std::move(var), std::move(body)) : Formula::forall(std::move(var), std::move(body));
        }
        if (at_keyword("not")) {
            take();
            return Formula::negation(formula());
        }
        return disjunction();
    }

    Formula disjunction() {
        std::vector<Formula> parts{conjunction()};
        while (peek().type == Token::Type::Bar) {
            take();
            parts.push_back(conjunction());
        }
        return Formula::disjunction(std::move(parts));
    }

    Formula conjunction() {
        std::vector<Formula> parts{unit()};
        while (peek().type == Token::Type::Amp) {
            take();
            parts.push_back(unit());
        }
        return Formula::conjunction(std::move(parts));
    }

    Formula unit() {
        if (peek().type == Token::Type::LParen) {
            take();
            Formula f = formula();
            expect(Token::Type::RParen, "')'");
            return f;
        }
        if (at_keyword("exists") || at_keyword("forall") || at_keyword("not")) return formula();
        if (peek().type != Token::Type::Ident) fail("expected an atom, got '" + peek().text + "'");
        const Token head = peek();
        if (peek(1).type == Token::Type::LParen) {
            take();
            take();
            std::vector<std::string> args{variable()};
            while (peek().type == Token::Type::Comma) {
                take();
                args.push_back(variable());
            }
            expect(Token::Type::RParen, "')'");
            if (signature_) {
                auto s = signature_->find(head.text);
                if (!s) throw ParseError("unknown symbol '" + head.text + "'", head.line, head.column);
                if ((*signature_)[*s].arity != args.size())
                    throw ParseError("arity mismatch: " + head.text + " has arity " +
                                         std::to_string((*signature_)[*s].arity) + " but is applied to " +
                                         std::to_string(args.size()) + " variables",
                                     head.line, head.column);
            }
            return Formula::predicate(head.text, std::move(args));
        }
        if (peek(1).type == Token::Type::Equal) {
            std::string left = variable();
            take();
            std::string right = variable();
            return Formula::equality(std::move(left), std::move(right));
        }
        take();
        fail("expected '(' or '=' after '" + head.text + "'");
    }

    std::vector<Token> tokens_;
    const Signature* signature_;
    std::size_t pos_ = 0;
};

void render_into(const Formula& f, std::string& out);

void render_wrapped(const Formula& f, std::string& out, bool wrap) {
    if (wrap) out += '(';
    render_into(f, out);
    if (wrap) out += ')';
}

void render_into(const Formula& f, std::string& out) {
    switch (f.kind()) {
    case NodeKind::Predicate:
        out += f.name();
        out += '(';
        for (std::size_t i = 0; i < f.arguments().size(); ++i) {
            if (i) out += ',';
            out += f.arguments()[i];
        }
        out += ')';
        return;
    case NodeKind::Equality:
        out += f.arguments()[0];
        out += " = ";
        out += f.arguments()[1];
        return;
    case NodeKind::And:
    case NodeKind::Or: {
        const bool conj = f.kind() == NodeKind::And;
        for (std::size_t i = 0; i < f.children().size(); ++i) {
            if (i) out += conj ? " & " : " | ";
            const auto& c = f.children()[i];
            render_wrapped(c, out, !c.is_atom());
        }
        return;
    }
    case NodeKind::Not: {
        out += "not ";
        const auto& c = f.body();
        render_wrapped(c, out, c.kind() == NodeKind::And || c.kind() == NodeKind::Or);
        return;
    }
    case NodeKind::Exists:
    case NodeKind::Forall:
        out += f.kind() == NodeKind::Exists ? "exists " : "forall ";
        out += f.name();
        out += " . ";
        render_into(f.body(), out);
        return;
    }
}

} // namespace

Formula parse_formula(std::string_view text, const Signature* signature) {
    Parser parser(lex(text), signature);
    return parser.parse();
}

Formula read_formula_file(const std::string& path, const Signature* signature) {
    return parse_formula(detail::read_file(path), signature);
}

std::string render(const Formula& f) {
    std::string out;
    render_into(f, out);
    return out;
}

} // namespace epq
