#include "epq/gdnf.hpp"

#include "epq/errors.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace epq {

namespace {

void sort_unique(std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

void require_valid(const GdnfRelation& g) {
    auto report = validate(g);
    if (!report.empty()) throw InvalidArgument("invalid GDNF relation: " + report.front());
}

} // namespace

std::vector<std::string> validate(const GdnfRelation& g) {
    std::vector<std::string> out;
    if (g.arity == 0) out.push_back("arity must be positive");
    std::set<std::string> universe(g.universe.begin(), g.universe.end());
    if (universe.size() != g.universe.size()) out.push_back("duplicate universe element");
    for (std::size_t b = 0; b < g.blocks.size(); ++b) {
        const auto& block = g.blocks[b];
        if (block.size() != g.arity)
            out.push_back("block " + std::to_string(b) + " has " + std::to_string(block.size()) +
                          " coordinates, expected " + std::to_string(g.arity));
        for (const auto& set : block)
            for (const auto& e : set)
                if (!universe.contains(e)) out.push_back("block " + std::to_string(b) + " uses '" + e + "' outside the universe");
    }
    return out;
}

GdnfRelation gdnf_from_explicit(const std::vector<NamedTuple>& tuples, const std::vector<std::string>& universe,
                                std::size_t arity) {
    GdnfRelation g{arity, universe, {}};
    for (const auto& t : tuples) {
        GdnfBlock block;
        for (const auto& e : t) block.push_back({e});
        g.blocks.push_back(std::move(block));
    }
    auto report = validate(g);
    if (!report.empty()) throw InvalidArgument("malformed tuples: " + report.front());
    return g;
}

GdnfRelation gdnf_product(const GdnfRelation& g, const GdnfRelation& h) {
    if (g.arity != h.arity)
        throw InvalidArgument("GDNF product of arities " + std::to_string(g.arity) + " and " + std::to_string(h.arity));
    GdnfRelation out;
    out.arity = g.arity;
    for (const auto& x : g.universe)
        for (const auto& y : h.universe) out.universe.push_back(pair_name(x, y));
    out.blocks.reserve(g.blocks.size() * h.blocks.size());
    for (const auto& p : g.blocks)
        for (const auto& q : h.blocks) {
            GdnfBlock block(g.arity);
            for (std::size_t l = 0; l < g.arity; ++l) {
                for (const auto& x : p[l])
                    for (const auto& y : q[l]) block[l].push_back(pair_name(x, y));
                sort_unique(block[l]);
            }
            out.blocks.push_back(std::move(block));
        }
    return out;
}

std::vector<NamedTuple> gdnf_to_explicit(const GdnfRelation& g, const Limits& limits) {
    std::size_t total = 0;
    for (const auto& block : g.blocks) {
        std::size_t n = 1;
        for (const auto& set : block) {
            n *= set.size();
            if (n > limits.max_gdnf_tuples) break;
        }
        total += n;
        if (total > limits.max_gdnf_tuples)
            throw ResourceLimit("GDNF expansion exceeds " + std::to_string(limits.max_gdnf_tuples) + " tuples");
    }
    std::vector<NamedTuple> out;
    out.reserve(total);
    for (const auto& block : g.blocks) {
        if (std::any_of(block.begin(), block.end(), [](const auto& s) { return s.empty(); })) continue;
        std::vector<std::size_t> at(block.size(), 0);
        while (true) {
            NamedTuple t;
            for (std::size_t l = 0; l < block.size(); ++l) t.push_back(block[l][at[l]]);
            out.push_back(std::move(t));
            std::size_t l = block.size();
            while (l > 0 && at[l - 1] + 1 == block[l - 1].size()) at[--l] = 0;
            if (l == 0) break;
            ++at[l - 1];
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool gdnf_member(const GdnfRelation& g, const NamedTuple& tuple) {
    if (tuple.size() != g.arity)
        throw InvalidArgument("tuple of length " + std::to_string(tuple.size()) + " against arity " +
                              std::to_string(g.arity));
    return std::any_of(g.blocks.begin(), g.blocks.end(), [&](const GdnfBlock& block) {
        for (std::size_t l = 0; l < g.arity; ++l)
            if (!std::binary_search(block[l].begin(), block[l].end(), tuple[l])) return false;
        return true;
    });
}

GdnfRelation compact(const GdnfRelation& g) {
    GdnfRelation out{g.arity, g.universe, {}};
    std::set<GdnfBlock> seen;
    for (const auto& b : g.blocks)
        if (seen.insert(b).second) out.blocks.push_back(b);
    return out;
}

std::size_t length(const GdnfRelation& g) {
    std::size_t n = 0;
    for (const auto& b : g.blocks)
        for (const auto& s : b) n += s.size();
    return n;
}

GdnfRelation parse_gdnf(std::string_view text) {
    GdnfRelation g;
    bool have_arity = false;
    bool have_universe = false;
    std::set<std::string> mentioned;
    std::size_t line_no = 0;
    for (auto line : detail::split_lines(text)) {
        ++line_no;
        auto tokens = detail::tokenize_line(line);
        if (tokens.empty()) continue;
        if (tokens[0] == "arity") {
            if (have_arity) throw ParseError("duplicate arity line", line_no, 1);
            if (tokens.size() != 2) throw ParseError("arity line needs one number", line_no);
            try {
                g.arity = std::stoul(tokens[1]);
            } catch (const std::exception&) {
                throw ParseError("bad arity '" + tokens[1] + "'", line_no);
            }
            have_arity = true;
        } else if (tokens[0] == "universe") {
            if (have_universe) throw ParseError("duplicate universe line", line_no, 1);
            g.universe.assign(tokens.begin() + 1, tokens.end());
            have_universe = true;
        } else if (tokens[0] == "block") {
            if (!have_arity) throw ParseError("block line before arity line", line_no, 1);
            // Braces may touch their contents: "{a b}" splits into "{a" and "b}".
            GdnfBlock block;
            bool open = false;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                std::string_view tok = tokens[i];
                while (!tok.empty()) {
                    if (tok.front() == '{') {
                        if (open) throw ParseError("nested '{'", line_no);
                        open = true;
                        block.emplace_back();
                        tok.remove_prefix(1);
                        continue;
                    }
                    auto close = tok.find('}');
                    auto name = tok.substr(0, close);
                    if (!name.empty()) {
                        if (!open) throw ParseError("element '" + std::string(name) + "' outside braces", line_no);
                        if (name.find('{') != std::string_view::npos) throw ParseError("nested '{'", line_no);
                        block.back().emplace_back(name);
                        mentioned.emplace(name);
                    }
                    if (close == std::string_view::npos) break;
                    if (!open) throw ParseError("unmatched '}'", line_no);
                    open = false;
                    tok.remove_prefix(close + 1);
                }
            }
            if (open) throw ParseError("unclosed '{'", line_no);
            for (auto& s : block) sort_unique(s);
            if (block.size() != g.arity)
                throw ParseError("block has " + std::to_string(block.size()) + " coordinates, arity is " +
                                     std::to_string(g.arity),
                                 line_no);
            g.blocks.push_back(std::move(block));
        } else {
            throw ParseError("unexpected line starting with '" + tokens[0] + "'", line_no, 1);
        }
    }
    if (!have_arity) throw ParseError("missing arity line");
    if (!have_universe) g.universe.assign(mentioned.begin(), mentioned.end());
    auto report = validate(g);
    if (!report.empty()) throw ParseError(report.front());
    return g;
}

std::string serialize(const GdnfRelation& g) {
    std::ostringstream out;
    out << "arity " << g.arity << "\nuniverse";
    for (const auto& e : g.universe) out << ' ' << e;
    out << '\n';
    for (const auto& b : g.blocks) {
        out << "block";
        for (const auto& s : b) {
            out << " {";
            for (std::size_t i = 0; i < s.size(); ++i) out << (i ? " " : "") << s[i];
            out << '}';
        }
        out << '\n';
    }
    return out.str();
}

GdnfStructure to_gdnf(const Structure& s) {
    GdnfStructure out{s.signature(), s.universe(), {}};
    for (std::size_t i = 0; i < s.signature().size(); ++i) {
        std::vector<NamedTuple> tuples;
        for (const auto& t : s.relation(i)) {
            NamedTuple named;
            for (int e : t) named.push_back(s.name(e));
            tuples.push_back(std::move(named));
        }
        out.relations.emplace(s.signature()[i].name, gdnf_from_explicit(tuples, s.universe(), s.signature()[i].arity));
    }
    return out;
}

Structure to_explicit(const GdnfStructure& s, const Limits& limits) {
    StructureSpec spec{s.signature, s.universe, {}};
    for (const auto& sym : s.signature.symbols()) {
        auto it = s.relations.find(sym.name);
        if (it == s.relations.end()) continue;
        if (it->second.arity != sym.arity) throw SignatureMismatch("GDNF relation " + sym.name + " has the wrong arity");
        spec.relations[sym.name] = gdnf_to_explicit(it->second, limits);
    }
    return Structure(spec);
}

GdnfStructure product(const GdnfStructure& a, const GdnfStructure& b) {
    if (a.signature != b.signature)
        throw SignatureMismatch("product of structures over {" + a.signature.to_string() + "} and {" +
                                b.signature.to_string() + "}");
    GdnfStructure out{a.signature, {}, {}};
    for (const auto& x : a.universe)
        for (const auto& y : b.universe) out.universe.push_back(pair_name(x, y));
    for (const auto& sym : a.signature.symbols()) {
        const GdnfRelation empty{sym.arity, {}, {}};
        auto ga = a.relations.count(sym.name) ? a.relations.at(sym.name) : empty;
        auto gb = b.relations.count(sym.name) ? b.relations.at(sym.name) : empty;
        ga.universe = a.universe;
        gb.universe = b.universe;
        require_valid(ga);
        require_valid(gb);
        out.relations.emplace(sym.name, gdnf_product(ga, gb));
    }
    return out;
}

} // namespace epq
