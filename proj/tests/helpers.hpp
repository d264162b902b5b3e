#pragma once

#include "epq/formula.hpp"
#include "epq/structure.hpp"

#include <string>
#include <utility>
#include <vector>

namespace testing {

inline epq::Structure S(const std::string& text) { return epq::parse_structure(text); }
inline epq::Formula F(const std::string& text) { return epq::parse_formula(text); }

/// Digraph over {E/2} on the given element names with the given edges.
inline epq::Structure digraph(const std::vector<std::string>& universe,
                              const std::vector<std::pair<std::string, std::string>>& edges) {
    epq::StructureBuilder b(epq::Signature({{"E", 2}}));
    for (const auto& e : universe) b.add_element(e);
    for (const auto& [x, y] : edges) b.add_tuple("E", {x, y});
    return std::move(b).build();
}

inline epq::Structure cycle(std::size_t n, const std::string& prefix = "c") {
    std::vector<std::string> u;
    std::vector<std::pair<std::string, std::string>> e;
    for (std::size_t i = 0; i < n; ++i) u.push_back(prefix + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i) e.emplace_back(u[i], u[(i + 1) % n]);
    return digraph(u, e);
}

inline epq::Structure path(std::size_t n) {
    std::vector<std::string> u;
    std::vector<std::pair<std::string, std::string>> e;
    for (std::size_t i = 0; i < n; ++i) u.push_back("p" + std::to_string(i));
    for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(u[i], u[i + 1]);
    return digraph(u, e);
}

/// All ordered pairs of distinct elements.
inline epq::Structure clique(std::size_t n) {
    std::vector<std::string> u;
    std::vector<std::pair<std::string, std::string>> e;
    for (std::size_t i = 0; i < n; ++i) u.push_back("k" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) e.emplace_back(u[i], u[j]);
    return digraph(u, e);
}

inline const epq::Structure& loop() {
    static const epq::Structure s = digraph({"a"}, {{"a", "a"}});
    return s;
}

inline const epq::Structure& edge() {
    static const epq::Structure s = digraph({"a", "b"}, {{"a", "b"}});
    return s;
}

} // namespace testing
