#include "gridhom/library.hpp"

#include <fstream>
#include <sstream>

#include "gridhom/homology.hpp"

namespace gridhom {

const std::vector<LibraryEntry>& builtin_library() {
    static const std::vector<LibraryEntry> lib = [] {
        std::vector<LibraryEntry> v;
        auto add = [&](std::string name, std::string desc, std::vector<int> o, std::vector<int> x, int comps,
                       std::map<std::pair<int, int>, int> hat) {
            v.push_back({name, std::move(desc), make_diagram(o, x, name), comps, std::move(hat)});
        };
        add("unknot1", "unknot, n=1", {0}, {0}, 1, {{{0, 0}, 1}});
        add("unknot2", "unknot, n=2", {0, 1}, {1, 0}, 1, {{{0, 0}, 1}});
        add("trefoil", "right-handed trefoil", {4, 3, 2, 1, 0}, {2, 1, 0, 4, 3}, 1,
            {{{-2, -2}, 1}, {{-1, 0}, 1}, {{0, 2}, 1}});
        add("trefoil_mirror", "left-handed trefoil", {0, 1, 2, 3, 4}, {3, 4, 0, 1, 2}, 1,
            {{{0, -2}, 1}, {{1, 0}, 1}, {{2, 2}, 1}});
        add("figure_eight", "figure-eight knot", {0, 1, 3, 2, 5, 4}, {2, 5, 0, 4, 3, 1}, 1,
            {{{-1, -2}, 1}, {{0, 0}, 3}, {{1, 2}, 1}});
        add("t25", "torus knot T(2,5)", {6, 5, 4, 3, 2, 1, 0}, {4, 3, 2, 1, 0, 6, 5}, 1,
            {{{-4, -4}, 1}, {{-3, -2}, 1}, {{-2, 0}, 1}, {{-1, 2}, 1}, {{0, 4}, 1}});
        add("hopf", "Hopf link", {1, 2, 3, 0}, {3, 0, 1, 2}, 2, {{{-1, -3}, 1}, {{0, -1}, 2}, {{1, 1}, 1}});
        add("unlink2", "two-component unlink", {0, 1, 2, 3}, {1, 0, 3, 2}, 2, {{{-1, -1}, 1}, {{0, -1}, 1}});
        return v;
    }();
    return lib;
}

const LibraryEntry& builtin_entry(const std::string& name) {
    for (auto& e : builtin_library())
        if (e.name == name) return e;
    throw GridError("UnknownBuiltin", name);
}

GridDiagram load_diagram(const std::string& source) {
    if (source.rfind("builtin:", 0) == 0) return builtin_entry(source.substr(8)).g;
    if (source.find('=') != std::string::npos || source.find('{') != std::string::npos) return parse_diagram(source);
    std::ifstream in(source);
    if (!in) throw GridError("ParseError", "cannot read " + source);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_diagram(ss.str());
}

SkeinSource builtin_skein() { return {builtin_entry("trefoil").g, 0}; }

GridDiagram torus_2q(int q) {
    if (q < 1 || q % 2 == 0) throw GridError("SizeMismatch", "q must be odd and positive");
    int n = q + 2;
    Perm o(n), x(n);
    for (int i = 0; i < n; ++i) {
        o[i] = n - 1 - i;
        x[i] = (2 * n - 3 - i) % n;
    }
    GridDiagram g = make_diagram(o, x);
    g.name = "T(2," + std::to_string(q) + ")";
    return g;
}

std::vector<std::string> check_library() {
    std::vector<std::string> bad;
    for (auto& e : builtin_library()) {
        int c = link_components(e.g).count;
        if (c != e.components)
            bad.push_back(e.name + ": " + std::to_string(c) + " components, expected " + std::to_string(e.components));
        if (parse_diagram(to_text(e.g)) != e.g) bad.push_back(e.name + ": text round trip differs");
        if (e.hat.empty()) continue;
        Homology h(e.g);
        if (h.hat_table() != e.hat) bad.push_back(e.name + ": GH-hat dims differ from stored values");
    }
    return bad;
}

}  // namespace gridhom
