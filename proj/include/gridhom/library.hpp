#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gridhom/grid.hpp"

namespace gridhom {

struct LibraryEntry {
    std::string name;
    std::string description;
    GridDiagram g;
    int components = 1;
    // total GH-hat dims per (m, 2a), generated by the engine and stored for regression; empty when not stored
    std::map<std::pair<int, int>, int> hat;
};

const std::vector<LibraryEntry>& builtin_library();
const LibraryEntry& builtin_entry(const std::string& name);
// "builtin:NAME", a path to a diagram file, or the diagram text itself
GridDiagram load_diagram(const std::string& source);

// the trefoil crossing used by the skein suite
struct SkeinSource {
    GridDiagram g;
    int col = 0;
};
SkeinSource builtin_skein();

// (2,q) torus knot on a grid of size q+2, q odd; q=9 is the n=9 timing diagram
GridDiagram torus_2q(int q);

// component counts and stored hat dims recomputed by the engine; returns one message per mismatch
std::vector<std::string> check_library();

}  // namespace gridhom
