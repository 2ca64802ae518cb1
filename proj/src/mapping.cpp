#include "eqa/mapping.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "eqa/errors.hpp"

namespace eqa {

int SemanticMap::explored_count() const {
    return static_cast<int>(std::count(explored.begin(), explored.end(), uint8_t{1}));
}

SemanticMap new_map(int width, int height) {
    if (width < 3 || height < 3)
        throw ValidationError("new_map: dimensions must be at least 3x3");
    SemanticMap m;
    m.width = width;
    m.height = height;
    size_t n = static_cast<size_t>(width) * height;
    m.explored.assign(n, 0);
    m.occupancy.assign(n, MapOccupancy::Unknown);
    m.semantic.assign(n, 0.5);
    return m;
}

void integrate(SemanticMap& map, const Observation& obs, const DirectionValues* direction_values) {
    for (const VisibleCell& vc : obs.visible_cells) {
        if (!map.in_bounds(vc.cell))
            throw ValidationError("integrate: observation cell out of bounds");
        size_t i = map.idx(vc.cell);
        map.explored[i] = 1;
        map.occupancy[i] = vc.occ == Occupancy::Wall ? MapOccupancy::Wall : MapOccupancy::Free;
    }
    if (direction_values) {
        for (const auto& [cell, value] : *direction_values) {
            if (!map.in_bounds(cell))
                throw ValidationError("integrate: direction value cell out of bounds");
            size_t i = map.idx(cell);
            map.semantic[i] = std::clamp(std::max(map.semantic[i], value), 0.0, 1.0);
        }
    }
}

std::string map_to_text(const SemanticMap& map) {
    std::string out;
    out.reserve(static_cast<size_t>(map.height) * (map.width + 1));
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            size_t i = map.idx(Cell{x, y});
            char c = '?';
            if (map.explored[i]) c = map.occupancy[i] == MapOccupancy::Wall ? '#' : '.';
            out += c;
        }
        out += '\n';
    }
    return out;
}

std::string semantics_to_csv(const SemanticMap& map) {
    std::string out;
    char buf[32];
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            std::snprintf(buf, sizeof(buf), "%.6f", map.semantic_value(Cell{x, y}));
            if (x) out += ',';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

}  // namespace eqa
