#pragma once
#include <map>
#include <string>
#include <vector>

#include "eqa/geometry.hpp"
#include "eqa/scene.hpp"

namespace eqa {

enum class MapOccupancy : uint8_t { Unknown = 0, Free = 1, Wall = 2 };

// Per-cell values painted from confidence feedback, keyed by cell.
using DirectionValues = std::map<Cell, double>;

// The agent's belief about the scene: what has been seen and how promising
// each region looks. One instance per episode, single writer.
struct SemanticMap {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> explored;        // 0/1
    std::vector<MapOccupancy> occupancy;
    std::vector<double> semantic;         // in [0, 1], prior 0.5

    bool in_bounds(const Cell& c) const {
        return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height;
    }
    size_t idx(const Cell& c) const { return static_cast<size_t>(c.y) * width + c.x; }
    bool is_explored(const Cell& c) const { return explored[idx(c)] != 0; }
    MapOccupancy occ(const Cell& c) const { return occupancy[idx(c)]; }
    double semantic_value(const Cell& c) const { return semantic[idx(c)]; }
    bool explored_free(const Cell& c) const {
        return is_explored(c) && occupancy[idx(c)] == MapOccupancy::Free;
    }
    int explored_count() const;
};

// Fresh all-unknown map with the neutral semantic prior.
SemanticMap new_map(int width, int height);

// Fold one observation (and optionally spatially projected confidence
// feedback) into the map. Visible cells become explored with their observed
// occupancy; covered cells take max(old, incoming) semantic value.
void integrate(SemanticMap& map, const Observation& obs,
               const DirectionValues* direction_values = nullptr);

// One char per cell: '?' unexplored, '.' explored free, '#' explored wall.
std::string map_to_text(const SemanticMap& map);
// Parallel grid of semantic values, one CSV row per map row.
std::string semantics_to_csv(const SemanticMap& map);

}  // namespace eqa
