#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eqa/geometry.hpp"

namespace eqa {

enum class Occupancy : uint8_t { Free = 0, Wall = 1 };

// Ground-truth content of one grid cell.
struct CellTruth {
    Occupancy occ = Occupancy::Free;
    std::optional<int> object_index;  // index into SceneGrid::objects
};

struct SceneObject {
    std::string id;
    std::string label;                          // e.g. "red sofa"
    std::map<std::string, std::string> attributes;
    std::vector<Cell> cells;
};

struct Room {
    std::string label;
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive rect

    bool contains(const Cell& c) const {
        return c.x >= x0 && c.x <= x1 && c.y >= y0 && c.y <= y1;
    }
};

// The simulated world. Immutable after load; safe to share across episodes.
struct SceneGrid {
    int width = 0;
    int height = 0;
    double resolution = 1.0;  // meters per cell, informational
    std::vector<CellTruth> cells;  // row-major, index = y * width + x
    std::vector<Room> rooms;
    std::vector<SceneObject> objects;

    bool in_bounds(const Cell& c) const {
        return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height;
    }
    const CellTruth& at(const Cell& c) const { return cells[static_cast<size_t>(c.y) * width + c.x]; }
    CellTruth& at(const Cell& c) { return cells[static_cast<size_t>(c.y) * width + c.x]; }
    bool is_wall(const Cell& c) const { return at(c).occ == Occupancy::Wall; }

    // Label of the room containing c, or "" when c lies in no room rect.
    std::string room_label_at(const Cell& c) const;
    // Index of the object with the given id, or nullopt.
    std::optional<int> find_object(const std::string& id) const;
};

// One embodied question task: where the agent starts, what it is asked,
// and which objects make a frame decisive.
struct QuestionTask {
    std::string scene_ref;
    Pose start_pose;
    std::string question;
    std::string ground_truth;
    std::vector<std::string> target_object_ids;
};

struct SensorConfig {
    double fov = kTwoPi / 4.0;  // radians, (0, 2*pi]
    int ray_count = 64;         // depth rays spread across the fov
    double max_range = 8.0;     // cells
};

struct VisibleCell {
    Cell cell;
    Occupancy occ = Occupancy::Free;
};

// One step's sensor return: the cells the camera resolves and a depth scan.
struct Observation {
    int step = 0;
    Pose pose;
    std::vector<VisibleCell> visible_cells;                // sorted by (y, x)
    std::vector<double> depth;                             // one entry per ray, (0, max_range]
    std::map<std::string, double> visible_object_fractions;  // object id -> fraction seen
};

// What one visible object contributes to a frame summary.
struct ObjectSighting {
    std::string id;
    std::string label;
    std::string room;
    std::map<std::string, std::string> attributes;
    double fraction = 0.0;
};

// Compact, model-facing summary of one observation. This is the only view of
// the world the answering path ever sees.
struct FrameDigest {
    int step = 0;
    Pose pose;
    std::string room;
    std::vector<ObjectSighting> objects;  // sorted by fraction desc, then id

    std::string render() const;  // canonical one-line form
};

// ---- scene / task I/O ------------------------------------------------------

SceneGrid load_scene(const std::string& path);
SceneGrid scene_from_json_text(const std::string& text, const std::string& origin);
std::string scene_to_json_text(const SceneGrid& scene);  // canonical bytes
void save_scene(const SceneGrid& scene, const std::string& path);

std::vector<QuestionTask> load_tasks(const std::string& path);
void validate_task(const QuestionTask& task, const SceneGrid& scene, const std::string& origin);

// ---- sensing ---------------------------------------------------------------

Observation sense(const SceneGrid& scene, const Pose& pose, const SensorConfig& sensor);

FrameDigest digest_observation(const SceneGrid& scene, const Observation& obs);

}  // namespace eqa
