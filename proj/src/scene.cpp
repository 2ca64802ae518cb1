#include "eqa/scene.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "eqa/errors.hpp"
#include "json.hpp"

namespace eqa {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

Cell parse_cell(const nlohmann::json& j, const std::string& what, const std::string& origin) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw ValidationError(origin + ": " + what + " must be an [x, y] integer pair");
    return Cell{j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

std::string SceneGrid::room_label_at(const Cell& c) const {
    for (const Room& r : rooms)
        if (r.contains(c)) return r.label;
    return "";
}

std::optional<int> SceneGrid::find_object(const std::string& id) const {
    for (size_t i = 0; i < objects.size(); ++i)
        if (objects[i].id == id) return static_cast<int>(i);
    return std::nullopt;
}

// ---- load / save -----------------------------------------------------------

SceneGrid scene_from_json_text(const std::string& text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(origin + ": malformed scene document: " + e.what());
    }
    if (!doc.is_object()) throw ValidationError(origin + ": scene document must be a JSON object");

    SceneGrid scene;
    if (!doc.contains("width") || !doc.contains("height"))
        throw ValidationError(origin + ": scene requires width and height");
    scene.width = doc["width"].get<int>();
    scene.height = doc["height"].get<int>();
    if (scene.width < 3 || scene.height < 3)
        throw ValidationError(origin + ": scene dimensions must be at least 3x3");
    scene.resolution = doc.value("resolution", 1.0);
    scene.cells.assign(static_cast<size_t>(scene.width) * scene.height, CellTruth{});

    for (const auto& w : doc.value("walls", nlohmann::json::array())) {
        Cell c = parse_cell(w, "wall", origin);
        if (!scene.in_bounds(c))
            throw ValidationError(origin + ": wall cell out of bounds at (" + std::to_string(c.x) +
                                  ", " + std::to_string(c.y) + ")");
        scene.at(c).occ = Occupancy::Wall;
    }

    for (const auto& r : doc.value("rooms", nlohmann::json::array())) {
        Room room;
        room.label = r.at("label").get<std::string>();
        const auto& rect = r.at("rect");
        if (!rect.is_array() || rect.size() != 4)
            throw ValidationError(origin + ": room rect must be [x0, y0, x1, y1]");
        room.x0 = rect[0].get<int>();
        room.y0 = rect[1].get<int>();
        room.x1 = rect[2].get<int>();
        room.y1 = rect[3].get<int>();
        if (room.x0 > room.x1 || room.y0 > room.y1 || !scene.in_bounds(Cell{room.x0, room.y0}) ||
            !scene.in_bounds(Cell{room.x1, room.y1}))
            throw ValidationError(origin + ": room \"" + room.label + "\" rect out of bounds");
        for (const Room& prev : scene.rooms) {
            bool overlap = room.x0 <= prev.x1 && prev.x0 <= room.x1 && room.y0 <= prev.y1 &&
                           prev.y0 <= room.y1;
            if (overlap)
                throw ValidationError(origin + ": rooms \"" + prev.label + "\" and \"" + room.label +
                                      "\" overlap");
        }
        scene.rooms.push_back(std::move(room));
    }

    for (const auto& o : doc.value("objects", nlohmann::json::array())) {
        SceneObject obj;
        obj.id = o.at("id").get<std::string>();
        obj.label = o.at("label").get<std::string>();
        if (obj.id.empty()) throw ValidationError(origin + ": object with empty id");
        if (scene.find_object(obj.id))
            throw ValidationError(origin + ": duplicate object id \"" + obj.id + "\"");
        for (const auto& [k, v] : o.value("attributes", nlohmann::json::object()).items())
            obj.attributes[k] = v.get<std::string>();
        for (const auto& c : o.at("cells")) obj.cells.push_back(parse_cell(c, "object cell", origin));
        if (obj.cells.empty())
            throw ValidationError(origin + ": object \"" + obj.id + "\" has no cells");
        scene.objects.push_back(std::move(obj));
    }

    // Assign per-cell object references and enforce placement invariants.
    for (size_t i = 0; i < scene.objects.size(); ++i) {
        const SceneObject& obj = scene.objects[i];
        bool any_free = false;
        for (const Cell& c : obj.cells) {
            if (!scene.in_bounds(c))
                throw ValidationError(origin + ": object \"" + obj.id + "\" has out-of-bounds cell (" +
                                      std::to_string(c.x) + ", " + std::to_string(c.y) + ")");
            CellTruth& ct = scene.at(c);
            if (ct.object_index && *ct.object_index != static_cast<int>(i))
                throw ValidationError(origin + ": objects \"" +
                                      scene.objects[*ct.object_index].id + "\" and \"" + obj.id +
                                      "\" overlap at (" + std::to_string(c.x) + ", " +
                                      std::to_string(c.y) + ")");
            ct.object_index = static_cast<int>(i);
            if (ct.occ != Occupancy::Wall) any_free = true;
        }
        if (!any_free)
            throw ValidationError(origin + ": object \"" + obj.id +
                                  "\" occupies only wall cells");
    }
    return scene;
}

SceneGrid load_scene(const std::string& path) {
    return scene_from_json_text(read_file(path), path);
}

std::string scene_to_json_text(const SceneGrid& scene) {
    ordered_json doc;
    doc["width"] = scene.width;
    doc["height"] = scene.height;
    doc["resolution"] = scene.resolution;

    ordered_json walls = ordered_json::array();
    for (int y = 0; y < scene.height; ++y)
        for (int x = 0; x < scene.width; ++x)
            if (scene.at(Cell{x, y}).occ == Occupancy::Wall) walls.push_back({x, y});
    doc["walls"] = std::move(walls);

    ordered_json rooms = ordered_json::array();
    for (const Room& r : scene.rooms)
        rooms.push_back({{"label", r.label}, {"rect", {r.x0, r.y0, r.x1, r.y1}}});
    doc["rooms"] = std::move(rooms);

    ordered_json objects = ordered_json::array();
    for (const SceneObject& o : scene.objects) {
        ordered_json attrs = ordered_json::object();
        for (const auto& [k, v] : o.attributes) attrs[k] = v;
        ordered_json cells = ordered_json::array();
        std::vector<Cell> sorted_cells = o.cells;
        std::sort(sorted_cells.begin(), sorted_cells.end());
        for (const Cell& c : sorted_cells) cells.push_back({c.x, c.y});
        objects.push_back({{"id", o.id}, {"label", o.label}, {"attributes", std::move(attrs)},
                           {"cells", std::move(cells)}});
    }
    doc["objects"] = std::move(objects);
    return doc.dump(2) + "\n";
}

void save_scene(const SceneGrid& scene, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << scene_to_json_text(scene);
}

// ---- tasks -----------------------------------------------------------------

void validate_task(const QuestionTask& task, const SceneGrid& scene, const std::string& origin) {
    Cell start = task.start_pose.cell();
    if (!scene.in_bounds(start))
        throw ValidationError(origin + ": start pose out of bounds");
    if (scene.is_wall(start))
        throw ValidationError(origin + ": start pose lies on a wall cell");
    if (task.ground_truth.empty())
        throw ValidationError(origin + ": ground truth answer is empty");
    for (const std::string& id : task.target_object_ids)
        if (!scene.find_object(id))
            throw ValidationError(origin + ": target references unknown object \"" + id + "\"");
}

std::vector<QuestionTask> load_tasks(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path + ": malformed task document: " + e.what());
    }
    if (!doc.is_array()) throw ValidationError(path + ": task document must be a JSON list");

    fs::path base = fs::path(path).parent_path();
    std::unordered_map<std::string, SceneGrid> scene_cache;
    std::vector<QuestionTask> tasks;
    int index = 0;
    for (const auto& t : doc) {
        std::string origin = path + " task #" + std::to_string(index++);
        QuestionTask task;
        task.scene_ref = t.at("scene").get<std::string>();
        const auto& start = t.at("start");
        if (!start.is_array() || start.size() != 3)
            throw ValidationError(origin + ": start must be [x, y, heading]");
        task.start_pose = Pose{start[0].get<double>(), start[1].get<double>(),
                               wrap_angle(start[2].get<double>())};
        task.question = t.at("question").get<std::string>();
        task.ground_truth = t.at("answer").get<std::string>();
        for (const auto& id : t.value("targets", nlohmann::json::array()))
            task.target_object_ids.push_back(id.get<std::string>());

        std::string scene_path = (base / task.scene_ref).string();
        auto it = scene_cache.find(scene_path);
        if (it == scene_cache.end()) {
            try {
                it = scene_cache.emplace(scene_path, load_scene(scene_path)).first;
            } catch (const ValidationError& e) {
                throw ValidationError(origin + ": unknown or invalid scene \"" + task.scene_ref +
                                      "\": " + e.what());
            }
        }
        validate_task(task, it->second, origin);
        tasks.push_back(std::move(task));
    }
    return tasks;
}

// ---- sensing ---------------------------------------------------------------

namespace {

constexpr double kMarchStep = 0.25;

// True when the sampled segment from `pose` to the center of `target` stays
// clear of walls. The target cell itself may be a wall (the camera sees the
// wall face); anything past it is occluded.
bool segment_clear(const SceneGrid& scene, const Pose& pose, const Cell& target, double dist) {
    double cx = cell_center_x(target), cy = cell_center_y(target);
    double ux = (cx - pose.x) / dist, uy = (cy - pose.y) / dist;
    for (double t = kMarchStep; t < dist; t += kMarchStep) {
        Cell s{static_cast<int>(std::floor(pose.x + t * ux)),
               static_cast<int>(std::floor(pose.y + t * uy))};
        if (s == target) return true;
        if (!scene.in_bounds(s) || scene.is_wall(s)) return false;
    }
    return true;  // final sample at t == dist is the target center
}

}  // namespace

Observation sense(const SceneGrid& scene, const Pose& pose, const SensorConfig& sensor) {
    Cell origin = pose.cell();
    if (!scene.in_bounds(origin)) throw ValidationError("sense: pose out of bounds");
    if (scene.is_wall(origin)) throw ValidationError("sense: pose inside a wall");
    if (!(sensor.fov > 0.0) || sensor.fov > kTwoPi)
        throw ValidationError("sense: fov must lie in (0, 2*pi]");
    if (!(sensor.max_range > 0.0)) throw ValidationError("sense: max_range must be positive");
    if (sensor.ray_count < 1) throw ValidationError("sense: ray_count must be at least 1");

    Observation obs;
    obs.pose = pose;

    // Visibility: march a sub-cell-sampled ray toward every candidate cell.
    // The agent's own cell is always visible.
    int r = static_cast<int>(std::ceil(sensor.max_range)) + 1;
    bool full_circle = sensor.fov >= kTwoPi;
    for (int y = std::max(0, origin.y - r); y <= std::min(scene.height - 1, origin.y + r); ++y) {
        for (int x = std::max(0, origin.x - r); x <= std::min(scene.width - 1, origin.x + r); ++x) {
            Cell c{x, y};
            if (c == origin) {
                obs.visible_cells.push_back({c, scene.at(c).occ});
                continue;
            }
            double dx = cell_center_x(c) - pose.x, dy = cell_center_y(c) - pose.y;
            double dist = std::hypot(dx, dy);
            if (dist > sensor.max_range) continue;
            if (!full_circle &&
                angle_diff(std::atan2(dy, dx), pose.heading) > sensor.fov / 2.0)
                continue;
            if (segment_clear(scene, pose, c, dist))
                obs.visible_cells.push_back({c, scene.at(c).occ});
        }
    }

    // Depth scan: ray_count rays spread evenly across the fov.
    obs.depth.reserve(static_cast<size_t>(sensor.ray_count));
    for (int i = 0; i < sensor.ray_count; ++i) {
        double a = pose.heading - sensor.fov / 2.0 +
                   sensor.fov * (static_cast<double>(i) + 0.5) / sensor.ray_count;
        double ux = std::cos(a), uy = std::sin(a);
        double d = sensor.max_range;
        for (double t = kMarchStep; t <= sensor.max_range; t += kMarchStep) {
            Cell s{static_cast<int>(std::floor(pose.x + t * ux)),
                   static_cast<int>(std::floor(pose.y + t * uy))};
            if (!scene.in_bounds(s) || scene.is_wall(s)) {
                d = t;
                break;
            }
        }
        obs.depth.push_back(d);
    }

    // Fraction of each object's footprint that is visible this step.
    std::unordered_map<int, int> seen;
    for (const VisibleCell& vc : obs.visible_cells) {
        const CellTruth& ct = scene.at(vc.cell);
        if (ct.object_index) ++seen[*ct.object_index];
    }
    for (const auto& [idx, count] : seen) {
        const SceneObject& obj = scene.objects[static_cast<size_t>(idx)];
        obs.visible_object_fractions[obj.id] =
            static_cast<double>(count) / static_cast<double>(obj.cells.size());
    }
    return obs;
}

// ---- digests ---------------------------------------------------------------

FrameDigest digest_observation(const SceneGrid& scene, const Observation& obs) {
    FrameDigest d;
    d.step = obs.step;
    d.pose = obs.pose;
    d.room = scene.room_label_at(obs.pose.cell());
    for (const auto& [id, fraction] : obs.visible_object_fractions) {
        int idx = *scene.find_object(id);
        const SceneObject& obj = scene.objects[static_cast<size_t>(idx)];
        ObjectSighting s;
        s.id = id;
        s.label = obj.label;
        s.room = scene.room_label_at(obj.cells.front());
        s.attributes = obj.attributes;
        s.fraction = fraction;
        d.objects.push_back(std::move(s));
    }
    std::stable_sort(d.objects.begin(), d.objects.end(),
                     [](const ObjectSighting& a, const ObjectSighting& b) {
                         if (a.fraction != b.fraction) return a.fraction > b.fraction;
                         return a.id < b.id;
                     });
    return d;
}

std::string FrameDigest::render() const {
    std::string out = "step=" + std::to_string(step);
    out += " room=" + (room.empty() ? std::string("-") : room);
    out += " objects=[";
    for (size_t i = 0; i < objects.size(); ++i) {
        const ObjectSighting& s = objects[i];
        if (i) out += "; ";
        out += s.label + "#" + s.id + "@" + (s.room.empty() ? std::string("-") : s.room) + "{";
        bool first = true;
        for (const auto& [k, v] : s.attributes) {
            if (!first) out += ",";
            first = false;
            out += k + "=" + v;
        }
        out += "} fr=" + fmt2(s.fraction);
    }
    out += "]";
    return out;
}

}  // namespace eqa
