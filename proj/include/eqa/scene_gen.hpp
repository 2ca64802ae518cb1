#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "eqa/scene.hpp"

namespace eqa {

struct GenParams {
    int width = 24;
    int height = 24;
    int rooms = 4;
    int min_objects = 1;   // per room
    int max_objects = 3;
};

struct GeneratedSuite {
    std::vector<SceneGrid> scenes;
    std::vector<QuestionTask> tasks;  // one per scene, scene_ref = "scene_###.json"
};

// Procedural multi-room scenes (BSP splits, door gaps keep everything
// connected) with labeled, attributed objects, plus one attribute question
// per scene. Deterministic per seed.
GeneratedSuite generate_suite(int count, uint64_t seed, const GenParams& params);

// Write scenes and tasks.json under out_dir; returns the tasks file path.
std::string gen_scenes(int count, uint64_t seed, const GenParams& params,
                       const std::string& out_dir);

}  // namespace eqa
