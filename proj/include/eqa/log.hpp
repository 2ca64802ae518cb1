#pragma once
#include <optional>
#include <string>
#include <vector>

#include "eqa/exploration.hpp"
#include "eqa/oracle_api.hpp"
#include "eqa/scene.hpp"

namespace eqa {

enum class StopReason { Decisive, Budget, Exhausted, Error };

std::string to_string(StopReason r);
StopReason stop_reason_from_string(const std::string& s);

// One loop iteration. `chosen` is empty on a final partial record (frontier
// exhaustion before any candidate could be selected).
struct StepRecord {
    int step = 0;
    Pose pose;
    std::vector<VisibleCell> visible;
    FrameDigest digest;
    std::vector<FrontierCandidate> candidates;
    std::string chosen;                 // candidate label, "" when none
    double relevancy = 0.0;
    std::optional<double> z;            // only recorded for steps >= min_steps
    std::string decision;               // continue | decisive | budget | exhausted
    std::vector<std::string> flags;
};

struct EpisodeLog {
    std::string task_id;
    std::string scene_ref;
    std::string question;
    std::string ground_truth;
    uint64_t seed = 0;
    std::string config_digest;
    int map_width = 0;
    int map_height = 0;
    std::vector<StepRecord> steps;
    StopReason stop_reason = StopReason::Budget;
    std::string answer;
    Grade grade;
    std::optional<double> z_at_stop;
    std::string error;  // non-empty when stop_reason == Error

    // Decision steps: iterations in which a direction was actually selected.
    // This is the step count the efficiency metric sees.
    int decision_steps() const;
};

// JSON-lines serialization: one header line, one line per step, one result line.
std::string episode_to_jsonl(const EpisodeLog& log);
EpisodeLog episode_from_jsonl(const std::string& text);
void save_episode(const EpisodeLog& log, const std::string& path);
EpisodeLog load_episode(const std::string& path);

}  // namespace eqa
