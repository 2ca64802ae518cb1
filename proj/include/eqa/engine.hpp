#pragma once
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "eqa/answering.hpp"
#include "eqa/log.hpp"
#include "eqa/oracle.hpp"
#include "eqa/relevancy.hpp"
#include "eqa/stopping.hpp"
#include "json.hpp"

namespace eqa {

// Which backend serves one oracle kind.
struct OracleChoice {
    std::string type = "scripted";  // "scripted" | "remote"
    std::string endpoint;           // required when remote
};

struct EngineConfig {
    SensorConfig sensor;
    SelectionWeights weights;
    int m = 3;               // confidence samples per step
    StopPolicy stop;
    bool stop_enabled = true;  // false: explore to the budget, answer from history
    int k = 5;               // retrieval count
    int max_candidates = 3;
    int step_budget = 3;     // cells moved per decision step
    ScriptedOracleConfig scripted;
    SyntheticScorerConfig scorer;
    std::string scorer_type = "synthetic";  // "synthetic" | "remote"
    OracleChoice direction;
    OracleChoice equivalence;
    OracleChoice answerer;
    OracleChoice grader;
    OracleChoice relevancy;  // endpoint for scorer_type == "remote"
    RemoteOracleConfig remote;  // shared transport knobs
    uint64_t seed = 0;
};

EngineConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const EngineConfig& config);
// Reads a config file; absent keys keep defaults. EQA_ORACLE_ENDPOINT, when
// set, overrides every remote endpoint.
EngineConfig load_config(const std::string& path);
void validate_config(const EngineConfig& config);
// Stable hash of the canonical config serialization (seed included).
std::string config_digest(const EngineConfig& config);

// Oracles for one episode. Scripted backends are seeded per episode.
struct OracleSet {
    std::unique_ptr<DirectionOracle> direction;
    std::unique_ptr<EquivalenceOracle> equivalence;
    std::unique_ptr<AnswerOracle> answerer;
    std::unique_ptr<GraderOracle> grader;
    std::unique_ptr<RelevancyScorer> scorer;
};
OracleSet make_oracles(const EngineConfig& config, const SceneGrid& scene, uint64_t episode_seed);

// The per-step loop: sense, integrate, propose, elicit, select, move, score,
// stop-check; then retrieve, answer, grade. Oracle failures are captured in
// log.error rather than thrown.
EpisodeLog run_episode(const QuestionTask& task, const SceneGrid& scene,
                       const EngineConfig& config, const std::string& task_id,
                       uint64_t episode_seed);

// Seed for episode `index` of a batch; shared across sweep arms by design.
uint64_t episode_seed(const EngineConfig& config, size_t index);

// A task list with its referenced scenes resolved and loaded.
struct TaskSuite {
    std::vector<QuestionTask> tasks;
    std::map<std::string, SceneGrid> scenes;       // keyed by resolved path
    std::vector<std::string> scene_key_per_task;

    const SceneGrid& scene_for(size_t task_index) const {
        return scenes.at(scene_key_per_task[task_index]);
    }
};
TaskSuite load_task_suite(const std::string& tasks_path);

struct BatchReport {
    std::vector<EpisodeLog> logs;    // task order
    std::vector<ReportRow> rows;     // task order
    ReportSummary summary;
};

// Independent episodes, optionally across threads. Results are assembled in
// task order, so the report is identical at any parallelism.
BatchReport run_batch(const TaskSuite& suite, const EngineConfig& config, int parallelism);

struct SweepAxis {
    std::string name;            // "z" | "k"
    std::vector<double> values;
};

struct SweepRow {
    std::string value;
    double avg_steps = 0.0;
    double llm_match = 0.0;
    int n = 0;
};

struct SweepResult {
    std::string axis_name;
    std::vector<SweepRow> summary;                         // one row per axis value
    std::vector<std::pair<std::string, ReportRow>> rows;   // per-episode, axis-tagged
};

SweepResult sweep(const TaskSuite& suite, const EngineConfig& config, const SweepAxis& axis,
                  int parallelism);

// ---- answering from logs -----------------------------------------------------

std::vector<ScoredFrame> history_from_log(const EpisodeLog& log);
AnswerQuery build_answer_query(const std::string& question, const std::vector<ScoredFrame>& history,
                               int k);

}  // namespace eqa
