#include "eqa/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "eqa/confidence.hpp"
#include "eqa/errors.hpp"

namespace eqa {

// ---- config ------------------------------------------------------------------

namespace {

OracleChoice oracle_choice_from_json(const nlohmann::json& j) {
    OracleChoice c;
    if (j.is_string()) {
        // Shorthand: "scripted" or a URL.
        std::string s = j.get<std::string>();
        if (s == "scripted") {
            c.type = "scripted";
        } else {
            c.type = "remote";
            c.endpoint = s;
        }
        return c;
    }
    c.type = j.value("type", "scripted");
    c.endpoint = j.value("endpoint", "");
    return c;
}

nlohmann::json oracle_choice_to_json(const OracleChoice& c) {
    return nlohmann::json{{"type", c.type}, {"endpoint", c.endpoint}};
}

}  // namespace

EngineConfig config_from_json(const nlohmann::json& doc) {
    EngineConfig c;
    if (doc.contains("sensor")) {
        const auto& s = doc["sensor"];
        c.sensor.fov = s.value("fov", c.sensor.fov);
        c.sensor.ray_count = s.value("ray_count", c.sensor.ray_count);
        c.sensor.max_range = s.value("max_range", c.sensor.max_range);
    }
    if (doc.contains("weights")) {
        const auto& w = doc["weights"];
        c.weights.w_conf = w.value("w_conf", c.weights.w_conf);
        c.weights.w_sem = w.value("w_sem", c.weights.w_sem);
        c.weights.w_cost = w.value("w_cost", c.weights.w_cost);
    }
    c.m = doc.value("m", c.m);
    if (doc.contains("stop")) {
        const auto& s = doc["stop"];
        c.stop.z_threshold = s.value("z_threshold", c.stop.z_threshold);
        c.stop.min_steps = s.value("min_steps", c.stop.min_steps);
        c.stop.max_steps = s.value("max_steps", c.stop.max_steps);
        c.stop_enabled = s.value("enabled", c.stop_enabled);
    }
    c.k = doc.value("k", c.k);
    c.max_candidates = doc.value("max_candidates", c.max_candidates);
    c.step_budget = doc.value("step_budget", c.step_budget);
    if (doc.contains("scripted")) {
        const auto& s = doc["scripted"];
        c.scripted.perception_noise = s.value("perception_noise", c.scripted.perception_noise);
        if (s.contains("synonym_table"))
            for (const auto& [k, v] : s["synonym_table"].items())
                c.scripted.synonym_table[k] = v.get<std::string>();
    }
    if (doc.contains("scorer")) {
        const auto& s = doc["scorer"];
        c.scorer_type = s.value("type", c.scorer_type);
        c.scorer.base_mean = s.value("base_mean", c.scorer.base_mean);
        c.scorer.base_std = s.value("base_std", c.scorer.base_std);
        c.scorer.target_boost = s.value("target_boost", c.scorer.target_boost);
        c.scorer.partial_exponent = s.value("partial_exponent", c.scorer.partial_exponent);
    }
    if (doc.contains("oracles")) {
        const auto& o = doc["oracles"];
        if (o.contains("direction")) c.direction = oracle_choice_from_json(o["direction"]);
        if (o.contains("equivalence")) c.equivalence = oracle_choice_from_json(o["equivalence"]);
        if (o.contains("answer")) c.answerer = oracle_choice_from_json(o["answer"]);
        if (o.contains("grade")) c.grader = oracle_choice_from_json(o["grade"]);
        if (o.contains("relevancy")) c.relevancy = oracle_choice_from_json(o["relevancy"]);
    }
    if (doc.contains("remote")) {
        const auto& r = doc["remote"];
        c.remote.timeout_s = r.value("timeout_s", c.remote.timeout_s);
        c.remote.retries = r.value("retries", c.remote.retries);
        c.remote.backoff_base_s = r.value("backoff_base_s", c.remote.backoff_base_s);
        c.remote.backoff_factor = r.value("backoff_factor", c.remote.backoff_factor);
    }
    c.seed = doc.value("seed", c.seed);
    return c;
}

nlohmann::json config_to_json(const EngineConfig& c) {
    nlohmann::json doc;
    doc["sensor"] = {{"fov", c.sensor.fov},
                     {"ray_count", c.sensor.ray_count},
                     {"max_range", c.sensor.max_range}};
    doc["weights"] = {{"w_conf", c.weights.w_conf},
                      {"w_sem", c.weights.w_sem},
                      {"w_cost", c.weights.w_cost}};
    doc["m"] = c.m;
    doc["stop"] = {{"z_threshold", c.stop.z_threshold},
                   {"min_steps", c.stop.min_steps},
                   {"max_steps", c.stop.max_steps},
                   {"enabled", c.stop_enabled}};
    doc["k"] = c.k;
    doc["max_candidates"] = c.max_candidates;
    doc["step_budget"] = c.step_budget;
    nlohmann::json synonyms = nlohmann::json::object();
    for (const auto& [k, v] : c.scripted.synonym_table) synonyms[k] = v;
    doc["scripted"] = {{"perception_noise", c.scripted.perception_noise},
                       {"synonym_table", std::move(synonyms)}};
    doc["scorer"] = {{"type", c.scorer_type},
                     {"base_mean", c.scorer.base_mean},
                     {"base_std", c.scorer.base_std},
                     {"target_boost", c.scorer.target_boost},
                     {"partial_exponent", c.scorer.partial_exponent}};
    doc["oracles"] = {{"direction", oracle_choice_to_json(c.direction)},
                      {"equivalence", oracle_choice_to_json(c.equivalence)},
                      {"answer", oracle_choice_to_json(c.answerer)},
                      {"grade", oracle_choice_to_json(c.grader)},
                      {"relevancy", oracle_choice_to_json(c.relevancy)}};
    doc["remote"] = {{"timeout_s", c.remote.timeout_s},
                     {"retries", c.remote.retries},
                     {"backoff_base_s", c.remote.backoff_base_s},
                     {"backoff_factor", c.remote.backoff_factor}};
    doc["seed"] = c.seed;
    return doc;
}

EngineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path + ": malformed config: " + e.what());
    }
    EngineConfig c = config_from_json(doc);
    if (const char* env = std::getenv("EQA_ORACLE_ENDPOINT")) {
        for (OracleChoice* choice :
             {&c.direction, &c.equivalence, &c.answerer, &c.grader, &c.relevancy})
            if (choice->type == "remote") choice->endpoint = env;
    }
    return c;
}

void validate_config(const EngineConfig& c) {
    if (!(c.sensor.fov > 0.0) || c.sensor.fov > kTwoPi)
        throw ValidationError("config: sensor.fov must lie in (0, 2*pi]");
    if (c.sensor.ray_count < 1) throw ValidationError("config: sensor.ray_count must be >= 1");
    if (!(c.sensor.max_range > 0.0)) throw ValidationError("config: sensor.max_range must be > 0");
    if (c.m < 1) throw ValidationError("config: m must be >= 1");
    validate(c.stop);
    if (c.k < 1) throw ValidationError("config: k must be >= 1");
    if (c.max_candidates < 1 || c.max_candidates > 26)
        throw ValidationError("config: max_candidates must lie in 1..26");
    if (c.step_budget < 1) throw ValidationError("config: step_budget must be >= 1");
    if (c.weights.w_conf < 0 || c.weights.w_sem < 0 || c.weights.w_cost < 0 ||
        (c.weights.w_conf == 0 && c.weights.w_sem == 0 && c.weights.w_cost == 0))
        throw ValidationError("config: weights must be non-negative and not all zero");
    if (c.scripted.perception_noise < 0 || c.scripted.perception_noise > 1)
        throw ValidationError("config: perception_noise must lie in [0, 1]");
    if (!(c.scorer.base_std > 0)) throw ValidationError("config: scorer.base_std must be > 0");
    const std::pair<const char*, const OracleChoice*> oracle_choices[] = {
        {"direction", &c.direction}, {"equivalence", &c.equivalence}, {"answer", &c.answerer},
        {"grade", &c.grader},        {"relevancy", &c.relevancy}};
    for (const auto& [name, choice] : oracle_choices) {
        if (choice->type != "scripted" && choice->type != "remote")
            throw ValidationError(std::string("config: oracle ") + name +
                                  " type must be scripted or remote");
        if (choice->type == "remote" && choice->endpoint.empty())
            throw ValidationError(std::string("config: remote oracle ") + name +
                                  " needs an endpoint");
    }
    if (c.scorer_type != "synthetic" && c.scorer_type != "remote")
        throw ValidationError("config: scorer.type must be synthetic or remote");
    if (c.scorer_type == "remote" && c.relevancy.endpoint.empty())
        throw ValidationError("config: remote scorer needs oracles.relevancy.endpoint");
}

std::string config_digest(const EngineConfig& config) {
    // nlohmann::json objects iterate key-sorted, so the dump is canonical.
    uint64_t h = fnv1a64(config_to_json(config).dump());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---- oracle wiring -------------------------------------------------------------

OracleSet make_oracles(const EngineConfig& config, const SceneGrid& scene, uint64_t seed) {
    OracleSet set;
    RemoteOracleConfig remote = config.remote;

    if (config.direction.type == "remote") {
        remote.endpoint = config.direction.endpoint;
        set.direction = std::make_unique<RemoteDirectionOracle>(remote);
    } else {
        ScriptedOracleConfig sc = config.scripted;
        sc.seed = derive_seed(seed, "direction");
        set.direction = std::make_unique<ScriptedDirectionOracle>(sc, scene);
    }
    if (config.equivalence.type == "remote") {
        remote.endpoint = config.equivalence.endpoint;
        set.equivalence = std::make_unique<RemoteEquivalenceOracle>(remote);
    } else {
        set.equivalence = std::make_unique<FoldedStringEquivalence>();
    }
    if (config.answerer.type == "remote") {
        remote.endpoint = config.answerer.endpoint;
        set.answerer = std::make_unique<RemoteAnswerOracle>(remote);
    } else {
        set.answerer = std::make_unique<ScriptedAnswerOracle>(config.scripted);
    }
    if (config.grader.type == "remote") {
        remote.endpoint = config.grader.endpoint;
        set.grader = std::make_unique<RemoteGrader>(remote);
    } else {
        set.grader = std::make_unique<ScriptedGrader>(config.scripted);
    }
    if (config.scorer_type == "remote") {
        remote.endpoint = config.relevancy.endpoint;
        set.scorer = std::make_unique<RemoteRelevancyScorer>(remote, scene);
    } else {
        SyntheticScorerConfig sc = config.scorer;
        sc.seed = derive_seed(seed, "relevancy");
        set.scorer = std::make_unique<SyntheticScorer>(sc);
    }
    return set;
}

// ---- episode loop ---------------------------------------------------------------

uint64_t episode_seed(const EngineConfig& config, size_t index) {
    return derive_seed(config.seed, static_cast<uint64_t>(index));
}

std::vector<ScoredFrame> history_from_log(const EpisodeLog& log) {
    std::vector<ScoredFrame> history;
    history.reserve(log.steps.size());
    for (const StepRecord& s : log.steps)
        history.push_back(ScoredFrame{s.step, s.relevancy, s.digest});
    return history;
}

AnswerQuery build_answer_query(const std::string& question, const std::vector<ScoredFrame>& history,
                               int k) {
    return assemble_query(question, top_k(question, history, k));
}

EpisodeLog run_episode(const QuestionTask& task, const SceneGrid& scene,
                       const EngineConfig& config, const std::string& task_id, uint64_t seed) {
    validate_config(config);
    validate_task(task, scene, task_id);

    EpisodeLog log;
    log.task_id = task_id;
    log.scene_ref = task.scene_ref;
    log.question = task.question;
    log.ground_truth = task.ground_truth;
    log.seed = seed;
    log.config_digest = config_digest(config);
    log.map_width = scene.width;
    log.map_height = scene.height;

    StopPolicy policy = config.stop;
    if (!config.stop_enabled)
        policy.z_threshold = std::numeric_limits<double>::infinity();

    OracleSet oracles = make_oracles(config, scene, seed);
    SemanticMap map = new_map(scene.width, scene.height);
    StoppingStats stats;
    Pose pose = task.start_pose;
    double diagonal = std::hypot(static_cast<double>(scene.width),
                                 static_cast<double>(scene.height));

    try {
        for (int step = 1;; ++step) {
            Observation obs = sense(scene, pose, config.sensor);
            obs.step = step;
            integrate(map, obs);

            StepRecord rec;
            rec.step = step;
            rec.pose = pose;
            rec.visible = obs.visible_cells;
            rec.digest = digest_observation(scene, obs);
            rec.relevancy = score(*oracles.scorer, obs, task.question, task).value;

            std::vector<FrontierCandidate> candidates =
                propose_candidates(map, pose, config.max_candidates);
            if (candidates.empty()) {
                rec.decision = "exhausted";
                log.steps.push_back(std::move(rec));
                log.stop_reason = StopReason::Exhausted;
                break;
            }

            DirectionContext ctx;
            ctx.question = task.question;
            ctx.candidates = &candidates;
            ctx.map = &map;
            ctx.scene = &scene;
            ctx.task = &task;
            std::vector<ConfidenceSample> samples = elicit(*oracles.direction, ctx, config.m);
            try {
                samples = normalize(std::move(samples));
            } catch (const OracleError&) {
                samples = uniform_confidences(std::move(samples));
                rec.flags.push_back("uniform_confidence_fallback");
            }
            bool equiv_fallback = false;
            std::map<char, double> confidences =
                direction_confidences(samples, candidates, *oracles.equivalence, &equiv_fallback);
            if (equiv_fallback) rec.flags.push_back("equivalence_fallback");
            for (FrontierCandidate& c : candidates) c.confidence = confidences[c.label];

            // Feed the confidences back into the map as semantic value disks.
            DirectionValues paint;
            for (const FrontierCandidate& c : candidates) {
                if (c.confidence <= 0.0) continue;
                for (const Cell& d : candidate_disk(map, c.point)) {
                    auto [it, inserted] = paint.emplace(d, c.confidence);
                    if (!inserted && it->second < c.confidence) it->second = c.confidence;
                }
            }
            if (!paint.empty()) integrate(map, Observation{}, &paint);
            rec.candidates = candidates;

            // Select; drop unreachable candidates and re-select.
            std::vector<FrontierCandidate> remaining = candidates;
            bool moved = false;
            while (!remaining.empty()) {
                FrontierCandidate sel = select_next(remaining, config.weights, diagonal);
                std::optional<Pose> next = plan_step(map, pose, sel.point, config.step_budget);
                if (!next) {
                    remaining.erase(std::find_if(remaining.begin(), remaining.end(),
                                                 [&](const FrontierCandidate& c) {
                                                     return c.label == sel.label;
                                                 }));
                    continue;
                }
                rec.chosen = std::string(1, sel.label);
                pose = *next;
                moved = true;
                break;
            }
            if (!moved) {
                rec.decision = "exhausted";
                log.steps.push_back(std::move(rec));
                log.stop_reason = StopReason::Exhausted;
                break;
            }

            StopDecision decision = should_stop(stats, rec.relevancy, policy, step);
            rec.z = stats.last_z;
            switch (decision) {
                case StopDecision::Continue: rec.decision = "continue"; break;
                case StopDecision::StopDecisive: rec.decision = "decisive"; break;
                case StopDecision::StopBudget: rec.decision = "budget"; break;
            }
            log.steps.push_back(std::move(rec));
            if (decision == StopDecision::StopDecisive) {
                log.stop_reason = StopReason::Decisive;
                log.z_at_stop = log.steps.back().z;
                break;
            }
            if (decision == StopDecision::StopBudget) {
                log.stop_reason = StopReason::Budget;
                log.z_at_stop = log.steps.back().z;
                break;
            }
        }

        // Answer from the retrieved history regardless of why we stopped.
        std::vector<ScoredFrame> history = history_from_log(log);
        if (!history.empty()) {
            AnswerQuery query = build_answer_query(task.question, history, config.k);
            log.answer = answer(*oracles.answerer, query);
            log.grade = grade(log.answer, task.ground_truth, *oracles.grader);
        }
    } catch (const OracleError& e) {
        log.stop_reason = StopReason::Error;
        log.error = e.what();
        log.grade = Grade{1, "oracle failure"};
    }
    return log;
}

// ---- batch / sweep ------------------------------------------------------------

TaskSuite load_task_suite(const std::string& tasks_path) {
    TaskSuite suite;
    suite.tasks = load_tasks(tasks_path);
    std::filesystem::path base = std::filesystem::path(tasks_path).parent_path();
    for (const QuestionTask& t : suite.tasks) {
        std::string key = (base / t.scene_ref).string();
        if (!suite.scenes.count(key)) suite.scenes.emplace(key, load_scene(key));
        suite.scene_key_per_task.push_back(key);
    }
    return suite;
}

namespace {

std::string task_identifier(size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "t%03zu", index);
    return buf;
}

}  // namespace

BatchReport run_batch(const TaskSuite& suite, const EngineConfig& config, int parallelism) {
    if (suite.tasks.empty()) throw ValidationError("run_batch: no tasks");
    if (parallelism < 1) parallelism = 1;
    validate_config(config);

    BatchReport report;
    report.logs.resize(suite.tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= suite.tasks.size()) return;
            report.logs[i] = run_episode(suite.tasks[i], suite.scene_for(i), config,
                                         task_identifier(i), episode_seed(config, i));
        }
    };
    if (parallelism == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < parallelism; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

    std::vector<Grade> grades;
    for (const EpisodeLog& log : report.logs) {
        ReportRow row;
        row.task_id = log.task_id;
        row.steps = log.decision_steps();
        row.stop_reason = log.stop_reason;
        row.z_at_stop = log.z_at_stop;
        row.sigma = log.grade.sigma;
        row.llm_match_contrib = static_cast<double>(log.grade.sigma - 1) / 4.0 * 100.0;
        report.rows.push_back(row);
        grades.push_back(log.grade);
        if (log.stop_reason == StopReason::Error) ++report.summary.failed_episodes;
    }
    report.summary.avg_steps = average_steps(report.logs);
    report.summary.llm_match = llm_match(grades);
    report.summary.n = static_cast<int>(report.logs.size());
    report.summary.config_digest = config_digest(config);
    return report;
}

SweepResult sweep(const TaskSuite& suite, const EngineConfig& config, const SweepAxis& axis,
                  int parallelism) {
    if (axis.values.empty()) throw ValidationError("sweep: axis has no values");
    if (axis.name != "z" && axis.name != "k")
        throw ValidationError("sweep: axis must be z or k");
    SweepResult result;
    result.axis_name = axis.name == "z" ? "z_threshold" : "k";
    for (double value : axis.values) {
        EngineConfig run_config = config;
        std::string label;
        if (axis.name == "z") {
            run_config.stop.z_threshold = value;
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%g", value);
            label = buf;
        } else {
            run_config.k = static_cast<int>(value);
            label = std::to_string(run_config.k);
        }
        BatchReport report = run_batch(suite, run_config, parallelism);
        SweepRow row;
        row.value = label;
        row.avg_steps = report.summary.avg_steps;
        row.llm_match = report.summary.llm_match;
        row.n = report.summary.n;
        result.summary.push_back(row);
        for (const ReportRow& r : report.rows) result.rows.emplace_back(label, r);
    }
    return result;
}

}  // namespace eqa
