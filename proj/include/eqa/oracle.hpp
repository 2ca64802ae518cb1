#pragma once
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "eqa/oracle_api.hpp"
#include "eqa/relevancy.hpp"
#include "eqa/rng.hpp"
#include "json.hpp"

namespace eqa {

enum class OracleKind { Direction, Equivalence, Answer, Grade, Relevancy };

std::string to_string(OracleKind k);

// ---- scripted oracles ------------------------------------------------------

struct ScriptedOracleConfig {
    double perception_noise = 0.0;  // probability a direction sample is uniform-random
    uint64_t seed = 0;
    std::map<std::string, std::string> synonym_table;
};

// Stand-in for the direction-suggesting model. Informed samples point at the
// candidate with the shortest ground-truth path to an undiscovered target;
// noise samples pick a uniform label with uniform confidence in [0.1, 0.9].
class ScriptedDirectionOracle : public DirectionOracle {
public:
    ScriptedDirectionOracle(const ScriptedOracleConfig& config, const SceneGrid& scene);
    std::vector<std::optional<RawSample>> sample(const DirectionContext& ctx, int m) override;

private:
    ScriptedOracleConfig config_;
    const SceneGrid* scene_;
    uint64_t call_index_ = 0;
};

// Groups answers whose case/whitespace/punctuation-folded forms are equal.
class FoldedStringEquivalence : public EquivalenceOracle {
public:
    std::vector<std::vector<int>> partition(const std::vector<std::string>& answers) override;
};

// Answers attribute questions of the form "what is the <attr> of the <label>
// in the <room>?" from retrieved frame digests only; "unknown" otherwise.
class ScriptedAnswerOracle : public AnswerOracle {
public:
    explicit ScriptedAnswerOracle(const ScriptedOracleConfig& config = {});
    std::string answer(const AnswerQuery& query) override;

private:
    ScriptedOracleConfig config_;
};

// 5 on normalized equality, 4 when every truth token appears in the
// prediction, 1 otherwise. The synonym table folds tokens before comparing.
class ScriptedGrader : public GraderOracle {
public:
    explicit ScriptedGrader(const ScriptedOracleConfig& config = {});
    Grade grade(const std::string& prediction, const std::string& truth) override;

private:
    ScriptedOracleConfig config_;
};

// ---- remote wire protocol --------------------------------------------------
//
// One HTTP JSON protocol serves every oracle kind.
// Request:  {kind, request_id, question?, candidates?: [{label, digest}],
//            frames?: [digest], prediction?, truth?, m?}
// Response: {request_id, samples?: [{answer, confidence}], groups?: [[index]],
//            answer?, sigma?, score?}

struct RemoteOracleConfig {
    std::string endpoint;        // http://host:port/path
    double timeout_s = 10.0;
    int retries = 3;             // additional attempts after the first
    double backoff_base_s = 0.5;
    double backoff_factor = 2.0;
};

// POST the request, retrying transport failures and non-2xx statuses with
// exponential backoff. A response that violates the kind's schema raises
// OracleSchemaError immediately, without retrying.
nlohmann::json remote_call(const RemoteOracleConfig& config, const nlohmann::json& request);

nlohmann::json make_direction_request(const std::string& request_id, const std::string& question,
                                      const std::vector<FrontierCandidate>& candidates, int m);
nlohmann::json make_equivalence_request(const std::string& request_id,
                                        const std::vector<std::string>& answers);
nlohmann::json make_answer_request(const std::string& request_id, const AnswerQuery& query);
nlohmann::json make_grade_request(const std::string& request_id, const std::string& prediction,
                                  const std::string& truth);
nlohmann::json make_relevancy_request(const std::string& request_id, const std::string& question,
                                      const std::string& frame_digest);

class RemoteDirectionOracle : public DirectionOracle {
public:
    explicit RemoteDirectionOracle(const RemoteOracleConfig& config);
    std::vector<std::optional<RawSample>> sample(const DirectionContext& ctx, int m) override;

private:
    RemoteOracleConfig config_;
    uint64_t next_id_ = 0;
};

class RemoteEquivalenceOracle : public EquivalenceOracle {
public:
    explicit RemoteEquivalenceOracle(const RemoteOracleConfig& config);
    std::vector<std::vector<int>> partition(const std::vector<std::string>& answers) override;

private:
    RemoteOracleConfig config_;
    uint64_t next_id_ = 0;
};

class RemoteAnswerOracle : public AnswerOracle {
public:
    explicit RemoteAnswerOracle(const RemoteOracleConfig& config);
    std::string answer(const AnswerQuery& query) override;

private:
    RemoteOracleConfig config_;
    uint64_t next_id_ = 0;
};

class RemoteGrader : public GraderOracle {
public:
    explicit RemoteGrader(const RemoteOracleConfig& config);
    Grade grade(const std::string& prediction, const std::string& truth) override;

private:
    RemoteOracleConfig config_;
    uint64_t next_id_ = 0;
};

class RemoteRelevancyScorer : public RelevancyScorer {
public:
    RemoteRelevancyScorer(const RemoteOracleConfig& config, const SceneGrid& scene);
    double score_value(const Observation& obs, const std::string& question,
                       const QuestionTask& task) override;

private:
    RemoteOracleConfig config_;
    const SceneGrid* scene_;
    uint64_t next_id_ = 0;
};

}  // namespace eqa
