#pragma once
#include <optional>
#include <string>
#include <vector>

#include "eqa/exploration.hpp"
#include "eqa/mapping.hpp"
#include "eqa/scene.hpp"

namespace eqa {

// One answer/confidence pair as produced by a direction oracle before
// normalization.
struct RawSample {
    std::string answer;
    double confidence = 0.0;
};

// Everything a direction oracle may consult when sampling. Remote backends
// only see question + candidate digests; scripted ones may use the rest.
struct DirectionContext {
    std::string question;
    const std::vector<FrontierCandidate>* candidates = nullptr;
    const SemanticMap* map = nullptr;
    const SceneGrid* scene = nullptr;
    const QuestionTask* task = nullptr;
};

// Canonical one-line description of a candidate, used on the wire and in logs.
std::string candidate_digest(const FrontierCandidate& c);

class DirectionOracle {
public:
    virtual ~DirectionOracle() = default;
    // Returns m entries; nullopt marks a sample that failed to parse.
    virtual std::vector<std::optional<RawSample>> sample(const DirectionContext& ctx, int m) = 0;
};

class EquivalenceOracle {
public:
    virtual ~EquivalenceOracle() = default;
    // Partition of 0..n-1 into groups of same-meaning answers.
    virtual std::vector<std::vector<int>> partition(const std::vector<std::string>& answers) = 0;
    bool equivalent(const std::string& a, const std::string& b) {
        return partition({a, b}).size() == 1;
    }
};

// One retrieved frame: when it was seen, how relevant it scored, what it showed.
struct ScoredFrame {
    int step = 0;
    double score = 0.0;
    FrameDigest digest;
};

// The retrieval-augmented request handed to the answer oracle. No candidate
// answer set is ever attached: answering is open-vocabulary.
struct AnswerQuery {
    std::string question;
    std::vector<ScoredFrame> frames;  // relevancy-descending
};

class AnswerOracle {
public:
    virtual ~AnswerOracle() = default;
    virtual std::string answer(const AnswerQuery& query) = 0;
};

// Judge score for one prediction, 1 (wrong) .. 5 (exact).
struct Grade {
    int sigma = 1;
    std::string rationale;
};

class GraderOracle {
public:
    virtual ~GraderOracle() = default;
    virtual Grade grade(const std::string& prediction, const std::string& truth) = 0;
};

}  // namespace eqa
