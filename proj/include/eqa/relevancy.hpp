#pragma once
#include <cstdint>
#include <memory>
#include <string>

#include "eqa/rng.hpp"
#include "eqa/scene.hpp"

namespace eqa {

struct RelevancyScore {
    int step = 0;
    double value = 0.0;
};

// Stand-in for an image-question matching model: Gaussian background noise
// plus a boost proportional to how much of a target object is in view.
struct SyntheticScorerConfig {
    double base_mean = 0.20;
    double base_std = 0.02;
    double target_boost = 0.60;
    double partial_exponent = 1.0;
    uint64_t seed = 0;
};

class RelevancyScorer {
public:
    virtual ~RelevancyScorer() = default;
    virtual double score_value(const Observation& obs, const std::string& question,
                               const QuestionTask& task) = 0;
};

class SyntheticScorer : public RelevancyScorer {
public:
    explicit SyntheticScorer(const SyntheticScorerConfig& config);
    double score_value(const Observation& obs, const std::string& question,
                       const QuestionTask& task) override;

private:
    SyntheticScorerConfig config_;
    Rng rng_;
};

RelevancyScore score(RelevancyScorer& scorer, const Observation& obs, const std::string& question,
                     const QuestionTask& task);

}  // namespace eqa
