#include "eqa/relevancy.hpp"

#include <algorithm>
#include <cmath>

#include "eqa/errors.hpp"

namespace eqa {

SyntheticScorer::SyntheticScorer(const SyntheticScorerConfig& config)
    : config_(config), rng_(config.seed) {
    if (!(config.base_std > 0.0))
        throw ValidationError("synthetic scorer: base_std must be positive");
    if (config.partial_exponent < 1.0)
        throw ValidationError("synthetic scorer: partial_exponent must be at least 1");
}

double SyntheticScorer::score_value(const Observation& obs, const std::string& /*question*/,
                                    const QuestionTask& task) {
    // One noise draw per call, regardless of what is visible, so that score
    // streams for the same seed line up step-for-step across configurations.
    double noise = std::max(0.0, rng_.normal(config_.base_mean, config_.base_std));
    double best_fraction = 0.0;
    for (const std::string& id : task.target_object_ids) {
        auto it = obs.visible_object_fractions.find(id);
        if (it != obs.visible_object_fractions.end()) best_fraction = std::max(best_fraction, it->second);
    }
    double boost = best_fraction > 0.0
                       ? config_.target_boost * std::pow(best_fraction, config_.partial_exponent)
                       : 0.0;
    return noise + boost;
}

RelevancyScore score(RelevancyScorer& scorer, const Observation& obs, const std::string& question,
                     const QuestionTask& task) {
    double v = scorer.score_value(obs, question, task);
    if (!std::isfinite(v)) throw OracleError("relevancy: scorer produced a non-finite value");
    return RelevancyScore{obs.step, v};
}

}  // namespace eqa
