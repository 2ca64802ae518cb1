#include "eqa/stopping.hpp"

#include <cmath>

#include "eqa/errors.hpp"
#include "eqa/rng.hpp"

namespace eqa {

double StoppingStats::stddev() const {
    if (count < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(count - 1));
}

void validate(const StopPolicy& policy) {
    if (!(policy.z_threshold > 0.0))
        throw ValidationError("stop policy: z_threshold must be positive");
    if (policy.min_steps < 2 || policy.min_steps > policy.max_steps)
        throw ValidationError("stop policy: require 2 <= min_steps <= max_steps");
}

StoppingStats update(StoppingStats stats, double value) {
    if (!std::isfinite(value)) throw ValidationError("stopping update: non-finite value");
    stats.count += 1;
    double delta = value - stats.mean;
    stats.mean += delta / static_cast<double>(stats.count);
    stats.m2 += delta * (value - stats.mean);
    return stats;
}

std::optional<double> z_score(const StoppingStats& stats, double value) {
    if (stats.count < 2) return std::nullopt;
    double sd = stats.stddev();
    if (sd <= 0.0) return std::nullopt;  // degenerate history: treat as non-decisive
    return (value - stats.mean) / sd;
}

StopDecision should_stop(StoppingStats& stats, double value, const StopPolicy& policy, int step) {
    // Inspect against the history first, fold the value afterwards.
    std::optional<double> z = std::nullopt;
    StopDecision decision = StopDecision::Continue;
    if (step >= policy.min_steps) {
        z = z_score(stats, value);
        if (z && *z > policy.z_threshold)
            decision = StopDecision::StopDecisive;
        else if (step >= policy.max_steps)
            decision = StopDecision::StopBudget;
    }
    stats = update(stats, value);
    stats.last_z = z;
    return decision;
}

double false_stop_rate(const StopPolicy& policy, int stream_len, int trials, uint64_t seed) {
    if (trials < 1) throw ValidationError("false_stop_rate: trials must be at least 1");
    validate(policy);
    long long decisions = 0, false_stops = 0;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(derive_seed(seed, static_cast<uint64_t>(trial)));
        StoppingStats stats;
        for (int step = 1; step <= stream_len; ++step) {
            double value = rng.normal();
            if (step < policy.min_steps) {
                stats = update(stats, value);
                continue;
            }
            ++decisions;
            std::optional<double> z = z_score(stats, value);
            if (z && *z > policy.z_threshold) ++false_stops;
            stats = update(stats, value);
        }
    }
    return decisions == 0 ? 0.0
                          : static_cast<double>(false_stops) / static_cast<double>(decisions);
}

double false_stop_rate_known(double z_threshold, long long decision_points, uint64_t seed) {
    Rng rng(seed);
    long long false_stops = 0;
    for (long long i = 0; i < decision_points; ++i)
        if (rng.normal() > z_threshold) ++false_stops;
    return static_cast<double>(false_stops) / static_cast<double>(decision_points);
}

}  // namespace eqa
