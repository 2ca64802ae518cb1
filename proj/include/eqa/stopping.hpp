#pragma once
#include <cstdint>
#include <optional>

namespace eqa {

// Running sample statistics over relevancy scores, Welford form.
// stddev() is the sample standard deviation (n-1 denominator).
struct StoppingStats {
    long long count = 0;
    double mean = 0.0;
    double m2 = 0.0;  // sum of squared deviations
    std::optional<double> last_z;

    double stddev() const;
};

struct StopPolicy {
    double z_threshold = 3.0;  // Z_th
    int min_steps = 10;        // never a decision before this step
    int max_steps = 50;        // exploration budget
};

// Enforces z_threshold > 0 and 2 <= min_steps <= max_steps.
void validate(const StopPolicy& policy);

enum class StopDecision { Continue, StopDecisive, StopBudget };

// Fold one value into the running statistics.
StoppingStats update(StoppingStats stats, double value);

// (value - mean) / stddev over the history excluding the candidate value.
// nullopt when fewer than two samples or the history is degenerate.
std::optional<double> z_score(const StoppingStats& stats, double value);

// Decide on the value, then fold it in. Steps are 1-based.
StopDecision should_stop(StoppingStats& stats, double value, const StopPolicy& policy, int step);

// Fraction of per-step decisions (steps min_steps..stream_len) on pure
// Gaussian streams that wrongly come back decisive, over `trials` streams.
double false_stop_rate(const StopPolicy& policy, int stream_len, int trials, uint64_t seed);

// Same question with the true distribution parameters supplied instead of
// estimated: the textbook 1 - Phi(z_threshold) check.
double false_stop_rate_known(double z_threshold, long long decision_points, uint64_t seed);

}  // namespace eqa
