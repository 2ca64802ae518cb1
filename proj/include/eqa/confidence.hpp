#pragma once
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqa/oracle_api.hpp"

namespace eqa {

// One elicited answer r_i with its raw confidence c_i and, once normalize()
// has run, the normalized confidence c_i'.
struct ConfidenceSample {
    std::string answer;
    double raw_confidence = 0.0;
    std::optional<double> normalized_confidence;
};

// A group of same-meaning answers R_k with cumulative confidence C_k.
struct EquivalenceClass {
    std::string representative;
    std::vector<int> members;  // indices into the sample list
    double cumulative_confidence = 0.0;
};

struct GroupingResult {
    std::vector<EquivalenceClass> classes;  // cumulative-confidence descending
    bool used_string_fallback = false;      // equivalence oracle failed
};

// Ask the oracle for m answer/confidence samples. Samples that fail to parse
// are dropped; it is an error only when every sample drops.
std::vector<ConfidenceSample> elicit(DirectionOracle& oracle, const DirectionContext& ctx, int m);

// c_i' = c_i / sum_j c_j. Throws OracleError when every raw confidence is
// zero; callers fall back to the uniform distribution.
std::vector<ConfidenceSample> normalize(std::vector<ConfidenceSample> samples);

// Spread 1/n over the samples (fallback for an uninformative oracle).
std::vector<ConfidenceSample> uniform_confidences(std::vector<ConfidenceSample> samples);

// Partition normalized samples into semantic equivalence classes and sum
// member confidences. On oracle failure falls back to folded-string grouping
// and flags the result.
GroupingResult group(const std::vector<ConfidenceSample>& samples, EquivalenceOracle& equiv);

// (R*, C*): the class with the highest cumulative confidence.
std::pair<std::string, double> select_best(const std::vector<EquivalenceClass>& classes);

// Cumulative confidence per candidate label (0 when no class matches).
std::map<char, double> direction_confidences(const std::vector<ConfidenceSample>& samples,
                                             const std::vector<FrontierCandidate>& candidates,
                                             EquivalenceOracle& equiv,
                                             bool* used_fallback = nullptr);

// Case/whitespace/punctuation-folded form used by the built-in string matcher.
std::string fold_answer(const std::string& s);

}  // namespace eqa
