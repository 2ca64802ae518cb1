#include "eqa/confidence.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "eqa/errors.hpp"

namespace eqa {

std::string fold_answer(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (unsigned char c : s) {
        if (std::isalnum(c)) {
            if (pending_space && !out.empty()) out += ' ';
            pending_space = false;
            out += static_cast<char>(std::tolower(c));
        } else if (std::isspace(c) || std::ispunct(c)) {
            pending_space = true;
        }
    }
    return out;
}

std::vector<ConfidenceSample> elicit(DirectionOracle& oracle, const DirectionContext& ctx, int m) {
    if (m < 1) throw ValidationError("elicit: m must be at least 1");
    if (!ctx.candidates || ctx.candidates->empty())
        throw ValidationError("elicit: empty candidate context");
    std::vector<std::optional<RawSample>> raw = oracle.sample(ctx, m);
    std::vector<ConfidenceSample> out;
    out.reserve(raw.size());
    for (const auto& r : raw) {
        if (!r) continue;  // malformed sample: drop
        if (r->confidence < 0.0) continue;
        out.push_back(ConfidenceSample{r->answer, r->confidence, std::nullopt});
    }
    if (out.empty()) throw OracleError("elicit: every sample was malformed");
    return out;
}

std::vector<ConfidenceSample> normalize(std::vector<ConfidenceSample> samples) {
    if (samples.empty()) throw ValidationError("normalize: no samples");
    double total = 0.0;
    for (const ConfidenceSample& s : samples) total += s.raw_confidence;
    if (total <= 0.0) throw OracleError("normalize: all raw confidences are zero");
    for (ConfidenceSample& s : samples) s.normalized_confidence = s.raw_confidence / total;
    return samples;
}

std::vector<ConfidenceSample> uniform_confidences(std::vector<ConfidenceSample> samples) {
    double u = 1.0 / static_cast<double>(samples.size());
    for (ConfidenceSample& s : samples) s.normalized_confidence = u;
    return samples;
}

namespace {

std::vector<std::vector<int>> fold_string_partition(const std::vector<std::string>& answers) {
    std::vector<std::vector<int>> groups;
    std::vector<std::string> keys;
    for (size_t i = 0; i < answers.size(); ++i) {
        std::string key = fold_answer(answers[i]);
        auto it = std::find(keys.begin(), keys.end(), key);
        if (it == keys.end()) {
            keys.push_back(key);
            groups.push_back({static_cast<int>(i)});
        } else {
            groups[static_cast<size_t>(it - keys.begin())].push_back(static_cast<int>(i));
        }
    }
    return groups;
}

std::vector<EquivalenceClass> classes_from_partition(
    const std::vector<ConfidenceSample>& samples, const std::vector<std::vector<int>>& partition) {
    std::vector<EquivalenceClass> classes;
    classes.reserve(partition.size());
    for (const std::vector<int>& members : partition) {
        EquivalenceClass cls;
        cls.members = members;
        std::sort(cls.members.begin(), cls.members.end());
        double best = -1.0;
        for (int i : cls.members) {
            double c = *samples[static_cast<size_t>(i)].normalized_confidence;
            cls.cumulative_confidence += c;
            if (c > best) {  // ties keep the first occurrence
                best = c;
                cls.representative = samples[static_cast<size_t>(i)].answer;
            }
        }
        classes.push_back(std::move(cls));
    }
    // Sort by cumulative confidence descending; stable, so equal-confidence
    // classes stay in first-occurrence order.
    std::stable_sort(classes.begin(), classes.end(),
                     [](const EquivalenceClass& a, const EquivalenceClass& b) {
                         return a.cumulative_confidence > b.cumulative_confidence;
                     });
    return classes;
}

}  // namespace

GroupingResult group(const std::vector<ConfidenceSample>& samples, EquivalenceOracle& equiv) {
    if (samples.empty()) throw ValidationError("group: no samples");
    for (const ConfidenceSample& s : samples)
        if (!s.normalized_confidence)
            throw ValidationError("group: samples must be normalized first");

    std::vector<std::string> answers;
    answers.reserve(samples.size());
    for (const ConfidenceSample& s : samples) answers.push_back(s.answer);

    GroupingResult result;
    std::vector<std::vector<int>> partition;
    try {
        partition = equiv.partition(answers);
        // Validate: every index exactly once.
        std::vector<int> seen(samples.size(), 0);
        for (const auto& g : partition)
            for (int i : g) {
                if (i < 0 || i >= static_cast<int>(samples.size()) || seen[static_cast<size_t>(i)]++)
                    throw OracleError("group: oracle returned an invalid partition");
            }
        for (int s : seen)
            if (!s) throw OracleError("group: oracle partition misses a sample");
    } catch (const OracleError&) {
        partition = fold_string_partition(answers);
        result.used_string_fallback = true;
    }
    result.classes = classes_from_partition(samples, partition);
    return result;
}

std::pair<std::string, double> select_best(const std::vector<EquivalenceClass>& classes) {
    if (classes.empty()) throw ValidationError("select_best: empty class list");
    size_t best = 0;
    for (size_t i = 1; i < classes.size(); ++i)
        if (classes[i].cumulative_confidence > classes[best].cumulative_confidence) best = i;
    return {classes[best].representative, classes[best].cumulative_confidence};
}

std::map<char, double> direction_confidences(const std::vector<ConfidenceSample>& samples,
                                             const std::vector<FrontierCandidate>& candidates,
                                             EquivalenceOracle& equiv, bool* used_fallback) {
    GroupingResult grouped = group(samples, equiv);
    if (used_fallback) *used_fallback = grouped.used_string_fallback;
    std::map<char, double> out;
    for (const FrontierCandidate& cand : candidates) {
        std::string label(1, cand.label);
        double value = 0.0;
        for (const EquivalenceClass& cls : grouped.classes) {
            bool matches = false;
            if (grouped.used_string_fallback) {
                matches = fold_answer(cls.representative) == fold_answer(label);
            } else {
                try {
                    matches = equiv.equivalent(cls.representative, label);
                } catch (const OracleError&) {
                    matches = fold_answer(cls.representative) == fold_answer(label);
                }
            }
            if (matches) {
                value = cls.cumulative_confidence;  // classes sorted: first match is largest
                break;
            }
        }
        out[cand.label] = std::clamp(value, 0.0, 1.0);
    }
    return out;
}

}  // namespace eqa
