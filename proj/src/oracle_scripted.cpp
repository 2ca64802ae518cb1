#include <algorithm>
#include <cstdio>
#include <queue>
#include <regex>

#include "eqa/confidence.hpp"
#include "eqa/errors.hpp"
#include "eqa/oracle.hpp"

namespace eqa {

std::string to_string(OracleKind k) {
    switch (k) {
        case OracleKind::Direction: return "direction";
        case OracleKind::Equivalence: return "equivalence";
        case OracleKind::Answer: return "answer";
        case OracleKind::Grade: return "grade";
        case OracleKind::Relevancy: return "relevancy";
    }
    return "?";
}

std::string candidate_digest(const FrontierCandidate& c) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "%c: frontier cluster of %d cells at (%d,%d), path cost %d, semantic %.3f",
                  c.label, c.cluster_size, c.point.x, c.point.y, c.path_cost, c.semantic_score);
    return buf;
}

// ---- scripted direction oracle ----------------------------------------------

ScriptedDirectionOracle::ScriptedDirectionOracle(const ScriptedOracleConfig& config,
                                                 const SceneGrid& scene)
    : config_(config), scene_(&scene) {
    if (config.perception_noise < 0.0 || config.perception_noise > 1.0)
        throw ValidationError("scripted direction oracle: perception_noise must be in [0, 1]");
}

namespace {

// Grid distances from every target cell over ground-truth non-wall cells.
std::vector<int> target_distance_field(const SceneGrid& scene, const QuestionTask& task,
                                       const SemanticMap* map) {
    std::vector<int> dist(static_cast<size_t>(scene.width) * scene.height, -1);
    std::queue<Cell> q;
    auto push_object = [&](const SceneObject& obj) {
        for (const Cell& c : obj.cells) {
            if (scene.is_wall(c)) continue;
            size_t i = static_cast<size_t>(c.y) * scene.width + c.x;
            if (dist[i] < 0) {
                dist[i] = 0;
                q.push(c);
            }
        }
    };
    // Prefer targets the agent has not yet mapped; once everything is
    // discovered, steer toward targets in general.
    bool any_undiscovered = false;
    for (const std::string& id : task.target_object_ids) {
        auto idx = scene.find_object(id);
        if (!idx) continue;
        const SceneObject& obj = scene.objects[static_cast<size_t>(*idx)];
        bool discovered = false;
        if (map) {
            for (const Cell& c : obj.cells)
                if (map->in_bounds(c) && map->is_explored(c)) {
                    discovered = true;
                    break;
                }
        }
        if (!discovered) {
            push_object(obj);
            any_undiscovered = true;
        }
    }
    if (!any_undiscovered) {
        for (const std::string& id : task.target_object_ids) {
            auto idx = scene.find_object(id);
            if (idx) push_object(scene.objects[static_cast<size_t>(*idx)]);
        }
    }
    const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
    while (!q.empty()) {
        Cell c = q.front();
        q.pop();
        int d = dist[static_cast<size_t>(c.y) * scene.width + c.x];
        for (int k = 0; k < 4; ++k) {
            Cell n{c.x + dx[k], c.y + dy[k]};
            if (!scene.in_bounds(n) || scene.is_wall(n)) continue;
            size_t i = static_cast<size_t>(n.y) * scene.width + n.x;
            if (dist[i] < 0) {
                dist[i] = d + 1;
                q.push(n);
            }
        }
    }
    return dist;
}

}  // namespace

std::vector<std::optional<RawSample>> ScriptedDirectionOracle::sample(const DirectionContext& ctx,
                                                                      int m) {
    if (!ctx.candidates || ctx.candidates->empty())
        throw ValidationError("scripted direction oracle: no candidates");
    const std::vector<FrontierCandidate>& candidates = *ctx.candidates;

    // Informed pick: candidate with the shortest ground-truth path to an
    // undiscovered target, confidence 0.5 + 0.5 * proximity ratio.
    char informed_label = candidates.front().label;
    double informed_conf = 0.5;
    if (ctx.task && scene_) {
        std::vector<int> dist = target_distance_field(*scene_, *ctx.task, ctx.map);
        int best_d = -1, worst_d = -1;
        for (const FrontierCandidate& c : candidates) {
            int d = dist[static_cast<size_t>(c.point.y) * scene_->width + c.point.x];
            if (d < 0) continue;  // unreachable from any target
            if (best_d < 0 || d < best_d) {
                best_d = d;
                informed_label = c.label;
            }
            worst_d = std::max(worst_d, d);
        }
        if (best_d >= 0 && worst_d > best_d)
            informed_conf = 0.5 + 0.5 * (1.0 - static_cast<double>(best_d) /
                                                   static_cast<double>(worst_d));
    }

    Rng rng(derive_seed(config_.seed, call_index_++));
    std::vector<std::optional<RawSample>> out;
    out.reserve(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        if (rng.bernoulli(config_.perception_noise)) {
            int pick = rng.uniform_int(0, static_cast<int>(candidates.size()) - 1);
            double conf = rng.uniform(0.1, 0.9);
            out.push_back(RawSample{std::string(1, candidates[static_cast<size_t>(pick)].label), conf});
        } else {
            out.push_back(RawSample{std::string(1, informed_label), informed_conf});
        }
    }
    return out;
}

// ---- folded-string equivalence ----------------------------------------------

std::vector<std::vector<int>> FoldedStringEquivalence::partition(
    const std::vector<std::string>& answers) {
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

// ---- scripted answer oracle --------------------------------------------------

ScriptedAnswerOracle::ScriptedAnswerOracle(const ScriptedOracleConfig& config) : config_(config) {}

std::string ScriptedAnswerOracle::answer(const AnswerQuery& query) {
    static const std::regex pattern("^what is the (.+?) of the (.+?) in the (.+?)\\?$",
                                    std::regex::icase);
    std::smatch match;
    if (!std::regex_match(query.question, match, pattern)) return "unknown";
    std::string attr = fold_answer(match[1].str());
    std::string label = fold_answer(match[2].str());

    for (const ScoredFrame& frame : query.frames) {
        for (const ObjectSighting& s : frame.digest.objects) {
            if (fold_answer(s.label) != label) continue;
            for (const auto& [k, v] : s.attributes)
                if (fold_answer(k) == attr) return v;
        }
    }
    return "unknown";
}

// ---- scripted grader ----------------------------------------------------------

ScriptedGrader::ScriptedGrader(const ScriptedOracleConfig& config) : config_(config) {}

namespace {

std::vector<std::string> graded_tokens(const std::string& text,
                                       const std::map<std::string, std::string>& synonyms) {
    std::vector<std::string> tokens;
    std::string folded = fold_answer(text);
    size_t pos = 0;
    while (pos < folded.size()) {
        size_t space = folded.find(' ', pos);
        if (space == std::string::npos) space = folded.size();
        std::string tok = folded.substr(pos, space - pos);
        auto it = synonyms.find(tok);
        tokens.push_back(it != synonyms.end() ? fold_answer(it->second) : tok);
        pos = space + 1;
    }
    return tokens;
}

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

}  // namespace

Grade ScriptedGrader::grade(const std::string& prediction, const std::string& truth) {
    std::vector<std::string> pred = graded_tokens(prediction, config_.synonym_table);
    std::vector<std::string> tru = graded_tokens(truth, config_.synonym_table);
    if (join(pred) == join(tru)) return Grade{5, "exact match"};
    bool subset = !tru.empty();
    for (const std::string& t : tru)
        if (std::find(pred.begin(), pred.end(), t) == pred.end()) {
            subset = false;
            break;
        }
    if (subset) return Grade{4, "truth contained in prediction"};
    return Grade{1, "no match"};
}

}  // namespace eqa
