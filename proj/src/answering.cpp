#include "eqa/answering.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "eqa/errors.hpp"
#include "json.hpp"

namespace eqa {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

RetrievalSet top_k(const std::string& question, const std::vector<ScoredFrame>& history, int k) {
    if (k < 1) throw ValidationError("top_k: k must be at least 1");
    if (history.empty()) throw ValidationError("top_k: empty history");
    RetrievalSet out;
    out.question = question;
    out.k = k;
    out.frames = history;
    std::stable_sort(out.frames.begin(), out.frames.end(),
                     [](const ScoredFrame& a, const ScoredFrame& b) {
                         if (a.score != b.score) return a.score > b.score;
                         return a.step < b.step;
                     });
    if (static_cast<int>(out.frames.size()) > k) out.frames.resize(static_cast<size_t>(k));
    return out;
}

AnswerQuery assemble_query(const std::string& question, const RetrievalSet& retrieval) {
    if (retrieval.frames.empty()) throw ValidationError("assemble_query: empty retrieval set");
    AnswerQuery q;
    q.question = question;
    q.frames = retrieval.frames;
    return q;
}

std::string render_query(const AnswerQuery& query) {
    std::string out = "question: " + query.question + "\n";
    out += "frames: " + std::to_string(query.frames.size()) + "\n";
    for (const ScoredFrame& f : query.frames)
        out += "frame score=" + fmt("%.4f", f.score) + " " + f.digest.render() + "\n";
    return out;
}

std::string answer(AnswerOracle& oracle, const AnswerQuery& query) {
    std::string a = oracle.answer(query);
    if (a.empty()) throw OracleError("answer: oracle returned an empty answer");
    return a;
}

Grade grade(const std::string& prediction, const std::string& truth, GraderOracle& grader) {
    if (prediction.empty() || truth.empty())
        throw ValidationError("grade: prediction and truth must be non-empty");
    try {
        Grade g = grader.grade(prediction, truth);
        if (g.sigma < 1 || g.sigma > 5)
            return Grade{1, "grader unavailable"};
        return g;
    } catch (const OracleError&) {
        return Grade{1, "grader unavailable"};
    }
}

double llm_match(const std::vector<Grade>& grades) {
    if (grades.empty()) throw ValidationError("llm_match: empty grade list");
    double sum = 0.0;
    for (const Grade& g : grades) sum += static_cast<double>(g.sigma - 1) / 4.0;
    return sum / static_cast<double>(grades.size()) * 100.0;
}

double average_steps(const std::vector<EpisodeLog>& logs) {
    if (logs.empty()) throw ValidationError("average_steps: empty log list");
    double sum = 0.0;
    for (const EpisodeLog& log : logs) sum += static_cast<double>(log.decision_steps());
    return sum / static_cast<double>(logs.size());
}

// ---- evaluation report -----------------------------------------------------

namespace {

std::string row_csv(const ReportRow& r) {
    std::string out = r.task_id + "," + std::to_string(r.steps) + "," + to_string(r.stop_reason) +
                      ",";
    if (r.z_at_stop) out += fmt("%.6f", *r.z_at_stop);
    out += "," + std::to_string(r.sigma) + "," + fmt("%.6f", r.llm_match_contrib);
    return out;
}

}  // namespace

std::string report_csv(const std::vector<ReportRow>& rows) {
    std::string out = "task_id,steps,stop_reason,z_at_stop,sigma,llm_match_contrib\n";
    for (const ReportRow& r : rows) out += row_csv(r) + "\n";
    return out;
}

std::string report_csv_with_axis(const std::string& axis_name,
                                 const std::vector<std::pair<std::string, ReportRow>>& rows) {
    std::string out = axis_name + ",task_id,steps,stop_reason,z_at_stop,sigma,llm_match_contrib\n";
    for (const auto& [axis, row] : rows) out += axis + "," + row_csv(row) + "\n";
    return out;
}

std::string summary_json(const ReportSummary& summary) {
    nlohmann::ordered_json j;
    j["avg_steps"] = summary.avg_steps;
    j["llm_match"] = summary.llm_match;
    j["n"] = summary.n;
    j["failed_episodes"] = summary.failed_episodes;
    j["config_digest"] = summary.config_digest;
    return j.dump(2) + "\n";
}

}  // namespace eqa
