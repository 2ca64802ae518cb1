#pragma once
#include <string>
#include <vector>

#include "eqa/log.hpp"
#include "eqa/oracle_api.hpp"

namespace eqa {

// The K most question-relevant frames of an episode, relevancy-descending.
struct RetrievalSet {
    std::string question;
    std::vector<ScoredFrame> frames;
    int k = 0;
};

// Highest-scoring k frames; ties go to the earlier step.
RetrievalSet top_k(const std::string& question, const std::vector<ScoredFrame>& history, int k);

AnswerQuery assemble_query(const std::string& question, const RetrievalSet& retrieval);

// Canonical text form of a query; byte-deterministic.
std::string render_query(const AnswerQuery& query);

std::string answer(AnswerOracle& oracle, const AnswerQuery& query);

// Grade a prediction; a grader failure degrades to sigma 1 with a flagged
// rationale instead of aborting the evaluation.
Grade grade(const std::string& prediction, const std::string& truth, GraderOracle& grader);

// (1/N) * sum (sigma_i - 1)/4 * 100.
double llm_match(const std::vector<Grade>& grades);

double average_steps(const std::vector<EpisodeLog>& logs);

// ---- evaluation report -----------------------------------------------------

struct ReportRow {
    std::string task_id;
    int steps = 0;
    StopReason stop_reason = StopReason::Budget;
    std::optional<double> z_at_stop;
    int sigma = 1;
    double llm_match_contrib = 0.0;  // (sigma-1)/4 * 100
};

struct ReportSummary {
    double avg_steps = 0.0;
    double llm_match = 0.0;
    int n = 0;
    int failed_episodes = 0;
    std::string config_digest;
};

std::string report_csv(const std::vector<ReportRow>& rows);
// Same rows with a leading axis column, for sweep output.
std::string report_csv_with_axis(const std::string& axis_name,
                                 const std::vector<std::pair<std::string, ReportRow>>& rows);
std::string summary_json(const ReportSummary& summary);

}  // namespace eqa
