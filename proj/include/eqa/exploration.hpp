#pragma once
#include <optional>
#include <vector>

#include "eqa/geometry.hpp"
#include "eqa/mapping.hpp"

namespace eqa {

// One lettered exploration option presented to the direction oracle.
struct FrontierCandidate {
    char label = 'A';
    Cell point;             // frontier cell nearest the cluster centroid
    int cluster_size = 1;
    int path_cost = 0;      // Manhattan distance from the current pose, cells
    double semantic_score = 0.5;  // mean semantic value over the candidate disk
    double confidence = 0.0;      // filled from the confidence pipeline
};

struct SelectionWeights {
    double w_conf = 1.0;
    double w_sem = 0.5;
    double w_cost = 0.3;
};

// Default spatial footprint of a candidate: cells within Euclidean radius 2.
inline constexpr int kCandidateDiskRadius = 2;

// Explored-free cells 4-adjacent to at least one unexplored cell.
std::vector<Cell> detect_frontiers(const SemanticMap& map);

// In-bounds cells within kCandidateDiskRadius of p.
std::vector<Cell> candidate_disk(const SemanticMap& map, const Cell& p);

// Cluster frontiers by 8-connectivity and emit at most max_candidates options,
// largest cluster first, labeled 'A', 'B', ...
std::vector<FrontierCandidate> propose_candidates(const SemanticMap& map, const Pose& pose,
                                                  int max_candidates);

// Argmax of w_conf*confidence + w_sem*semantic - w_cost*(path_cost/map_diagonal);
// ties break toward the earlier label.
const FrontierCandidate& select_next(const std::vector<FrontierCandidate>& candidates,
                                     const SelectionWeights& weights, double map_diagonal);

// Shortest path over explored-free cells, 4-connected, excluding `from` itself.
// nullopt when the target is not reachable through known-free space.
std::optional<std::vector<Cell>> find_path(const SemanticMap& map, const Cell& from,
                                           const Cell& to);

// Advance up to step_budget cells along the shortest known-free path toward
// target. nullopt when no path exists; the caller marks the candidate
// unreachable. heading points at the next waypoint (or along the last step).
std::optional<Pose> plan_step(const SemanticMap& map, const Pose& pose, const Cell& target,
                              int step_budget);

}  // namespace eqa
