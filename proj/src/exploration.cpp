#include "eqa/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>

#include "eqa/errors.hpp"

namespace eqa {

namespace {

const int kDx4[] = {1, -1, 0, 0};
const int kDy4[] = {0, 0, 1, -1};

}  // namespace

std::vector<Cell> detect_frontiers(const SemanticMap& map) {
    std::vector<Cell> out;
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            Cell c{x, y};
            if (!map.explored_free(c)) continue;
            for (int k = 0; k < 4; ++k) {
                Cell n{x + kDx4[k], y + kDy4[k]};
                if (map.in_bounds(n) && !map.is_explored(n)) {
                    out.push_back(c);
                    break;
                }
            }
        }
    }
    return out;  // row-major order by construction
}

std::vector<Cell> candidate_disk(const SemanticMap& map, const Cell& p) {
    std::vector<Cell> out;
    constexpr int r = kCandidateDiskRadius;
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
            if (dx * dx + dy * dy <= r * r) {
                Cell c{p.x + dx, p.y + dy};
                if (map.in_bounds(c)) out.push_back(c);
            }
    return out;
}

std::vector<FrontierCandidate> propose_candidates(const SemanticMap& map, const Pose& pose,
                                                  int max_candidates) {
    if (max_candidates < 1)
        throw ValidationError("propose_candidates: max_candidates must be at least 1");
    std::vector<Cell> frontier = detect_frontiers(map);
    if (frontier.empty()) return {};

    // Flood-fill 8-connected clusters over the frontier set.
    std::unordered_map<Cell, int, CellHash> cluster_of;
    cluster_of.reserve(frontier.size());
    for (const Cell& c : frontier) cluster_of.emplace(c, -1);
    std::vector<std::vector<Cell>> clusters;
    for (const Cell& seed : frontier) {
        if (cluster_of[seed] >= 0) continue;
        int id = static_cast<int>(clusters.size());
        clusters.emplace_back();
        std::vector<Cell> stack{seed};
        cluster_of[seed] = id;
        while (!stack.empty()) {
            Cell c = stack.back();
            stack.pop_back();
            clusters[id].push_back(c);
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    Cell n{c.x + dx, c.y + dy};
                    auto it = cluster_of.find(n);
                    if (it != cluster_of.end() && it->second < 0) {
                        it->second = id;
                        stack.push_back(n);
                    }
                }
        }
    }

    Cell here = pose.cell();
    std::vector<FrontierCandidate> candidates;
    candidates.reserve(clusters.size());
    for (std::vector<Cell>& cluster : clusters) {
        std::sort(cluster.begin(), cluster.end());
        double cx = 0, cy = 0;
        for (const Cell& c : cluster) {
            cx += c.x;
            cy += c.y;
        }
        cx /= static_cast<double>(cluster.size());
        cy /= static_cast<double>(cluster.size());
        Cell rep = cluster.front();
        double best = std::numeric_limits<double>::infinity();
        for (const Cell& c : cluster) {
            double d = (c.x - cx) * (c.x - cx) + (c.y - cy) * (c.y - cy);
            if (d < best) {  // ties keep the (y, x)-smallest since cluster is sorted
                best = d;
                rep = c;
            }
        }
        FrontierCandidate cand;
        cand.point = rep;
        cand.cluster_size = static_cast<int>(cluster.size());
        cand.path_cost = manhattan(here, rep);
        double sum = 0;
        std::vector<Cell> disk = candidate_disk(map, rep);
        for (const Cell& c : disk) sum += map.semantic_value(c);
        cand.semantic_score = sum / static_cast<double>(disk.size());
        candidates.push_back(cand);
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const FrontierCandidate& a, const FrontierCandidate& b) {
                  if (a.cluster_size != b.cluster_size) return a.cluster_size > b.cluster_size;
                  if (a.path_cost != b.path_cost) return a.path_cost < b.path_cost;
                  if (a.point.x != b.point.x) return a.point.x < b.point.x;
                  return a.point.y < b.point.y;
              });
    if (static_cast<int>(candidates.size()) > max_candidates)
        candidates.resize(static_cast<size_t>(max_candidates));
    for (size_t i = 0; i < candidates.size(); ++i)
        candidates[i].label = static_cast<char>('A' + i);
    return candidates;
}

const FrontierCandidate& select_next(const std::vector<FrontierCandidate>& candidates,
                                     const SelectionWeights& weights, double map_diagonal) {
    if (candidates.empty()) throw ValidationError("select_next: empty candidate list");
    if (weights.w_conf < 0 || weights.w_sem < 0 || weights.w_cost < 0 ||
        (weights.w_conf == 0 && weights.w_sem == 0 && weights.w_cost == 0))
        throw ValidationError("select_next: weights must be non-negative and not all zero");
    size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < candidates.size(); ++i) {
        const FrontierCandidate& c = candidates[i];
        double score = weights.w_conf * c.confidence + weights.w_sem * c.semantic_score -
                       weights.w_cost * (c.path_cost / map_diagonal);
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }
    return candidates[best];
}

std::optional<std::vector<Cell>> find_path(const SemanticMap& map, const Cell& from,
                                           const Cell& to) {
    if (!map.in_bounds(to)) throw ValidationError("find_path: target out of bounds");
    if (from == to) return std::vector<Cell>{};
    if (!map.explored_free(to)) return std::nullopt;

    // A* on explored-free cells, Manhattan heuristic. Deterministic tie order:
    // lower f, then lower g, then row-major insertion sequence.
    struct Node {
        int f, g;
        long long seq;
        Cell cell;
    };
    auto worse = [](const Node& a, const Node& b) {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g > b.g;
        return a.seq > b.seq;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> open(worse);
    std::unordered_map<Cell, int, CellHash> best_g;
    std::unordered_map<Cell, Cell, CellHash> parent;
    long long seq = 0;
    open.push({manhattan(from, to), 0, seq++, from});
    best_g[from] = 0;
    while (!open.empty()) {
        Node n = open.top();
        open.pop();
        if (n.g > best_g[n.cell]) continue;
        if (n.cell == to) break;
        for (int k = 0; k < 4; ++k) {
            Cell nb{n.cell.x + kDx4[k], n.cell.y + kDy4[k]};
            if (!map.in_bounds(nb) || !map.explored_free(nb)) continue;
            int g = n.g + 1;
            auto it = best_g.find(nb);
            if (it == best_g.end() || g < it->second) {
                best_g[nb] = g;
                parent[nb] = n.cell;
                open.push({g + manhattan(nb, to), g, seq++, nb});
            }
        }
    }
    if (!parent.count(to) ) return std::nullopt;
    std::vector<Cell> path;
    for (Cell c = to; c != from; c = parent[c]) path.push_back(c);
    std::reverse(path.begin(), path.end());
    return path;
}

std::optional<Pose> plan_step(const SemanticMap& map, const Pose& pose, const Cell& target,
                              int step_budget) {
    Cell from = pose.cell();
    if (from == target) return pose;
    auto path = find_path(map, from, target);
    if (!path) return std::nullopt;
    int steps = std::min<int>(step_budget, static_cast<int>(path->size()));
    if (steps <= 0) return pose;
    Cell reached = (*path)[static_cast<size_t>(steps) - 1];
    Pose out;
    out.x = cell_center_x(reached);
    out.y = cell_center_y(reached);
    double dx, dy;
    if (steps < static_cast<int>(path->size())) {
        // Stopped mid-path: face the next waypoint.
        Cell next = (*path)[static_cast<size_t>(steps)];
        dx = next.x - reached.x;
        dy = next.y - reached.y;
    } else {
        // Arrived: face along the last step taken.
        Cell prev = steps >= 2 ? (*path)[static_cast<size_t>(steps) - 2] : from;
        dx = reached.x - prev.x;
        dy = reached.y - prev.y;
    }
    out.heading = wrap_angle(std::atan2(dy, dx));
    return out;
}

}  // namespace eqa
