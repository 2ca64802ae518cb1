#include "eqa/log.hpp"

#include <fstream>
#include <sstream>

#include "eqa/errors.hpp"
#include "json.hpp"

namespace eqa {

using ordered_json = nlohmann::ordered_json;

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::Decisive: return "decisive";
        case StopReason::Budget: return "budget";
        case StopReason::Exhausted: return "exhausted";
        case StopReason::Error: return "error";
    }
    return "?";
}

StopReason stop_reason_from_string(const std::string& s) {
    if (s == "decisive") return StopReason::Decisive;
    if (s == "budget") return StopReason::Budget;
    if (s == "exhausted") return StopReason::Exhausted;
    if (s == "error") return StopReason::Error;
    throw ValidationError("unknown stop reason: " + s);
}

int EpisodeLog::decision_steps() const {
    int n = 0;
    for (const StepRecord& s : steps)
        if (!s.chosen.empty()) ++n;
    return n;
}

namespace {

ordered_json pose_json(const Pose& p) { return ordered_json::array({p.x, p.y, p.heading}); }

Pose pose_from(const nlohmann::json& j) {
    return Pose{j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

ordered_json digest_json(const FrameDigest& d) {
    ordered_json j;
    j["step"] = d.step;
    j["pose"] = pose_json(d.pose);
    j["room"] = d.room;
    ordered_json objs = ordered_json::array();
    for (const ObjectSighting& s : d.objects) {
        ordered_json attrs = ordered_json::object();
        for (const auto& [k, v] : s.attributes) attrs[k] = v;
        objs.push_back({{"id", s.id},
                        {"label", s.label},
                        {"room", s.room},
                        {"attributes", std::move(attrs)},
                        {"fraction", s.fraction}});
    }
    j["objects"] = std::move(objs);
    return j;
}

FrameDigest digest_from(const nlohmann::json& j) {
    FrameDigest d;
    d.step = j.at("step").get<int>();
    d.pose = pose_from(j.at("pose"));
    d.room = j.at("room").get<std::string>();
    for (const auto& o : j.at("objects")) {
        ObjectSighting s;
        s.id = o.at("id").get<std::string>();
        s.label = o.at("label").get<std::string>();
        s.room = o.at("room").get<std::string>();
        for (const auto& [k, v] : o.at("attributes").items()) s.attributes[k] = v.get<std::string>();
        s.fraction = o.at("fraction").get<double>();
        d.objects.push_back(std::move(s));
    }
    return d;
}

ordered_json step_json(const StepRecord& s) {
    ordered_json j;
    j["type"] = "step";
    j["step"] = s.step;
    j["pose"] = pose_json(s.pose);
    ordered_json visible = ordered_json::array();
    for (const VisibleCell& vc : s.visible)
        visible.push_back({vc.cell.x, vc.cell.y, vc.occ == Occupancy::Wall ? 1 : 0});
    j["visible"] = std::move(visible);
    j["digest"] = digest_json(s.digest);
    ordered_json cands = ordered_json::array();
    for (const FrontierCandidate& c : s.candidates)
        cands.push_back({{"label", std::string(1, c.label)},
                         {"point", {c.point.x, c.point.y}},
                         {"cluster_size", c.cluster_size},
                         {"path_cost", c.path_cost},
                         {"semantic", c.semantic_score},
                         {"confidence", c.confidence}});
    j["candidates"] = std::move(cands);
    j["chosen"] = s.chosen;
    j["relevancy"] = s.relevancy;
    if (s.z)
        j["z"] = *s.z;
    else
        j["z"] = nullptr;
    j["decision"] = s.decision;
    j["flags"] = s.flags;
    return j;
}

StepRecord step_from(const nlohmann::json& j) {
    StepRecord s;
    s.step = j.at("step").get<int>();
    s.pose = pose_from(j.at("pose"));
    for (const auto& v : j.at("visible"))
        s.visible.push_back(VisibleCell{Cell{v.at(0).get<int>(), v.at(1).get<int>()},
                                        v.at(2).get<int>() ? Occupancy::Wall : Occupancy::Free});
    s.digest = digest_from(j.at("digest"));
    for (const auto& c : j.at("candidates")) {
        FrontierCandidate f;
        f.label = c.at("label").get<std::string>().at(0);
        f.point = Cell{c.at("point").at(0).get<int>(), c.at("point").at(1).get<int>()};
        f.cluster_size = c.at("cluster_size").get<int>();
        f.path_cost = c.at("path_cost").get<int>();
        f.semantic_score = c.at("semantic").get<double>();
        f.confidence = c.at("confidence").get<double>();
        s.candidates.push_back(f);
    }
    s.chosen = j.at("chosen").get<std::string>();
    s.relevancy = j.at("relevancy").get<double>();
    if (!j.at("z").is_null()) s.z = j.at("z").get<double>();
    s.decision = j.at("decision").get<std::string>();
    for (const auto& f : j.at("flags")) s.flags.push_back(f.get<std::string>());
    return s;
}

}  // namespace

std::string episode_to_jsonl(const EpisodeLog& log) {
    std::string out;
    ordered_json header;
    header["type"] = "header";
    header["task_id"] = log.task_id;
    header["scene"] = log.scene_ref;
    header["question"] = log.question;
    header["ground_truth"] = log.ground_truth;
    header["seed"] = log.seed;
    header["config_digest"] = log.config_digest;
    header["map_width"] = log.map_width;
    header["map_height"] = log.map_height;
    out += header.dump() + "\n";
    for (const StepRecord& s : log.steps) out += step_json(s).dump() + "\n";
    ordered_json result;
    result["type"] = "result";
    result["stop_reason"] = to_string(log.stop_reason);
    result["steps"] = log.decision_steps();
    result["answer"] = log.answer;
    result["sigma"] = log.grade.sigma;
    result["rationale"] = log.grade.rationale;
    if (log.z_at_stop)
        result["z_at_stop"] = *log.z_at_stop;
    else
        result["z_at_stop"] = nullptr;
    result["error"] = log.error;
    out += result.dump() + "\n";
    return out;
}

EpisodeLog episode_from_jsonl(const std::string& text) {
    EpisodeLog log;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_header = false, have_result = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("episode log line " + std::to_string(line_no) +
                                  ": parse error: " + e.what());
        }
        try {
            std::string type = j.at("type").get<std::string>();
            if (type == "header") {
                log.task_id = j.at("task_id").get<std::string>();
                log.scene_ref = j.at("scene").get<std::string>();
                log.question = j.at("question").get<std::string>();
                log.ground_truth = j.at("ground_truth").get<std::string>();
                log.seed = j.at("seed").get<uint64_t>();
                log.config_digest = j.at("config_digest").get<std::string>();
                log.map_width = j.at("map_width").get<int>();
                log.map_height = j.at("map_height").get<int>();
                have_header = true;
            } else if (type == "step") {
                log.steps.push_back(step_from(j));
            } else if (type == "result") {
                log.stop_reason = stop_reason_from_string(j.at("stop_reason").get<std::string>());
                log.answer = j.at("answer").get<std::string>();
                log.grade.sigma = j.at("sigma").get<int>();
                log.grade.rationale = j.at("rationale").get<std::string>();
                if (!j.at("z_at_stop").is_null()) log.z_at_stop = j.at("z_at_stop").get<double>();
                log.error = j.value("error", "");
                have_result = true;
            } else {
                throw ValidationError("episode log line " + std::to_string(line_no) +
                                      ": unknown record type \"" + type + "\"");
            }
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("episode log line " + std::to_string(line_no) +
                                  ": bad record: " + e.what());
        }
    }
    if (!have_header) throw ValidationError("episode log: missing header line");
    if (!have_result) throw ValidationError("episode log: missing result line");
    return log;
}

void save_episode(const EpisodeLog& log, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << episode_to_jsonl(log);
}

EpisodeLog load_episode(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return episode_from_jsonl(ss.str());
}

}  // namespace eqa
