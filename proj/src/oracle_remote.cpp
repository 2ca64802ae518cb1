#include <chrono>
#include <thread>

#include "eqa/answering.hpp"
#include "eqa/errors.hpp"
#include "eqa/oracle.hpp"
#include "httplib.h"

namespace eqa {

namespace {

// Split "http://host:port/path" into client base and request path.
void split_endpoint(const std::string& endpoint, std::string& base, std::string& path) {
    size_t scheme = endpoint.find("://");
    if (scheme == std::string::npos)
        throw ValidationError("remote oracle: endpoint must include a scheme: " + endpoint);
    size_t slash = endpoint.find('/', scheme + 3);
    if (slash == std::string::npos) {
        base = endpoint;
        path = "/";
    } else {
        base = endpoint.substr(0, slash);
        path = endpoint.substr(slash);
    }
}

void validate_response_schema(const nlohmann::json& request, const nlohmann::json& response) {
    if (!response.is_object()) throw OracleSchemaError("remote oracle: response is not an object");
    if (!response.contains("request_id") || !response["request_id"].is_string() ||
        response["request_id"].get<std::string>() != request["request_id"].get<std::string>())
        throw OracleSchemaError("remote oracle: response request_id mismatch");
    std::string kind = request["kind"].get<std::string>();
    if (kind == "direction") {
        if (!response.contains("samples") || !response["samples"].is_array())
            throw OracleSchemaError("remote oracle: direction response lacks samples[]");
    } else if (kind == "equivalence") {
        if (!response.contains("groups") || !response["groups"].is_array())
            throw OracleSchemaError("remote oracle: equivalence response lacks groups[]");
        for (const auto& g : response["groups"]) {
            if (!g.is_array()) throw OracleSchemaError("remote oracle: groups entries must be arrays");
            for (const auto& i : g)
                if (!i.is_number_integer())
                    throw OracleSchemaError("remote oracle: group indices must be integers");
        }
    } else if (kind == "answer") {
        if (!response.contains("answer") || !response["answer"].is_string() ||
            response["answer"].get<std::string>().empty())
            throw OracleSchemaError("remote oracle: answer response lacks a non-empty answer");
    } else if (kind == "grade") {
        if (!response.contains("sigma") || !response["sigma"].is_number_integer())
            throw OracleSchemaError("remote oracle: grade response lacks integer sigma");
        int s = response["sigma"].get<int>();
        if (s < 1 || s > 5) throw OracleSchemaError("remote oracle: sigma out of range 1..5");
    } else if (kind == "relevancy") {
        if (!response.contains("score") || !response["score"].is_number())
            throw OracleSchemaError("remote oracle: relevancy response lacks numeric score");
    }
}

}  // namespace

nlohmann::json remote_call(const RemoteOracleConfig& config, const nlohmann::json& request) {
    std::string base, path;
    split_endpoint(config.endpoint, base, path);

    std::string body = request.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= config.retries; ++attempt) {
        if (attempt > 0) {
            double delay = config.backoff_base_s *
                           std::pow(config.backoff_factor, static_cast<double>(attempt - 1));
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }
        httplib::Client client(base);
        client.set_connection_timeout(std::chrono::duration<double>(config.timeout_s));
        client.set_read_timeout(std::chrono::duration<double>(config.timeout_s));
        httplib::Result res = client.Post(path, body, "application/json");
        if (!res) {
            last_error = "transport failure (" + httplib::to_string(res.error()) + ")";
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_error = "http status " + std::to_string(res->status);
            continue;
        }
        nlohmann::json response;
        try {
            response = nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::exception& e) {
            throw OracleSchemaError(std::string("remote oracle: response is not JSON: ") + e.what());
        }
        validate_response_schema(request, response);
        return response;
    }
    throw OracleError("remote oracle: retries exhausted calling " + config.endpoint + ": " +
                      last_error);
}

// ---- request builders --------------------------------------------------------

nlohmann::json make_direction_request(const std::string& request_id, const std::string& question,
                                      const std::vector<FrontierCandidate>& candidates, int m) {
    nlohmann::json req;
    req["kind"] = "direction";
    req["request_id"] = request_id;
    req["question"] = question;
    nlohmann::json cands = nlohmann::json::array();
    for (const FrontierCandidate& c : candidates)
        cands.push_back({{"label", std::string(1, c.label)}, {"digest", candidate_digest(c)}});
    req["candidates"] = std::move(cands);
    req["m"] = m;
    return req;
}

nlohmann::json make_equivalence_request(const std::string& request_id,
                                        const std::vector<std::string>& answers) {
    nlohmann::json req;
    req["kind"] = "equivalence";
    req["request_id"] = request_id;
    req["frames"] = answers;
    return req;
}

nlohmann::json make_answer_request(const std::string& request_id, const AnswerQuery& query) {
    nlohmann::json req;
    req["kind"] = "answer";
    req["request_id"] = request_id;
    req["question"] = query.question;
    nlohmann::json frames = nlohmann::json::array();
    for (const ScoredFrame& f : query.frames) frames.push_back(f.digest.render());
    req["frames"] = std::move(frames);
    return req;
}

nlohmann::json make_grade_request(const std::string& request_id, const std::string& prediction,
                                  const std::string& truth) {
    nlohmann::json req;
    req["kind"] = "grade";
    req["request_id"] = request_id;
    req["prediction"] = prediction;
    req["truth"] = truth;
    return req;
}

nlohmann::json make_relevancy_request(const std::string& request_id, const std::string& question,
                                      const std::string& frame_digest) {
    nlohmann::json req;
    req["kind"] = "relevancy";
    req["request_id"] = request_id;
    req["question"] = question;
    req["frames"] = nlohmann::json::array({frame_digest});
    return req;
}

// ---- remote adapters -----------------------------------------------------------

RemoteDirectionOracle::RemoteDirectionOracle(const RemoteOracleConfig& config) : config_(config) {}

std::vector<std::optional<RawSample>> RemoteDirectionOracle::sample(const DirectionContext& ctx,
                                                                    int m) {
    std::string id = "dir-" + std::to_string(next_id_++);
    nlohmann::json req = make_direction_request(id, ctx.question, *ctx.candidates, m);
    nlohmann::json res = remote_call(config_, req);
    std::vector<std::optional<RawSample>> out;
    for (const auto& s : res["samples"]) {
        if (s.is_object() && s.contains("answer") && s["answer"].is_string() &&
            s.contains("confidence") && s["confidence"].is_number() &&
            s["confidence"].get<double>() >= 0.0) {
            out.push_back(RawSample{s["answer"].get<std::string>(), s["confidence"].get<double>()});
        } else {
            out.push_back(std::nullopt);  // malformed sample: dropped upstream
        }
    }
    return out;
}

RemoteEquivalenceOracle::RemoteEquivalenceOracle(const RemoteOracleConfig& config)
    : config_(config) {}

std::vector<std::vector<int>> RemoteEquivalenceOracle::partition(
    const std::vector<std::string>& answers) {
    std::string id = "eqv-" + std::to_string(next_id_++);
    nlohmann::json res = remote_call(config_, make_equivalence_request(id, answers));
    std::vector<std::vector<int>> out;
    for (const auto& g : res["groups"]) {
        std::vector<int> group;
        for (const auto& i : g) group.push_back(i.get<int>());
        out.push_back(std::move(group));
    }
    return out;
}

RemoteAnswerOracle::RemoteAnswerOracle(const RemoteOracleConfig& config) : config_(config) {}

std::string RemoteAnswerOracle::answer(const AnswerQuery& query) {
    std::string id = "ans-" + std::to_string(next_id_++);
    nlohmann::json res = remote_call(config_, make_answer_request(id, query));
    return res["answer"].get<std::string>();
}

RemoteGrader::RemoteGrader(const RemoteOracleConfig& config) : config_(config) {}

Grade RemoteGrader::grade(const std::string& prediction, const std::string& truth) {
    std::string id = "grd-" + std::to_string(next_id_++);
    nlohmann::json res = remote_call(config_, make_grade_request(id, prediction, truth));
    Grade g;
    g.sigma = res["sigma"].get<int>();
    g.rationale = res.value("rationale", "");
    return g;
}

RemoteRelevancyScorer::RemoteRelevancyScorer(const RemoteOracleConfig& config,
                                             const SceneGrid& scene)
    : config_(config), scene_(&scene) {}

double RemoteRelevancyScorer::score_value(const Observation& obs, const std::string& question,
                                          const QuestionTask& /*task*/) {
    std::string id = "rel-" + std::to_string(next_id_++);
    std::string digest = digest_observation(*scene_, obs).render();
    nlohmann::json res = remote_call(config_, make_relevancy_request(id, question, digest));
    return res["score"].get<double>();
}

}  // namespace eqa
