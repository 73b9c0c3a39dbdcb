#include "agents/llm.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#ifdef MRL_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace mrl::agents {

void to_json(json& j, const LlmConfig& v) {
  j = json{{"endpoint", v.endpoint},
           {"model", v.model},
           {"temperature", v.temperature},
           {"api_key_env", v.api_key_env},
           {"timeout_s", v.timeout_s}};
  if (v.reasoning_effort) j["reasoning_effort"] = *v.reasoning_effort;
}

void from_json(const json& j, LlmConfig& v) {
  v.endpoint = j.value("endpoint", v.endpoint);
  v.model = j.value("model", v.model);
  v.temperature = j.value("temperature", 0.0);
  v.api_key_env = j.value("api_key_env", v.api_key_env);
  v.timeout_s = j.value("timeout_s", 60);
  if (j.contains("reasoning_effort") && !j.at("reasoning_effort").is_null())
    v.reasoning_effort = j.at("reasoning_effort").get<std::string>();
  if (v.temperature < 0.0) throw ConfigError("llm: temperature must be >= 0");
}

namespace {

std::string strip_fences(const std::string& raw) {
  std::string s = raw;
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  s = s.substr(first, last - first + 1);
  if (s.rfind("```", 0) == 0) {
    auto nl = s.find('\n');
    auto end = s.rfind("```");
    if (nl != std::string::npos && end != std::string::npos && end > nl)
      s = s.substr(nl + 1, end - nl - 1);
  }
  return s;
}

}  // namespace

AgentDecision parse_decision(const std::string& raw, const AgentRequest& request) {
  const std::string body = strip_fences(raw);
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw SchemaViolation("reply is not a JSON object");

  auto require = [&](const json& obj, const char* field, const char* where) -> const json& {
    auto it = obj.find(field);
    if (it == obj.end())
      throw SchemaViolation(std::string("missing required field '") + where + "'");
    return *it;
  };

  const json& hyp = require(j, "hypothesis", "hypothesis");
  if (!hyp.is_object()) throw SchemaViolation("field 'hypothesis' must be an object");

  AgentDecision d;
  const json& mech = require(hyp, "mechanism", "hypothesis.mechanism");
  if (!mech.is_string()) throw SchemaViolation("field 'hypothesis.mechanism' must be a string");
  d.hypothesis.mechanism = mech.get<std::string>();

  const json& target = require(hyp, "target_metric", "hypothesis.target_metric");
  if (!target.is_string())
    throw SchemaViolation("field 'hypothesis.target_metric' must be a string");
  d.hypothesis.target_metric = target.get<std::string>();
  if (std::find(request.metric_names.begin(), request.metric_names.end(),
                d.hypothesis.target_metric) == request.metric_names.end())
    throw SchemaViolation("field 'hypothesis.target_metric': '" + d.hypothesis.target_metric +
                          "' is not a declared metric of domain " + request.domain_id);

  const json& dir = require(hyp, "predicted_direction", "hypothesis.predicted_direction");
  if (!dir.is_string())
    throw SchemaViolation("field 'hypothesis.predicted_direction' must be a string");
  d.hypothesis.predicted_direction = direction_from_string(dir.get<std::string>());

  const json& action = require(j, "action_id", "action_id");
  if (!action.is_string()) throw SchemaViolation("field 'action_id' must be a string");
  d.action_id = action.get<std::string>();
  if (std::none_of(request.roster.begin(), request.roster.end(),
                   [&](const ActionSpec& a) { return a.id == d.action_id; }))
    throw SchemaViolation("field 'action_id': '" + d.action_id + "' is not in the action roster");

  const json& rationale = require(j, "rationale", "rationale");
  if (!rationale.is_string()) throw SchemaViolation("field 'rationale' must be a string");
  d.rationale = rationale.get<std::string>();

  d.raw_output = raw;  // verbatim, extras and all
  return d;
}

std::string llm_system_prompt() {
  // prompt version 1
  return
      "You are an optimization engineer inside a closed measurement loop. Each "
      "turn you receive the current metrics of a system, a baseline, a short "
      "history of past interventions and their outcomes, and a fixed roster of "
      "interventions. Your job each turn:\n"
      "1. Diagnose the most plausible bottleneck from the observed metrics.\n"
      "2. State an abductive hypothesis: the causal mechanism, the single metric "
      "it predicts will change, and the direction of that change after your "
      "intervention.\n"
      "3. Select exactly one intervention from the roster.\n"
      "Measurements are ground truth; your hypothesis will be checked against "
      "the next measurement. Answer with the JSON object described below and "
      "nothing else.";
}

std::string build_user_message(const AgentRequest& request) {
  std::ostringstream os;
  os << "domain: " << request.domain_id << "\n";
  os << "objective: " << to_string(request.objective_sense) << " the objective value\n";
  os << "metrics: ";
  for (std::size_t i = 0; i < request.metric_names.size(); ++i)
    os << (i ? ", " : "") << request.metric_names[i];
  os << "\n\nactions:\n";
  for (const auto& a : request.roster)
    os << "  " << a.id << " [" << a.category << "] " << a.label << "\n";
  if (request.baseline)
    os << "\nbaseline: " << render_snapshot(*request.baseline) << "\n";
  if (!request.context.iterations.empty()) {
    os << "\nhistory (oldest first):\n"
       << render_context(request.context, request.roster);
  }
  os << "\ncurrent: " << render_snapshot(request.current) << "\n";
  os << "\n" << request.schema_description << "\n";
  return os.str();
}

LlmAgent::LlmAgent(LlmConfig config) : config_(std::move(config)) {
  if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
}

std::string LlmAgent::post_chat(const json& body) {
  const std::string& url = config_.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("llm: endpoint must be a full URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(base);
  client.set_connection_timeout(config_.timeout_s, 0);
  client.set_read_timeout(config_.timeout_s, 0);
  client.set_write_timeout(config_.timeout_s, 0);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res)
    throw TransportError("llm: request to " + url + " failed: " +
                         httplib::to_string(res.error()));
  if (res->status != 200)
    throw TransportError("llm: HTTP " + std::to_string(res->status) + " from " + url +
                         ": " + res->body.substr(0, 256));

  json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded())
    throw TransportError("llm: response body is not JSON");
  transcript_.push_back(json{{"request", body}, {"response", reply}});
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const std::exception&) {
    throw TransportError("llm: response missing choices[0].message.content");
  }
}

AgentDecision LlmAgent::decide(const AgentRequest& request) {
  json messages = json::array();
  messages.push_back({{"role", "system"}, {"content", llm_system_prompt()}});
  messages.push_back({{"role", "user"}, {"content", build_user_message(request)}});

  json body{{"model", config_.model},
            {"temperature", config_.temperature},
            {"messages", messages}};
  if (config_.reasoning_effort) body["reasoning_effort"] = *config_.reasoning_effort;

  std::string raw = post_chat(body);
  try {
    return parse_decision(raw, request);
  } catch (const SchemaViolation& first_error) {
    // one repair attempt: resend with the validator error, verbatim
    messages.push_back({{"role", "assistant"}, {"content", raw}});
    messages.push_back(
        {{"role", "user"},
         {"content", std::string("Your previous reply failed validation: ") +
                         first_error.what() + "\n" + request.schema_description}});
    body["messages"] = messages;
    const std::string repaired = post_chat(body);
    try {
      return parse_decision(repaired, request);
    } catch (const SchemaViolation& second_error) {
      throw AgentFailure(std::string("invalid output after repair attempt: ") +
                         second_error.what());
    }
  }
}

}  // namespace mrl::agents
