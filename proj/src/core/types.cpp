#include "core/types.hpp"

#include <algorithm>
#include <cmath>

namespace mrl {

std::string to_string(ObjectiveSense s) {
  return s == ObjectiveSense::Maximize ? "maximize" : "minimize";
}

std::string to_string(Direction d) {
  return d == Direction::Increase ? "increase" : "decrease";
}

std::string to_string(ParadoxClass c) {
  switch (c) {
    case ParadoxClass::TypeA:
      return "TypeA";
    case ParadoxClass::TypeB:
      return "TypeB";
    case ParadoxClass::AlignedSuccess:
      return "AlignedSuccess";
    case ParadoxClass::AlignedFailure:
      return "AlignedFailure";
  }
  return "AlignedFailure";
}

ObjectiveSense sense_from_string(const std::string& s) {
  if (s == "maximize") return ObjectiveSense::Maximize;
  if (s == "minimize") return ObjectiveSense::Minimize;
  throw ConfigError("unknown objective_sense: " + s);
}

Direction direction_from_string(const std::string& s) {
  if (s == "increase") return Direction::Increase;
  if (s == "decrease") return Direction::Decrease;
  throw SchemaViolation("predicted_direction must be \"increase\" or \"decrease\", got \"" + s + "\"");
}

ParadoxClass paradox_from_string(const std::string& s) {
  if (s == "TypeA") return ParadoxClass::TypeA;
  if (s == "TypeB") return ParadoxClass::TypeB;
  if (s == "AlignedSuccess") return ParadoxClass::AlignedSuccess;
  if (s == "AlignedFailure") return ParadoxClass::AlignedFailure;
  throw Error("unknown paradox_class: " + s);
}

ParadoxClass classify_paradox(bool action_success, bool abductive_success) {
  if (action_success && !abductive_success) return ParadoxClass::TypeA;
  if (!action_success && abductive_success) return ParadoxClass::TypeB;
  if (action_success && abductive_success) return ParadoxClass::AlignedSuccess;
  return ParadoxClass::AlignedFailure;
}

MetricStats summarize_reps(const std::vector<double>& reps) {
  MetricStats out;
  if (reps.empty()) throw Error("summarize_reps: empty sample");
  out.n_reps = static_cast<int>(reps.size());
  double sum = 0.0;
  for (double v : reps) sum += v;
  out.mean = sum / static_cast<double>(reps.size());
  double sq = 0.0;
  for (double v : reps) sq += (v - out.mean) * (v - out.mean);
  out.std = reps.size() > 1 ? std::sqrt(sq / static_cast<double>(reps.size() - 1)) : 0.0;
  std::vector<double> sorted = reps;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  out.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return out;
}

void validate(const LoopConfig& cfg) {
  if (cfg.n_iterations < 1) throw ConfigError("n_iterations must be a positive integer");
  if (cfg.history_window_k < 1) throw ConfigError("history_window_k must be >= 1");
  if (!(cfg.noise_epsilon_rel > 0.0) || !(cfg.noise_epsilon_rel < 1.0))
    throw ConfigError("noise_epsilon_rel must lie in (0,1)");
}

void to_json(json& j, const MetricStats& v) {
  j = json{{"mean", v.mean}, {"median", v.median}, {"std", v.std}, {"n_reps", v.n_reps}};
}

void from_json(const json& j, MetricStats& v) {
  j.at("mean").get_to(v.mean);
  j.at("median").get_to(v.median);
  j.at("std").get_to(v.std);
  j.at("n_reps").get_to(v.n_reps);
  if (v.std < 0.0) throw Error("MetricStats.std must be >= 0");
  if (v.n_reps < 1) throw Error("MetricStats.n_reps must be >= 1");
}

void to_json(json& j, const MetricSnapshot& v) {
  j = json{{"metrics", v.metrics},
           {"objective_value", v.objective_value},
           {"captured_at", v.captured_at}};
}

void from_json(const json& j, MetricSnapshot& v) {
  v.metrics = j.at("metrics").get<std::map<std::string, MetricStats>>();
  j.at("objective_value").get_to(v.objective_value);
  j.at("captured_at").get_to(v.captured_at);
}

void to_json(json& j, const ActionSpec& v) {
  j = json{{"id", v.id}, {"category", v.category}, {"label", v.label}, {"payload", v.payload}};
}

void from_json(const json& j, ActionSpec& v) {
  j.at("id").get_to(v.id);
  j.at("category").get_to(v.category);
  j.at("label").get_to(v.label);
  v.payload = j.value("payload", json::object());
}

void to_json(json& j, const Hypothesis& v) {
  j = json{{"mechanism", v.mechanism},
           {"target_metric", v.target_metric},
           {"predicted_direction", to_string(v.predicted_direction)}};
}

void from_json(const json& j, Hypothesis& v) {
  j.at("mechanism").get_to(v.mechanism);
  j.at("target_metric").get_to(v.target_metric);
  v.predicted_direction = direction_from_string(j.at("predicted_direction").get<std::string>());
}

void to_json(json& j, const AgentDecision& v) {
  j = json{{"hypothesis", v.hypothesis},
           {"action_id", v.action_id},
           {"rationale", v.rationale},
           {"raw_output", v.raw_output}};
}

void from_json(const json& j, AgentDecision& v) {
  v.hypothesis = j.at("hypothesis").get<Hypothesis>();
  j.at("action_id").get_to(v.action_id);
  j.at("rationale").get_to(v.rationale);
  j.at("raw_output").get_to(v.raw_output);
}

void to_json(json& j, const IterationRecord& v) {
  j = json{{"index", v.index},
           {"pre", v.pre},
           {"decision", v.decision},
           {"post", v.post},
           {"objective_delta", v.objective_delta},
           {"action_success", v.action_success},
           {"abductive_success", v.abductive_success},
           {"paradox_class", to_string(v.paradox_class)},
           {"flags", v.flags}};
}

void from_json(const json& j, IterationRecord& v) {
  j.at("index").get_to(v.index);
  v.pre = j.at("pre").get<MetricSnapshot>();
  v.decision = j.at("decision").get<AgentDecision>();
  v.post = j.at("post").get<MetricSnapshot>();
  j.at("objective_delta").get_to(v.objective_delta);
  j.at("action_success").get_to(v.action_success);
  j.at("abductive_success").get_to(v.abductive_success);
  v.paradox_class = paradox_from_string(j.at("paradox_class").get<std::string>());
  v.flags = j.value("flags", std::vector<std::string>{});
  if (v.paradox_class != classify_paradox(v.action_success, v.abductive_success))
    throw Error("paradox_class inconsistent with success flags at iteration " +
                std::to_string(v.index));
}

void to_json(json& j, const LoopConfig& v) {
  j = json{{"n_iterations", v.n_iterations},
           {"history_window_k", v.history_window_k},
           {"noise_epsilon_rel", v.noise_epsilon_rel},
           {"seed", v.seed},
           {"objective_sense", to_string(v.objective_sense)},
           {"baseline_in_context", v.baseline_in_context}};
}

void from_json(const json& j, LoopConfig& v) {
  j.at("n_iterations").get_to(v.n_iterations);
  j.at("history_window_k").get_to(v.history_window_k);
  j.at("noise_epsilon_rel").get_to(v.noise_epsilon_rel);
  j.at("seed").get_to(v.seed);
  v.objective_sense = sense_from_string(j.at("objective_sense").get<std::string>());
  v.baseline_in_context = j.value("baseline_in_context", true);
}

}  // namespace mrl
