#include "core/loop.hpp"

#include <algorithm>
#include <sstream>

#include "analysis/scoring.hpp"

namespace mrl {

ContextWindow build_context(const TrialRecord& trial_so_far, int k) {
  if (k < 1) throw ConfigError("build_context: k must be >= 1");
  ContextWindow ctx;
  ctx.baseline = trial_so_far.baseline;
  const auto& its = trial_so_far.iterations;
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), its.size());
  ctx.iterations.assign(its.end() - static_cast<std::ptrdiff_t>(take), its.end());
  return ctx;
}

std::string decision_schema_description() {
  return R"(Reply with a single JSON object and nothing else:
{
  "hypothesis": {
    "mechanism": "<free text: the causal mechanism you believe explains the bottleneck>",
    "target_metric": "<one metric name from the metric list>",
    "predicted_direction": "increase" | "decrease"
  },
  "action_id": "<one action id from the roster>",
  "rationale": "<free text: why this intervention follows from the hypothesis>"
}
Required fields: hypothesis.mechanism, hypothesis.target_metric,
hypothesis.predicted_direction, action_id, rationale. target_metric must be a
declared metric name and action_id must be a roster id. Unknown extra fields
are ignored.)";
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string action_label(const std::vector<ActionSpec>& roster, const std::string& id) {
  for (const auto& a : roster)
    if (a.id == id) return a.label;
  return id;
}

}  // namespace

std::string render_snapshot(const MetricSnapshot& snapshot) {
  std::ostringstream os;
  os << "objective=" << fmt(snapshot.objective_value);
  for (const auto& [name, st] : snapshot.metrics) {
    os << " " << name << "=" << fmt(st.median);
    if (st.n_reps > 1) os << " (std " << fmt(st.std) << ", n " << st.n_reps << ")";
  }
  return os.str();
}

std::string render_context(const ContextWindow& ctx, const std::vector<ActionSpec>& roster) {
  std::ostringstream os;
  for (const auto& it : ctx.iterations) {
    os << "iter " << it.index << ": action=\"" << action_label(roster, it.decision.action_id)
       << "\" hypothesis=\"" << it.decision.hypothesis.target_metric << " "
       << to_string(it.decision.hypothesis.predicted_direction) << "\"";
    os << " deltas:";
    for (const auto& [name, post_st] : it.post.metrics) {
      auto pre_it = it.pre.metrics.find(name);
      if (pre_it == it.pre.metrics.end()) continue;
      os << " " << name << " " << fmt(pre_it->second.median) << "->" << fmt(post_st.median);
    }
    os << " objective " << fmt(it.pre.objective_value) << "->" << fmt(it.post.objective_value);
    os << " outcome=" << (it.action_success ? "improved" : "no-improvement") << "\n";
  }
  return os.str();
}

namespace {

void check_snapshot(const MetricSnapshot& s, const std::vector<std::string>& declared,
                    const std::string& domain_id) {
  for (const auto& [name, st] : s.metrics) {
    if (std::find(declared.begin(), declared.end(), name) == declared.end())
      throw Error("domain '" + domain_id + "' emitted undeclared metric '" + name + "'");
    if (st.std < 0.0 || st.n_reps < 1)
      throw Error("domain '" + domain_id + "' emitted invalid stats for '" + name + "'");
  }
}

}  // namespace

TrialRecord run_trial(Domain& domain, Agent& agent, const LoopConfig& config) {
  validate(config);
  if (config.objective_sense != domain.objective_sense())
    throw ConfigError("objective_sense does not match domain '" + domain.id() + "'");

  TrialRecord trial;
  trial.domain_id = domain.id();
  trial.agent_id = agent.id();
  trial.config = config;

  const std::vector<std::string> declared = domain.metric_names();
  const std::vector<ActionSpec> roster = domain.actions();

  trial.baseline = domain.reset(config.seed);
  trial.baseline.captured_at = 0;
  check_snapshot(trial.baseline, declared, trial.domain_id);

  MetricSnapshot pre = trial.baseline;
  for (int i = 0; i < config.n_iterations; ++i) {
    AgentRequest request;
    request.domain_id = trial.domain_id;
    request.objective_sense = config.objective_sense;
    request.metric_names = declared;
    request.roster = roster;
    request.current = pre;
    if (config.baseline_in_context || i == 0) request.baseline = trial.baseline;
    request.context = build_context(trial, config.history_window_k);
    request.schema_description = decision_schema_description();

    IterationRecord rec;
    rec.index = i;
    rec.pre = pre;

    try {
      rec.decision = agent.decide(request);
    } catch (const AgentFailure& e) {
      trial.truncated = true;
      trial.truncation_reason = std::string("agent_failure: ") + e.what();
      break;
    }

    try {
      rec.post = domain.apply_and_measure(rec.decision.action_id);
      check_snapshot(rec.post, declared, trial.domain_id);
    } catch (const DomainFailure& e) {
      rec.post = rec.pre;
      rec.flags.push_back(std::string("domain_failure: ") + e.what());
    }
    rec.post.captured_at = i + 1;

    score_iteration(rec, config.objective_sense, config.noise_epsilon_rel);
    pre = rec.post;
    trial.iterations.push_back(std::move(rec));
  }
  return trial;
}

}  // namespace mrl
