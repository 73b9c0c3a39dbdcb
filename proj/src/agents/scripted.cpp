#include "agents/scripted.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "domains/synth.hpp"

namespace mrl::agents {

ScriptedContext scripted_context_for(Domain& domain) {
  ScriptedContext ctx;
  ctx.domain_id = domain.id();
  ctx.metric_names = domain.metric_names();
  ctx.roster = domain.actions();
  for (const auto& m : ctx.metric_names) ctx.polarity[m] = domain.metric_polarity(m);
  if (auto* sd = dynamic_cast<synth::SynthDomain*>(&domain))
    ctx.effect_prior = sd->spec().effect_table;
  return ctx;
}

namespace {

bool has_action(const std::vector<ActionSpec>& roster, const std::string& id) {
  return std::any_of(roster.begin(), roster.end(),
                     [&](const ActionSpec& a) { return a.id == id; });
}

// Next roster entry of the same category (cyclic); falls back to the next
// roster entry overall.
std::string next_like(const std::vector<ActionSpec>& roster, const std::string& id) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < roster.size(); ++i)
    if (roster[i].id == id) pos = i;
  const std::string& cat = roster[pos].category;
  std::vector<std::size_t> same;
  for (std::size_t i = 0; i < roster.size(); ++i)
    if (roster[i].category == cat) same.push_back(i);
  if (same.size() > 1) {
    for (std::size_t k = 0; k < same.size(); ++k)
      if (same[k] == pos) return roster[same[(k + 1) % same.size()]].id;
  }
  return roster[(pos + 1) % roster.size()].id;
}

}  // namespace

std::map<std::string, std::string> default_signal_table(const ScriptedContext& ctx) {
  std::map<std::string, std::string> table;
  auto put = [&](const std::string& metric, const std::string& action) {
    if (std::find(ctx.metric_names.begin(), ctx.metric_names.end(), metric) !=
            ctx.metric_names.end() &&
        has_action(ctx.roster, action))
      table[metric] = action;
  };

  if (ctx.domain_id == "compiler") {
    put("wall_time_s", "unroll_count_4");
    put("ipc", "interleave_count_2");
    put("l1d_miss_rate", "vectorize_enable");
    put("branch_miss_rate", "unroll_count_2");
  } else if (ctx.domain_id == "train") {
    put("val_loss", "lr_down_2x");
    put("train_loss", "lr_schedule_cosine");
    put("val_accuracy", "dropout_up_0.1");
    put("grad_norm_max", "clip_on_1.0");
    put("grad_norm_mean", "switch_adamw");
    put("loss_variance", "batch_up_2x");
    put("convergence_rate", "lr_up_2x");
  } else if (ctx.domain_id == "synth") {
    for (const auto& m : ctx.metric_names) {
      // symptom_i is treated by treat_i
      const std::string suffix = m.substr(m.find_last_of('_') + 1);
      put(m, "treat_" + suffix);
    }
  }
  // fallback: any still-unmapped metric cycles through the roster
  std::size_t i = 0;
  for (const auto& m : ctx.metric_names) {
    if (table.find(m) == table.end())
      table[m] = ctx.roster[i % ctx.roster.size()].id;
    ++i;
  }
  return table;
}

SignalAgent::SignalAgent(ScriptedContext ctx, double corruption)
    : ctx_(std::move(ctx)), table_(default_signal_table(ctx_)) {
  if (corruption < 0.0 || corruption > 1.0)
    throw ConfigError("signal agent: corruption must lie in [0,1]");
  const auto n_corrupt = static_cast<std::size_t>(
      std::llround(corruption * static_cast<double>(table_.size())));
  std::size_t k = 0;
  for (auto& [metric, action] : table_) {
    if (k++ >= n_corrupt) break;
    action = next_like(ctx_.roster, action);
  }
  std::ostringstream os;
  os << "scripted:signal";
  if (corruption > 0.0) os << ":corrupt=" << corruption;
  id_ = os.str();
}

AgentDecision SignalAgent::decide(const AgentRequest& request) {
  const MetricSnapshot& baseline = request.context.baseline;
  const MetricSnapshot& current = request.current;

  // deterioration = polarity-signed relative move away from baseline
  std::string worst_metric;
  double worst_score = 0.0;
  for (const auto& [name, cur] : current.metrics) {
    auto bit = baseline.metrics.find(name);
    if (bit == baseline.metrics.end()) continue;
    const double base = bit->second.median;
    const double sign =
        ctx_.polarity.at(name) == MetricPolarity::HigherWorse ? 1.0 : -1.0;
    const double score = sign * (cur.median - base) / std::max(std::fabs(base), 1e-12);
    if (worst_metric.empty() || score > worst_score) {
      worst_metric = name;
      worst_score = score;
    }
  }
  if (worst_score <= 0.0) {
    // nothing deteriorated; fall back to the largest current burden
    double best_level = -1.0;
    for (const auto& [name, cur] : current.metrics) {
      const double level = ctx_.polarity.at(name) == MetricPolarity::HigherWorse
                               ? cur.median
                               : -cur.median;
      if (level > best_level) {
        best_level = level;
        worst_metric = name;
      }
    }
  }
  if (worst_metric.empty()) throw AgentFailure("signal agent: no observable metrics");

  AgentDecision d;
  d.hypothesis.target_metric = worst_metric;
  d.hypothesis.predicted_direction =
      ctx_.polarity.at(worst_metric) == MetricPolarity::HigherWorse
          ? Direction::Decrease
          : Direction::Increase;
  d.hypothesis.mechanism =
      "observed burden on " + worst_metric + "; corrective intervention should move it";
  d.action_id = table_.at(worst_metric);
  d.rationale = "signal policy: act on the most deteriorated metric";
  d.raw_output = json{{"hypothesis", d.hypothesis}, {"action_id", d.action_id},
                      {"rationale", d.rationale}}
                     .dump();
  return d;
}

PriorAgent::PriorAgent(ScriptedContext ctx, double corruption) : ctx_(std::move(ctx)) {
  if (corruption < 0.0 || corruption > 1.0)
    throw ConfigError("prior agent: corruption must lie in [0,1]");

  if (ctx_.domain_id == "compiler") {
    hypothesis_ = {"kernel is memory-bound; vectorization should cut L1 misses",
                   "l1d_miss_rate", Direction::Decrease};
    action_id_ = "vectorize_enable";
  } else if (ctx_.domain_id == "train") {
    hypothesis_ = {"learning rate too aggressive for stable convergence", "val_loss",
                   Direction::Decrease};
    action_id_ = "lr_down_2x";
  } else if (ctx_.domain_id == "synth" && !ctx_.effect_prior.empty()) {
    hypothesis_ = {"bottleneck of type 0 suspected from prior experience",
                   ctx_.metric_names.front(), Direction::Decrease};
    // believed-best action = argmax over the (possibly corrupted) prior of
    // the mean effect under a uniform cause prior
    std::vector<std::vector<double>> prior = ctx_.effect_prior;
    const auto n_corrupt = static_cast<std::size_t>(
        std::llround(corruption * static_cast<double>(prior.size())));
    for (std::size_t c = 0; c < n_corrupt; ++c)
      std::rotate(prior[c].begin(), prior[c].begin() + 1, prior[c].end());
    std::size_t best = 0;
    double best_mean = -1e300;
    for (std::size_t a = 0; a < prior.front().size(); ++a) {
      double mean = 0.0;
      for (const auto& row : prior) mean += row[a];
      mean /= static_cast<double>(prior.size());
      if (mean > best_mean) {
        best_mean = mean;
        best = a;
      }
    }
    action_id_ = ctx_.roster[best].id;
  } else {
    hypothesis_ = {"habitual first guess for this domain", ctx_.metric_names.front(),
                   Direction::Decrease};
    action_id_ = ctx_.roster.front().id;
  }

  std::ostringstream os;
  os << "scripted:prior";
  if (corruption > 0.0) os << ":corrupt=" << corruption;
  id_ = os.str();
}

AgentDecision PriorAgent::decide(const AgentRequest&) {
  AgentDecision d;
  d.hypothesis = hypothesis_;
  d.action_id = action_id_;
  d.rationale = "prior policy: fixed folklore move, observations ignored";
  d.raw_output = json{{"hypothesis", d.hypothesis}, {"action_id", d.action_id},
                      {"rationale", d.rationale}}
                     .dump();
  return d;
}

RandomAgent::RandomAgent(ScriptedContext ctx, std::uint64_t seed)
    : ctx_(std::move(ctx)), rng_(seed) {}

AgentDecision RandomAgent::decide(const AgentRequest&) {
  AgentDecision d;
  d.action_id = ctx_.roster[rng_.next_below(ctx_.roster.size())].id;
  d.hypothesis.target_metric = ctx_.metric_names[rng_.next_below(ctx_.metric_names.size())];
  d.hypothesis.predicted_direction =
      rng_.next_double() < 0.5 ? Direction::Increase : Direction::Decrease;
  d.hypothesis.mechanism = "randomly selected probe";
  d.rationale = "random policy";
  d.raw_output = json{{"hypothesis", d.hypothesis}, {"action_id", d.action_id},
                      {"rationale", d.rationale}}
                     .dump();
  return d;
}

}  // namespace mrl::agents
