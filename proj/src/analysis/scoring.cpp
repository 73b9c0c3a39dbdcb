#include "analysis/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace mrl {

bool action_success(const MetricSnapshot& pre, const MetricSnapshot& post,
                    ObjectiveSense sense, double eps) {
  const double improvement = sense == ObjectiveSense::Maximize
                                 ? post.objective_value - pre.objective_value
                                 : pre.objective_value - post.objective_value;
  return improvement > eps * std::fabs(pre.objective_value);
}

bool abductive_success(const Hypothesis& hypothesis, const MetricSnapshot& pre,
                       const MetricSnapshot& post, double eps) {
  auto pit = pre.metrics.find(hypothesis.target_metric);
  auto qit = post.metrics.find(hypothesis.target_metric);
  if (pit == pre.metrics.end() || qit == post.metrics.end())
    throw MissingMetric("target metric '" + hypothesis.target_metric +
                        "' absent from snapshot");
  const double before = pit->second.median;
  const double after = qit->second.median;
  const double move = hypothesis.predicted_direction == Direction::Increase
                          ? after - before
                          : before - after;
  const double threshold = before == 0.0 ? eps : eps * std::fabs(before);
  return move > threshold;
}

void score_iteration(IterationRecord& it, ObjectiveSense sense, double eps) {
  it.objective_delta = it.post.objective_value - it.pre.objective_value;
  it.action_success = action_success(it.pre, it.post, sense, eps);
  try {
    it.abductive_success = abductive_success(it.decision.hypothesis, it.pre, it.post, eps);
  } catch (const MissingMetric&) {
    it.abductive_success = false;
    if (std::find(it.flags.begin(), it.flags.end(), "missing_metric") == it.flags.end())
      it.flags.push_back("missing_metric");
  }
  it.paradox_class = classify_paradox(it.action_success, it.abductive_success);
}

void rescore_trial(TrialRecord& trial, double eps) {
  for (auto& it : trial.iterations)
    score_iteration(it, trial.config.objective_sense, eps);
}

ScoreSummary summarize(const std::vector<TrialRecord>& trials) {
  ScoreSummary s;
  s.class_counts = {{ParadoxClass::TypeA, 0},
                    {ParadoxClass::TypeB, 0},
                    {ParadoxClass::AlignedSuccess, 0},
                    {ParadoxClass::AlignedFailure, 0}};
  for (const auto& t : trials) {
    for (const auto& it : t.iterations) {
      ++s.class_counts[it.paradox_class];
      ++s.n_iterations;
    }
  }
  if (s.n_iterations == 0) throw EmptyInput("summarize: no iterations to score");
  const double n = static_cast<double>(s.n_iterations);
  s.actsr = static_cast<double>(s.class_counts[ParadoxClass::TypeA] +
                                s.class_counts[ParadoxClass::AlignedSuccess]) / n;
  s.asr = static_cast<double>(s.class_counts[ParadoxClass::TypeB] +
                              s.class_counts[ParadoxClass::AlignedSuccess]) / n;
  s.gap_pp = 100.0 * s.actsr - 100.0 * s.asr;
  return s;
}

std::vector<double> per_trial_gaps(const std::vector<TrialRecord>& trials) {
  std::vector<double> gaps;
  gaps.reserve(trials.size());
  for (const auto& t : trials) {
    if (t.iterations.empty()) continue;
    ScoreSummary s = summarize({t});
    gaps.push_back(s.gap_pp);
  }
  if (gaps.empty()) throw EmptyInput("per_trial_gaps: no scored trials");
  return gaps;
}

std::vector<std::pair<double, double>> asr_sensitivity(
    const std::vector<TrialRecord>& trials, const std::vector<double>& eps_list) {
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (eps_list[i] <= 0.0) throw Error("asr_sensitivity: eps values must be positive");
    if (i > 0 && eps_list[i] <= eps_list[i - 1])
      throw Error("asr_sensitivity: eps values must be ascending");
  }
  std::vector<std::pair<double, double>> curve;
  curve.reserve(eps_list.size());
  for (double eps : eps_list) {
    std::int64_t hits = 0;
    std::int64_t total = 0;
    for (const auto& t : trials) {
      for (const auto& it : t.iterations) {
        ++total;
        try {
          if (abductive_success(it.decision.hypothesis, it.pre, it.post, eps)) ++hits;
        } catch (const MissingMetric&) {
        }
      }
    }
    if (total == 0) throw EmptyInput("asr_sensitivity: no iterations");
    curve.emplace_back(eps, static_cast<double>(hits) / static_cast<double>(total));
  }
  return curve;
}

}  // namespace mrl
