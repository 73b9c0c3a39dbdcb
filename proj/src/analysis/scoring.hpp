#pragma once

#include <map>
#include <vector>

#include "core/types.hpp"

namespace mrl {

// ActSR / ASR / gap over a set of trials, pooled across iterations.
struct ScoreSummary {
  double actsr = 0.0;
  double asr = 0.0;
  double gap_pp = 0.0;  // 100*actsr - 100*asr
  std::map<ParadoxClass, std::int64_t> class_counts;
  std::int64_t n_iterations = 0;
};

// True iff the objective improved (in the configured sense) by more than
// eps * |pre objective|. An exactly unchanged objective never counts.
bool action_success(const MetricSnapshot& pre, const MetricSnapshot& post,
                    ObjectiveSense sense, double eps);

// True iff the hypothesis target metric's median moved in the predicted
// direction by more than eps * |pre median|. When the pre median is exactly
// zero the relative threshold degenerates, so an absolute threshold of eps
// is used instead. Throws MissingMetric when the target is absent from
// either snapshot (counter-fallback compiler runs).
bool abductive_success(const Hypothesis& hypothesis, const MetricSnapshot& pre,
                       const MetricSnapshot& post, double eps);

// Fill action_success / abductive_success / paradox_class on one iteration.
// A missing target metric scores false and adds a "missing_metric" flag.
void score_iteration(IterationRecord& it, ObjectiveSense sense, double eps);

// Re-score every iteration of a loaded trial, e.g. at a different eps.
void rescore_trial(TrialRecord& trial, double eps);

// Pooled rates over all iterations of all trials. Throws EmptyInput.
ScoreSummary summarize(const std::vector<TrialRecord>& trials);

// Per-trial gap_pp samples (input to the cross-domain statistics).
std::vector<double> per_trial_gaps(const std::vector<TrialRecord>& trials);

// ASR recomputed at each threshold; eps values must be positive ascending.
std::vector<std::pair<double, double>> asr_sensitivity(
    const std::vector<TrialRecord>& trials, const std::vector<double>& eps_list);

}  // namespace mrl
