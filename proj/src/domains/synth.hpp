#pragma once

#include <optional>
#include <vector>

#include "analysis/info.hpp"
#include "core/loop.hpp"
#include "core/rng.hpp"

namespace mrl::synth {

// Hidden-cause environment with a single observability dial. The true cause
// drives one "symptom" channel; the agent sees a categorical symbol drawn
// from a rho-fidelity channel, encoded as indicator metrics scaled by a
// deterministic severity level so directional hypotheses are verifiable.
struct SynthSpec {
  int n_causes = 4;
  int n_actions = 5;  // treat_0..treat_{n-1} plus tune_generic by default
  double observability_rho = 1.0;
  std::uint64_t seed = 0;
  // effect_table[cause][action] = objective delta; filled with the default
  // roster when empty. Each row must have a unique best action.
  std::vector<std::vector<double>> effect_table;
};

// Build the default effect table: the matching treatment is best (+1.0),
// mismatched treatments hurt (-0.5), the generic tune-up always helps a
// little (+0.5). Requires n_actions >= n_causes + 1.
std::vector<std::vector<double>> default_effect_table(int n_causes, int n_actions);

// CSV rows "cause,action,delta" (action by index or by id). Missing cells
// default to 0 and are rejected by validation if they create ties.
std::vector<std::vector<double>> load_effect_table_csv(const std::string& path,
                                                       int n_causes, int n_actions);

// Throws ConfigError on invalid dimensions, rho outside [0,1], or an effect
// row without a unique best action.
void validate_spec(const SynthSpec& spec);

struct SynthState {
  int true_cause = 0;
  double objective = 0.0;
  int step = 0;
  double severity = 1.0;
};

class SynthDomain final : public Domain {
 public:
  explicit SynthDomain(SynthSpec spec);

  std::string id() const override { return "synth"; }
  ObjectiveSense objective_sense() const override { return ObjectiveSense::Maximize; }
  std::vector<std::string> metric_names() const override;
  MetricPolarity metric_polarity(const std::string&) const override {
    return MetricPolarity::HigherWorse;
  }
  std::vector<ActionSpec> actions() const override;
  MetricSnapshot reset(std::uint64_t seed) override;
  MetricSnapshot apply_and_measure(const std::string& action_id) override;

  const SynthSpec& spec() const { return spec_; }
  const SynthState& state() const { return state_; }

  // Draw one observable symbol from the rho-channel for the current cause.
  int draw_symbol();
  MetricSnapshot observe();

 private:
  SynthSpec spec_;
  SynthState state_;
  Rng rng_;
};

// Exact Eq-style observability gap of the rho-channel under a uniform cause
// prior, computed from the closed-form joint table.
double true_gap(const SynthSpec& spec);
JointDistribution channel_joint(const SynthSpec& spec);

inline constexpr double kSeverityDecay = 0.875;  // per applied intervention

std::string symptom_metric(int cause);
std::string treat_action_id(int cause);
inline constexpr const char* kGenericActionId = "tune_generic";

}  // namespace mrl::synth
