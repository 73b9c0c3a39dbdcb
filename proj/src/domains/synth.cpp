#include "domains/synth.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mrl::synth {

std::string symptom_metric(int cause) { return "symptom_" + std::to_string(cause); }
std::string treat_action_id(int cause) { return "treat_" + std::to_string(cause); }

std::vector<std::vector<double>> default_effect_table(int n_causes, int n_actions) {
  if (n_actions < n_causes + 1)
    throw ConfigError("default effect table needs n_actions >= n_causes + 1");
  std::vector<std::vector<double>> table(n_causes, std::vector<double>(n_actions, 0.0));
  for (int c = 0; c < n_causes; ++c) {
    for (int a = 0; a < n_actions; ++a) {
      if (a == c)
        table[c][a] = 1.0;  // matching treatment
      else if (a < n_causes)
        table[c][a] = -0.5;  // wrong specific treatment
      else if (a == n_causes)
        table[c][a] = 0.5;  // generic tune-up
      else
        table[c][a] = -0.25 - 0.01 * static_cast<double>(a);  // filler, never best
    }
  }
  return table;
}

std::vector<std::vector<double>> load_effect_table_csv(const std::string& path,
                                                       int n_causes, int n_actions) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open effect table CSV: " + path);
  std::vector<std::vector<double>> table(n_causes, std::vector<double>(n_actions, 0.0));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string cause_s, action_s, delta_s;
    if (!std::getline(ss, cause_s, ',') || !std::getline(ss, action_s, ',') ||
        !std::getline(ss, delta_s, ','))
      throw ConfigError("effect CSV line " + std::to_string(line_no) +
                        ": expected cause,action,delta");
    if (line_no == 1 && cause_s == "cause") continue;  // header
    const int cause = std::stoi(cause_s);
    int action = -1;
    if (!action_s.empty() && (std::isdigit(action_s[0]) != 0)) {
      action = std::stoi(action_s);
    } else if (action_s == kGenericActionId) {
      action = n_causes;
    } else if (action_s.rfind("treat_", 0) == 0) {
      action = std::stoi(action_s.substr(6));
    }
    if (cause < 0 || cause >= n_causes || action < 0 || action >= n_actions)
      throw ConfigError("effect CSV line " + std::to_string(line_no) +
                        ": cause/action out of range");
    table[cause][action] = std::stod(delta_s);
  }
  return table;
}

void validate_spec(const SynthSpec& spec) {
  if (spec.n_causes < 2) throw ConfigError("synth: n_causes must be >= 2");
  if (spec.n_actions < 2) throw ConfigError("synth: n_actions must be >= 2");
  if (spec.observability_rho < 0.0 || spec.observability_rho > 1.0)
    throw ConfigError("synth: observability_rho must lie in [0,1]");
  if (spec.effect_table.size() != static_cast<std::size_t>(spec.n_causes))
    throw ConfigError("synth: effect table must have one row per cause");
  for (int c = 0; c < spec.n_causes; ++c) {
    const auto& row = spec.effect_table[c];
    if (row.size() != static_cast<std::size_t>(spec.n_actions))
      throw ConfigError("synth: effect table row " + std::to_string(c) + " has wrong width");
    const double best = *std::max_element(row.begin(), row.end());
    if (std::count(row.begin(), row.end(), best) != 1)
      throw ConfigError("synth: cause " + std::to_string(c) +
                        " has no unique best action (tied effects)");
  }
}

SynthDomain::SynthDomain(SynthSpec spec) : spec_(std::move(spec)), rng_(0) {
  if (spec_.effect_table.empty())
    spec_.effect_table = default_effect_table(spec_.n_causes, spec_.n_actions);
  validate_spec(spec_);
}

std::vector<std::string> SynthDomain::metric_names() const {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(spec_.n_causes));
  for (int c = 0; c < spec_.n_causes; ++c) names.push_back(symptom_metric(c));
  return names;
}

std::vector<ActionSpec> SynthDomain::actions() const {
  std::vector<ActionSpec> roster;
  for (int a = 0; a < spec_.n_actions; ++a) {
    ActionSpec s;
    if (a < spec_.n_causes) {
      s.id = treat_action_id(a);
      s.category = "specific";
      s.label = "treat bottleneck " + std::to_string(a);
    } else if (a == spec_.n_causes) {
      s.id = kGenericActionId;
      s.category = "generic";
      s.label = "generic tune-up";
    } else {
      s.id = "aux_" + std::to_string(a);
      s.category = "aux";
      s.label = "auxiliary action " + std::to_string(a);
    }
    s.payload = json{{"index", a}};
    roster.push_back(std::move(s));
  }
  return roster;
}

int SynthDomain::draw_symbol() {
  const double u = rng_.next_double();
  if (u < spec_.observability_rho) return state_.true_cause;
  // remaining mass uniform over the other symbols
  const int others = spec_.n_causes - 1;
  const double v = (u - spec_.observability_rho) / (1.0 - spec_.observability_rho);
  int k = std::min(others - 1, static_cast<int>(v * others));
  return k >= state_.true_cause ? k + 1 : k;
}

MetricSnapshot SynthDomain::observe() {
  const int symbol = spec_.observability_rho >= 1.0 ? state_.true_cause : draw_symbol();
  MetricSnapshot snap;
  for (int c = 0; c < spec_.n_causes; ++c) {
    const double level = (c == symbol) ? state_.severity : 0.0;
    snap.metrics[symptom_metric(c)] = MetricStats{level, level, 0.0, 1};
  }
  snap.objective_value = state_.objective;
  return snap;
}

MetricSnapshot SynthDomain::reset(std::uint64_t seed) {
  rng_ = Rng(Rng::mix(spec_.seed, seed));
  state_ = SynthState{};
  state_.true_cause = static_cast<int>(rng_.next_below(static_cast<std::uint64_t>(spec_.n_causes)));
  return observe();
}

MetricSnapshot SynthDomain::apply_and_measure(const std::string& action_id) {
  int index = -1;
  const auto roster = actions();
  for (std::size_t i = 0; i < roster.size(); ++i)
    if (roster[i].id == action_id) index = static_cast<int>(i);
  if (index < 0) throw UnknownAction("synth: unknown action '" + action_id + "'");
  state_.objective += spec_.effect_table[state_.true_cause][index];
  state_.severity *= kSeverityDecay;
  state_.step += 1;
  return observe();
}

JointDistribution channel_joint(const SynthSpec& spec) {
  const int n = spec.n_causes;
  const double rho = spec.observability_rho;
  JointDistribution joint;
  joint.probabilities.assign(static_cast<std::size_t>(n),
                             std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int c = 0; c < n; ++c) {
    joint.cause_alphabet.push_back("cause_" + std::to_string(c));
    joint.observable_alphabet.push_back(symptom_metric(c));
    for (int o = 0; o < n; ++o) {
      const double channel = (o == c) ? rho : (1.0 - rho) / static_cast<double>(n - 1);
      joint.probabilities[static_cast<std::size_t>(c)][static_cast<std::size_t>(o)] =
          channel / static_cast<double>(n);  // uniform prior over causes
    }
  }
  return joint;
}

double true_gap(const SynthSpec& spec) {
  if (spec.n_causes < 2) throw DegenerateEntropy("true_gap: H(C) = 0 for a single cause");
  return observability_gap(channel_joint(spec));
}

}  // namespace mrl::synth
