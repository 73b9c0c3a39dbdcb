#pragma once

#include <optional>
#include <vector>

#include "core/loop.hpp"
#include "core/rng.hpp"

namespace mrl::train {

enum class Optimizer { SGD, Adam, AdamW };
enum class LrSchedule { Constant, Cosine, Warmup };

std::string to_string(Optimizer o);
std::string to_string(LrSchedule s);

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 32;
  double dropout_p = 0.0;
  double weight_decay = 0.0;
  Optimizer optimizer = Optimizer::Adam;
  double momentum = 0.0;  // SGD only; switch_sgd_momentum sets 0.9
  std::optional<double> grad_clip;
  LrSchedule lr_schedule = LrSchedule::Constant;
  int epochs_per_iteration = 10;
  std::uint64_t init_seed = 1;
};

void validate(const TrainConfig& cfg);
void to_json(json& j, const TrainConfig& v);
void from_json(const json& j, TrainConfig& v);

// Adam/AdamW run with the usual fixed moments.
inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

// Finite stand-in for a diverged objective; keeps serialized records finite.
inline constexpr double kDivergedSentinel = 1e30;

struct TrainMetrics {
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  double grad_norm_mean = 0.0;
  double grad_norm_max = 0.0;
  double loss_variance = 0.0;
  double convergence_rate = 0.0;
  bool diverged = false;
};

// Synthetic 2-class set: two interleaved noisy crescents in the first two
// dimensions, pure noise in the remaining six. Labels alternate, so the
// split is balanced by construction.
struct Dataset {
  int dim = 8;
  std::vector<std::vector<double>> x_train, x_val;
  std::vector<int> y_train, y_val;
};

Dataset generate_dataset(std::uint64_t seed, int n_train, int n_val);

// Fully connected input -> 64 -> 32 -> classes, ReLU activations, parameters
// stored flat: [W1, b1, W2, b2, W3, b3].
struct MlpModel {
  int input_dim = 8;
  int hidden1 = 64;
  int hidden2 = 32;
  int classes = 2;
  std::vector<double> params;

  static MlpModel init(int input_dim, int classes, std::uint64_t seed);
  std::size_t param_count() const;
  bool finite() const;
};

// Mean cross-entropy of the batch (batch = indices into xs/ys).
double batch_loss(const MlpModel& m, const std::vector<std::vector<double>>& xs,
                  const std::vector<int>& ys, const std::vector<int>& batch);

// Exact gradient of batch_loss w.r.t. every parameter, same layout as params.
std::vector<double> backward(const MlpModel& m, const std::vector<std::vector<double>>& xs,
                             const std::vector<int>& ys, const std::vector<int>& batch);

// Global L2-norm clipping: unchanged when ||g|| <= threshold, else scaled
// onto the threshold sphere.
std::vector<double> clip_gradient(std::vector<double> grad, double threshold);

// Train `start` in place for cfg.epochs_per_iteration epochs and measure.
// Divergence (any non-finite loss or parameter) stops training and returns
// sentinel metrics with the diverged flag set; it never throws.
TrainMetrics run_training(MlpModel& start, const TrainConfig& cfg, const Dataset& ds);

// Fresh model from cfg.init_seed, then run_training.
TrainMetrics train_and_measure(const TrainConfig& cfg, const Dataset& ds);

// The 24-action roster: 6 learning-rate, 4 batch-size, 6 regularization,
// 4 optimizer, 4 gradient-control actions.
std::vector<ActionSpec> list_actions();

// Pure function; out-of-range results are clamped to the invariant bounds
// and *clamped is set when provided. Throws UnknownAction.
TrainConfig apply_action(const TrainConfig& cfg, const std::string& action_id,
                         bool* clamped = nullptr);

struct TrainDomainOptions {
  TrainConfig defaults;
  std::uint64_t dataset_seed = 1;
  int n_train = 512;
  int n_val = 256;
  bool resume = false;  // continue training across iterations instead of retraining
};

class TrainDomain final : public Domain {
 public:
  explicit TrainDomain(TrainDomainOptions opts);

  std::string id() const override { return "train"; }
  ObjectiveSense objective_sense() const override { return ObjectiveSense::Minimize; }
  std::vector<std::string> metric_names() const override;
  MetricPolarity metric_polarity(const std::string& metric) const override;
  std::vector<ActionSpec> actions() const override { return list_actions(); }
  MetricSnapshot reset(std::uint64_t seed) override;
  MetricSnapshot apply_and_measure(const std::string& action_id) override;

  const TrainConfig& current_config() const { return config_; }
  const Dataset& dataset() const { return dataset_; }

 private:
  MetricSnapshot measure();

  TrainDomainOptions opts_;
  Dataset dataset_;
  TrainConfig config_;
  MlpModel model_;  // carried across iterations in resume mode
};

}  // namespace mrl::train
