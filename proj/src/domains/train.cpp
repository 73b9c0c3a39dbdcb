#include "domains/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mrl::train {

std::string to_string(Optimizer o) {
  switch (o) {
    case Optimizer::SGD:
      return "SGD";
    case Optimizer::Adam:
      return "Adam";
    case Optimizer::AdamW:
      return "AdamW";
  }
  return "Adam";
}

std::string to_string(LrSchedule s) {
  switch (s) {
    case LrSchedule::Constant:
      return "constant";
    case LrSchedule::Cosine:
      return "cosine";
    case LrSchedule::Warmup:
      return "warmup";
  }
  return "constant";
}

namespace {

Optimizer optimizer_from_string(const std::string& s) {
  if (s == "SGD") return Optimizer::SGD;
  if (s == "Adam") return Optimizer::Adam;
  if (s == "AdamW") return Optimizer::AdamW;
  throw ConfigError("train: unknown optimizer: " + s);
}

LrSchedule schedule_from_string(const std::string& s) {
  if (s == "constant") return LrSchedule::Constant;
  if (s == "cosine") return LrSchedule::Cosine;
  if (s == "warmup") return LrSchedule::Warmup;
  throw ConfigError("train: unknown lr_schedule: " + s);
}

}  // namespace

void validate(const TrainConfig& cfg) {
  // lr = 0 is tolerated so a zero-step-size run stays expressible
  if (cfg.learning_rate < 0.0) throw ConfigError("train: learning_rate must be >= 0");
  if (cfg.batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  if (cfg.dropout_p < 0.0 || cfg.dropout_p >= 1.0)
    throw ConfigError("train: dropout_p must lie in [0,1)");
  if (cfg.weight_decay < 0.0) throw ConfigError("train: weight_decay must be >= 0");
  if (cfg.grad_clip && !(*cfg.grad_clip > 0.0))
    throw ConfigError("train: grad_clip must be > 0 when set");
  if (cfg.epochs_per_iteration < 1)
    throw ConfigError("train: epochs_per_iteration must be >= 1");
  if (cfg.momentum < 0.0 || cfg.momentum >= 1.0)
    throw ConfigError("train: momentum must lie in [0,1)");
}

void to_json(json& j, const TrainConfig& v) {
  j = json{{"learning_rate", v.learning_rate},
           {"batch_size", v.batch_size},
           {"dropout_p", v.dropout_p},
           {"weight_decay", v.weight_decay},
           {"optimizer", to_string(v.optimizer)},
           {"momentum", v.momentum},
           {"grad_clip", v.grad_clip ? json(*v.grad_clip) : json(nullptr)},
           {"lr_schedule", to_string(v.lr_schedule)},
           {"epochs_per_iteration", v.epochs_per_iteration},
           {"init_seed", v.init_seed}};
}

void from_json(const json& j, TrainConfig& v) {
  v.learning_rate = j.value("learning_rate", 1e-3);
  v.batch_size = j.value("batch_size", 32);
  v.dropout_p = j.value("dropout_p", 0.0);
  v.weight_decay = j.value("weight_decay", 0.0);
  v.optimizer = optimizer_from_string(j.value("optimizer", "Adam"));
  v.momentum = j.value("momentum", 0.0);
  if (j.contains("grad_clip") && !j.at("grad_clip").is_null())
    v.grad_clip = j.at("grad_clip").get<double>();
  else
    v.grad_clip.reset();
  v.lr_schedule = schedule_from_string(j.value("lr_schedule", "constant"));
  v.epochs_per_iteration = j.value("epochs_per_iteration", 10);
  v.init_seed = j.value("init_seed", std::uint64_t{1});
  validate(v);
}

Dataset generate_dataset(std::uint64_t seed, int n_train, int n_val) {
  if (n_train < 1 || n_val < 1)
    throw ConfigError("train: n_train and n_val must be >= 1");
  Rng rng(Rng::mix(seed, 0xda7a));
  Dataset ds;
  constexpr double pi = 3.14159265358979323846;
  constexpr double crescent_noise = 0.15;

  auto sample = [&](std::vector<std::vector<double>>& xs, std::vector<int>& ys, int n) {
    for (int i = 0; i < n; ++i) {
      const int label = i % 2;
      const double t = rng.next_double() * pi;
      std::vector<double> x(static_cast<std::size_t>(ds.dim), 0.0);
      if (label == 0) {
        x[0] = std::cos(t);
        x[1] = std::sin(t);
      } else {
        x[0] = 1.0 - std::cos(t);
        x[1] = 0.5 - std::sin(t);
      }
      x[0] += crescent_noise * rng.next_normal();
      x[1] += crescent_noise * rng.next_normal();
      for (int d = 2; d < ds.dim; ++d) x[static_cast<std::size_t>(d)] = rng.next_normal();
      xs.push_back(std::move(x));
      ys.push_back(label);
    }
  };
  sample(ds.x_train, ds.y_train, n_train);
  sample(ds.x_val, ds.y_val, n_val);
  return ds;
}

std::size_t MlpModel::param_count() const {
  return static_cast<std::size_t>(hidden1 * input_dim + hidden1 + hidden2 * hidden1 +
                                  hidden2 + classes * hidden2 + classes);
}

bool MlpModel::finite() const {
  return std::all_of(params.begin(), params.end(),
                     [](double v) { return std::isfinite(v); });
}

MlpModel MlpModel::init(int input_dim, int classes, std::uint64_t seed) {
  MlpModel m;
  m.input_dim = input_dim;
  m.classes = classes;
  m.params.assign(m.param_count(), 0.0);
  Rng rng(Rng::mix(seed, 0x1417));
  std::size_t p = 0;
  auto he_layer = [&](int fan_in, int fan_out) {
    const double scale = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (int i = 0; i < fan_out * fan_in; ++i) m.params[p++] = scale * rng.next_normal();
    p += static_cast<std::size_t>(fan_out);  // biases stay zero
  };
  he_layer(m.input_dim, m.hidden1);
  he_layer(m.hidden1, m.hidden2);
  he_layer(m.hidden2, m.classes);
  return m;
}

namespace {

// Parameter layout offsets.
struct Layout {
  std::size_t w1, b1, w2, b2, w3, b3;
  explicit Layout(const MlpModel& m) {
    w1 = 0;
    b1 = w1 + static_cast<std::size_t>(m.hidden1 * m.input_dim);
    w2 = b1 + static_cast<std::size_t>(m.hidden1);
    b2 = w2 + static_cast<std::size_t>(m.hidden2 * m.hidden1);
    w3 = b2 + static_cast<std::size_t>(m.hidden2);
    b3 = w3 + static_cast<std::size_t>(m.classes * m.hidden2);
  }
};

struct ForwardState {
  std::vector<double> z1, a1, z2, a2, logits;
};

// Dropout masks are per-batch and pre-scaled (inverted dropout). Empty
// vectors mean no dropout.
struct DropoutMasks {
  std::vector<double> m1, m2;
};

void forward_one(const MlpModel& m, const Layout& L, const std::vector<double>& x,
                 const DropoutMasks* masks, ForwardState& s) {
  const auto& p = m.params;
  s.z1.assign(static_cast<std::size_t>(m.hidden1), 0.0);
  for (int i = 0; i < m.hidden1; ++i) {
    double acc = p[L.b1 + static_cast<std::size_t>(i)];
    const std::size_t row = L.w1 + static_cast<std::size_t>(i * m.input_dim);
    for (int j = 0; j < m.input_dim; ++j)
      acc += p[row + static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    s.z1[static_cast<std::size_t>(i)] = acc;
  }
  s.a1 = s.z1;
  for (auto& v : s.a1) v = v > 0.0 ? v : 0.0;
  if (masks && !masks->m1.empty())
    for (int i = 0; i < m.hidden1; ++i)
      s.a1[static_cast<std::size_t>(i)] *= masks->m1[static_cast<std::size_t>(i)];

  s.z2.assign(static_cast<std::size_t>(m.hidden2), 0.0);
  for (int i = 0; i < m.hidden2; ++i) {
    double acc = p[L.b2 + static_cast<std::size_t>(i)];
    const std::size_t row = L.w2 + static_cast<std::size_t>(i * m.hidden1);
    for (int j = 0; j < m.hidden1; ++j)
      acc += p[row + static_cast<std::size_t>(j)] * s.a1[static_cast<std::size_t>(j)];
    s.z2[static_cast<std::size_t>(i)] = acc;
  }
  s.a2 = s.z2;
  for (auto& v : s.a2) v = v > 0.0 ? v : 0.0;
  if (masks && !masks->m2.empty())
    for (int i = 0; i < m.hidden2; ++i)
      s.a2[static_cast<std::size_t>(i)] *= masks->m2[static_cast<std::size_t>(i)];

  s.logits.assign(static_cast<std::size_t>(m.classes), 0.0);
  for (int i = 0; i < m.classes; ++i) {
    double acc = p[L.b3 + static_cast<std::size_t>(i)];
    const std::size_t row = L.w3 + static_cast<std::size_t>(i * m.hidden2);
    for (int j = 0; j < m.hidden2; ++j)
      acc += p[row + static_cast<std::size_t>(j)] * s.a2[static_cast<std::size_t>(j)];
    s.logits[static_cast<std::size_t>(i)] = acc;
  }
}

// Stable softmax cross-entropy; returns loss, fills probs.
double ce_loss(const std::vector<double>& logits, int label, std::vector<double>& probs) {
  const double zmax = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  probs.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - zmax);
    sum += probs[i];
  }
  for (auto& v : probs) v /= sum;
  const double lse = zmax + std::log(sum);
  return lse - logits[static_cast<std::size_t>(label)];
}

double loss_with_masks(const MlpModel& m, const std::vector<std::vector<double>>& xs,
                       const std::vector<int>& ys, const std::vector<int>& batch,
                       const DropoutMasks* masks) {
  const Layout L(m);
  ForwardState s;
  std::vector<double> probs;
  double total = 0.0;
  for (int idx : batch) {
    forward_one(m, L, xs[static_cast<std::size_t>(idx)], masks, s);
    total += ce_loss(s.logits, ys[static_cast<std::size_t>(idx)], probs);
  }
  return total / static_cast<double>(batch.size());
}

std::vector<double> backward_with_masks(const MlpModel& m,
                                        const std::vector<std::vector<double>>& xs,
                                        const std::vector<int>& ys,
                                        const std::vector<int>& batch,
                                        const DropoutMasks* masks) {
  const Layout L(m);
  std::vector<double> grad(m.params.size(), 0.0);
  const auto& p = m.params;
  ForwardState s;
  std::vector<double> probs;
  std::vector<double> d2(static_cast<std::size_t>(m.hidden2));
  std::vector<double> d1(static_cast<std::size_t>(m.hidden1));
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  for (int idx : batch) {
    const auto& x = xs[static_cast<std::size_t>(idx)];
    forward_one(m, L, x, masks, s);
    ce_loss(s.logits, ys[static_cast<std::size_t>(idx)], probs);

    // dL/dlogits = softmax - onehot
    std::vector<double> dlogits = probs;
    dlogits[static_cast<std::size_t>(ys[static_cast<std::size_t>(idx)])] -= 1.0;

    for (int i = 0; i < m.classes; ++i) {
      const double d = dlogits[static_cast<std::size_t>(i)] * inv_n;
      grad[L.b3 + static_cast<std::size_t>(i)] += d;
      const std::size_t row = L.w3 + static_cast<std::size_t>(i * m.hidden2);
      for (int j = 0; j < m.hidden2; ++j)
        grad[row + static_cast<std::size_t>(j)] += d * s.a2[static_cast<std::size_t>(j)];
    }

    for (int j = 0; j < m.hidden2; ++j) {
      double acc = 0.0;
      for (int i = 0; i < m.classes; ++i)
        acc += dlogits[static_cast<std::size_t>(i)] *
               p[L.w3 + static_cast<std::size_t>(i * m.hidden2 + j)];
      if (masks && !masks->m2.empty()) acc *= masks->m2[static_cast<std::size_t>(j)];
      d2[static_cast<std::size_t>(j)] =
          s.z2[static_cast<std::size_t>(j)] > 0.0 ? acc : 0.0;
    }
    for (int i = 0; i < m.hidden2; ++i) {
      const double d = d2[static_cast<std::size_t>(i)] * inv_n;
      grad[L.b2 + static_cast<std::size_t>(i)] += d;
      const std::size_t row = L.w2 + static_cast<std::size_t>(i * m.hidden1);
      for (int j = 0; j < m.hidden1; ++j)
        grad[row + static_cast<std::size_t>(j)] += d * s.a1[static_cast<std::size_t>(j)];
    }

    for (int j = 0; j < m.hidden1; ++j) {
      double acc = 0.0;
      for (int i = 0; i < m.hidden2; ++i)
        acc += d2[static_cast<std::size_t>(i)] *
               p[L.w2 + static_cast<std::size_t>(i * m.hidden1 + j)];
      if (masks && !masks->m1.empty()) acc *= masks->m1[static_cast<std::size_t>(j)];
      d1[static_cast<std::size_t>(j)] =
          s.z1[static_cast<std::size_t>(j)] > 0.0 ? acc : 0.0;
    }
    for (int i = 0; i < m.hidden1; ++i) {
      const double d = d1[static_cast<std::size_t>(i)] * inv_n;
      grad[L.b1 + static_cast<std::size_t>(i)] += d;
      const std::size_t row = L.w1 + static_cast<std::size_t>(i * m.input_dim);
      for (int j = 0; j < m.input_dim; ++j)
        grad[row + static_cast<std::size_t>(j)] += d * x[static_cast<std::size_t>(j)];
    }
  }
  return grad;
}

}  // namespace

double batch_loss(const MlpModel& m, const std::vector<std::vector<double>>& xs,
                  const std::vector<int>& ys, const std::vector<int>& batch) {
  return loss_with_masks(m, xs, ys, batch, nullptr);
}

std::vector<double> backward(const MlpModel& m, const std::vector<std::vector<double>>& xs,
                             const std::vector<int>& ys, const std::vector<int>& batch) {
  return backward_with_masks(m, xs, ys, batch, nullptr);
}

std::vector<double> clip_gradient(std::vector<double> grad, double threshold) {
  if (!(threshold > 0.0)) throw ConfigError("clip_gradient: threshold must be > 0");
  double sq = 0.0;
  for (double g : grad) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm <= threshold) return grad;
  const double scale = threshold / norm;
  for (auto& g : grad) g *= scale;
  return grad;
}

namespace {

struct OptimizerState {
  std::vector<double> m, v, velocity;
  std::int64_t t = 0;
};

void apply_update(MlpModel& model, const std::vector<double>& grad, const TrainConfig& cfg,
                  double lr, OptimizerState& st) {
  auto& p = model.params;
  switch (cfg.optimizer) {
    case Optimizer::SGD: {
      if (cfg.momentum > 0.0) {
        if (st.velocity.empty()) st.velocity.assign(p.size(), 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
          const double g = grad[i] + cfg.weight_decay * p[i];
          st.velocity[i] = cfg.momentum * st.velocity[i] + g;
          p[i] -= lr * st.velocity[i];
        }
      } else {
        for (std::size_t i = 0; i < p.size(); ++i)
          p[i] -= lr * (grad[i] + cfg.weight_decay * p[i]);
      }
      break;
    }
    case Optimizer::Adam:
    case Optimizer::AdamW: {
      if (st.m.empty()) {
        st.m.assign(p.size(), 0.0);
        st.v.assign(p.size(), 0.0);
      }
      ++st.t;
      const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(st.t));
      const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(st.t));
      const bool decoupled = cfg.optimizer == Optimizer::AdamW;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double g = decoupled ? grad[i] : grad[i] + cfg.weight_decay * p[i];
        st.m[i] = kAdamBeta1 * st.m[i] + (1.0 - kAdamBeta1) * g;
        st.v[i] = kAdamBeta2 * st.v[i] + (1.0 - kAdamBeta2) * g * g;
        const double mhat = st.m[i] / bc1;
        const double vhat = st.v[i] / bc2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + kAdamEps);
        if (decoupled) p[i] -= lr * cfg.weight_decay * p[i];
      }
      break;
    }
  }
}

double scheduled_lr(const TrainConfig& cfg, std::int64_t step, std::int64_t total_steps) {
  switch (cfg.lr_schedule) {
    case LrSchedule::Constant:
      return cfg.learning_rate;
    case LrSchedule::Cosine: {
      constexpr double pi = 3.14159265358979323846;
      const double frac = total_steps > 1
                              ? static_cast<double>(step) / static_cast<double>(total_steps)
                              : 0.0;
      return cfg.learning_rate * 0.5 * (1.0 + std::cos(pi * frac));
    }
    case LrSchedule::Warmup: {
      const std::int64_t warm = std::max<std::int64_t>(1, total_steps / 10);
      if (step < warm)
        return cfg.learning_rate * static_cast<double>(step + 1) / static_cast<double>(warm);
      return cfg.learning_rate;
    }
  }
  return cfg.learning_rate;
}

double sanitize(double v) { return std::isfinite(v) ? v : kDivergedSentinel; }

}  // namespace

TrainMetrics run_training(MlpModel& model, const TrainConfig& cfg, const Dataset& ds) {
  validate(cfg);
  const int n_train = static_cast<int>(ds.x_train.size());
  const int batches_per_epoch = (n_train + cfg.batch_size - 1) / cfg.batch_size;
  const std::int64_t total_steps =
      static_cast<std::int64_t>(batches_per_epoch) * cfg.epochs_per_iteration;

  OptimizerState opt;
  TrainMetrics out;
  std::vector<double> epoch_losses;
  std::vector<double> final_epoch_batch_losses;
  std::vector<double> grad_norms;
  std::vector<int> order(static_cast<std::size_t>(n_train));
  std::iota(order.begin(), order.end(), 0);
  std::int64_t step = 0;
  bool diverged = false;

  for (int epoch = 0; epoch < cfg.epochs_per_iteration && !diverged; ++epoch) {
    Rng shuffle_rng(Rng::mix(cfg.init_seed, 0xe90c + static_cast<std::uint64_t>(epoch)));
    for (int i = n_train - 1; i > 0; --i) {
      const int j = static_cast<int>(shuffle_rng.next_below(static_cast<std::uint64_t>(i + 1)));
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }

    std::vector<double> batch_losses;
    for (int b = 0; b < batches_per_epoch && !diverged; ++b) {
      const int begin = b * cfg.batch_size;
      const int end = std::min(n_train, begin + cfg.batch_size);
      std::vector<int> batch(order.begin() + begin, order.begin() + end);

      DropoutMasks masks;
      DropoutMasks* mask_ptr = nullptr;
      if (cfg.dropout_p > 0.0) {
        Rng drop_rng(Rng::mix(cfg.init_seed,
                              0xd409 + static_cast<std::uint64_t>(epoch) * 100003 +
                                  static_cast<std::uint64_t>(b)));
        const double keep = 1.0 - cfg.dropout_p;
        masks.m1.resize(static_cast<std::size_t>(model.hidden1));
        for (auto& v : masks.m1) v = drop_rng.next_double() < keep ? 1.0 / keep : 0.0;
        masks.m2.resize(static_cast<std::size_t>(model.hidden2));
        for (auto& v : masks.m2) v = drop_rng.next_double() < keep ? 1.0 / keep : 0.0;
        mask_ptr = &masks;
      }

      const double loss = loss_with_masks(model, ds.x_train, ds.y_train, batch, mask_ptr);
      std::vector<double> grad =
          backward_with_masks(model, ds.x_train, ds.y_train, batch, mask_ptr);
      if (cfg.grad_clip) grad = clip_gradient(std::move(grad), *cfg.grad_clip);

      double sq = 0.0;
      for (double g : grad) sq += g * g;
      const double gnorm = std::sqrt(sq);

      if (!std::isfinite(loss) || !std::isfinite(gnorm)) {
        diverged = true;
        break;
      }
      batch_losses.push_back(loss);
      grad_norms.push_back(gnorm);

      apply_update(model, grad, cfg, scheduled_lr(cfg, step, total_steps), opt);
      ++step;
      if (!model.finite()) {
        diverged = true;
        break;
      }
    }

    if (!batch_losses.empty()) {
      const double mean = std::accumulate(batch_losses.begin(), batch_losses.end(), 0.0) /
                          static_cast<double>(batch_losses.size());
      epoch_losses.push_back(mean);
      if (epoch == cfg.epochs_per_iteration - 1) final_epoch_batch_losses = batch_losses;
    }
  }

  out.diverged = diverged;

  if (!grad_norms.empty()) {
    out.grad_norm_mean = std::accumulate(grad_norms.begin(), grad_norms.end(), 0.0) /
                         static_cast<double>(grad_norms.size());
    out.grad_norm_max = *std::max_element(grad_norms.begin(), grad_norms.end());
  }

  if (!final_epoch_batch_losses.empty()) {
    const double mean =
        std::accumulate(final_epoch_batch_losses.begin(), final_epoch_batch_losses.end(), 0.0) /
        static_cast<double>(final_epoch_batch_losses.size());
    out.train_loss = mean;
    if (final_epoch_batch_losses.size() > 1) {
      double sq = 0.0;
      for (double v : final_epoch_batch_losses) sq += (v - mean) * (v - mean);
      out.loss_variance = sq / static_cast<double>(final_epoch_batch_losses.size() - 1);
    }
  } else if (!epoch_losses.empty()) {
    out.train_loss = epoch_losses.back();
  }

  // moving average of loss improvement over the last 3 epochs
  if (epoch_losses.size() >= 2) {
    const std::size_t diffs = std::min<std::size_t>(3, epoch_losses.size() - 1);
    double acc = 0.0;
    for (std::size_t k = epoch_losses.size() - diffs; k < epoch_losses.size(); ++k)
      acc += epoch_losses[k - 1] - epoch_losses[k];
    out.convergence_rate = acc / static_cast<double>(diffs);
  }

  if (diverged) {
    out.val_loss = kDivergedSentinel;
    out.val_accuracy = 0.0;
  } else {
    std::vector<int> all_val(ds.x_val.size());
    std::iota(all_val.begin(), all_val.end(), 0);
    out.val_loss = batch_loss(model, ds.x_val, ds.y_val, all_val);

    const Layout L(model);
    ForwardState s;
    int correct = 0;
    for (std::size_t i = 0; i < ds.x_val.size(); ++i) {
      forward_one(model, L, ds.x_val[i], nullptr, s);
      const auto best = std::max_element(s.logits.begin(), s.logits.end());
      if (static_cast<int>(best - s.logits.begin()) == ds.y_val[i]) ++correct;
    }
    out.val_accuracy = static_cast<double>(correct) / static_cast<double>(ds.x_val.size());
  }

  out.train_loss = sanitize(out.train_loss);
  out.val_loss = sanitize(out.val_loss);
  out.grad_norm_mean = sanitize(out.grad_norm_mean);
  out.grad_norm_max = sanitize(out.grad_norm_max);
  out.loss_variance = sanitize(out.loss_variance);
  out.convergence_rate = std::isfinite(out.convergence_rate) ? out.convergence_rate
                                                             : -kDivergedSentinel;
  return out;
}

TrainMetrics train_and_measure(const TrainConfig& cfg, const Dataset& ds) {
  MlpModel model = MlpModel::init(ds.dim, 2, cfg.init_seed);
  return run_training(model, cfg, ds);
}

std::vector<ActionSpec> list_actions() {
  std::vector<ActionSpec> roster;
  auto add = [&](const std::string& id, const std::string& cat, const std::string& label) {
    roster.push_back(ActionSpec{id, cat, label, json::object()});
  };
  add("lr_up_2x", "learning_rate", "increase learning rate 2x");
  add("lr_up_5x", "learning_rate", "increase learning rate 5x");
  add("lr_down_2x", "learning_rate", "decrease learning rate 2x");
  add("lr_down_5x", "learning_rate", "decrease learning rate 5x");
  add("lr_schedule_cosine", "learning_rate", "switch to cosine learning-rate schedule");
  add("lr_schedule_warmup", "learning_rate", "switch to warmup learning-rate schedule");
  add("batch_up_2x", "batch_size", "double the batch size");
  add("batch_down_2x", "batch_size", "halve the batch size");
  add("batch_set_16", "batch_size", "set batch size to 16");
  add("batch_set_128", "batch_size", "set batch size to 128");
  add("dropout_up_0.1", "regularization", "increase dropout by 0.1");
  add("dropout_down_0.1", "regularization", "decrease dropout by 0.1");
  add("weight_decay_up_10x", "regularization", "increase weight decay 10x");
  add("weight_decay_down_10x", "regularization", "decrease weight decay 10x");
  add("weight_decay_enable_1e-4", "regularization", "enable weight decay at 1e-4");
  add("weight_decay_disable", "regularization", "disable weight decay");
  add("switch_sgd", "optimizer", "switch optimizer to SGD");
  add("switch_adam", "optimizer", "switch optimizer to Adam");
  add("switch_adamw", "optimizer", "switch optimizer to AdamW");
  add("switch_sgd_momentum", "optimizer", "switch optimizer to SGD with momentum 0.9");
  add("clip_on_1.0", "grad_control", "enable gradient clipping at 1.0");
  add("clip_on_0.5", "grad_control", "enable gradient clipping at 0.5");
  add("clip_on_5.0", "grad_control", "enable gradient clipping at 5.0");
  add("clip_off", "grad_control", "disable gradient clipping");
  return roster;
}

TrainConfig apply_action(const TrainConfig& cfg, const std::string& action_id, bool* clamped) {
  TrainConfig out = cfg;
  bool clamp = false;

  if (action_id == "lr_up_2x") {
    out.learning_rate *= 2.0;
  } else if (action_id == "lr_up_5x") {
    out.learning_rate *= 5.0;
  } else if (action_id == "lr_down_2x") {
    out.learning_rate /= 2.0;
  } else if (action_id == "lr_down_5x") {
    out.learning_rate /= 5.0;
  } else if (action_id == "lr_schedule_cosine") {
    out.lr_schedule = LrSchedule::Cosine;
  } else if (action_id == "lr_schedule_warmup") {
    out.lr_schedule = LrSchedule::Warmup;
  } else if (action_id == "batch_up_2x") {
    out.batch_size *= 2;
  } else if (action_id == "batch_down_2x") {
    out.batch_size /= 2;
  } else if (action_id == "batch_set_16") {
    out.batch_size = 16;
  } else if (action_id == "batch_set_128") {
    out.batch_size = 128;
  } else if (action_id == "dropout_up_0.1") {
    out.dropout_p += 0.1;
  } else if (action_id == "dropout_down_0.1") {
    out.dropout_p -= 0.1;
  } else if (action_id == "weight_decay_up_10x") {
    out.weight_decay *= 10.0;
  } else if (action_id == "weight_decay_down_10x") {
    out.weight_decay /= 10.0;
  } else if (action_id == "weight_decay_enable_1e-4") {
    out.weight_decay = 1e-4;
  } else if (action_id == "weight_decay_disable") {
    out.weight_decay = 0.0;
  } else if (action_id == "switch_sgd") {
    out.optimizer = Optimizer::SGD;
    out.momentum = 0.0;
  } else if (action_id == "switch_adam") {
    out.optimizer = Optimizer::Adam;
    out.momentum = 0.0;
  } else if (action_id == "switch_adamw") {
    out.optimizer = Optimizer::AdamW;
    out.momentum = 0.0;
  } else if (action_id == "switch_sgd_momentum") {
    out.optimizer = Optimizer::SGD;
    out.momentum = 0.9;
  } else if (action_id == "clip_on_1.0") {
    out.grad_clip = 1.0;
  } else if (action_id == "clip_on_0.5") {
    out.grad_clip = 0.5;
  } else if (action_id == "clip_on_5.0") {
    out.grad_clip = 5.0;
  } else if (action_id == "clip_off") {
    out.grad_clip.reset();
  } else {
    throw UnknownAction("train: unknown action '" + action_id + "'");
  }

  if (out.dropout_p < 0.0) {
    out.dropout_p = 0.0;
    clamp = true;
  }
  if (out.dropout_p > 0.9) {
    out.dropout_p = 0.9;
    clamp = true;
  }
  if (out.batch_size < 1) {
    out.batch_size = 1;
    clamp = true;
  }
  if (out.batch_size > 1024) {
    out.batch_size = 1024;
    clamp = true;
  }
  if (clamped) *clamped = clamp;
  return out;
}

TrainDomain::TrainDomain(TrainDomainOptions opts)
    : opts_(std::move(opts)),
      dataset_(generate_dataset(opts_.dataset_seed, opts_.n_train, opts_.n_val)),
      config_(opts_.defaults),
      model_(MlpModel::init(dataset_.dim, 2, config_.init_seed)) {
  validate(opts_.defaults);
}

std::vector<std::string> TrainDomain::metric_names() const {
  return {"train_loss", "val_loss",      "val_accuracy",    "grad_norm_mean",
          "grad_norm_max", "loss_variance", "convergence_rate"};
}

MetricPolarity TrainDomain::metric_polarity(const std::string& metric) const {
  if (metric == "val_accuracy" || metric == "convergence_rate")
    return MetricPolarity::LowerWorse;
  return MetricPolarity::HigherWorse;
}

MetricSnapshot TrainDomain::measure() {
  TrainMetrics tm;
  if (opts_.resume) {
    tm = run_training(model_, config_, dataset_);
  } else {
    tm = train_and_measure(config_, dataset_);
  }
  MetricSnapshot snap;
  auto put = [&](const std::string& name, double v) {
    snap.metrics[name] = MetricStats{v, v, 0.0, 1};
  };
  put("train_loss", tm.train_loss);
  put("val_loss", tm.val_loss);
  put("val_accuracy", tm.val_accuracy);
  put("grad_norm_mean", tm.grad_norm_mean);
  put("grad_norm_max", tm.grad_norm_max);
  put("loss_variance", tm.loss_variance);
  put("convergence_rate", tm.convergence_rate);
  snap.objective_value = tm.val_loss;
  return snap;
}

MetricSnapshot TrainDomain::reset(std::uint64_t seed) {
  config_ = opts_.defaults;
  config_.init_seed = Rng::mix(opts_.defaults.init_seed, seed);
  model_ = MlpModel::init(dataset_.dim, 2, config_.init_seed);
  return measure();
}

MetricSnapshot TrainDomain::apply_and_measure(const std::string& action_id) {
  config_ = apply_action(config_, action_id);
  return measure();
}

}  // namespace mrl::train
