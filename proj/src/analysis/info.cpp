#include "analysis/info.hpp"

#include <cmath>

namespace mrl {

namespace {
constexpr double kMassTolerance = 1e-12;

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }
}  // namespace

void JointDistribution::validate() const {
  if (probabilities.empty() || probabilities.front().empty())
    throw Error("JointDistribution: empty table");
  const std::size_t cols = probabilities.front().size();
  double mass = 0.0;
  for (const auto& row : probabilities) {
    if (row.size() != cols) throw Error("JointDistribution: ragged table");
    for (double p : row) {
      if (p < 0.0) throw Error("JointDistribution: negative probability");
      mass += p;
    }
  }
  if (std::fabs(mass - 1.0) > kMassTolerance)
    throw Error("JointDistribution: total mass " + std::to_string(mass) + " != 1");
  if (!cause_alphabet.empty() && cause_alphabet.size() != probabilities.size())
    throw Error("JointDistribution: cause alphabet size mismatch");
  if (!observable_alphabet.empty() && observable_alphabet.size() != cols)
    throw Error("JointDistribution: observable alphabet size mismatch");
}

std::vector<double> JointDistribution::cause_marginal() const {
  std::vector<double> m(probabilities.size(), 0.0);
  for (std::size_t i = 0; i < probabilities.size(); ++i)
    for (double p : probabilities[i]) m[i] += p;
  return m;
}

std::vector<double> JointDistribution::observable_marginal() const {
  std::vector<double> m(probabilities.front().size(), 0.0);
  for (const auto& row : probabilities)
    for (std::size_t j = 0; j < row.size(); ++j) m[j] += row[j];
  return m;
}

double entropy(const std::vector<double>& dist) {
  double mass = 0.0;
  double h = 0.0;
  for (double p : dist) {
    if (p < 0.0) throw Error("entropy: negative probability");
    mass += p;
    h -= xlog2x(p);
  }
  if (std::fabs(mass - 1.0) > kMassTolerance)
    throw Error("entropy: distribution mass != 1");
  return h < 0.0 ? 0.0 : h;
}

double mutual_information(const JointDistribution& joint) {
  joint.validate();
  const std::vector<double> pc = joint.cause_marginal();
  const std::vector<double> po = joint.observable_marginal();
  double mi = 0.0;
  for (std::size_t i = 0; i < joint.probabilities.size(); ++i) {
    for (std::size_t j = 0; j < joint.probabilities[i].size(); ++j) {
      const double p = joint.probabilities[i][j];
      if (p > 0.0) mi += p * std::log2(p / (pc[i] * po[j]));
    }
  }
  return mi < 0.0 ? 0.0 : mi;  // clamp tiny negative rounding
}

double observability_gap(const JointDistribution& joint) {
  joint.validate();
  const double hc = entropy(joint.cause_marginal());
  if (hc == 0.0) throw DegenerateEntropy("observability_gap: H(C) = 0");
  const double ratio = mutual_information(joint) / hc;
  if (ratio < 0.0) return 1.0;
  if (ratio > 1.0) return 0.0;  // rounding guard; I <= H(C) analytically
  return 1.0 - ratio;
}

}  // namespace mrl
