#pragma once

#include <string>
#include <vector>

#include "core/errors.hpp"

namespace mrl {

// Finite joint probability table over (cause symbol, observable symbol).
// Rows are causes, columns observables; total mass must be 1 within 1e-12.
struct JointDistribution {
  std::vector<std::string> cause_alphabet;
  std::vector<std::string> observable_alphabet;
  std::vector<std::vector<double>> probabilities;  // [cause][observable]

  void validate() const;  // throws Error on bad shape/mass/negative entries
  std::vector<double> cause_marginal() const;
  std::vector<double> observable_marginal() const;
};

// Shannon entropy in bits; 0*log0 := 0. Input must be a distribution.
double entropy(const std::vector<double>& dist);

// I(O;C) in bits over a finite joint table.
double mutual_information(const JointDistribution& joint);

// 1 - I(O;C)/H(C). Throws DegenerateEntropy when H(C) == 0.
double observability_gap(const JointDistribution& joint);

}  // namespace mrl
