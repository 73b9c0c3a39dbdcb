#include "core/rng.hpp"

#include <cmath>

namespace mrl {

double Rng::next_normal() {
  // Box-Muller; u1 is kept away from 0 so log() stays finite
  double u1 = 0.0;
  do {
    u1 = next_double();
  } while (u1 <= 1e-300);
  const double u2 = next_double();
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace mrl
