#pragma once

#include <cmath>

namespace tvgauss {

/// Standard normal CDF, evaluated through erfc for accuracy in both tails.
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

/// P{ N(0,1) in [-h, h] } = 2*Phi(h) - 1, evaluated as erf(h/sqrt(2)) so the
/// result is accurate near zero.
inline double centered_interval_prob(double h) {
  return std::erf(h * 0.70710678118654752440);
}

}  // namespace tvgauss
