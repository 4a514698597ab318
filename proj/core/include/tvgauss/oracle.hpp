#pragma once

#include <cstdint>
#include <string_view>

#include "tvgauss/gaussian.hpp"

namespace tvgauss {

enum class OracleMethod {
  Exact1D,        ///< closed-form CDF evaluation over sign-constant intervals
  ExactEqualCov,  ///< 2 Phi(m/2) - 1 with m the Mahalanobis distance
  ExactDisjoint,  ///< supports with zero-measure intersection: TV = 1
  MonteCarlo,     ///< density-ratio estimator with a CLT interval
};

/// Stable token: exact_1d, exact_equal_cov, exact_disjoint, monte_carlo.
std::string_view oracle_method_name(OracleMethod m);

/// Ground-truth estimate of the total variation distance. Exact methods carry
/// ci_halfwidth = 0; Monte Carlo carries a ~99.7% (3-sigma) normal interval.
struct OracleEstimate {
  double estimate = 0.0;
  double ci_halfwidth = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  OracleMethod method = OracleMethod::MonteCarlo;

  /// Interval endpoints clipped to [0, 1] for reporting.
  double lower() const;
  double upper() const;
};

/// Exact 1-D total variation distance: solve log p = log q for its crossing
/// points and accumulate signed CDF differences over the sign-constant
/// intervals.
OracleEstimate exact_tv_1d(const Gaussian& g1, const Gaussian& g2);

/// Seeded Monte Carlo estimate of TV = E_{X~g1}[ max(0, 1 - q(X)/p(X)) ].
/// Draws are whitened g1 samples; log-densities are evaluated in the common
/// range coordinates when the covariances are singular. The sample index
/// space is split into fixed blocks, each with its own counter-derived RNG
/// stream, and blocks are reduced in index order, so the result is
/// bit-identical for any thread count. Requires samples >= 10^4.
OracleEstimate mc_tv(const Gaussian& g1, const Gaussian& g2,
                     std::uint64_t samples, std::uint64_t seed,
                     unsigned threads = 0);

struct OracleOptions {
  double rank_tol = kDefaultRankTol;
  double range_tol = kDefaultRangeTol;
  double equal_cov_tol = kEqualCovTol;
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Dispatch: disjoint supports are exact 1; singular same-support pairs are
/// projected onto the common range; one-dimensional and equal-covariance
/// pairs use the closed forms; anything else goes to Monte Carlo with the
/// requested budget.
OracleEstimate oracle(const Gaussian& g1, const Gaussian& g2,
                      std::uint64_t budget, std::uint64_t seed,
                      const OracleOptions& opt = {});

}  // namespace tvgauss
