#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "tvgauss/gaussian.hpp"

namespace tvgauss {

/// Families of seeded random Gaussian pairs used by property tests and the
/// acceptance suite.
enum class EnsembleKind {
  SameMeanPD,         ///< shared mean, independent positive-definite covariances
  SameRangeSingular,  ///< shared rank-deficient range, mean gap inside the range
  DiffMean,           ///< distinct means, positive-definite covariances
  NearIdentical,      ///< tiny covariance and mean perturbations
  DisjointSupport,    ///< shared singular range, mean gap pushed off the range
  OneDim,             ///< one-dimensional pairs, occasional equal mean/variance
};

std::string_view ensemble_kind_name(EnsembleKind k);

/// Parses the stable token (same_mean_pd, same_range_singular, diff_mean,
/// near_identical, disjoint_support, one_dim); throws InvalidSpec otherwise.
EnsembleKind parse_ensemble_kind(std::string_view name);

struct EnsembleSpec {
  int dim = 1;
  EnsembleKind kind = EnsembleKind::SameMeanPD;
  double condition_cap = 1e3;  ///< eigenvalues log-uniform in [cap^-1/2, cap^1/2]
  int count = 1;
  std::uint64_t seed = 0;
};

struct GaussianPair {
  Gaussian first;
  Gaussian second;
};

/// Deterministic for a fixed spec; every generated pair satisfies the
/// Gaussian construction invariants and its kind's support/mean relations.
std::vector<GaussianPair> generate(const EnsembleSpec& spec);

}  // namespace tvgauss
