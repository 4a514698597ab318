#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "tvgauss/errors.hpp"

namespace tvgauss {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Eigenvalues below rank_tol * lambda_max count as zero.
inline constexpr double kDefaultRankTol = 1e-9;
/// Projector Frobenius distance below which two ranges are the same subspace.
inline constexpr double kDefaultRangeTol = 1e-8;
/// Relative Frobenius distance below which two covariances count as equal.
inline constexpr double kEqualCovTol = 1e-10;

/// A multivariate Gaussian N(mean, cov). Construction validates the shape,
/// symmetry (max |C_ij - C_ji| <= 1e-12 * max |C|) and numerical positive
/// semidefiniteness (eigenvalues >= -rank_tol * lambda_max) of the covariance.
/// Immutable after construction; safe to share across threads.
class Gaussian {
 public:
  Gaussian(Vector mean, Matrix cov, double rank_tol = kDefaultRankTol);

  Index dim() const { return mean_.size(); }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }

 private:
  Vector mean_;
  Matrix cov_;
};

/// Column-orthonormal basis of the detected range of a covariance.
struct RangeBasis {
  Matrix basis;        ///< d x r, basis' * basis = I_r
  Index rank = 0;      ///< r, number of eigenvalues above the rank threshold
  double dropped_mass = 0.0;  ///< largest discarded eigenvalue / lambda_max
};

/// Eigenvalues of Sigma1^{-1} Sigma2 - I together with their root-sum-square.
struct SpectralGap {
  Vector lambdas;       ///< ascending; each >= -1
  double rho = 0.0;     ///< sqrt(sum lambdas_i^2)
  bool clipped = false; ///< min lambda <= -1 + tol: Sigma2 nearly singular w.r.t. Sigma1
};

/// Affine support mu + range(Sigma) of a Gaussian.
struct AffineSupport {
  Vector point;
  RangeBasis basis;
};

/// Orthonormal basis for the eigenspace of `cov` above rank_tol * lambda_max.
/// Throws ZeroCovariance when no eigenvalue clears the threshold.
RangeBasis detect_range(const Matrix& cov, double rank_tol = kDefaultRankTol);

/// True iff the ranks agree and the orthogonal projectors onto the two ranges
/// are within `tol` in Frobenius norm.
bool same_range(const RangeBasis& a, const RangeBasis& b,
                double tol = kDefaultRangeTol);

/// The affine subspace mu + range(Sigma) carrying the Gaussian's density.
AffineSupport affine_support(const Gaussian& g,
                             double rank_tol = kDefaultRankTol);

/// True iff the two affine supports coincide: equal ranges and mu1 - mu2 lies
/// in the common range (projection residual <= range_tol * (1 + |mu1 - mu2|)).
bool same_affine_support(const Gaussian& g1, const Gaussian& g2,
                         double rank_tol = kDefaultRankTol,
                         double range_tol = kDefaultRangeTol);

/// Eigenvalues of Sigma1^{-1} Sigma2 - I computed by symmetric whitening:
/// eigendecompose Sigma1, form Sigma1^{-1/2}, symmetrize
/// Sigma1^{-1/2} Sigma2 Sigma1^{-1/2} before the second eigensolve.
/// Throws NotPositiveDefinite when sigma1 is singular at rank_tol.
SpectralGap relative_spectrum(const Matrix& sigma1, const Matrix& sigma2,
                              double rank_tol = kDefaultRankTol);

/// Symmetric PSD square root: sqrt_psd(C) * sqrt_psd(C) = C.
Matrix sqrt_psd(const Matrix& cov);

/// Symmetric inverse square root restricted to the detected range
/// (eigenvalues below rank_tol * lambda_max are dropped, not inverted).
Matrix inv_sqrt_psd(const Matrix& cov, double rank_tol = kDefaultRankTol);

/// d x (d-1) column-orthonormal basis of the hyperplane orthogonal to v,
/// built from the Householder reflector that maps v/|v| onto e1.
Matrix complement_basis(const Vector& v);

/// Law of A X + b for X ~ g: N(A mu + b, A Sigma A').
Gaussian affine_image(const Gaussian& g, const Matrix& A, const Vector& b);

/// Joint support analysis used by the dispatchers. Unlike detect_range this
/// tolerates rank-zero (point-mass) covariances.
struct SupportAnalysis {
  bool equal = false;    ///< affine supports coincide
  Index rank = 0;        ///< common rank when equal (0 for point masses)
  const char* note = ""; ///< reason when not equal
  std::optional<RangeBasis> basis;  ///< common basis when equal and 0 < rank < d
};

SupportAnalysis analyze_support(const Gaussian& g1, const Gaussian& g2,
                                double rank_tol = kDefaultRankTol,
                                double range_tol = kDefaultRangeTol);

/// Restriction of g to range coordinates: N(B' mu, B' Sigma B).
Gaussian project_gaussian(const Gaussian& g, const Matrix& basis);

}  // namespace tvgauss
