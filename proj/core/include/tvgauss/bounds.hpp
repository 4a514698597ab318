#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tvgauss/gaussian.hpp"

namespace tvgauss {

/// Bounding method that produced an interval.
enum class Method {
  SameMeanThm1,
  DiffMeanThm2,
  OneDimThm3,
  PinskerKL,
  Hellinger,
  EqualCovExact,
  DisjointSupport,
};

/// Stable token used in reports and the CLI (thm1, thm2, thm3, kl,
/// hellinger, exact, disjoint).
std::string_view method_name(Method m);

/// A certified interval: the true total variation distance of the pair is
/// guaranteed to lie in [lower, upper].
class BoundInterval {
 public:
  BoundInterval(double lower, double upper, Method method);

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  Method method() const { return method_; }
  bool contains(double tv) const { return lower_ <= tv && tv <= upper_; }

  /// Intersection of two certified intervals for the same quantity.
  static BoundInterval intersect(const BoundInterval& a, const BoundInterval& b);

 private:
  double lower_;
  double upper_;
  Method method_;
};

/// Split of a different-mean pair along the mean gap v = mu1 - mu2: the 1-D
/// component along v contributes term_var and term_mean, the (d-1)-D component
/// orthogonal to v contributes term_spec.
struct MeanGapDecomposition {
  Vector v;          ///< mu1 - mu2
  Vector u;          ///< (mu1 + mu2) / 2
  Matrix pi;         ///< d x (d-1) orthonormal complement of v
  double term_var;   ///< |v' (Sigma1 - Sigma2) v| / v' Sigma1 v
  double term_mean;  ///< v' v / sqrt(v' Sigma1 v)
  double term_spec;  ///< rho of (pi' Sigma1 pi)^{-1} (pi' Sigma2 pi) - I

  double value() const;  ///< max of the three terms
};

MeanGapDecomposition mean_gap_decomposition(const Gaussian& g1,
                                            const Gaussian& g2,
                                            double rank_tol = kDefaultRankTol);

/// Merged view over every applicable method for one pair.
struct BoundReport {
  std::vector<BoundInterval> intervals;
  double best_lower = 0.0;  ///< max of the lowers
  double best_upper = 1.0;  ///< min of the uppers
  std::vector<std::string> flags;
};

/// Builds a report from per-method intervals; throws std::logic_error when the
/// intervals have empty intersection (that would indicate a bug, never valid
/// output).
BoundReport make_report(std::vector<BoundInterval> intervals,
                        std::vector<std::string> flags);

struct AssessOptions {
  double rank_tol = kDefaultRankTol;
  double range_tol = kDefaultRangeTol;
  double equal_cov_tol = kEqualCovTol;
};

/// Same-mean bound: TV in [min{1,rho}/100, min{1, (3/2) min{1,rho}}] with rho
/// from the relative spectrum. Positive-semidefinite inputs with a common
/// range are projected onto it first; ranges that differ raise RangeMismatch.
BoundInterval bound_same_mean(const Matrix& sigma1, const Matrix& sigma2,
                              double rank_tol = kDefaultRankTol,
                              double range_tol = kDefaultRangeTol);

/// Different-mean bound, d >= 2: with T the max term of the mean-gap
/// decomposition, TV in [min{1,T}/200, min{1, (9/2) min{1,T}}].
BoundInterval bound_diff_mean(const Gaussian& g1, const Gaussian& g2,
                              double rank_tol = kDefaultRankTol);

/// One-dimensional bound:
/// lower = min{1, max{|s1-s2|/s1, 40 |m1-m2|/sqrt(s1)}} / 200 (s_i variances),
/// upper = min{1, 3|s1-s2|/(2 s1) + |m1-m2|/(2 sqrt(s1))}.
BoundInterval bound_1d(const Gaussian& g1, const Gaussian& g2);

/// Symmetric strengthening of the one-dimensional bound: both argument orders
/// evaluated, tighter interval kept.
BoundInterval bound_1d_symmetric(const Gaussian& g1, const Gaussian& g2);

/// Pinsker upper bound from the closed-form KL divergence, computed through
/// the relative spectrum (trace = sum lambda_i, log det = sum log(1+lambda_i)).
BoundInterval bound_pinsker_kl(const Gaussian& g1, const Gaussian& g2,
                               double rank_tol = kDefaultRankTol);

/// Hellinger sandwich [h^2, h sqrt(2 - h^2)]; the Bhattacharyya coefficient
/// is evaluated through the relative spectrum so h^2 stays relatively
/// accurate down to nearly identical pairs.
BoundInterval bound_hellinger(const Gaussian& g1, const Gaussian& g2,
                              double rank_tol = kDefaultRankTol);

/// Exact total variation distance for a shared positive-definite covariance:
/// 2 Phi(m/2) - 1 with m the Mahalanobis distance of the means.
BoundInterval exact_equal_cov(const Vector& mu1, const Vector& mu2,
                              const Matrix& sigma,
                              double rank_tol = kDefaultRankTol);

/// Full dispatch: disjoint supports give [1,1]; rank-deficient common
/// supports are projected onto the common range and re-assessed; full-rank
/// pairs collect every applicable method. Asymmetric bounds are evaluated in
/// both argument orders and intersected. Never throws on degenerate input;
/// the report carries flags instead.
BoundReport assess(const Gaussian& g1, const Gaussian& g2,
                   const AssessOptions& opt = {});

}  // namespace tvgauss
