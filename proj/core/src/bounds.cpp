#include "tvgauss/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tvgauss/normal.hpp"

namespace tvgauss {

namespace {

double clip01(double x) { return std::clamp(x, 0.0, 1.0); }

bool is_pd(const Matrix& cov, double rank_tol) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(cov, Eigen::EigenvaluesOnly);
  const double lam_max = es.eigenvalues()(cov.rows() - 1);
  return lam_max > 0.0 && es.eigenvalues()(0) > rank_tol * lam_max;
}

BoundInterval thm1_interval(double rho) {
  const double r = std::min(1.0, rho);
  return BoundInterval(r / 100.0, std::min(1.0, 1.5 * r), Method::SameMeanThm1);
}

bool covariances_equal(const Matrix& a, const Matrix& b, double tol) {
  const double scale = std::max(a.norm(), b.norm());
  return (a - b).norm() <= tol * scale;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::SameMeanThm1:
      return "thm1";
    case Method::DiffMeanThm2:
      return "thm2";
    case Method::OneDimThm3:
      return "thm3";
    case Method::PinskerKL:
      return "kl";
    case Method::Hellinger:
      return "hellinger";
    case Method::EqualCovExact:
      return "exact";
    case Method::DisjointSupport:
      return "disjoint";
  }
  return "unknown";
}

BoundInterval::BoundInterval(double lower, double upper, Method method)
    : lower_(lower), upper_(upper), method_(method) {
  if (!(lower >= 0.0 && lower <= upper && upper <= 1.0)) {
    throw std::logic_error("BoundInterval: requires 0 <= lower <= upper <= 1, got [" +
                           std::to_string(lower) + ", " + std::to_string(upper) + "]");
  }
}

BoundInterval BoundInterval::intersect(const BoundInterval& a,
                                       const BoundInterval& b) {
  return BoundInterval(std::max(a.lower_, b.lower_),
                       std::min(a.upper_, b.upper_), a.method_);
}

double MeanGapDecomposition::value() const {
  return std::max({term_var, term_mean, term_spec});
}

MeanGapDecomposition mean_gap_decomposition(const Gaussian& g1,
                                            const Gaussian& g2,
                                            double rank_tol) {
  if (g1.dim() != g2.dim()) {
    throw DimensionMismatch("mean_gap_decomposition: dimensions differ");
  }
  if (g1.dim() < 2) {
    throw OneDimensional("mean_gap_decomposition: requires d >= 2");
  }
  MeanGapDecomposition out;
  out.v = g1.mean() - g2.mean();
  out.u = 0.5 * (g1.mean() + g2.mean());
  if (out.v.norm() == 0.0) {
    throw SameMean("mean_gap_decomposition: means coincide");
  }

  const double q1 = out.v.dot(g1.cov() * out.v);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(g1.cov(), Eigen::EigenvaluesOnly);
  const double lam_max = es.eigenvalues()(g1.dim() - 1);
  if (q1 <= 1e-12 * out.v.squaredNorm() * std::max(lam_max, 0.0)) {
    throw NotPositiveDefinite(
        "mean_gap_decomposition: sigma1 is nearly singular along the mean gap");
  }
  const double q2 = out.v.dot(g2.cov() * out.v);
  out.term_var = std::abs(q1 - q2) / q1;
  out.term_mean = out.v.squaredNorm() / std::sqrt(q1);
  out.pi = complement_basis(out.v);
  out.term_spec = relative_spectrum(out.pi.transpose() * g1.cov() * out.pi,
                                    out.pi.transpose() * g2.cov() * out.pi,
                                    rank_tol)
                      .rho;
  return out;
}

BoundReport make_report(std::vector<BoundInterval> intervals,
                        std::vector<std::string> flags) {
  // Degenerate exact intervals can be crossed by other bounds at roundoff
  // scale (an exact [v,v] against a lower bound evaluated with ~1e-15 error);
  // anything beyond that band is a genuine bug.
  constexpr double kRoundoffSlack = 1e-9;
  BoundReport out;
  out.intervals = std::move(intervals);
  out.flags = std::move(flags);
  for (const BoundInterval& iv : out.intervals) {
    out.best_lower = std::max(out.best_lower, iv.lower());
    out.best_upper = std::min(out.best_upper, iv.upper());
  }
  if (out.best_lower > out.best_upper) {
    if (out.best_lower - out.best_upper > kRoundoffSlack) {
      throw std::logic_error(
          "BoundReport: certified intervals have empty intersection");
    }
    out.best_lower = out.best_upper;
  }
  return out;
}

BoundInterval bound_same_mean(const Matrix& sigma1, const Matrix& sigma2,
                              double rank_tol, double range_tol) {
  if (sigma1.rows() != sigma2.rows()) {
    throw DimensionMismatch("bound_same_mean: dimensions differ");
  }
  if (is_pd(sigma1, rank_tol) && is_pd(sigma2, rank_tol)) {
    return thm1_interval(relative_spectrum(sigma1, sigma2, rank_tol).rho);
  }
  const RangeBasis r1 = detect_range(sigma1, rank_tol);
  const RangeBasis r2 = detect_range(sigma2, rank_tol);
  if (!same_range(r1, r2, range_tol)) {
    throw RangeMismatch(
        "bound_same_mean: covariance ranges differ (the pair is disjoint, TV = 1)");
  }
  const Matrix& p = r1.basis;
  return thm1_interval(relative_spectrum(p.transpose() * sigma1 * p,
                                         p.transpose() * sigma2 * p, rank_tol)
                           .rho);
}

BoundInterval bound_diff_mean(const Gaussian& g1, const Gaussian& g2,
                              double rank_tol) {
  if (g1.dim() != g2.dim()) {
    throw DimensionMismatch("bound_diff_mean: dimensions differ");
  }
  if (g1.dim() < 2) {
    throw OneDimensional("bound_diff_mean: requires d >= 2; use bound_1d");
  }
  if ((g1.mean() - g2.mean()).norm() == 0.0) {
    throw SameMean("bound_diff_mean: means coincide; use bound_same_mean");
  }
  if (!is_pd(g1.cov(), rank_tol) || !is_pd(g2.cov(), rank_tol)) {
    throw NotPositiveDefinite("bound_diff_mean: both covariances must be positive definite");
  }
  const double t = std::min(1.0, mean_gap_decomposition(g1, g2, rank_tol).value());
  return BoundInterval(t / 200.0, std::min(1.0, 4.5 * t), Method::DiffMeanThm2);
}

BoundInterval bound_1d(const Gaussian& g1, const Gaussian& g2) {
  if (g1.dim() != 1 || g2.dim() != 1) {
    throw DimensionMismatch("bound_1d: requires d = 1");
  }
  const double s1 = g1.cov()(0, 0);
  const double s2 = g2.cov()(0, 0);
  if (s1 <= 0.0 || s2 <= 0.0) {
    throw ZeroVariance("bound_1d: variances must be positive");
  }
  const double dmu = std::abs(g1.mean()(0) - g2.mean()(0));
  const double dvar = std::abs(s1 - s2);
  const double sd1 = std::sqrt(s1);
  const double lower =
      std::min(1.0, std::max(dvar / s1, 40.0 * dmu / sd1)) / 200.0;
  const double upper = std::min(1.0, 1.5 * dvar / s1 + 0.5 * dmu / sd1);
  return BoundInterval(lower, upper, Method::OneDimThm3);
}

BoundInterval bound_1d_symmetric(const Gaussian& g1, const Gaussian& g2) {
  return BoundInterval::intersect(bound_1d(g1, g2), bound_1d(g2, g1));
}

BoundInterval bound_pinsker_kl(const Gaussian& g1, const Gaussian& g2,
                               double rank_tol) {
  if (g1.dim() != g2.dim()) {
    throw DimensionMismatch("bound_pinsker_kl: dimensions differ");
  }
  if (!is_pd(g2.cov(), rank_tol)) {
    throw NotPositiveDefinite("bound_pinsker_kl: sigma2 must be positive definite");
  }
  const SpectralGap gap = relative_spectrum(g1.cov(), g2.cov(), rank_tol);
  double quantity = 0.0;
  for (Index i = 0; i < gap.lambdas.size(); ++i) {
    quantity += gap.lambdas(i) - std::log1p(gap.lambdas(i));
  }
  const Vector w = inv_sqrt_psd(g1.cov(), rank_tol) * (g1.mean() - g2.mean());
  quantity += w.squaredNorm();
  const double upper = std::isfinite(quantity)
                           ? std::min(1.0, 0.5 * std::sqrt(quantity))
                           : 1.0;
  return BoundInterval(0.0, upper, Method::PinskerKL);
}

BoundInterval bound_hellinger(const Gaussian& g1, const Gaussian& g2,
                              double rank_tol) {
  if (g1.dim() != g2.dim()) {
    throw DimensionMismatch("bound_hellinger: dimensions differ");
  }
  if (!is_pd(g1.cov(), rank_tol) || !is_pd(g2.cov(), rank_tol)) {
    throw NotPositiveDefinite("bound_hellinger: both covariances must be positive definite");
  }
  // -log BC = sum_i [ log(1 + lambda_i/2)/2 - log(1 + lambda_i)/4 ] + maha/8
  // with lambda_i the relative spectrum; every term is nonnegative, so h^2
  // keeps relative accuracy even when the Gaussians are nearly identical
  // (quarter log-dets subtracted directly cancel to roundoff there).
  const SpectralGap gap = relative_spectrum(g1.cov(), g2.cov(), rank_tol);
  double neg_log_bc = 0.0;
  for (Index i = 0; i < gap.lambdas.size(); ++i) {
    neg_log_bc += 0.5 * std::log1p(0.5 * gap.lambdas(i)) -
                  0.25 * std::log1p(gap.lambdas(i));
  }
  const Matrix mid = 0.5 * (g1.cov() + g2.cov());
  const Vector w = inv_sqrt_psd(mid, rank_tol) * (g1.mean() - g2.mean());
  neg_log_bc += 0.125 * w.squaredNorm();
  const double h2 = std::clamp(-std::expm1(-neg_log_bc), 0.0, 1.0);
  return BoundInterval(h2, std::sqrt(h2 * (2.0 - h2)), Method::Hellinger);
}

BoundInterval exact_equal_cov(const Vector& mu1, const Vector& mu2,
                              const Matrix& sigma, double rank_tol) {
  if (mu1.size() != mu2.size() || mu1.size() != sigma.rows()) {
    throw DimensionMismatch("exact_equal_cov: dimensions differ");
  }
  if (!is_pd(sigma, rank_tol)) {
    throw NotPositiveDefinite("exact_equal_cov: sigma must be positive definite");
  }
  const double m = (inv_sqrt_psd(sigma, rank_tol) * (mu1 - mu2)).norm();
  const double tv = clip01(centered_interval_prob(0.5 * m));
  return BoundInterval(tv, tv, Method::EqualCovExact);
}

BoundReport assess(const Gaussian& g1, const Gaussian& g2,
                   const AssessOptions& opt) {
  if (g1.dim() != g2.dim()) {
    throw DimensionMismatch("assess: dimensions differ");
  }
  std::vector<BoundInterval> intervals;
  std::vector<std::string> flags;

  const SupportAnalysis sup =
      analyze_support(g1, g2, opt.rank_tol, opt.range_tol);
  if (!sup.equal) {
    intervals.emplace_back(1.0, 1.0, Method::DisjointSupport);
    flags.emplace_back(sup.note);
    return make_report(std::move(intervals), std::move(flags));
  }
  if (sup.rank == 0) {
    // Coinciding point masses.
    intervals.emplace_back(0.0, 0.0, Method::EqualCovExact);
    flags.emplace_back("point-mass");
    return make_report(std::move(intervals), std::move(flags));
  }
  if (sup.basis.has_value()) {
    // Common rank-deficient support: reduce to full rank in range coordinates.
    const Matrix& b = sup.basis->basis;
    BoundReport reduced =
        assess(project_gaussian(g1, b), project_gaussian(g2, b), opt);
    reduced.flags.insert(reduced.flags.begin(),
                         "projected-to-rank-" + std::to_string(sup.rank));
    return reduced;
  }

  // Full-rank pair.
  const bool mean_equal = (g1.mean() - g2.mean()).norm() == 0.0;
  const bool cov_equal =
      covariances_equal(g1.cov(), g2.cov(), opt.equal_cov_tol);
  const Index d = g1.dim();

  if (cov_equal) {
    intervals.push_back(exact_equal_cov(g1.mean(), g2.mean(),
                                        0.5 * (g1.cov() + g2.cov()),
                                        opt.rank_tol));
  }
  if (mean_equal) {
    intervals.push_back(BoundInterval::intersect(
        bound_same_mean(g1.cov(), g2.cov(), opt.rank_tol, opt.range_tol),
        bound_same_mean(g2.cov(), g1.cov(), opt.rank_tol, opt.range_tol)));
  } else if (d >= 2) {
    std::vector<BoundInterval> orders;
    for (int swap = 0; swap < 2; ++swap) {
      const Gaussian& a = swap ? g2 : g1;
      const Gaussian& b = swap ? g1 : g2;
      try {
        orders.push_back(bound_diff_mean(a, b, opt.rank_tol));
      } catch (const NotPositiveDefinite&) {
        flags.emplace_back(swap ? "near-singular-sigma2"
                                : "near-singular-sigma1");
      }
    }
    if (orders.size() == 2) {
      intervals.push_back(BoundInterval::intersect(orders[0], orders[1]));
    } else if (orders.size() == 1) {
      intervals.push_back(orders[0]);
    }
  }
  if (d == 1) {
    intervals.push_back(bound_1d_symmetric(g1, g2));
  }
  intervals.push_back(
      BoundInterval::intersect(bound_pinsker_kl(g1, g2, opt.rank_tol),
                               bound_pinsker_kl(g2, g1, opt.rank_tol)));
  intervals.push_back(bound_hellinger(g1, g2, opt.rank_tol));

  if (relative_spectrum(g1.cov(), g2.cov(), opt.rank_tol).clipped ||
      relative_spectrum(g2.cov(), g1.cov(), opt.rank_tol).clipped) {
    flags.emplace_back("clipped-spectrum");
  }
  return make_report(std::move(intervals), std::move(flags));
}

}  // namespace tvgauss
