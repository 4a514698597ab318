#include "tvgauss/gaussian.hpp"

#include <cmath>
#include <string>

namespace tvgauss {

namespace {

constexpr double kSymmetryTol = 1e-12;

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionMismatch(std::string(what) + ": matrix must be square, got " +
                            std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  }
}

void require_symmetric(const Matrix& m, const char* what) {
  const double max_abs = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * max_abs) {
    Index bi = 0, bj = 0;
    double worst = -1.0;
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index j = i + 1; j < m.cols(); ++j) {
        const double a = std::abs(m(i, j) - m(j, i));
        if (a > worst) {
          worst = a;
          bi = i;
          bj = j;
        }
      }
    }
    throw NotPositiveSemidefinite(
        std::string(what) + ": matrix is not symmetric at entry (" +
        std::to_string(bi) + "," + std::to_string(bj) + "): " +
        std::to_string(m(bi, bj)) + " vs " + std::to_string(m(bj, bi)));
  }
}

Eigen::SelfAdjointEigenSolver<Matrix> eigensolve(const Matrix& m,
                                                 const char* what) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) {
    throw Error(std::string(what) + ": eigendecomposition failed to converge");
  }
  return es;
}

/// detect_range without the nonzero-rank requirement; rank 0 allowed.
RangeBasis range_of(const Matrix& cov, double rank_tol) {
  const auto es = eigensolve(cov, "detect_range");
  const Vector& eigs = es.eigenvalues();  // ascending
  const Index d = cov.rows();
  const double lam_max = eigs(d - 1);
  const double threshold = rank_tol * std::max(lam_max, 0.0);

  Index first_kept = d;
  for (Index i = 0; i < d; ++i) {
    if (eigs(i) > threshold && eigs(i) > 0.0) {
      first_kept = i;
      break;
    }
  }
  RangeBasis out;
  out.rank = d - first_kept;
  out.basis.resize(d, out.rank);
  // Columns ordered by descending eigenvalue.
  for (Index k = 0; k < out.rank; ++k) {
    out.basis.col(k) = es.eigenvectors().col(d - 1 - k);
  }
  if (first_kept > 0 && lam_max > 0.0) {
    out.dropped_mass = std::max(eigs(first_kept - 1), 0.0) / lam_max;
  }
  return out;
}

bool is_positive_definite(const Vector& ascending_eigs, double rank_tol) {
  const double lam_max = ascending_eigs(ascending_eigs.size() - 1);
  return lam_max > 0.0 && ascending_eigs(0) > rank_tol * lam_max;
}

}  // namespace

Gaussian::Gaussian(Vector mean, Matrix cov, double rank_tol)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() < 1) {
    throw DimensionMismatch("Gaussian: dimension must be >= 1");
  }
  require_square(cov_, "Gaussian");
  if (cov_.rows() != mean_.size()) {
    throw DimensionMismatch("Gaussian: mean has length " +
                            std::to_string(mean_.size()) + " but cov is " +
                            std::to_string(cov_.rows()) + "x" +
                            std::to_string(cov_.cols()));
  }
  require_symmetric(cov_, "Gaussian");
  const auto es = eigensolve(cov_, "Gaussian");
  const double lam_max = es.eigenvalues()(cov_.rows() - 1);
  const double floor = -rank_tol * std::max(lam_max, 0.0);
  if (es.eigenvalues()(0) < floor) {
    throw NotPositiveSemidefinite(
        "Gaussian: covariance has eigenvalue " +
        std::to_string(es.eigenvalues()(0)) +
        " below the PSD floor " + std::to_string(floor));
  }
}

RangeBasis detect_range(const Matrix& cov, double rank_tol) {
  require_square(cov, "detect_range");
  if (!(rank_tol > 0.0 && rank_tol < 1.0)) {
    throw InvalidSpec("detect_range: rank_tol must lie in (0, 1)");
  }
  RangeBasis out = range_of(cov, rank_tol);
  if (out.rank == 0) {
    throw ZeroCovariance("detect_range: no eigenvalue clears the rank threshold");
  }
  return out;
}

bool same_range(const RangeBasis& a, const RangeBasis& b, double tol) {
  if (a.basis.rows() != b.basis.rows()) {
    throw DimensionMismatch("same_range: bases live in different ambient dimensions");
  }
  if (a.rank != b.rank) {
    return false;
  }
  const Matrix pa = a.basis * a.basis.transpose();
  const Matrix pb = b.basis * b.basis.transpose();
  return (pa - pb).norm() <= tol;
}

AffineSupport affine_support(const Gaussian& g, double rank_tol) {
  return AffineSupport{g.mean(), detect_range(g.cov(), rank_tol)};
}

bool same_affine_support(const Gaussian& g1, const Gaussian& g2,
                         double rank_tol, double range_tol) {
  const AffineSupport a = affine_support(g1, rank_tol);
  const AffineSupport b = affine_support(g2, rank_tol);
  if (a.basis.basis.rows() != b.basis.basis.rows()) {
    throw DimensionMismatch("same_affine_support: ambient dimensions differ");
  }
  if (!same_range(a.basis, b.basis, range_tol)) {
    return false;
  }
  const Vector w = g1.mean() - g2.mean();
  const Vector residual = w - a.basis.basis * (a.basis.basis.transpose() * w);
  return residual.norm() <= range_tol * (1.0 + w.norm());
}

SpectralGap relative_spectrum(const Matrix& sigma1, const Matrix& sigma2,
                              double rank_tol) {
  require_square(sigma1, "relative_spectrum");
  require_square(sigma2, "relative_spectrum");
  if (sigma1.rows() != sigma2.rows()) {
    throw DimensionMismatch("relative_spectrum: dimensions differ");
  }
  const auto es1 = eigensolve(sigma1, "relative_spectrum(sigma1)");
  if (!is_positive_definite(es1.eigenvalues(), rank_tol)) {
    throw NotPositiveDefinite(
        "relative_spectrum: sigma1 is singular at rank_tol");
  }
  const Matrix isqrt =
      es1.eigenvectors() *
      es1.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      es1.eigenvectors().transpose();
  Matrix m = isqrt * sigma2 * isqrt;
  m = 0.5 * (m + m.transpose()).eval();
  const auto es2 = eigensolve(m, "relative_spectrum(whitened)");

  SpectralGap out;
  out.lambdas = (es2.eigenvalues().array() - 1.0).max(-1.0).matrix();
  out.rho = std::sqrt(out.lambdas.squaredNorm());
  out.clipped = out.lambdas(0) <= -1.0 + rank_tol;
  return out;
}

Matrix sqrt_psd(const Matrix& cov) {
  require_square(cov, "sqrt_psd");
  const auto es = eigensolve(cov, "sqrt_psd");
  const Vector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Matrix s = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (s + s.transpose()).eval();
}

Matrix inv_sqrt_psd(const Matrix& cov, double rank_tol) {
  require_square(cov, "inv_sqrt_psd");
  const auto es = eigensolve(cov, "inv_sqrt_psd");
  const Index d = cov.rows();
  const double lam_max = es.eigenvalues()(d - 1);
  if (lam_max <= 0.0) {
    throw ZeroCovariance("inv_sqrt_psd: covariance has no positive eigenvalue");
  }
  const double threshold = rank_tol * lam_max;
  Matrix s = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    if (es.eigenvalues()(i) > threshold) {
      s.noalias() += es.eigenvectors().col(i) *
                     (es.eigenvectors().col(i).transpose() /
                      std::sqrt(es.eigenvalues()(i)));
    }
  }
  return 0.5 * (s + s.transpose()).eval();
}

Matrix complement_basis(const Vector& v) {
  const Index d = v.size();
  if (d < 2) {
    throw DimensionMismatch("complement_basis: requires dimension >= 2");
  }
  const double norm = v.norm();
  if (norm == 0.0) {
    throw ZeroVector("complement_basis: direction vector has zero norm");
  }
  Vector w = v / norm;
  const double sign = w(0) >= 0.0 ? 1.0 : -1.0;
  w(0) += sign;          // |w| >= 1, so the reflector is well conditioned
  w /= w.norm();
  const Matrix h = Matrix::Identity(d, d) - 2.0 * (w * w.transpose());
  return h.rightCols(d - 1);
}

Gaussian affine_image(const Gaussian& g, const Matrix& A, const Vector& b) {
  if (A.cols() != g.dim()) {
    throw DimensionMismatch("affine_image: A has " + std::to_string(A.cols()) +
                            " columns but the Gaussian has dimension " +
                            std::to_string(g.dim()));
  }
  if (b.size() != A.rows()) {
    throw DimensionMismatch("affine_image: b has length " +
                            std::to_string(b.size()) + " but A has " +
                            std::to_string(A.rows()) + " rows");
  }
  Matrix cov = A * g.cov() * A.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return Gaussian(A * g.mean() + b, std::move(cov));
}

SupportAnalysis analyze_support(const Gaussian& g1, const Gaussian& g2,
                                double rank_tol, double range_tol) {
  if (g1.dim() != g2.dim()) {
    throw DimensionMismatch("analyze_support: dimensions differ");
  }
  const RangeBasis r1 = range_of(g1.cov(), rank_tol);
  const RangeBasis r2 = range_of(g2.cov(), rank_tol);

  SupportAnalysis out;
  if (r1.rank != r2.rank) {
    out.note = "rank-mismatch";
    return out;
  }
  const Vector w = g1.mean() - g2.mean();
  if (r1.rank == 0) {
    // Two point masses: equal supports iff equal locations.
    out.rank = 0;
    out.equal = w.norm() <= range_tol * (1.0 + w.norm());
    if (!out.equal) out.note = "point-masses-apart";
    return out;
  }
  if (!same_range(r1, r2, range_tol)) {
    out.note = "range-mismatch";
    return out;
  }
  const Vector residual = w - r1.basis * (r1.basis.transpose() * w);
  if (residual.norm() > range_tol * (1.0 + w.norm())) {
    out.note = "mean-off-range";
    return out;
  }
  out.equal = true;
  out.rank = r1.rank;
  if (r1.rank < g1.dim()) {
    out.basis = r1;
  }
  return out;
}

Gaussian project_gaussian(const Gaussian& g, const Matrix& basis) {
  if (basis.rows() != g.dim()) {
    throw DimensionMismatch("project_gaussian: basis ambient dimension differs");
  }
  Matrix cov = basis.transpose() * g.cov() * basis;
  cov = 0.5 * (cov + cov.transpose()).eval();
  return Gaussian(basis.transpose() * g.mean(), std::move(cov));
}

}  // namespace tvgauss
