#include "tvgauss/ensemble.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "tvgauss/rng.hpp"

namespace tvgauss {

namespace {

Vector random_vector(NormalStream& rng, Index d) {
  Vector v(d);
  for (Index i = 0; i < d; ++i) {
    v(i) = rng.next();
  }
  return v;
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the sign
/// convention that makes R's diagonal positive.
Matrix haar_orthogonal(NormalStream& rng, Index d) {
  Matrix g(d, d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      g(i, j) = rng.next();
    }
  }
  const Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Vector diag = qr.matrixQR().diagonal();
  for (Index j = 0; j < d; ++j) {
    if (diag(j) < 0.0) {
      q.col(j) = -q.col(j);
    }
  }
  return q;
}

/// Log-uniform eigenvalue in [cap^-1/2, cap^1/2].
double log_uniform_eig(SplitMix64& rng, double cap) {
  return std::pow(cap, rng.next_in(0.0, 1.0) - 0.5);
}

Matrix spd_from(const Matrix& q, const Vector& eigs) {
  Matrix m = q * eigs.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose()).eval();
}

Matrix random_spd(SplitMix64& rng, NormalStream& nrm, Index d, double cap) {
  const Matrix q = haar_orthogonal(nrm, d);
  Vector eigs(d);
  for (Index i = 0; i < d; ++i) {
    eigs(i) = log_uniform_eig(rng, cap);
  }
  return spd_from(q, eigs);
}

/// Shared-Q covariance pair with an identical zeroed eigenvalue subset; the
/// kept block gives both matrices the same range.
struct SingularPair {
  Matrix cov1;
  Matrix cov2;
  Matrix range;       ///< d x r, columns of Q kept
  Matrix null_space;  ///< d x (d - r), columns of Q zeroed
};

SingularPair singular_same_range(SplitMix64& rng, NormalStream& nrm, Index d,
                                 double cap) {
  const Matrix q = haar_orthogonal(nrm, d);
  const Index rank = 1 + static_cast<Index>(rng.next_below(d - 1));
  // Zero positions: a random subset of size d - rank.
  std::vector<Index> order(d);
  std::iota(order.begin(), order.end(), Index{0});
  for (Index i = d - 1; i > 0; --i) {
    std::swap(order[i], order[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
  }
  Vector e1 = Vector::Zero(d);
  Vector e2 = Vector::Zero(d);
  SingularPair out;
  out.range.resize(d, rank);
  out.null_space.resize(d, d - rank);
  for (Index i = 0; i < d; ++i) {
    if (i < rank) {
      e1(order[i]) = log_uniform_eig(rng, cap);
      e2(order[i]) = log_uniform_eig(rng, cap);
      out.range.col(i) = q.col(order[i]);
    } else {
      out.null_space.col(i - rank) = q.col(order[i]);
    }
  }
  out.cov1 = spd_from(q, e1);
  out.cov2 = spd_from(q, e2);
  return out;
}

void validate(const EnsembleSpec& spec) {
  if (spec.dim < 1) {
    throw InvalidSpec("EnsembleSpec: dim must be >= 1");
  }
  if (spec.count < 1) {
    throw InvalidSpec("EnsembleSpec: count must be >= 1");
  }
  if (spec.condition_cap < 1.0) {
    throw InvalidSpec("EnsembleSpec: condition_cap must be >= 1");
  }
  if ((spec.kind == EnsembleKind::SameRangeSingular ||
       spec.kind == EnsembleKind::DisjointSupport) &&
      spec.dim < 2) {
    throw InvalidSpec("EnsembleSpec: singular kinds require dim >= 2");
  }
  if (spec.kind == EnsembleKind::OneDim && spec.dim != 1) {
    throw InvalidSpec("EnsembleSpec: OneDim requires dim = 1");
  }
}

GaussianPair generate_one(const EnsembleSpec& spec, SplitMix64& rng,
                          NormalStream& nrm) {
  const Index d = spec.dim;
  const double cap = spec.condition_cap;
  switch (spec.kind) {
    case EnsembleKind::SameMeanPD: {
      const Vector mu = random_vector(nrm, d);
      return {Gaussian(mu, random_spd(rng, nrm, d, cap)),
              Gaussian(mu, random_spd(rng, nrm, d, cap))};
    }
    case EnsembleKind::SameRangeSingular: {
      const SingularPair s = singular_same_range(rng, nrm, d, cap);
      const Vector mu1 = random_vector(nrm, d);
      Vector mu2 = mu1;
      if (rng.next_below(2) == 0) {
        // Mean gap inside the common range keeps the supports equal.
        mu2 += s.range * random_vector(nrm, s.range.cols());
      }
      return {Gaussian(mu1, s.cov1), Gaussian(mu2, s.cov2)};
    }
    case EnsembleKind::DiffMean: {
      const Vector mu1 = random_vector(nrm, d);
      Vector dir = random_vector(nrm, d);
      while (dir.norm() == 0.0) {
        dir = random_vector(nrm, d);
      }
      dir.normalize();
      const double scale = std::pow(10.0, rng.next_in(-1.5, 0.7));
      return {Gaussian(mu1, random_spd(rng, nrm, d, cap)),
              Gaussian(mu1 + scale * dir, random_spd(rng, nrm, d, cap))};
    }
    case EnsembleKind::NearIdentical: {
      const Vector mu1 = random_vector(nrm, d);
      const Matrix cov1 = random_spd(rng, nrm, d, cap);
      const double eps = std::pow(10.0, rng.next_in(-8.0, -3.0));
      Matrix bump = random_spd(rng, nrm, d, 10.0);
      bump *= eps * cov1.norm() / bump.norm();
      const Vector mu2 = mu1 + eps * random_vector(nrm, d);
      return {Gaussian(mu1, cov1), Gaussian(mu2, cov1 + bump)};
    }
    case EnsembleKind::DisjointSupport: {
      const SingularPair s = singular_same_range(rng, nrm, d, cap);
      const Vector mu1 = random_vector(nrm, d);
      const double off = std::pow(10.0, rng.next_in(-1.0, 0.3));
      Vector mu2 = mu1 + off * s.null_space.col(0);
      if (rng.next_below(2) == 0) {
        mu2 += s.range * random_vector(nrm, s.range.cols());
      }
      return {Gaussian(mu1, s.cov1), Gaussian(mu2, s.cov2)};
    }
    case EnsembleKind::OneDim: {
      Vector mu1(1), mu2(1), v1(1), v2(1);
      mu1(0) = nrm.next();
      v1(0) = log_uniform_eig(rng, cap);
      mu2(0) = rng.next_below(4) == 0 ? mu1(0) : nrm.next();
      v2(0) = rng.next_below(4) == 0 ? v1(0) : log_uniform_eig(rng, cap);
      Matrix c1(1, 1), c2(1, 1);
      c1(0, 0) = v1(0);
      c2(0, 0) = v2(0);
      return {Gaussian(mu1, c1), Gaussian(mu2, c2)};
    }
  }
  throw InvalidSpec("EnsembleSpec: unknown kind");
}

}  // namespace

std::string_view ensemble_kind_name(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::SameMeanPD:
      return "same_mean_pd";
    case EnsembleKind::SameRangeSingular:
      return "same_range_singular";
    case EnsembleKind::DiffMean:
      return "diff_mean";
    case EnsembleKind::NearIdentical:
      return "near_identical";
    case EnsembleKind::DisjointSupport:
      return "disjoint_support";
    case EnsembleKind::OneDim:
      return "one_dim";
  }
  return "unknown";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  for (EnsembleKind k :
       {EnsembleKind::SameMeanPD, EnsembleKind::SameRangeSingular,
        EnsembleKind::DiffMean, EnsembleKind::NearIdentical,
        EnsembleKind::DisjointSupport, EnsembleKind::OneDim}) {
    if (name == ensemble_kind_name(k)) {
      return k;
    }
  }
  throw InvalidSpec("unknown ensemble kind: " + std::string(name));
}

std::vector<GaussianPair> generate(const EnsembleSpec& spec) {
  validate(spec);
  std::vector<GaussianPair> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) {
    // Every instance draws from its own stream so insertions or removals of
    // earlier instances never shift later ones.
    const std::uint64_t instance_seed =
        derive_stream(spec.seed, static_cast<std::uint64_t>(i));
    SplitMix64 rng(instance_seed);
    NormalStream nrm(derive_stream(instance_seed, 0xA5A5A5A5ull));
    out.push_back(generate_one(spec, rng, nrm));
  }
  return out;
}

}  // namespace tvgauss
