// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Returns the failure count.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tvgauss/bounds.hpp"
#include "tvgauss/ensemble.hpp"
#include "tvgauss/normal.hpp"
#include "tvgauss/oracle.hpp"
#include "tvgauss/rng.hpp"

using namespace tvgauss;
using Clock = std::chrono::steady_clock;

namespace {

struct Harness {
  int failures = 0;

  void report(int id, const std::string& what, bool ok,
              const std::string& detail, double seconds) {
    std::printf("[%s] %2d. %s (%s; %.2fs)\n", ok ? "PASS" : "FAIL", id,
                what.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) {
      ++failures;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Gaussian g1d(double mean, double var) {
  Vector m(1);
  m(0) = mean;
  Matrix c(1, 1);
  c(0, 0) = var;
  return Gaussian(m, c);
}

// Pair counts per dimension that sum to `total` over `dims` dimensions.
std::vector<int> spread(int total, int dims) {
  std::vector<int> out(dims, total / dims);
  for (int i = 0; i < total % dims; ++i) {
    ++out[i];
  }
  return out;
}

// --- criterion 1 -------------------------------------------------------------

void criterion_exact_agreement(Harness& h) {
  const auto t0 = Clock::now();
  const double exact_cov =
      exact_equal_cov(Vector::Zero(1), Vector::Ones(1), Matrix::Identity(1, 1))
          .lower();
  const double exact_1d = exact_tv_1d(g1d(0, 1), g1d(1, 1)).estimate;
  const OracleEstimate mc = mc_tv(g1d(0, 1), g1d(1, 1), 1'000'000, 20250801);

  const bool formulas_agree = std::abs(exact_cov - exact_1d) <= 1e-12;
  const bool mc_agrees = std::abs(mc.estimate - exact_cov) <= mc.ci_halfwidth;
  const double elapsed = seconds_since(t0);
  std::ostringstream detail;
  detail << "equal-cov " << exact_cov << ", 1d " << exact_1d << ", mc "
         << mc.estimate << " +- " << mc.ci_halfwidth;
  h.report(1, "exact formula agreement: 2*Phi(1/2)-1 from three routes",
           formulas_agree && mc_agrees && elapsed < 5.0, detail.str(), elapsed);
}

// --- criteria 2, 3 ------------------------------------------------------------

void criterion_thm1_sandwich(Harness& h) {
  const auto t0 = Clock::now();
  int violations = 0;
  int total = 0;
  const std::vector<int> counts = spread(300, 8);
  for (int d = 1; d <= 8; ++d) {
    const EnsembleSpec spec{d, EnsembleKind::SameMeanPD, 1e3, counts[d - 1],
                            static_cast<std::uint64_t>(9000 + d)};
    for (const GaussianPair& p : generate(spec)) {
      const double rho =
          std::min(1.0, relative_spectrum(p.first.cov(), p.second.cov()).rho);
      const OracleEstimate est =
          oracle(p.first, p.second, 200'000,
                 static_cast<std::uint64_t>(100 * d + total));
      const double margin = 4.0 * est.ci_halfwidth;
      if (est.estimate < rho / 100.0 - margin ||
          est.estimate > std::min(1.0, 1.5 * rho) + margin) {
        ++violations;
      }
      ++total;
    }
  }
  const double elapsed = seconds_since(t0);
  h.report(2, "theorem-1 sandwich over 300 same-mean pairs, d in 1..8",
           violations == 0 && total == 300 && elapsed < 600.0,
           std::to_string(violations) + "/300 outside [rho/100, 3rho/2] +- 4*CI",
           elapsed);
}

void criterion_thm2_sandwich(Harness& h) {
  const auto t0 = Clock::now();
  int violations = 0;
  int total = 0;
  const std::vector<int> counts = spread(300, 7);
  for (int d = 2; d <= 8; ++d) {
    const EnsembleSpec spec{d, EnsembleKind::DiffMean, 1e3, counts[d - 2],
                            static_cast<std::uint64_t>(7000 + d)};
    for (const GaussianPair& p : generate(spec)) {
      const double t =
          std::min(1.0, mean_gap_decomposition(p.first, p.second).value());
      const OracleEstimate est =
          oracle(p.first, p.second, 200'000,
                 static_cast<std::uint64_t>(7100 * d + total));
      const double margin = 4.0 * est.ci_halfwidth;
      if (est.estimate < t / 200.0 - margin ||
          est.estimate > std::min(1.0, 4.5 * t) + margin) {
        ++violations;
      }
      ++total;
    }
  }
  const double elapsed = seconds_since(t0);
  h.report(3, "theorem-2 sandwich over 300 different-mean pairs, d in 2..8",
           violations == 0 && total == 300,
           std::to_string(violations) + "/300 outside [T/200, 9T/2] +- 4*CI",
           elapsed);
}

// --- criterion 4 --------------------------------------------------------------

void criterion_thm3_exact(Harness& h) {
  const auto t0 = Clock::now();
  const EnsembleSpec spec{1, EnsembleKind::OneDim, 1e3, 10'000, 20250804};
  int violations = 0;
  for (const GaussianPair& p : generate(spec)) {
    const double tv = exact_tv_1d(p.first, p.second).estimate;
    if (!bound_1d(p.first, p.second).contains(tv)) {
      ++violations;
    }
    if (!bound_1d_symmetric(p.first, p.second).contains(tv)) {
      ++violations;
    }
  }
  const double elapsed = seconds_since(t0);
  h.report(4, "theorem-3 interval contains the exact 1-D value, 10^4 pairs",
           violations == 0 && elapsed < 30.0,
           std::to_string(violations) + " violations at zero tolerance",
           elapsed);
}

// --- criteria 5, 6 ------------------------------------------------------------

void criterion_golden_cdf(Harness& h) {
  const auto t0 = Clock::now();
  const auto prob_in = [](double var, double lo, double hi) {
    const double s = std::sqrt(var);
    return normal_cdf(hi / s) - normal_cdf(lo / s);
  };
  const double p_unit = prob_in(1.0, -1.0, 1.0);
  const double p_wide = prob_in(1.1, -1.0, 1.0);
  const double p_narrow = prob_in(0.9, -1.0, 1.0);
  const double p_half = normal_cdf(1.0) - normal_cdf(0.0);
  const bool ok = p_unit > 0.68 && p_unit < 0.69 && p_wide < 0.66 &&
                  p_narrow > 0.70 && p_half > 0.2;
  std::ostringstream detail;
  detail << "P[-1,1]: " << p_unit << " (var 1), " << p_wide << " (var 1.1), "
         << p_narrow << " (var 0.9); P[0,1]: " << p_half;
  h.report(5, "golden normal-CDF facts", ok, detail.str(), seconds_since(t0));
}

void criterion_variance_gap(Harness& h) {
  const auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream detail;
  for (const double lam : {0.1, -0.1, 0.5, -0.5, 3.0}) {
    const double tv = exact_tv_1d(g1d(0, 1), g1d(0, 1.0 + lam)).estimate;
    detail << "tv(1," << 1.0 + lam << ")=" << tv << " ";
    ok = ok && tv > 0.01;
  }
  h.report(6, "variance gaps |lambda| >= 0.1 give TV > 0.01", ok, detail.str(),
           seconds_since(t0));
}

// --- criteria 7, 8 ------------------------------------------------------------

struct OracleCase {
  GaussianPair pair;
  OracleEstimate est;
};

std::vector<OracleCase> shared_pd_ensemble() {
  std::vector<OracleCase> out;
  std::uint64_t seed = 313;
  const auto add = [&](EnsembleKind kind, int dmin, int dmax, int total) {
    const int dims = dmax - dmin + 1;
    const std::vector<int> counts = spread(total, dims);
    for (int d = dmin; d <= dmax; ++d) {
      const EnsembleSpec spec{d, kind, 1e3, counts[d - dmin],
                              static_cast<std::uint64_t>(400 + 10 * d) +
                                  static_cast<std::uint64_t>(kind)};
      for (GaussianPair& p : generate(spec)) {
        OracleCase c{std::move(p), {}};
        c.est = oracle(c.pair.first, c.pair.second, 200'000, ++seed);
        out.push_back(std::move(c));
      }
    }
  };
  add(EnsembleKind::SameMeanPD, 1, 8, 100);
  add(EnsembleKind::DiffMean, 2, 8, 100);
  add(EnsembleKind::NearIdentical, 1, 8, 100);
  return out;
}

void criteria_hellinger_pinsker(Harness& h) {
  const auto t0 = Clock::now();
  const std::vector<OracleCase> cases = shared_pd_ensemble();
  const double shared_elapsed = seconds_since(t0);

  int hell_violations = 0;
  for (const OracleCase& c : cases) {
    const BoundInterval hell = bound_hellinger(c.pair.first, c.pair.second);
    const double margin = 4.0 * c.est.ci_halfwidth;
    if (hell.lower() > c.est.estimate + margin ||
        c.est.estimate - margin > hell.upper()) {
      ++hell_violations;
    }
  }
  h.report(7, "Hellinger sandwich h^2 <= TV <= h*sqrt(2-h^2) over 300 pairs",
           hell_violations == 0 && cases.size() == 300,
           std::to_string(hell_violations) + "/300 violations",
           shared_elapsed);

  const auto t1 = Clock::now();
  int kl_violations = 0;
  for (const OracleCase& c : cases) {
    const BoundInterval kl = bound_pinsker_kl(c.pair.first, c.pair.second);
    if (c.est.estimate - 4.0 * c.est.ci_halfwidth > kl.upper()) {
      ++kl_violations;
    }
  }
  h.report(8, "Pinsker/KL upper bound over the same ensemble",
           kl_violations == 0,
           std::to_string(kl_violations) + "/300 violations",
           seconds_since(t1));
}

// --- criterion 9 --------------------------------------------------------------

void criterion_invariance_suite(Harness& h) {
  const auto t0 = Clock::now();
  SplitMix64 rng(271828);
  NormalStream nrm(derive_stream(271828, 1));
  int bad_congruence = 0;
  int bad_basis = 0;
  int bad_swap = 0;
  int bad_frobenius = 0;

  // (a) congruence invariance of the lambda spectrum.
  for (int rep = 0; rep < 200; ++rep) {
    const int d = 2 + static_cast<int>(rng.next_below(5));
    const EnsembleSpec spec{d, EnsembleKind::SameMeanPD, 100.0, 1,
                            static_cast<std::uint64_t>(52000 + rep)};
    const GaussianPair p = generate(spec)[0];
    Matrix a(d, d);
    do {
      for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
          a(i, j) = nrm.next();
        }
      }
    } while (std::abs(a.determinant()) < 0.1);
    Matrix c1 = a * p.first.cov() * a.transpose();
    Matrix c2 = a * p.second.cov() * a.transpose();
    c1 = 0.5 * (c1 + c1.transpose()).eval();
    c2 = 0.5 * (c2 + c2.transpose()).eval();
    const Vector base = relative_spectrum(p.first.cov(), p.second.cov()).lambdas;
    const Vector mapped = relative_spectrum(c1, c2).lambdas;
    for (Index i = 0; i < d; ++i) {
      if (std::abs(base(i) - mapped(i)) >
          1e-6 * std::max(1.0, std::abs(base(i)))) {
        ++bad_congruence;
        break;
      }
    }
  }

  // (b) complement-basis independence of term_spec.
  for (int rep = 0; rep < 200; ++rep) {
    const int d = 2 + static_cast<int>(rng.next_below(7));
    const EnsembleSpec spec{d, EnsembleKind::DiffMean, 1e3, 1,
                            static_cast<std::uint64_t>(53000 + rep)};
    const GaussianPair p = generate(spec)[0];
    const MeanGapDecomposition dec = mean_gap_decomposition(p.first, p.second);
    const Index k = dec.pi.cols();
    Matrix g(k, k);
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < k; ++j) {
        g(i, j) = nrm.next();
      }
    }
    const Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix pi2 = dec.pi * (qr.householderQ() * Matrix::Identity(k, k));
    const double spec2 =
        relative_spectrum(pi2.transpose() * p.first.cov() * pi2,
                          pi2.transpose() * p.second.cov() * pi2)
            .rho;
    if (std::abs(dec.term_spec - spec2) > 1e-8 * std::max(1.0, dec.term_spec)) {
      ++bad_basis;
    }
  }

  // (c) swap property of min{1, rho}.
  for (int rep = 0; rep < 200; ++rep) {
    const int d = 1 + static_cast<int>(rng.next_below(8));
    const EnsembleSpec spec{d, EnsembleKind::SameMeanPD, 1e3, 1,
                            static_cast<std::uint64_t>(54000 + rep)};
    const GaussianPair p = generate(spec)[0];
    const double r12 =
        std::min(1.0, relative_spectrum(p.first.cov(), p.second.cov()).rho);
    const double r21 =
        std::min(1.0, relative_spectrum(p.second.cov(), p.first.cov()).rho);
    const double ratio = r12 / r21;
    if (!(ratio >= 0.5 && ratio <= 2.0)) {
      ++bad_swap;
    }
  }

  // (d) Frobenius identity for rho^2.
  for (int rep = 0; rep < 200; ++rep) {
    const int d = 1 + static_cast<int>(rng.next_below(8));
    const EnsembleSpec spec{d, EnsembleKind::SameMeanPD, 1e3, 1,
                            static_cast<std::uint64_t>(55000 + rep)};
    const GaussianPair p = generate(spec)[0];
    const double rho = relative_spectrum(p.first.cov(), p.second.cov()).rho;
    const Matrix is = inv_sqrt_psd(p.first.cov());
    const double frob2 =
        (is * p.second.cov() * is - Matrix::Identity(d, d)).squaredNorm();
    if (std::abs(rho * rho - frob2) > 1e-8 * std::max(1.0, frob2)) {
      ++bad_frobenius;
    }
  }

  std::ostringstream detail;
  detail << "congruence " << bad_congruence << ", basis " << bad_basis
         << ", swap " << bad_swap << ", frobenius " << bad_frobenius
         << " bad out of 200 each";
  h.report(9, "invariance suite",
           bad_congruence + bad_basis + bad_swap + bad_frobenius == 0,
           detail.str(), seconds_since(t0));
}

// --- criterion 10 -------------------------------------------------------------

void criterion_degenerate_dispatch(Harness& h) {
  const auto t0 = Clock::now();
  int bad = 0;
  for (int d = 2; d <= 6; ++d) {
    const EnsembleSpec spec{d, EnsembleKind::SameRangeSingular, 1e3, 12,
                            static_cast<std::uint64_t>(56000 + d)};
    for (const GaussianPair& p : generate(spec)) {
      const BoundReport full = assess(p.first, p.second);
      const RangeBasis rb = detect_range(p.second.cov());
      const BoundReport reduced = assess(project_gaussian(p.first, rb.basis),
                                         project_gaussian(p.second, rb.basis));
      if (std::abs(full.best_lower - reduced.best_lower) > 1e-6 ||
          std::abs(full.best_upper - reduced.best_upper) > 1e-6 ||
          full.intervals.size() != reduced.intervals.size()) {
        ++bad;
      }
    }
    const EnsembleSpec dspec{d, EnsembleKind::DisjointSupport, 1e3, 12,
                             static_cast<std::uint64_t>(57000 + d)};
    for (const GaussianPair& p : generate(dspec)) {
      const BoundReport r = assess(p.first, p.second);
      if (r.intervals.size() != 1 || r.best_lower != 1.0 ||
          r.best_upper != 1.0 ||
          r.intervals[0].method() != Method::DisjointSupport) {
        ++bad;
      }
    }
  }
  h.report(10, "degenerate dispatch: projection equivalence and disjoint [1,1]",
           bad == 0, std::to_string(bad) + " mismatches", seconds_since(t0));
}

// --- criterion 11 -------------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_cli_determinism(Harness& h) {
  const auto t0 = Clock::now();
  {
    std::ofstream input("acceptance_cli_input.json");
    input << R"({
  "pairs": [
    {"label": "unit-shift",
     "first":  {"mean": [0.0], "cov": [[1.0]]},
     "second": {"mean": [1.0], "cov": [[1.0]]}}
  ],
  "ensembles": [
    {"dim": 3, "kind": "diff_mean", "count": 6, "seed": 5},
    {"dim": 2, "kind": "same_range_singular", "count": 4, "seed": 6},
    {"dim": 1, "kind": "one_dim", "count": 5, "seed": 7},
    {"dim": 4, "kind": "same_mean_pd", "count": 5, "seed": 8},
    {"dim": 2, "kind": "disjoint_support", "count": 3, "seed": 9}
  ]
})";
  }
  const auto run = [&](const std::string& threads, const std::string& out) {
    const std::string cmd = std::string(TVBOUND_CLI_PATH) +
                            " --input acceptance_cli_input.json --oracle auto"
                            " --samples 20000 --seed 99 --threads " +
                            threads + " > " + out + " 2> /dev/null";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  const int e1 = run("1", "acceptance_cli_a.json");
  const int e2 = run("2", "acceptance_cli_b.json");
  const int e3 = run("2", "acceptance_cli_c.json");
  const std::string a = slurp("acceptance_cli_a.json");
  const std::string b = slurp("acceptance_cli_b.json");
  const std::string c = slurp("acceptance_cli_c.json");
  const bool ok = e1 == 0 && e2 == 0 && e3 == 0 && !a.empty() && a == b && a == c;
  std::ostringstream detail;
  detail << "exits " << e1 << "/" << e2 << "/" << e3 << ", " << a.size()
         << " bytes, byte-identical across --threads 1/2";
  h.report(11, "CLI determinism under different parallelism settings", ok,
           detail.str(), seconds_since(t0));
}

}  // namespace

int main() {
  Harness h;
  criterion_exact_agreement(h);
  criterion_thm1_sandwich(h);
  criterion_thm2_sandwich(h);
  criterion_thm3_exact(h);
  criterion_golden_cdf(h);
  criterion_variance_gap(h);
  criteria_hellinger_pinsker(h);
  criterion_invariance_suite(h);
  criterion_degenerate_dispatch(h);
  criterion_cli_determinism(h);

  if (h.failures == 0) {
    std::printf("acceptance: all criteria passed\n");
  } else {
    std::printf("acceptance: %d criterion(s) FAILED\n", h.failures);
  }
  return h.failures;
}
