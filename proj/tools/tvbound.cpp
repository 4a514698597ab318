// tvbound: batch certified TV-distance bounds for Gaussian pairs.
//
// Reads a JSON document of Gaussian pairs (and/or ensemble specs), computes
// every requested bound per pair plus an optional ground-truth oracle
// estimate, and emits a schema-stable JSON or table report. Exit codes:
// 0 = clean, 1 = at least one bound violation, 2 = malformed input.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tvgauss/bounds.hpp"
#include "tvgauss/ensemble.hpp"
#include "tvgauss/oracle.hpp"
#include "tvgauss/rng.hpp"

namespace {

using nlohmann::json;

struct JobConfig {
  std::string input_path;
  std::set<std::string> methods;  // empty = all
  bool oracle_auto = false;
  std::uint64_t samples = 200'000;
  std::uint64_t seed = 1;
  double rank_tol = tvgauss::kDefaultRankTol;
  double range_tol = tvgauss::kDefaultRangeTol;
  std::string format = "json";
  unsigned threads = 0;
};

struct LabeledPair {
  std::string label;
  tvgauss::Gaussian first;
  tvgauss::Gaussian second;
};

struct PairResult {
  std::string label;
  tvgauss::Index dim;
  std::vector<tvgauss::BoundInterval> intervals;
  double best_lower = 0.0;
  double best_upper = 1.0;
  std::vector<std::string> flags;
  std::optional<tvgauss::OracleEstimate> oracle;
  bool violation = false;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

tvgauss::Vector parse_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw InputError(where + ": expected a non-empty array of numbers");
  }
  tvgauss::Vector v(static_cast<tvgauss::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw InputError(where + "[" + std::to_string(i) + "]: expected a number");
    }
    v(static_cast<tvgauss::Index>(i)) = j[i].get<double>();
  }
  return v;
}

tvgauss::Matrix parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw InputError(where + ": expected a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  tvgauss::Matrix m;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_where = where + "[" + std::to_string(i) + "]";
    const tvgauss::Vector row = parse_vector(j[i], row_where);
    if (i == 0) {
      m.resize(static_cast<tvgauss::Index>(rows), row.size());
    } else if (row.size() != m.cols()) {
      throw InputError(row_where + ": ragged matrix, expected " +
                       std::to_string(m.cols()) + " entries");
    }
    m.row(static_cast<tvgauss::Index>(i)) = row.transpose();
  }
  return m;
}

tvgauss::Gaussian parse_gaussian(const json& j, const std::string& where,
                                 double rank_tol) {
  if (!j.is_object() || !j.contains("mean") || !j.contains("cov")) {
    throw InputError(where + ": expected an object with 'mean' and 'cov'");
  }
  const tvgauss::Vector mean = parse_vector(j["mean"], where + ".mean");
  const tvgauss::Matrix cov = parse_matrix(j["cov"], where + ".cov");
  try {
    return tvgauss::Gaussian(mean, cov, rank_tol);
  } catch (const tvgauss::Error& e) {
    throw InputError(where + ": " + e.what());
  }
}

std::vector<LabeledPair> load_input(const JobConfig& cfg) {
  std::ifstream in(cfg.input_path);
  if (!in) {
    throw InputError("cannot open input file: " + cfg.input_path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) {
    throw InputError("top level: expected an object");
  }
  std::vector<LabeledPair> pairs;
  if (doc.contains("pairs")) {
    const json& jp = doc["pairs"];
    if (!jp.is_array()) {
      throw InputError("pairs: expected an array");
    }
    for (std::size_t i = 0; i < jp.size(); ++i) {
      const std::string where = "pairs[" + std::to_string(i) + "]";
      const json& item = jp[i];
      if (!item.is_object() || !item.contains("first") ||
          !item.contains("second")) {
        throw InputError(where + ": expected an object with 'first' and 'second'");
      }
      std::string label = item.value("label", "pair" + std::to_string(i));
      tvgauss::Gaussian g1 =
          parse_gaussian(item["first"], where + ".first", cfg.rank_tol);
      tvgauss::Gaussian g2 =
          parse_gaussian(item["second"], where + ".second", cfg.rank_tol);
      if (g1.dim() != g2.dim()) {
        throw InputError(where + ": first has dimension " +
                         std::to_string(g1.dim()) + " but second has " +
                         std::to_string(g2.dim()));
      }
      pairs.push_back({std::move(label), std::move(g1), std::move(g2)});
    }
  }
  if (doc.contains("ensembles")) {
    const json& je = doc["ensembles"];
    if (!je.is_array()) {
      throw InputError("ensembles: expected an array");
    }
    for (std::size_t i = 0; i < je.size(); ++i) {
      const std::string where = "ensembles[" + std::to_string(i) + "]";
      const json& item = je[i];
      if (!item.is_object() || !item.contains("dim") || !item.contains("kind")) {
        throw InputError(where + ": expected an object with 'dim' and 'kind'");
      }
      tvgauss::EnsembleSpec spec;
      try {
        spec.dim = item["dim"].get<int>();
        spec.kind = tvgauss::parse_ensemble_kind(
            item["kind"].get<std::string>());
        spec.condition_cap = item.value("condition_cap", 1e3);
        spec.count = item.value("count", 1);
        spec.seed = item.value("seed", std::uint64_t{0});
      } catch (const json::exception& e) {
        throw InputError(where + ": " + e.what());
      }
      const std::string base =
          item.value("label", std::string(tvgauss::ensemble_kind_name(spec.kind)));
      std::vector<tvgauss::GaussianPair> generated;
      try {
        generated = tvgauss::generate(spec);
      } catch (const tvgauss::Error& e) {
        throw InputError(where + ": " + e.what());
      }
      for (std::size_t k = 0; k < generated.size(); ++k) {
        pairs.push_back({base + "/" + std::to_string(k),
                         std::move(generated[k].first),
                         std::move(generated[k].second)});
      }
    }
  }
  if (pairs.empty()) {
    throw InputError("input contains no pairs (need 'pairs' and/or 'ensembles')");
  }
  return pairs;
}

PairResult evaluate_pair(const LabeledPair& p, std::uint64_t index,
                         const JobConfig& cfg) {
  PairResult res;
  res.label = p.label;
  res.dim = p.first.dim();

  tvgauss::AssessOptions opt;
  opt.rank_tol = cfg.rank_tol;
  opt.range_tol = cfg.range_tol;
  tvgauss::BoundReport report = tvgauss::assess(p.first, p.second, opt);
  res.flags = report.flags;

  if (cfg.methods.empty()) {
    res.intervals = report.intervals;
  } else {
    for (const tvgauss::BoundInterval& iv : report.intervals) {
      const std::string name(tvgauss::method_name(iv.method()));
      // The support dispatch is not a selectable method; always keep it.
      if (iv.method() == tvgauss::Method::DisjointSupport ||
          cfg.methods.count(name) != 0) {
        res.intervals.push_back(iv);
      }
    }
  }
  // make_report reconciles roundoff-scale crossings between exact and
  // inexact intervals.
  const tvgauss::BoundReport merged = tvgauss::make_report(res.intervals, {});
  res.best_lower = merged.best_lower;
  res.best_upper = merged.best_upper;

  if (cfg.oracle_auto) {
    tvgauss::OracleOptions oopt;
    oopt.rank_tol = cfg.rank_tol;
    oopt.range_tol = cfg.range_tol;
    oopt.threads = cfg.threads;
    const std::uint64_t pair_seed = tvgauss::derive_stream(cfg.seed, index);
    res.oracle =
        tvgauss::oracle(p.first, p.second, cfg.samples, pair_seed, oopt);
    // The 1e-12 term allows two exact closed-form routes to the same value
    // to disagree by an ulp when the CI is zero.
    const double margin = 4.0 * res.oracle->ci_halfwidth + 1e-12;
    res.violation = res.oracle->estimate < res.best_lower - margin ||
                    res.oracle->estimate > res.best_upper + margin;
  }
  return res;
}

// ---- output ----------------------------------------------------------------

/// 17 significant digits: enough for an exact double round trip.
std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string render_json(const std::vector<PairResult>& results,
                        std::size_t violations) {
  std::ostringstream os;
  os << "{\n  \"pairs\": [";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const PairResult& r = results[i];
    os << (i == 0 ? "\n" : ",\n");
    os << "    {\"label\": \"" << escape_json(r.label) << "\", \"dim\": "
       << r.dim << ",\n     \"intervals\": [";
    for (std::size_t k = 0; k < r.intervals.size(); ++k) {
      const tvgauss::BoundInterval& iv = r.intervals[k];
      os << (k == 0 ? "" : ", ")
         << "{\"method\": \"" << tvgauss::method_name(iv.method())
         << "\", \"lower\": " << fmt_double(iv.lower())
         << ", \"upper\": " << fmt_double(iv.upper()) << "}";
    }
    os << "],\n     \"best_lower\": " << fmt_double(r.best_lower)
       << ", \"best_upper\": " << fmt_double(r.best_upper) << ",\n     \"flags\": [";
    for (std::size_t k = 0; k < r.flags.size(); ++k) {
      os << (k == 0 ? "" : ", ") << "\"" << escape_json(r.flags[k]) << "\"";
    }
    os << "]";
    if (r.oracle.has_value()) {
      os << ",\n     \"oracle\": {\"method\": \""
         << tvgauss::oracle_method_name(r.oracle->method)
         << "\", \"estimate\": " << fmt_double(r.oracle->estimate)
         << ", \"ci_halfwidth\": " << fmt_double(r.oracle->ci_halfwidth)
         << ", \"samples\": " << r.oracle->samples
         << ", \"seed\": " << r.oracle->seed << "}";
    }
    os << ",\n     \"violation\": " << (r.violation ? "true" : "false") << "}";
  }
  os << "\n  ],\n  \"summary\": {\"pairs\": " << results.size()
     << ", \"violations\": " << violations << "}\n}\n";
  return os.str();
}

std::string render_table(const std::vector<PairResult>& results) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%-24s %-10s %-12s %-12s %-12s %s\n",
                "label", "method", "lower", "upper", "oracle", "verdict");
  os << line;
  for (const PairResult& r : results) {
    for (const tvgauss::BoundInterval& iv : r.intervals) {
      std::snprintf(line, sizeof(line), "%-24s %-10s %-12.6g %-12.6g %-12s %s\n",
                    r.label.c_str(),
                    std::string(tvgauss::method_name(iv.method())).c_str(),
                    iv.lower(), iv.upper(), "", "");
      os << line;
    }
    std::string oracle_txt = "-";
    if (r.oracle.has_value()) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6g", r.oracle->estimate);
      oracle_txt = buf;
    }
    std::snprintf(line, sizeof(line), "%-24s %-10s %-12.6g %-12.6g %-12s %s\n",
                  r.label.c_str(), "best", r.best_lower, r.best_upper,
                  oracle_txt.c_str(),
                  r.oracle.has_value() ? (r.violation ? "VIOLATION" : "ok") : "-");
    os << line;
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "tvbound: certified lower/upper bounds on the total variation distance "
      "between multivariate Gaussians, with ground-truth validation"};

  JobConfig cfg;
  std::string methods_csv = "all";
  std::string oracle_mode = "off";
  app.add_option("--input", cfg.input_path, "input JSON document")->required();
  app.add_option("--methods", methods_csv,
                 "comma-separated subset of thm1,thm2,thm3,kl,hellinger,exact "
                 "(default: all)");
  app.add_option("--oracle", oracle_mode, "off|auto")
      ->check(CLI::IsMember({"off", "auto"}));
  app.add_option("--samples", cfg.samples, "Monte Carlo samples per pair");
  app.add_option("--seed", cfg.seed, "base RNG seed");
  app.add_option("--rank-tol", cfg.rank_tol, "relative rank threshold");
  app.add_option("--range-tol", cfg.range_tol, "range comparison tolerance");
  app.add_option("--format", cfg.format, "json|table")
      ->check(CLI::IsMember({"json", "table"}));
  app.add_option("--threads", cfg.threads,
                 "Monte Carlo worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
      return app.exit(e);
    }
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  cfg.oracle_auto = oracle_mode == "auto";

  // JobConfig invariants.
  if (!(cfg.rank_tol > 0.0 && cfg.rank_tol < 1.0) ||
      !(cfg.range_tol > 0.0 && cfg.range_tol < 1.0)) {
    std::cerr << "error: tolerances must lie in (0, 1)\n";
    return 2;
  }
  if (cfg.oracle_auto && cfg.samples < 10'000) {
    std::cerr << "error: --oracle auto requires --samples >= 10000\n";
    return 2;
  }
  static const std::set<std::string> known_methods = {
      "thm1", "thm2", "thm3", "kl", "hellinger", "exact", "all"};
  {
    std::stringstream ss(methods_csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (token.empty()) continue;
      if (known_methods.count(token) == 0) {
        std::cerr << "error: unknown method '" << token << "'\n";
        return 2;
      }
      if (token != "all") {
        cfg.methods.insert(token);
      }
    }
    if (methods_csv.find("all") != std::string::npos) {
      cfg.methods.clear();  // all = no filter
    }
  }

  std::vector<LabeledPair> pairs;
  try {
    pairs = load_input(cfg);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::vector<PairResult> results;
  results.reserve(pairs.size());
  std::size_t violations = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    results.push_back(evaluate_pair(pairs[i], i, cfg));
    if (results.back().violation) {
      ++violations;
    }
  }

  if (cfg.format == "json") {
    std::cout << render_json(results, violations);
  } else {
    std::cout << render_table(results);
  }
  return violations > 0 ? 1 : 0;
}
