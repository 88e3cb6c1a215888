#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "midec/bounds.hpp"
#include "midec/phi_info.hpp"
#include "midec/samplers.hpp"

namespace midec {

struct TargetSpec {
  std::string kind = "gaussian";  // "gaussian" or "builtin"
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  std::string builtin;            // builtin potential name
  int dim = 1;
  double alpha = 1.0;
};

struct BoundSelection {
  bool thm = true;
  bool sharp = true;
  bool regularity = true;
  bool sobolev = true;
  bool cov = true;
  bool empirical = true;
};

struct Tolerances {
  double mc_sigma = 4.0;
  double dominance_slack = 1e-9;
};

/// Fully resolved experiment plan. See README for the JSON schema.
struct ExperimentConfig {
  std::string name = "experiment";
  TargetSpec target;
  ChainConfig chain;
  PhiGenerator generator{PhiKind::KL};
  /// Reference index l (or time s); defaults to the first positive record point.
  std::optional<double> reference;
  /// Overrides the reference MI used by the theorem bounds.
  std::optional<double> mi_reference;
  BoundSelection bounds;
  std::string output_dir;
  Tolerances tolerances;
  int bootstrap_replicates = 200;
  /// Multiplies thm_bound and thm_bound_sharp; only for exercising the
  /// violation path.
  double thm_bound_scale = 1.0;
};

/// Parses and validates a JSON document. ConfigError carries `source` and
/// the offending field.
ExperimentConfig parse_config(std::string_view json_text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

struct ExperimentResult {
  BoundReport report;
  std::uint64_t oracle_call_count = 0;
  std::size_t n_chains_run = 0;
  /// Empirical MI is a plug-in Gaussian fit; for non-Gaussian targets it is
  /// only a heuristic and is excluded from verification.
  bool empirical_heuristic = false;
  double reference_index = 0.0;
  std::optional<double> mi_reference;
  std::optional<double> sobolev_reference;
  std::vector<std::string> notes;

  int exit_status() const noexcept { return report.violations.empty() ? 0 : 1; }
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Flags index i when exact_mi > thm_bound + slack, when
/// empirical_mi - mc_sigma * ci > thm_bound, or when cov_opnorm > cov_bound + slack.
/// Rows with a heuristic empirical estimate must be passed with
/// `check_empirical = false`.
std::vector<Violation> verify_dominance(const BoundReport& report, const Tolerances& tol,
                                        bool check_empirical = true);

inline constexpr std::string_view kReportCsvHeader =
    "index,time,exact_mi,empirical_mi,ci_halfwidth,thm_bound,thm_bound_sharp,"
    "regularity_bound,sobolev_lower,contraction_coeff,cov_opnorm,cov_bound";

std::string report_to_csv(const BoundReport& report);
/// Inverse of report_to_csv (violations are not stored in the CSV).
BoundReport report_from_csv(std::string_view csv);
std::string summary_to_json(const ExperimentConfig& cfg, const ExperimentResult& result);
/// Writes <dir>/report.csv and <dir>/summary.json, creating dir. InputError on IO failure.
void write_outputs(const std::string& dir, const ExperimentConfig& cfg,
                   const ExperimentResult& result);

std::vector<std::string> preset_names();
/// JSON text of a bundled preset; InputError for unknown names.
std::string preset_json(const std::string& name);
ExperimentConfig preset_config(const std::string& name);

}  // namespace midec
