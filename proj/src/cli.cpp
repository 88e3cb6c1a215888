#include "midec/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>

#include "midec/bounds.hpp"
#include "midec/errors.hpp"
#include "midec/gaussian_oracle.hpp"
#include "midec/harness.hpp"

namespace midec {

namespace {

constexpr int kUsageError = 2;

struct BoundsArgs {
  std::string chain;
  double alpha = 1.0;
  double eta = 0.1;
  double sobolev = 1.0;
  double mi_ref = 1.0;
  std::int64_t steps = 10;
  double dt = 1.0;
};

struct OracleArgs {
  std::string chain;
  double alpha = 1.0;
  double eta = 0.1;
  std::int64_t k = 1;
  double t = 1.0;
  int dim = 1;
};

int run_bounds(const BoundsArgs& a, std::ostream& out) {
  const SobolevConstant s(a.sobolev);
  out << "steps,thm_bound,thm_bound_sharp\n";
  if (a.chain == "langevin") {
    for (std::int64_t i = 0; i <= a.steps; ++i) {
      const double t = a.dt * static_cast<double>(i);
      out << format_real(t) << ',' << format_real(bound_mi_langevin(a.alpha, s, a.mi_ref, t)) << ','
          << format_real(bound_mi_langevin_sharp(a.alpha, s, a.mi_ref, t)) << '\n';
    }
    return 0;
  }
  // Sharp column: product of one-step contraction coefficients along the
  // Sobolev-constant recursion started at the reference constant.
  SobolevConstant rho = s;
  double sharp = a.mi_ref;
  const double gamma = 1 - a.eta * a.alpha;
  for (std::int64_t i = 0; i <= a.steps; ++i) {
    double thm = 0.0;
    if (a.chain == "ula") {
      thm = bound_mi_ula(a.alpha, a.eta, s, a.mi_ref, i);
    } else {
      thm = bound_mi_proximal(a.alpha, a.eta, s, a.mi_ref, i);
    }
    out << i << ',' << format_real(thm) << ',' << format_real(sharp) << '\n';
    if (a.chain == "ula") {
      sharp *= contraction_ula(gamma, a.eta, rho);
      rho = sobolev_evolution_ula(rho, gamma, a.eta);
    } else {
      sharp *= contraction_proximal(a.alpha, a.eta, rho);
      rho = sobolev_evolution_proximal(a.alpha, rho, a.eta);
    }
  }
  return 0;
}

int run_oracle(const OracleArgs& a, bool have_k, bool have_t, std::ostream& out) {
  MaybeInfinite mi;
  if (a.chain == "langevin") {
    if (!have_t && have_k) throw InputError("oracle: langevin takes --t");
    mi = ou_mi_exact(a.alpha, a.t, a.dim);
  } else {
    if (!have_k && have_t) throw InputError("oracle: discrete chains take --k");
    mi = a.chain == "ula" ? ula_gaussian_mi_exact(a.alpha, a.eta, a.k, a.dim)
                          : proximal_gaussian_mi_exact(a.alpha, a.eta, a.k, a.dim);
  }
  out << mi.to_string() << '\n';
  return 0;
}

int run_run(const std::string& config, const std::string& preset, const std::string& out_dir,
            int threads, std::ostream& out) {
  if (config.empty() == preset.empty()) throw InputError("run: give exactly one of --config or --preset");
  ExperimentConfig cfg = config.empty() ? preset_config(preset) : load_config(config);
  if (threads >= 0) cfg.chain.threads = static_cast<unsigned>(threads);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (cfg.output_dir.empty()) cfg.output_dir = "out/" + cfg.name;
  const ExperimentResult res = run_experiment(cfg);
  write_outputs(cfg.output_dir, cfg, res);
  out << cfg.name << ": " << res.report.size() << " record points, " << res.n_chains_run
      << " chains, " << res.report.violations.size() << " violations\n";
  for (const auto& v : res.report.violations)
    out << "  violation at " << format_real(v.index) << ": " << v.kind << " by " << format_real(v.margin) << '\n';
  for (const auto& n : res.notes) out << "  note: " << n << '\n';
  out << "  wrote " << cfg.output_dir << "/report.csv and summary.json\n";
  return res.exit_status();
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mutual-information decay along Langevin, ULA and proximal sampler chains", "midec"};
  app.require_subcommand(1);

  std::string config, preset, out_dir;
  int threads = -1;
  auto* run = app.add_subcommand("run", "Run an experiment config and write report.csv and summary.json");
  run->add_option("--config", config, "Path to the JSON experiment config");
  run->add_option("--preset", preset, "Name of a bundled preset instead of --config");
  run->add_option("--out", out_dir, "Output directory (overrides the config)");
  run->add_option("--threads", threads, "Worker threads (0 = auto; default MIDEC_THREADS)");

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Print the theorem bound table for given constants");
  bounds->add_option("--chain", ba.chain, "langevin | ula | proximal")
      ->required()
      ->check(CLI::IsMember({"langevin", "ula", "proximal"}));
  bounds->add_option("--alpha", ba.alpha, "Strong log-concavity of the target")->required();
  bounds->add_option("--eta", ba.eta, "Step size (ula, proximal)");
  bounds->add_option("--sobolev", ba.sobolev, "Sobolev constant at the reference index")->required();
  bounds->add_option("--mi-ref", ba.mi_ref, "Mutual information at the reference index")->required();
  bounds->add_option("--steps", ba.steps, "Number of steps after the reference")->required();
  bounds->add_option("--dt", ba.dt, "Time between rows (langevin)");

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "Print the exact MI for an isotropic Gaussian target");
  oracle->add_option("--chain", oa.chain, "langevin | ula | proximal")
      ->required()
      ->check(CLI::IsMember({"langevin", "ula", "proximal"}));
  oracle->add_option("--alpha", oa.alpha, "Target is N(0, I/alpha)")->required();
  oracle->add_option("--eta", oa.eta, "Step size (ula, proximal)");
  auto* k_opt = oracle->add_option("--k", oa.k, "Step index (ula, proximal)");
  auto* t_opt = oracle->add_option("--t", oa.t, "Time (langevin)");
  oracle->add_option("--dim", oa.dim, "Dimension");

  std::string preset_name;
  auto* presets = app.add_subcommand("presets", "Bundled experiment configs");
  presets->require_subcommand(1);
  presets->add_subcommand("list", "List preset names");
  auto* show = presets->add_subcommand("show", "Print a preset's JSON");
  show->add_option("name", preset_name, "Preset name")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kUsageError;
  }

  try {
    if (run->parsed()) return run_run(config, preset, out_dir, threads, out);
    if (bounds->parsed()) return run_bounds(ba, out);
    if (oracle->parsed()) return run_oracle(oa, k_opt->count() > 0, t_opt->count() > 0, out);
    if (presets->parsed()) {
      if (show->parsed()) {
        out << preset_json(preset_name);
      } else {
        for (const auto& n : preset_names()) out << n << '\n';
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "midec: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace midec
