#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "midec/bounds.hpp"
#include "midec/errors.hpp"
#include "midec/estimation.hpp"
#include "midec/gaussian_oracle.hpp"
#include "midec/harness.hpp"
#include "midec/phi_info.hpp"
#include "midec/samplers.hpp"

namespace py = pybind11;
using namespace midec;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

using SC = SobolevConstant;

double to_float(const MaybeInfinite& v) { return v.as_double(); }

GaussianDist gaussian(const VectorXd& mean, const MatrixXd& cov) { return GaussianDist(mean, cov); }

// Columns are chains in C++; Python callers get one row per chain.
py::dict run_chains(const std::string& kind, const VectorXd& mean, const MatrixXd& cov,
                    const std::vector<double>& record, std::size_t n_chains, std::uint64_t seed,
                    double eta, std::optional<VectorXd> init_mean, std::optional<MatrixXd> init_cov,
                    unsigned threads) {
  ChainConfig cfg;
  cfg.kind = chain_kind_from_name(kind);
  cfg.eta = eta;
  cfg.n_chains = n_chains;
  cfg.seed = seed;
  cfg.threads = threads;
  const auto d = mean.size();
  cfg.init = GaussianDist(init_mean.value_or(VectorXd::Zero(d)), init_cov.value_or(MatrixXd::Identity(d, d)));
  if (cfg.kind == ChainKind::LangevinEM) {
    cfg.record_times = record;
  } else {
    for (double k : record) cfg.record_steps.push_back(static_cast<std::int64_t>(k));
  }
  TrajectorySample s;
  {
    py::gil_scoped_release release;
    s = run_chain_pairs(cfg, gaussian(mean, cov));
  }
  py::list xk;
  for (const auto& m : s.xk) xk.append(MatrixXd(m.transpose()));
  py::dict out;
  out["x0"] = MatrixXd(s.x0.transpose());
  out["xk"] = xk;
  out["record_points"] = s.record_points;
  out["oracle_call_count"] = s.oracle_call_count;
  return out;
}

py::tuple mi_plugin(const MatrixXd& x0, const MatrixXd& xk, int replicates, double level,
                    std::uint64_t seed) {
  MiEstimate est;
  {
    py::gil_scoped_release release;
    est = mi_plugin_with_ci(x0.transpose(), xk.transpose(), {replicates, level, seed});
  }
  return py::make_tuple(to_float(est.value), est.ci_halfwidth);
}

py::dict run_experiment_json(const std::string& json_text, std::optional<unsigned> threads) {
  ExperimentConfig cfg = parse_config(json_text, "<python>");
  if (threads) cfg.chain.threads = *threads;
  ExperimentResult res;
  {
    py::gil_scoped_release release;
    res = run_experiment(cfg);
  }
  py::list violations;
  for (const auto& v : res.report.violations) violations.append(py::make_tuple(v.index, v.kind, v.margin));
  py::dict out;
  out["csv"] = report_to_csv(res.report);
  out["summary"] = summary_to_json(cfg, res);
  out["violations"] = violations;
  out["exit_status"] = res.exit_status();
  return out;
}

}  // namespace

PYBIND11_MODULE(_midec, m) {
  m.doc() = "Mutual-information decay along Langevin, ULA and proximal sampler chains";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<CapabilityError>(m, "CapabilityError", base.ptr());
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<OptimizationError>(m, "OptimizationError", base.ptr());
  py::register_exception<ChainFailure>(m, "ChainFailure", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.def("ou_mi_exact", [](double alpha, double t, int d) { return to_float(ou_mi_exact(alpha, t, d)); },
        py::arg("alpha"), py::arg("t"), py::arg("dim") = 1);
  m.def("ula_gaussian_mi_exact",
        [](double alpha, double eta, std::int64_t k, int d) { return to_float(ula_gaussian_mi_exact(alpha, eta, k, d)); },
        py::arg("alpha"), py::arg("eta"), py::arg("k"), py::arg("dim") = 1);
  m.def("proximal_gaussian_mi_exact",
        [](double alpha, double eta, std::int64_t k, int d) {
          return to_float(proximal_gaussian_mi_exact(alpha, eta, k, d));
        },
        py::arg("alpha"), py::arg("eta"), py::arg("k"), py::arg("dim") = 1);

  m.def("phi_divergence_gaussian",
        [](const std::string& gen, const VectorXd& mean_mu, const MatrixXd& cov_mu, const VectorXd& mean_nu,
           const MatrixXd& cov_nu) {
          return phi_divergence_gaussian(PhiGenerator::from_name(gen), gaussian(mean_mu, cov_mu),
                                         gaussian(mean_nu, cov_nu));
        },
        py::arg("generator"), py::arg("mean_mu"), py::arg("cov_mu"), py::arg("mean_nu"), py::arg("cov_nu"));
  m.def("phi_mutual_info_gaussian",
        [](const std::string& gen, const MatrixXd& cov0, const MatrixXd& covk, const MatrixXd& cross) {
          const JointGaussianState j{VectorXd::Zero(cov0.rows()), VectorXd::Zero(covk.rows()), cov0, covk, cross};
          return to_float(phi_mutual_info_gaussian(j, PhiGenerator::from_name(gen)));
        },
        py::arg("generator"), py::arg("cov0"), py::arg("covk"), py::arg("cross"));

  m.def("bound_mi_langevin",
        [](double alpha, double alpha_s, double mi_s, double dt) { return bound_mi_langevin(alpha, SC(alpha_s), mi_s, dt); },
        py::arg("alpha"), py::arg("alpha_s"), py::arg("mi_s"), py::arg("dt"));
  m.def("bound_mi_ula",
        [](double alpha, double eta, double alpha_l, double mi_l, std::int64_t steps) {
          return bound_mi_ula(alpha, eta, SC(alpha_l), mi_l, steps);
        },
        py::arg("alpha"), py::arg("eta"), py::arg("alpha_l"), py::arg("mi_l"), py::arg("steps"));
  m.def("bound_mi_proximal",
        [](double alpha, double eta, double alpha_l, double mi_l, std::int64_t steps) {
          return bound_mi_proximal(alpha, eta, SC(alpha_l), mi_l, steps);
        },
        py::arg("alpha"), py::arg("eta"), py::arg("alpha_l"), py::arg("mi_l"), py::arg("steps"));
  m.def("iters_ula",
        [](double eps, double alpha, double eta, double alpha_l, double mi_l, std::int64_t ell) {
          return iters_ula(eps, alpha, eta, SC(alpha_l), mi_l, ell);
        },
        py::arg("epsilon"), py::arg("alpha"), py::arg("eta"), py::arg("alpha_l"), py::arg("mi_l"), py::arg("ell") = 0);
  m.def("iters_proximal",
        [](double eps, double alpha, double eta, double alpha_l, double mi_l, std::int64_t ell) {
          return iters_proximal(eps, alpha, eta, SC(alpha_l), mi_l, ell);
        },
        py::arg("epsilon"), py::arg("alpha"), py::arg("eta"), py::arg("alpha_l"), py::arg("mi_l"), py::arg("ell") = 0);
  m.def("sobolev_evolution_langevin",
        [](double alpha, double alpha_s, double dt) { return sobolev_evolution_langevin(alpha, SC(alpha_s), dt).value(); },
        py::arg("alpha"), py::arg("alpha_s"), py::arg("dt"));
  m.def("sobolev_evolution_ula",
        [](double alpha_rho, double gamma, double eta) { return sobolev_evolution_ula(SC(alpha_rho), gamma, eta).value(); },
        py::arg("alpha_rho"), py::arg("gamma"), py::arg("eta"));
  m.def("sobolev_evolution_proximal",
        [](double alpha, double alpha_rho, double eta) {
          return sobolev_evolution_proximal(alpha, SC(alpha_rho), eta).value();
        },
        py::arg("alpha"), py::arg("alpha_rho"), py::arg("eta"));
  m.def("bound_mi_regularity_ld", &bound_mi_regularity_ld, py::arg("alpha"), py::arg("t"), py::arg("var0"));
  m.def("bound_mi_regularity_ula", &bound_mi_regularity_ula, py::arg("alpha"), py::arg("eta"), py::arg("k"),
        py::arg("var0"));
  m.def("bound_cov_from_mi", &bound_cov_from_mi, py::arg("mi"), py::arg("var_opnorm"), py::arg("xi"));

  m.def("run_chains", &run_chains, py::arg("kind"), py::arg("mean"), py::arg("cov"), py::arg("record"),
        py::arg("n_chains"), py::arg("seed") = 0, py::arg("eta") = 0.1, py::arg("init_mean") = py::none(),
        py::arg("init_cov") = py::none(), py::arg("threads") = 0,
        "Simulate chains on a Gaussian target. Returns x0 (n x d), xk (one n x d array per record point) "
        "and oracle_call_count.");
  m.def("mi_plugin", &mi_plugin, py::arg("x0"), py::arg("xk"), py::arg("replicates") = 200, py::arg("level") = 0.95,
        py::arg("seed") = 0, "Gaussian plug-in MI and bootstrap CI half-width for (n x d) sample arrays.");
  m.def("run_experiment", &run_experiment_json, py::arg("config_json"), py::arg("threads") = py::none(),
        "Run an experiment from JSON text. Returns csv, summary (JSON text), violations and exit_status.");
  m.def("preset_names", &preset_names);
  m.def("preset_json", &preset_json, py::arg("name"));
}
