#include <string>
#include <utility>

#include "midec/errors.hpp"
#include "midec/harness.hpp"

namespace midec {

namespace {

// name -> JSON document
const std::pair<const char*, const char*> kPresets[] = {
    {"ula_gaussian", R"({
  "name": "ula_gaussian",
  "description": "ULA on N(0, 1) with eta = 0.1; theorem bound from l = 1 against the exact MI",
  "target": {"kind": "gaussian", "mean": [0.0], "covariance": [[1.0]]},
  "chain": {"kind": "ula", "eta": 0.1, "record_steps": {"from": 1, "to": 50},
            "n_chains": 100000, "seed": 20240611, "init": {"mean": [0.0], "covariance": [[1.0]]}},
  "generator": "kl",
  "reference": 1,
  "output": "out/ula_gaussian"
})"},
    {"proximal_gaussian", R"({
  "name": "proximal_gaussian",
  "description": "Proximal sampler with exact Gaussian RGO on N(0, 1), eta = 1",
  "target": {"kind": "gaussian", "mean": [0.0], "covariance": [[1.0]]},
  "chain": {"kind": "proximal", "eta": 1.0, "record_steps": {"from": 1, "to": 20},
            "n_chains": 100000, "seed": 20240612, "init": {"mean": [0.0], "covariance": [[1.0]]}},
  "generator": "kl",
  "reference": 1,
  "output": "out/proximal_gaussian"
})"},
    {"langevin_ou", R"({
  "name": "langevin_ou",
  "description": "Langevin dynamics on N(0, 1) (exact OU transition) on a time grid 0.1..10",
  "target": {"kind": "gaussian", "mean": [0.0], "covariance": [[1.0]]},
  "chain": {"kind": "langevin_em", "record_times": {"start": 0.1, "stop": 10.0, "count": 100},
            "exact_gaussian": true, "n_chains": 20000, "seed": 20240613,
            "init": {"mean": [0.0], "covariance": [[1.0]]}},
  "generator": "kl",
  "reference": 0.1,
  "output": "out/langevin_ou"
})"},
    {"ula_anisotropic", R"({
  "name": "ula_anisotropic",
  "description": "ULA on a rotated 2-d Gaussian with eigenvalues 1 and 0.25",
  "target": {"kind": "gaussian", "mean": [1.0, -1.0], "covariance": [[0.625, 0.375], [0.375, 0.625]]},
  "chain": {"kind": "ula", "eta": 0.1, "record_steps": {"from": 1, "to": 40},
            "n_chains": 50000, "seed": 20240614, "init": {"mean": [0.0, 0.0], "covariance": 1.0}},
  "generator": "kl",
  "reference": 1,
  "output": "out/ula_anisotropic"
})"},
    {"proximal_logcosh", R"({
  "name": "proximal_logcosh",
  "description": "Proximal sampler with rejection RGO on the 2-d logcosh potential",
  "target": {"kind": "builtin", "name": "logcosh", "dim": 2, "alpha": 1.0},
  "chain": {"kind": "proximal", "eta": 0.2, "record_steps": {"from": 1, "to": 10},
            "n_chains": 20000, "seed": 20240615, "init": {"mean": [0.0, 0.0], "covariance": 1.0}},
  "generator": "kl",
  "reference": 1,
  "output": "out/proximal_logcosh"
})"},
    {"langevin_em_logcosh", R"({
  "name": "langevin_em_logcosh",
  "description": "Euler-Maruyama Langevin on the 1-d logcosh potential",
  "target": {"kind": "builtin", "name": "logcosh", "dim": 1, "alpha": 1.0},
  "chain": {"kind": "langevin_em", "em_substep": 0.01,
            "record_times": {"start": 0.25, "stop": 2.0, "count": 8},
            "n_chains": 20000, "seed": 20240616, "init": {"mean": [0.0], "covariance": [[1.0]]}},
  "generator": "kl",
  "reference": 0.25,
  "output": "out/langevin_em_logcosh"
})"},
    {"ula_chi2_1d", R"({
  "name": "ula_chi2_1d",
  "description": "Chi-squared mutual information along ULA on N(0, 1); oracle and bounds only",
  "target": {"kind": "gaussian", "mean": [0.0], "covariance": [[1.0]]},
  "chain": {"kind": "ula", "eta": 0.1, "record_steps": {"from": 1, "to": 30},
            "n_chains": 0, "seed": 20240617, "init": {"mean": [0.0], "covariance": [[1.0]]}},
  "generator": "chi2",
  "reference": 1,
  "output": "out/ula_chi2_1d"
})"},
};

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : kPresets) out.emplace_back(name);
  return out;
}

std::string preset_json(const std::string& name) {
  for (const auto& [n, text] : kPresets)
    if (name == n) return std::string(text) + "\n";
  throw InputError("unknown preset '" + name + "'");
}

ExperimentConfig preset_config(const std::string& name) {
  return parse_config(preset_json(name), "preset:" + name);
}

}  // namespace midec
