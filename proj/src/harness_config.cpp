#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "harness_internal.hpp"
#include "midec/errors.hpp"
#include "midec/harness.hpp"

namespace midec {

namespace {

using nlohmann::json;

struct Reader {
  std::string source;

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    throw ConfigError(source, field, msg);
  }

  void allow_only(const json& obj, const std::string& where, std::set<std::string> keys) const {
    if (!obj.is_object()) fail(where, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!keys.count(it.key())) fail(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
  }

  double number(const json& v, const std::string& field) const {
    if (!v.is_number()) fail(field, "expected a number");
    return v.get<double>();
  }

  std::int64_t integer(const json& v, const std::string& field) const {
    if (!v.is_number_integer() && !(v.is_number() && std::floor(v.get<double>()) == v.get<double>()))
      fail(field, "expected an integer");
    return v.is_number_integer() ? v.get<std::int64_t>() : static_cast<std::int64_t>(v.get<double>());
  }

  bool boolean(const json& v, const std::string& field) const {
    if (!v.is_boolean()) fail(field, "expected true or false");
    return v.get<bool>();
  }

  std::string string(const json& v, const std::string& field) const {
    if (!v.is_string()) fail(field, "expected a string");
    return v.get<std::string>();
  }

  Eigen::VectorXd vector(const json& v, const std::string& field) const {
    if (!v.is_array() || v.empty()) fail(field, "expected a non-empty array of numbers");
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
      out(static_cast<Eigen::Index>(i)) = number(v[i], field + "[" + std::to_string(i) + "]");
    return out;
  }

  // A d x d matrix, or a scalar meaning scalar * I.
  Eigen::MatrixXd matrix(const json& v, const std::string& field, Eigen::Index d) const {
    if (v.is_number()) return number(v, field) * Eigen::MatrixXd::Identity(d, d);
    if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != d)
      fail(field, "expected a scalar or a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const Eigen::VectorXd row = vector(v[static_cast<std::size_t>(i)], field);
      if (row.size() != d) fail(field, "row " + std::to_string(i) + " has the wrong length");
      out.row(i) = row;
    }
    return out;
  }

  GaussianDist gaussian(const json& obj, const std::string& where, std::optional<Eigen::Index> dim) const {
    allow_only(obj, where, {"mean", "covariance", "dim"});
    Eigen::Index d = 0;
    Eigen::VectorXd mean;
    if (obj.contains("mean")) {
      mean = vector(obj["mean"], where + ".mean");
      d = mean.size();
    } else if (obj.contains("dim")) {
      d = integer(obj["dim"], where + ".dim");
    } else if (dim) {
      d = *dim;
    } else if (obj.contains("covariance") && obj["covariance"].is_array()) {
      d = static_cast<Eigen::Index>(obj["covariance"].size());
    } else {
      fail(where + ".mean", "missing (give mean, dim or a covariance matrix)");
    }
    if (d < 1) fail(where + ".dim", "must be positive");
    if (dim && d != *dim) fail(where + ".mean", "dimension differs from the target");
    if (mean.size() == 0) mean = Eigen::VectorXd::Zero(d);
    const Eigen::MatrixXd cov = obj.contains("covariance")
                                    ? matrix(obj["covariance"], where + ".covariance", d)
                                    : Eigen::MatrixXd::Identity(d, d);
    try {
      return GaussianDist(mean, cov);
    } catch (const Error& e) {
      fail(where + ".covariance", e.what());
    }
  }
};

std::vector<std::int64_t> read_steps(const Reader& r, const json& v) {
  const std::string f = "chain.record_steps";
  std::vector<std::int64_t> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(r.integer(v[i], f));
  } else if (v.is_object()) {
    r.allow_only(v, f, {"from", "to", "step"});
    if (!v.contains("from") || !v.contains("to")) r.fail(f, "range needs 'from' and 'to'");
    const auto from = r.integer(v["from"], f + ".from");
    const auto to = r.integer(v["to"], f + ".to");
    const auto step = v.contains("step") ? r.integer(v["step"], f + ".step") : 1;
    if (step < 1) r.fail(f + ".step", "must be >= 1");
    if (to < from) r.fail(f, "'to' is below 'from'");
    if ((to - from) / step > 10000000) r.fail(f, "range is too long");
    for (auto k = from; k <= to; k += step) out.push_back(k);
  } else {
    r.fail(f, "expected a list or {from, to, step}");
  }
  return out;
}

std::vector<double> read_times(const Reader& r, const json& v) {
  const std::string f = "chain.record_times";
  std::vector<double> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(r.number(v[i], f));
  } else if (v.is_object()) {
    r.allow_only(v, f, {"start", "stop", "count"});
    if (!v.contains("start") || !v.contains("stop") || !v.contains("count"))
      r.fail(f, "grid needs 'start', 'stop' and 'count'");
    const double a = r.number(v["start"], f + ".start");
    const double b = r.number(v["stop"], f + ".stop");
    const auto n = r.integer(v["count"], f + ".count");
    if (n < 1 || n > 1000000) r.fail(f + ".count", "must lie in [1, 1e6]");
    for (std::int64_t i = 0; i < n; ++i)
      out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  } else {
    r.fail(f, "expected a list or {start, stop, count}");
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text, const std::string& source) {
  Reader r{source};
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    r.fail("", std::string("invalid JSON: ") + e.what());
  }
  r.allow_only(doc, "", {"name", "target", "chain", "generator", "reference", "mi_reference", "bounds",
                         "output", "tolerances", "bootstrap", "test_hooks", "description"});

  ExperimentConfig cfg;
  if (doc.contains("name")) cfg.name = r.string(doc["name"], "name");

  if (!doc.contains("target")) r.fail("target", "missing");
  const json& t = doc["target"];
  r.allow_only(t, "target", {"kind", "mean", "covariance", "dim", "name", "alpha"});
  cfg.target.kind = t.contains("kind") ? r.string(t["kind"], "target.kind") : "gaussian";
  std::optional<ChainTarget> built;
  if (cfg.target.kind == "gaussian") {
    json g = json::object();
    for (const char* k : {"mean", "covariance", "dim"})
      if (t.contains(k)) g[k] = t[k];
    const GaussianDist dist = r.gaussian(g, "target", std::nullopt);
    cfg.target.mean = dist.mean();
    cfg.target.covariance = dist.covariance();
    cfg.target.dim = static_cast<int>(dist.dim());
  } else if (cfg.target.kind == "builtin") {
    if (!t.contains("name")) r.fail("target.name", "missing");
    cfg.target.builtin = r.string(t["name"], "target.name");
    cfg.target.dim = t.contains("dim") ? static_cast<int>(r.integer(t["dim"], "target.dim")) : 1;
    cfg.target.alpha = t.contains("alpha") ? r.number(t["alpha"], "target.alpha") : 1.0;
    if (cfg.target.dim < 1) r.fail("target.dim", "must be positive");
  } else {
    r.fail("target.kind", "expected 'gaussian' or 'builtin'");
  }
  try {
    built = make_target(cfg.target);
  } catch (const Error& e) {
    r.fail("target", e.what());
  }

  if (!doc.contains("chain")) r.fail("chain", "missing");
  const json& c = doc["chain"];
  r.allow_only(c, "chain", {"kind", "eta", "em_substep", "record_steps", "record_times", "n_chains",
                            "seed", "init", "exact_gaussian", "threads"});
  if (!c.contains("kind")) r.fail("chain.kind", "missing");
  try {
    cfg.chain.kind = chain_kind_from_name(r.string(c["kind"], "chain.kind"));
  } catch (const DomainError& e) {
    r.fail("chain.kind", e.what());
  }
  if (c.contains("eta")) cfg.chain.eta = r.number(c["eta"], "chain.eta");
  if (c.contains("em_substep")) cfg.chain.em_substep = r.number(c["em_substep"], "chain.em_substep");
  if (c.contains("exact_gaussian")) cfg.chain.exact_gaussian = r.boolean(c["exact_gaussian"], "chain.exact_gaussian");
  if (c.contains("threads")) {
    const auto n = r.integer(c["threads"], "chain.threads");
    if (n < 0) r.fail("chain.threads", "must be >= 0");
    cfg.chain.threads = static_cast<unsigned>(n);
  }
  const auto n_chains = c.contains("n_chains") ? r.integer(c["n_chains"], "chain.n_chains") : 0;
  if (n_chains < 0) r.fail("chain.n_chains", "must be >= 0");
  cfg.chain.n_chains = static_cast<std::size_t>(n_chains);
  if (c.contains("seed")) {
    if (!c["seed"].is_number_unsigned() && !(c["seed"].is_number_integer() && c["seed"].get<std::int64_t>() >= 0))
      r.fail("chain.seed", "expected a nonnegative integer");
    cfg.chain.seed = c["seed"].get<std::uint64_t>();
  }
  const Eigen::Index d = cfg.target.dim;
  cfg.chain.init = c.contains("init") ? r.gaussian(c["init"], "chain.init", d) : GaussianDist::standard(d);

  if (cfg.chain.kind == ChainKind::LangevinEM) {
    if (c.contains("record_steps")) r.fail("chain.record_steps", "langevin chains record times");
    if (!c.contains("record_times")) r.fail("chain.record_times", "missing");
    cfg.chain.record_times = read_times(r, c["record_times"]);
  } else {
    if (c.contains("record_times")) r.fail("chain.record_times", "discrete chains record steps");
    if (!c.contains("record_steps")) r.fail("chain.record_steps", "missing");
    cfg.chain.record_steps = read_steps(r, c["record_steps"]);
  }
  {
    // validate_chain_config insists on at least one chain; check the rest regardless.
    ChainConfig probe = cfg.chain;
    probe.n_chains = std::max<std::size_t>(1, probe.n_chains);
    try {
      validate_chain_config(probe, *built);
    } catch (const Error& e) {
      r.fail("chain", e.what());
    }
  }

  if (doc.contains("generator")) {
    try {
      cfg.generator = PhiGenerator::from_name(r.string(doc["generator"], "generator"));
    } catch (const DomainError& e) {
      r.fail("generator", e.what());
    }
  }
  if (doc.contains("reference") && !doc["reference"].is_null())
    cfg.reference = r.number(doc["reference"], "reference");
  if (doc.contains("mi_reference") && !doc["mi_reference"].is_null()) {
    cfg.mi_reference = r.number(doc["mi_reference"], "mi_reference");
    if (!(*cfg.mi_reference >= 0)) r.fail("mi_reference", "must be >= 0");
  }

  if (doc.contains("bounds")) {
    const json& b = doc["bounds"];
    r.allow_only(b, "bounds", {"thm", "sharp", "regularity", "sobolev", "cov", "empirical"});
    auto flag = [&](const char* k, bool& dst) {
      if (b.contains(k)) dst = r.boolean(b[k], std::string("bounds.") + k);
    };
    flag("thm", cfg.bounds.thm);
    flag("sharp", cfg.bounds.sharp);
    flag("regularity", cfg.bounds.regularity);
    flag("sobolev", cfg.bounds.sobolev);
    flag("cov", cfg.bounds.cov);
    flag("empirical", cfg.bounds.empirical);
  }
  if (doc.contains("output")) cfg.output_dir = r.string(doc["output"], "output");
  if (doc.contains("tolerances")) {
    const json& tol = doc["tolerances"];
    r.allow_only(tol, "tolerances", {"mc_sigma", "dominance_slack"});
    if (tol.contains("mc_sigma")) cfg.tolerances.mc_sigma = r.number(tol["mc_sigma"], "tolerances.mc_sigma");
    if (tol.contains("dominance_slack"))
      cfg.tolerances.dominance_slack = r.number(tol["dominance_slack"], "tolerances.dominance_slack");
    if (!(cfg.tolerances.mc_sigma >= 0)) r.fail("tolerances.mc_sigma", "must be >= 0");
    if (!(cfg.tolerances.dominance_slack >= 0)) r.fail("tolerances.dominance_slack", "must be >= 0");
  }
  if (doc.contains("bootstrap")) {
    const json& b = doc["bootstrap"];
    r.allow_only(b, "bootstrap", {"replicates"});
    if (b.contains("replicates")) {
      const auto n = r.integer(b["replicates"], "bootstrap.replicates");
      if (n < 0 || n > 100000) r.fail("bootstrap.replicates", "must lie in [0, 1e5]");
      cfg.bootstrap_replicates = static_cast<int>(n);
    }
  }
  if (doc.contains("test_hooks")) {
    const json& h = doc["test_hooks"];
    r.allow_only(h, "test_hooks", {"thm_bound_scale"});
    if (h.contains("thm_bound_scale")) {
      cfg.thm_bound_scale = r.number(h["thm_bound_scale"], "test_hooks.thm_bound_scale");
      if (!(cfg.thm_bound_scale > 0)) r.fail("test_hooks.thm_bound_scale", "must be > 0");
    }
  }

  try {
    resolve_plan(cfg, source);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    r.fail("", e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "", "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace midec
