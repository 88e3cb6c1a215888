#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "midec/errors.hpp"
#include "midec/harness.hpp"

namespace midec {

namespace {

std::string cell(const std::optional<MaybeInfinite>& v) { return v ? v->to_string() : std::string(); }
std::string cell(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }
std::string cell(double v) { return format_real(v); }

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_real(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("report csv: bad number '" + s + "'");
  }
  if (used != s.size()) throw InputError("report csv: bad number '" + s + "'");
  return v;
}

std::optional<double> opt_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_real(s);
}

std::optional<MaybeInfinite> opt_mi(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return MaybeInfinite::finite(parse_real(s));
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

}  // namespace

std::string report_to_csv(const BoundReport& r) {
  std::ostringstream out;
  out << kReportCsvHeader << '\n';
  for (std::size_t i = 0; i < r.size(); ++i) {
    const std::string cells[] = {
        cell(r.index[i]),          cell(r.time[i]),         cell(r.exact_mi[i]),
        cell(r.empirical_mi[i]),   cell(r.ci_halfwidth[i]), cell(r.thm_bound[i]),
        cell(r.thm_bound_sharp[i]), cell(r.regularity_bound[i]), cell(r.sobolev_lower[i]),
        cell(r.contraction_coeff[i]), cell(r.cov_opnorm[i]), cell(r.cov_bound[i]),
    };
    for (std::size_t c = 0; c < std::size(cells); ++c) out << (c ? "," : "") << cells[c];
    out << '\n';
  }
  return out.str();
}

BoundReport report_from_csv(std::string_view csv) {
  BoundReport r;
  std::size_t pos = 0;
  bool header = true;
  while (pos < csv.size()) {
    auto end = csv.find('\n', pos);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != kReportCsvHeader) throw InputError("report csv: unexpected header");
      header = false;
      continue;
    }
    const auto c = split(line);
    if (c.size() != 12) throw InputError("report csv: expected 12 columns");
    r.index.push_back(parse_real(c[0]));
    r.time.push_back(parse_real(c[1]));
    r.exact_mi.push_back(opt_mi(c[2]));
    r.empirical_mi.push_back(opt_mi(c[3]));
    r.ci_halfwidth.push_back(opt_real(c[4]));
    r.thm_bound.push_back(opt_mi(c[5]));
    r.thm_bound_sharp.push_back(opt_mi(c[6]));
    r.regularity_bound.push_back(opt_real(c[7]));
    r.sobolev_lower.push_back(parse_real(c[8]));
    r.contraction_coeff.push_back(parse_real(c[9]));
    r.cov_opnorm.push_back(opt_real(c[10]));
    r.cov_bound.push_back(opt_real(c[11]));
  }
  if (header) throw InputError("report csv: missing header");
  return r;
}

std::string summary_to_json(const ExperimentConfig& cfg, const ExperimentResult& res) {
  using nlohmann::ordered_json;
  auto real = [](double v) -> ordered_json {
    if (std::isfinite(v)) return v;
    return format_real(v);
  };
  ordered_json j;
  j["name"] = cfg.name;
  j["chain"] = chain_kind_name(cfg.chain.kind);
  j["generator"] = cfg.generator.name();
  j["target"] = cfg.target.kind == "builtin" ? cfg.target.builtin : std::string("gaussian");
  j["dim"] = cfg.target.dim;
  j["eta"] = cfg.chain.eta;
  j["seed"] = cfg.chain.seed;
  j["n_chains"] = res.n_chains_run;
  j["n_records"] = res.report.size();
  j["reference_index"] = res.reference_index;
  j["mi_reference"] = res.mi_reference ? real(*res.mi_reference) : ordered_json(nullptr);
  j["sobolev_reference"] = res.sobolev_reference ? real(*res.sobolev_reference) : ordered_json(nullptr);
  j["oracle_call_count"] = res.oracle_call_count;
  j["empirical_heuristic"] = res.empirical_heuristic;
  j["violations"] = res.report.violations.size();
  ordered_json list = ordered_json::array();
  for (const auto& v : res.report.violations)
    list.push_back({{"index", v.index}, {"kind", v.kind}, {"margin", real(v.margin)}});
  j["violation_list"] = list;
  j["tolerances"] = {{"mc_sigma", cfg.tolerances.mc_sigma},
                     {"dominance_slack", cfg.tolerances.dominance_slack}};
  j["notes"] = res.notes;
  j["exit_status"] = res.exit_status();
  j["report"] = "report.csv";
  return j.dump(2) + "\n";
}

void write_outputs(const std::string& dir, const ExperimentConfig& cfg, const ExperimentResult& result) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir + ": " + ec.message());
  write_file(fs::path(dir) / "report.csv", report_to_csv(result.report));
  write_file(fs::path(dir) / "summary.json", summary_to_json(cfg, result));
}

}  // namespace midec
