#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "midec/cli.hpp"

using midec::cli_main;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, OracleUla) {
  const auto r = run({"oracle", "--chain", "ula", "--alpha", "1", "--eta", "0.1", "--k", "10"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("0.0617646236659", 0), 0u) << r.out;
}

TEST(Cli, OracleLangevinAndProximal) {
  auto r = run({"oracle", "--chain", "langevin", "--alpha", "1", "--t", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("0.0727067289344", 0), 0u) << r.out;
  r = run({"oracle", "--chain", "proximal", "--alpha", "1", "--eta", "1", "--k", "2"});
  EXPECT_EQ(r.code, 0);
  r = run({"oracle", "--chain", "langevin", "--alpha", "1", "--k", "1"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, BoundsProximalRows) {
  const auto r = run({"bounds", "--chain", "proximal", "--alpha", "1", "--eta", "1", "--sobolev", "2",
                      "--mi-ref", "1", "--steps", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("steps,thm_bound,thm_bound_sharp\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("\n2,0.0625"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"run", "--config", "/nonexistent/cfg.json"}).code, 2);
  EXPECT_EQ(run({"oracle", "--chain", "ula", "--alpha", "1", "--bogus"}).code, 2);
  const auto r = run({"run", "--config", "/nonexistent/cfg.json"});
  EXPECT_NE(r.err.find("/nonexistent/cfg.json"), std::string::npos);
}

TEST(Cli, Presets) {
  auto r = run({"presets", "list"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("ula_gaussian\n"), std::string::npos);
  r = run({"presets", "show", "langevin_ou"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"langevin_em\""), std::string::npos);
  EXPECT_EQ(run({"presets", "show", "nope"}).code, 2);
}

TEST(Cli, RunWritesOutputsAndReportsViolations) {
  const auto dir = std::filesystem::temp_directory_path() / "midec_test_cli";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto write_cfg = [&](const std::string& name, double scale) {
    const auto path = dir / name;
    std::ofstream(path) << R"({"name": "tiny",
      "target": {"covariance": [[1]]},
      "chain": {"kind": "ula", "eta": 0.1, "record_steps": [1, 2, 3], "n_chains": 500, "seed": 1},
      "bootstrap": {"replicates": 20},
      "test_hooks": {"thm_bound_scale": )" << scale << "}}";
    return path.string();
  };
  auto r = run({"run", "--config", write_cfg("ok.json", 1.0), "--out", (dir / "ok").string(), "--threads", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "ok" / "report.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "ok" / "summary.json"));
  r = run({"run", "--config", write_cfg("bad.json", 0.01), "--out", (dir / "bad").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("violation at"), std::string::npos);
  std::filesystem::remove_all(dir);
}
