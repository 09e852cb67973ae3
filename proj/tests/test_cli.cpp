#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace {

using anosov::cli::run_cli;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> keys(const json& j) {
  std::vector<std::string> k;
  for (auto it = j.begin(); it != j.end(); ++it) k.push_back(it.key());
  return k;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("anosov_cli_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~TempDir() { fs::remove_all(dir_); }
  std::string operator/(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) lines.push_back(l);
  return lines;
}

std::vector<double> csv_row(const std::string& line) {
  std::vector<double> v;
  std::istringstream is(line);
  for (std::string cell; std::getline(is, cell, ',');) v.push_back(std::stod(cell));
  return v;
}

TEST(CliUsage, ExitCodeTwoForBadInvocations) {
  const std::vector<std::vector<std::string>> bad = {
      {},
      {"frobnicate"},
      {"lemma64", "--beta-max", "1.0"},
      {"lemma64", "--unknown-key", "3"},
      {"lemma64", "--z-steps", "abc"},
      {"solve", "--domain", "disk", "--t-coef", "1"},
      {"solve", "--domain", "sphere", "--t-zero"},
      {"solve", "--domain", "torus"},
      {"solve", "--domain", "torus", "--t-zero", "--t-const", "1"},
      {"solve", "--domain", "torus", "--t-const", "1", "--boundary", "fuchsian"},
      {"solve", "--domain", "torus", "--t-const", "1", "--n", "4"},
      {"gap-scan"},
      {"gap-scan", "--family", "spin"},
      {"gap-scan", "--family", "barbot"},
      {"gap-scan", "--family", "barbot", "--chi", "0,0,0"},
      {"gap-scan", "--family", "barbot", "--chi", "0,x,0,0"},
      {"gap-scan", "--family", "red", "--chi", "0,0,0,0"},
      {"gap-scan", "--family", "red", "--max-len", "0"},
      {"certify-flow", "--t-step", "0"},
      {"certify-flow", "--betas", "0,1.2"},
      {"fiber", "--point", "1,0,0"},
      {"fiber", "--point", "1,1"},
      {"fiber", "--theta-steps", "0"},
  };
  for (const auto& args : bad) {
    const Result r = run(args);
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    EXPECT_EQ(r.code, 2) << joined << "\n" << r.err;
    EXPECT_FALSE(r.err.empty()) << joined;
  }
}

TEST(CliUsage, HelpExitsZero) {
  const Result r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("gap-scan"), std::string::npos);
}

TEST(CliUsage, UnwritableOutputIsUsageError) {
  const Result r = run({"fiber", "--theta-steps", "4", "--out", "/nonexistent-dir/x.csv"});
  EXPECT_EQ(r.code, 2);
}

TEST(CliLemma64, SmallGridPassesWithDocumentedKeys) {
  const Result r = run({"lemma64", "--beta-max", "0.5", "--beta-phases", "4", "--d-max", "2", "--d-step", "0.5",
                     "--z-steps", "8"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(keys(j), (std::vector<std::string>{"min_margin", "max_margin", "min_eta", "min_eta_excess",
                                               "max_eta_ratio", "argmin", "oracle_dev", "cells",
                                               "positive_pairings", "negative_pairings", "grid"}));
  EXPECT_EQ(j["grid"]["beta_moduli"], json::parse("[0.0, 0.1, 0.2, 0.3, 0.4, 0.5]"));
  EXPECT_EQ(j["cells"], 6u * 4u * 9u * 8u);
}

TEST(CliLemma64, DefaultGridWritesReport) {
  TempDir tmp;
  const std::string path = tmp / "r.json";
  const Result r = run({"lemma64", "--beta-max", "0.95", "--d-max", "5", "--z-steps", "64", "--out", path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const json j = json::parse(slurp(path));
  EXPECT_GE(j["min_margin"].get<double>(), -1e-9);
  EXPECT_LE(j["oracle_dev"].get<double>(), 1e-10);
  EXPECT_EQ(j["grid"]["beta_moduli"].size(), 11u);
  EXPECT_DOUBLE_EQ(j["grid"]["beta_moduli"].back().get<double>(), 0.95);
  EXPECT_EQ(j["cells"], 11u * 16u * 201u * 64u);
}

TEST(CliSolve, TorusConstant) {
  for (const char* c : {"0.5", "1", "2"}) {
    const Result r = run({"solve", "--domain", "torus", "--t-const", c, "--n", "32"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["converged"].get<bool>());
    EXPECT_LE(j["max_error_vs_constant"].get<double>(), 1e-8) << c;
  }
}

TEST(CliSolve, TorusFieldIsZeroForUnitDatum) {
  TempDir tmp;
  const Result r = run({"solve", "--domain", "torus", "--t-const", "1", "--n", "64", "--field", tmp / "u.csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = split_lines(slurp(tmp / "u.csv"));
  ASSERT_EQ(lines.size(), 2u + 64u);
  EXPECT_EQ(lines[0], "nx,ny");
  EXPECT_EQ(lines[1], "64,64");
  for (std::size_t k = 2; k < lines.size(); ++k)
    for (double v : csv_row(lines[k])) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(CliSolve, DiskFuchsianAccuracy) {
  const Result r = run({"solve", "--domain", "disk", "--t-zero", "--n", "128"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_LE(j["max_error_vs_profile"].get<double>(), 5e-3);
  EXPECT_LT(j["curvature_max"].get<double>(), 0.0);
}

TEST(CliSolve, DiskMonomialWithBoundary) {
  const Result r = run({"solve", "--domain", "disk", "--t-coef", "1", "--n", "64", "--boundary", "fuchsian"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_LT(j["beta_sup"].get<double>(), 1.0);
  EXPECT_EQ(j["beta_strict"].get<double>(), 1.0);
}

TEST(CliSolve, NonConvergenceExitsOneWithReport) {
  const Result r = run({"solve", "--domain", "torus", "--t-const", "2", "--n", "32", "--max-iter", "1", "--tol", "1e-30"});
  EXPECT_EQ(r.code, 1);
  const json j = json::parse(r.out);
  EXPECT_FALSE(j["converged"].get<bool>());
  EXPECT_GT(j["residual_norm"].get<double>(), 0.0);
}

TEST(CliGapScan, WritesCsvAndSummary) {
  TempDir tmp;
  const Result r = run({"gap-scan", "--family", "red", "--max-len", "3", "--csv", tmp / "g.csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(keys(j), (std::vector<std::string>{"family", "chi", "A", "B", "inverse_identity_defect", "max_len",
                                               "exhaustive_len", "partial", "seed", "rows"}));
  EXPECT_EQ(j["rows"].size(), 3u);
  EXPECT_NEAR(j["rows"][0]["min_lg12"].get<double>(), 1.52857, 1e-4);
  const auto lines = split_lines(slurp(tmp / "g.csv"));
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "length,count,min_sg12,med_sg12,min_sg23,min_lg12");
  EXPECT_EQ(csv_row(lines[3])[1], 392.0);
}

TEST(CliGapScan, BarbotAtZeroMatchesReducible) {
  const Result red = run({"gap-scan", "--family", "red", "--max-len", "4"});
  const Result bar = run({"gap-scan", "--family", "barbot", "--chi", "0,0,0,0", "--max-len", "4"});
  ASSERT_EQ(red.code, 0);
  ASSERT_EQ(bar.code, 0);
  const json a = json::parse(red.out), b = json::parse(bar.out);
  ASSERT_EQ(a["rows"].size(), b["rows"].size());
  for (std::size_t k = 0; k < a["rows"].size(); ++k)
    for (const char* key : {"min_sg12", "med_sg12", "min_sg23", "min_lg12"})
      EXPECT_NEAR(a["rows"][k][key].get<double>(), b["rows"][k][key].get<double>(), 1e-12);
}

TEST(CliGapScan, IrreducibleDoublesReducibleMinima) {
  const json a = json::parse(run({"gap-scan", "--family", "red", "--max-len", "3"}).out);
  const json b = json::parse(run({"gap-scan", "--family", "irr", "--max-len", "3"}).out);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(b["rows"][k]["min_sg12"].get<double>(), 2.0 * a["rows"][k]["min_sg12"].get<double>(), 1e-9);
    EXPECT_NEAR(b["rows"][k]["min_lg12"].get<double>(), 2.0 * a["rows"][k]["min_lg12"].get<double>(), 1e-9);
  }
  EXPECT_NEAR(b["rows"][0]["min_lg12"].get<double>(), 3.05714, 1e-4);
}

TEST(CliGapScan, SeedDeterminesSampledOutput) {
  const std::vector<std::string> base = {"gap-scan", "--family", "barbot", "--chi", "0.1,-0.2,0.05,0",
                                         "--max-len", "7", "--exhaustive-len", "3", "--samples", "300"};
  auto with_seed = [&](const char* s) {
    auto args = base;
    args.insert(args.end(), {"--seed", s});
    return run(args);
  };
  const Result a = with_seed("7"), b = with_seed("7"), c = with_seed("8");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_TRUE(json::parse(a.out)["partial"].get<bool>());
}

TEST(CliCertifyFlow, DefaultsPass) {
  const Result r = run({"certify-flow"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j["flow"]["all_nested"].get<bool>());
  EXPECT_EQ(j["flow"]["steps"].size(), 4u);
  ASSERT_EQ(j["pushforward"].size(), 3u);
  for (const auto& p : j["pushforward"]) EXPECT_EQ(p["inside"], 512);
}

TEST(CliCertifyFlow, ReportsMinDisplacementPerBeta) {
  TempDir tmp;
  const Result r = run({"certify-flow", "--samples", "512", "--out", tmp / "c.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(slurp(tmp / "c.json"));
  std::vector<double> betas;
  for (const auto& p : j["pushforward"]) {
    betas.push_back(p["beta_re"].get<double>());
    EXPECT_GT(p["min_displacement"].get<double>(), 0.0);
    EXPECT_EQ(p["samples"], 512);
  }
  EXPECT_EQ(betas, (std::vector<double>{0.0, 0.5, 0.9}));
}

TEST(CliFiber, RowsLieOnTheConic) {
  for (const char* point : {"1,1,0", "2,1,1", "0.5,2.5,0.5"}) {
    const Result r = run({"fiber", "--theta-steps", "256", "--point", point});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = split_lines(r.out);
    ASSERT_EQ(lines.size(), 257u);
    EXPECT_EQ(lines[0], "theta,x1,x2,x3,y1,y2,y3,conic_eval,dual_conic_eval,criticality");
    for (std::size_t k = 1; k < lines.size(); ++k) {
      const auto v = csv_row(lines[k]);
      ASSERT_EQ(v.size(), 10u);
      EXPECT_LE(std::abs(v[7]), 1e-12);
      EXPECT_LE(std::abs(v[8]), 1e-12);
      EXPECT_LE(std::abs(v[9]), 1e-10);
      EXPECT_NEAR(v[1] * v[4] + v[2] * v[5] + v[3] * v[6], 0.0, 1e-12);
    }
  }
}

TEST(CliFiber, ConicPosition) {
  TempDir tmp;
  const Result r = run({"fiber", "--theta-steps", "8", "--conic-position", "--samples", "1000", "--out", tmp / "f.csv",
                     "--report", tmp / "c.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(slurp(tmp / "c.json"));
  EXPECT_EQ(j["samples"], 1000);
  EXPECT_EQ(j["lines_outside"], 1000);
  EXPECT_EQ(j["planes_meeting_interior"], 1000);
  EXPECT_GT(j["min_line_margin"].get<double>(), 0.0);
  EXPECT_GT(j["min_plane_margin"].get<double>(), 0.0);
}

TEST(CliFiber, ByteIdenticalForSameSeed) {
  const std::vector<std::string> args = {"fiber", "--theta-steps", "16", "--conic-position", "--samples", "200",
                                         "--seed", "5"};
  const Result a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

}  // namespace
