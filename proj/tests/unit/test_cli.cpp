#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "config.hpp"
#include "mosharp/errors.hpp"
#include "output.hpp"

using namespace mosharp;
using namespace mosharp::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string output;
};

Result run(const std::string& args) {
  const std::string cmd = std::string("\"") + MOSHARP_CLI + "\" " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string config(const std::string& name) { return std::string(MOSHARP_CONFIG_DIR) + "/" + name; }

class CliRun : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mosharp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const json& doc) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << doc.dump();
    return p.string();
  }
  std::string read(const std::string& name) {
    std::ifstream in(dir_ / "out" / name, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::string out() const { return (dir_ / "out").string(); }

  fs::path dir_;
};

json base_config() {
  return json::parse(R"({
    "dimension": 1,
    "phi": {"family": "power", "p": 2.0},
    "function": {"id": "bump"},
    "grid": {"half_width": 3.0, "h0": 0.015625, "rows": 2}
  })");
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Output, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(mant(rng), expo(rng));
    const std::string s = format_double(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
    EXPECT_EQ(s.find(','), std::string::npos);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(0.0), "0");
}

TEST(Output, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Output, CsvTableShape) {
  CsvTable t({"a", "b"});
  t.add(1.0).add(std::string("x"));
  t.end_row();
  EXPECT_EQ(t.str(), "a,b\n1,x\n");
  EXPECT_THROW(t.end_row(), std::logic_error);
  t.add(1.0).add(2.0);
  EXPECT_THROW(t.add(3.0), std::logic_error);
}

TEST(Config, HashIsCanonical) {
  const RunConfig a = parse_config(json::parse(R"({"dimension": 1, "phi": {"p": 2, "family": "power"}})"));
  const RunConfig b = parse_config(json::parse(R"({"phi": {"family": "power", "p": 2}, "dimension": 1})"));
  EXPECT_EQ(a.hash, b.hash);
  EXPECT_EQ(a.hash, sha256_hex(a.canonical));
  const RunConfig c = parse_config(json::parse(R"({"dimension": 1, "phi": {"family": "power", "p": 3}})"));
  EXPECT_NE(a.hash, c.hash);
}

TEST(Config, ErrorsNameTheFieldPath) {
  auto message = [](const std::string& text) {
    try {
      parse_config(json::parse(text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"dimension": 1, "phi": {"p": 2}})").find("phi.family"), std::string::npos);
  EXPECT_NE(message(R"({"dimension": 1, "phi": {"family": "power", "p": "two"}})").find("phi.p"), std::string::npos);
  EXPECT_NE(message(R"({"dimension": 1, "phi": {"family": "power", "p": 2, "q": 3}})").find("phi.q: unknown"),
            std::string::npos);
  EXPECT_NE(message(R"({"dimension": 7, "phi": {"family": "power", "p": 2}})").find("unsupported dimension"),
            std::string::npos);
  EXPECT_NE(message(R"({"dimension": 1, "phi": {"family": "power", "p": 2}, "grid": {"r_min_cells": 1}})")
                .find("under-resolved ball"),
            std::string::npos);
  EXPECT_NE(message(R"({"dimension": 1, "phi": {"family": "double_phase", "p": 2, "q": 3,
                        "weight": {"shape": "cubic"}}})")
                .find("phi.weight.shape"),
            std::string::npos);
  EXPECT_NE(message(R"({"dimension": 1, "function": {"id": "nope"}})").find("function.id"), std::string::npos);
  EXPECT_NE(message(R"({"dimension": 1, "grid": {"h0": 0.7}})").find("grid.h0"), std::string::npos);
  EXPECT_NE(message(R"({"dimension": 1, "closure": "linear"})").find("closure"), std::string::npos);
}

TEST(Config, BundledConfigsParse) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(MOSHARP_CONFIG_DIR)) {
    EXPECT_NO_THROW(load_config(entry.path().string())) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 5);
}

TEST_F(CliRun, CheckSquareReportsKappaFour) {
  const auto r = run("check --config \"" + config("check_p2.json") + "\" --out \"" + out() + "\"");
  EXPECT_EQ(r.status, 0) << r.output;
  const json report = json::parse(read("check_p2.json"));
  EXPECT_DOUBLE_EQ(report["delta2"]["kappa_hat"].get<double>(), 4.0);
  EXPECT_TRUE(report["passed"].get<bool>());
}

TEST_F(CliRun, CheckExponentialFailsDoubling) {
  const auto r = run("check --config \"" + config("check_exp.json") + "\" --out \"" + out() + "\"");
  EXPECT_EQ(r.status, 3) << r.output;
  const json report = json::parse(read("check_exp.json"));
  EXPECT_FALSE(report["delta2"]["passed"].get<bool>());
  EXPECT_NE(r.output.find("Delta2"), std::string::npos);
}

TEST_F(CliRun, MalformedConfigIsSchemaError) {
  json doc = base_config();
  doc["phi"].erase("family");
  const auto r = run("check --config \"" + write("bad.json", doc) + "\" --out \"" + out() + "\"");
  EXPECT_EQ(r.status, 4);
  EXPECT_NE(r.output.find("phi.family"), std::string::npos) << r.output;
  const auto garbage = run("check --config \"" + write("garbage.json", json("not an object")) + "\"");
  EXPECT_EQ(garbage.status, 4);
}

TEST_F(CliRun, BundledSweepPasses) {
  const auto r = run("sweep --config \"" + config("p2_bump_1d.json") + "\" --out \"" + out() + "\"");
  EXPECT_EQ(r.status, 0) << r.output;
  const auto rows = csv_rows(read("p2_bump_1d.csv"));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0][0], "epsilon");
  EXPECT_EQ(rows[0][3], "sharp_modular");
  EXPECT_EQ(rows[0][7], "verdict");
  EXPECT_LE(std::stod(rows.back()[6]), 0.05);
  EXPECT_EQ(rows.back()[7], "true");

  const json manifest = json::parse(read("p2_bump_1d.manifest.json"));
  EXPECT_EQ(manifest["command"], "sweep");
  EXPECT_TRUE(manifest["verdict"].get<bool>());
  EXPECT_EQ(rows.back().back(), manifest["config_hash"].get<std::string>());
  ASSERT_EQ(manifest["outputs"].size(), 1u);
  EXPECT_EQ(manifest["outputs"][0]["sha256"], sha256_hex(read("p2_bump_1d.csv")));
  EXPECT_TRUE(manifest["wall_times_s"].contains("theorem_sweep"));
}

TEST_F(CliRun, ZeroFunctionGivesZeroRows) {
  const auto r = run("sweep --config \"" + config("zero_1d.json") + "\" --out \"" + out() + "\"");
  EXPECT_EQ(r.status, 0) << r.output;
  const auto rows = csv_rows(read("zero_1d.csv"));
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i][3], "0");
    EXPECT_EQ(rows[i][5], "0");
    EXPECT_EQ(rows[i][6], "0");
  }
}

TEST_F(CliRun, UnderResolvedBallIsRejected) {
  json doc = base_config();
  doc["grid"]["r_min_cells"] = 1;
  const auto r = run("sweep --config \"" + write("c.json", doc) + "\" --out \"" + out() + "\"");
  EXPECT_EQ(r.status, 4);
  EXPECT_NE(r.output.find("under-resolved ball"), std::string::npos) << r.output;
}

TEST_F(CliRun, FailedAssumptionAndFailedVerdict) {
  json doc = base_config();
  doc["phi"] = {{"family", "exponential"}};
  auto r = run("sweep --config \"" + write("exp.json", doc) + "\" --out \"" + out() + "\"");
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.output.find("assumption failed: Delta2"), std::string::npos) << r.output;

  doc = base_config();
  doc["tolerances"] = {{"bound", 1e-9}};
  r = run("sweep --config \"" + write("tight.json", doc) + "\" --out \"" + out() + "\"");
  EXPECT_EQ(r.status, 2) << r.output;
  EXPECT_FALSE(json::parse(read("manifest.json"))["verdict"].get<bool>());
}

TEST_F(CliRun, NormSweepWritesSharpNorm) {
  const auto r = run("norm-sweep --config \"" + config("p2_bump_1d_norm.json") + "\" --out \"" + out() + "\"");
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_EQ(csv_rows(read("p2_bump_1d_norm.csv"))[0][3], "sharp_norm");
}

TEST_F(CliRun, C0Command) {
  auto r = run("c0 --dim 1");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.output.find("analytic: 0.5\n"), std::string::npos) << r.output;
  r = run("c0 --dim 2");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.output.find("analytic: 0.424413"), std::string::npos) << r.output;
  r = run("c0 --dim 7");
  EXPECT_EQ(r.status, 4);
  EXPECT_NE(r.output.find("unsupported dimension"), std::string::npos) << r.output;
}

TEST_F(CliRun, Probes) {
  for (const char* name : {"probe_remainder_1d", "probe_poincare_1d"}) {
    const auto r = run("probe --config \"" + config(std::string(name) + ".json") + "\" --out \"" + out() + "\"");
    EXPECT_EQ(r.status, 0) << name << "\n" << r.output;
    const auto rows = csv_rows(read(std::string(name) + ".csv"));
    ASSERT_GT(rows.size(), 1u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][rows[i].size() - 2], "true");
  }
  json doc = base_config();
  doc["grid"]["h0"] = 1.0 / 64;
  doc["probe"] = {{"kind", "mollified-energy"}, {"deltas", {0.2, 0.1}}, {"frozen_constant", 1e-6}};
  const auto r = run("probe --config \"" + write("frozen.json", doc) + "\" --out \"" + out() + "\"");
  EXPECT_EQ(r.status, 2) << r.output;
  doc["probe"] = {{"kind", "divergence"}};
  EXPECT_EQ(run("probe --config \"" + write("unknown.json", doc) + "\" --out \"" + out() + "\"").status, 4);
}

TEST_F(CliRun, UsageErrors) {
  EXPECT_EQ(run("").status, 4);
  EXPECT_EQ(run("sweep").status, 4);
  EXPECT_EQ(run("sweep --config /nonexistent.json").status, 4);
  EXPECT_EQ(run("--help").status, 0);
}
