#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"

using nlohmann::json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome r;
  r.code = qcomp::cli::execute(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) { return std::string(QCOMP_DATA_DIR) + "/" + name; }

std::string scratch(const std::string& name, const std::string& text) {
  const std::string path = testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Cli, PauliExample) {
  const Outcome r = run({"example", "pauli-zx", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["task"], "example pauli-zx");
  EXPECT_NEAR(j["values"]["eta_min"].get<double>(), 0.8284271247, 1e-6);
  EXPECT_NEAR(j["values"]["success"].get<double>(), 0.2928932188, 1e-6);
  EXPECT_LE(j["values"]["error"].get<double>(), 1e-8);
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Cli, QexcOfTwoStates) {
  const Outcome r = run({"qexc", "--input", data("twostates.json"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["values"]["value"].get<double>(), 0.0, 1e-8);
  EXPECT_LE(j["values"]["gap"].get<double>(), 1e-8);
}

TEST(Cli, OutputIsDeterministicApartFromTiming) {
  const std::vector<std::string> args{"encrypt", "--input", data("pauli_zx.json"), "--eta", "0.9", "--json"};
  json a = json::parse(run(args).out);
  json b = json::parse(run(args).out);
  a.erase("timing");
  b.erase("timing");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Cli, ReportRoundTripsAsInput) {
  const Outcome first = run({"exclude-ensemble", "--input", data("pauli_zx_steering.json"), "--eta", "0.5", "--prior", "0.3,0.7", "--json"});
  ASSERT_EQ(first.code, 0) << first.err;
  const std::string path = scratch("qcomp_report.json", first.out);
  const Outcome second = run({"exclude-ensemble", "--input", path, "--json"});
  ASSERT_EQ(second.code, 0) << second.err;
  const json a = json::parse(first.out), b = json::parse(second.out);
  EXPECT_NEAR(a["values"]["error"].get<double>(), b["values"]["error"].get<double>(), 1e-10);
  EXPECT_EQ(b["inputs"]["eta"], 0.5);
  EXPECT_EQ(b["inputs"]["prior"], a["inputs"]["prior"]);
}

TEST(Cli, TextAndCsvOutput) {
  const Outcome text = run({"iw", "--input", data("pauli_zx.json")});
  ASSERT_EQ(text.code, 0) << text.err;
  EXPECT_NE(text.out.find("weight"), std::string::npos);
  const Outcome csv = run({"iw", "--input", data("pauli_zx.json"), "--csv"});
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "kind,name,value,relation,rhs,residual,tolerance,pass");
  EXPECT_EQ(run({"iw", "--input", data("pauli_zx.json"), "--csv", "--json"}).code, 1);
}

TEST(Cli, InputErrorsExitWithOne) {
  EXPECT_EQ(run({"qexc", "--input", scratch("qcomp_bad.json", "{\"dim\": 2, \"operators\": [")}).code, 1);
  EXPECT_EQ(run({"qexc", "--input", data("missing.json")}).code, 1);
  EXPECT_EQ(run({"qexc", "--bogus"}).code, 1);
  EXPECT_EQ(run({"qexc"}).code, 1);
  EXPECT_EQ(run({"deta", "--input", data("twostates.json"), "--eta", "1.5"}).code, 1);
  EXPECT_EQ(run({"example", "nope"}).code, 1);
  EXPECT_EQ(run({"verify", "nope"}).code, 1);
  EXPECT_EQ(run({"exclude-classical", "--eta", "0.1"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, PermutationBudgetIsAnInputError) {
  const json three = {{"dim", 2},
                      {"n", 3},
                      {"w", 3},
                      {"elements", json::array()}};
  // Three trivial three-outcome measurements: 36 canonical permutation sets.
  json e = three;
  for (int x = 0; x < 3; ++x)
    for (int a = 0; a < 3; ++a)
      e["elements"].push_back({{"x", x}, {"a", a}, {"matrix", {{{1.0 / 3, 0}, {0, 0}}, {{0, 0}, {1.0 / 3, 0}}}}});
  const std::string path = scratch("qcomp_three.json", e.dump());
  ASSERT_EQ(run({"cpovm", "--input", path}).code, 0);
  const Outcome r = run({"cpovm", "--input", path, "--max-perms", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--max-perms"), std::string::npos);
}

TEST(Cli, SolverFailureExitsWithTwo) {
  const Outcome r = run({"deta", "--input", data("twostates.json"), "--tol", "1e-300"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("solver-failure"), std::string::npos);
}
