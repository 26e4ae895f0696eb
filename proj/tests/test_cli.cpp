#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "jlm/cli.hpp"
#include "jlm/symexpr.hpp"

using json = nlohmann::json;
using namespace jlm::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

class TempJson {
 public:
  explicit TempJson(const json& j) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("jlm_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".json");
    std::ofstream(path_) << j.dump();
  }
  explicit TempJson(const std::string& raw) : TempJson(json()) { std::ofstream(path_) << raw; }
  ~TempJson() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

json quaternion_over_q(std::vector<std::string> ram, bool complete_places = true) {
  json places = json::array({{{"name", "2"}, {"q", 2}, {"local_disc_norm", 1}},
                             {{"name", "3"}, {"q", 3}, {"local_disc_norm", 1}}});
  json local = json::array();
  for (const auto& r : ram) {
    if (r != "r1" && complete_places) local.push_back({{"place", r}, {"d_v", 2}});
  }
  json arch = json::array(
      {{{"place", "r1"}, {"blocks", json::array({{{"type", "DS2"}, {"k", 4}, {"omega", "w"}}})}}});
  return {{"setup", {{"abs_discriminant", 1}, {"r1", 1}, {"r2", 0}, {"places", places}, {"ram_set", ram},
                     {"S", json::array({"r1"})}}},
          {"n", 1},
          {"d", 2},
          {"places", local},
          {"archimedean", arch}};
}

json covolume_check_doc(const std::string& right_tau) {
  const json tail = {{"rule", {{"rule", "one_minus_q_pow"}, {"exponent", -2}}}, {"prime_cap", 100000}};
  const json index = {{"fs_index", 2}, {"os_index", 2}, {"mu_fs_order", 2}, {"mu_os_order", 2}};
  auto side = [&](const std::string& tau) {
    return json{{"expr",
                 {{"half_exponent", 3},
                  {"tamagawa_number", tau},
                  {"finite_factors", {{"3", {{"value", "1 - q^-2"}, {"q", 3}}}}},
                  {"tail", tail}}},
                {"index", index}};
  };
  return {{"setup",
           {{"places", json::array({{{"name", "2"}, {"q", 2}}, {{"name", "3"}, {"q", 3}}})},
            {"ram_set", json::array({"r1", "2"})},
            {"S", json::array({"r1", "2"})}}},
          {"left", side("2")},
          {"right", side(right_tau)}};
}

}  // namespace

TEST(Cli, BasicSubcommands) {
  auto r = run_cli({"ratio", "--n", "1", "--d", "2", "--dv", "2"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(trim(r.out), "1");
  r = run_cli({"volume", "--q", "2", "--n", "2", "--nv", "2"});
  EXPECT_EQ(trim(r.out), "3/4");
  r = run_cli({"disc-norm", "--n", "1", "--d", "2", "--dv", "2"});
  EXPECT_EQ(trim(r.out), "q^2");
  r = run_cli({"steinberg", "--m", "2", "--e", "2", "--q", "3"});
  EXPECT_EQ(trim(r.out), "2");
  r = run_cli({"gamma-dim", "--covol", "pi/3", "--degree", "(k-1)/(4*pi)", "--k", "7"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(trim(r.out), "1/2");
}

TEST(Cli, InputErrorsExitOne) {
  EXPECT_EQ(run_cli({}).code, kInputError);
  EXPECT_EQ(run_cli({"ratio", "--n", "2", "--d", "1", "--dv", "3"}).code, kInputError);
  EXPECT_EQ(run_cli({"volume", "--q", "6", "--n", "1"}).code, kInputError);
  EXPECT_EQ(run_cli({"--digits", "0", "ratio", "--n", "1"}).code, kInputError);
  EXPECT_EQ(run_cli({"covolume"}).code, kInputError);
  const auto r = run_cli({"arch-degree", "--k", "2", "--group", "sl2", "--k", "1"});
  EXPECT_NE(r.code, kOk);
}

TEST(Cli, JsonErrorCarriesPointer) {
  json doc = covolume_check_doc("2");
  doc["left"]["expr"]["tail"]["rule"]["rule"] = "nonsense";
  TempJson f(doc);
  const auto r = run_cli({"--format", "json", "--input", f.path(), "check-covolume-eq"});
  EXPECT_EQ(r.code, kInputError);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["error"]["kind"], "input");
  EXPECT_EQ(j["error"]["path"], "/left/expr/tail/rule/rule");
  EXPECT_NE(r.err.find("error (input)"), std::string::npos);
}

TEST(Cli, MalformedJsonIsInputError) {
  TempJson f(std::string("{\"setup\": "));
  EXPECT_EQ(run_cli({"--input", f.path(), "check-covolume-eq"}).code, kInputError);
}

TEST(Cli, CovolumeCheckVerdicts) {
  TempJson same(covolume_check_doc("2"));
  auto r = run_cli({"--input", same.path(), "check-covolume-eq"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(trim(r.out), "equal");

  TempJson differ(covolume_check_doc("3"));
  r = run_cli({"--input", differ.path(), "check-covolume-eq"});
  EXPECT_EQ(r.code, kNotEqual);
  EXPECT_EQ(trim(r.out), "not_equal (tamagawa number)");

  json doc = covolume_check_doc("2");
  doc["setup"]["S"] = json::array({"r1"});
  doc["left"]["expr"]["finite_factors"]["2"] = {{"value", "1 - q^-2"}, {"q", 2}};
  doc["right"]["expr"]["finite_factors"]["2"] = {{"value", "1 - q^-2"}, {"q", 2}};
  TempJson open(doc);
  r = run_cli({"--format", "json", "--input", open.path(), "check-covolume-eq"});
  EXPECT_EQ(r.code, kInconclusive);
  EXPECT_EQ(json::parse(r.out)["verdict"], "inconclusive");
}

TEST(Cli, TruncationReportsBestValue) {
  const json expr = {{"tail", {{"rule", {{"rule", "one_minus_q_pow"}, {"exponent", -2}, {"invert", true}}}}}};
  TempJson f(expr);
  const auto r = run_cli({"--format", "json", "--prime-cap", "100", "--input", f.path(), "covolume"});
  EXPECT_EQ(r.code, kInputError);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["error"]["kind"], "truncation");
  EXPECT_TRUE(j["error"].contains("best"));
}

TEST(Cli, PrimeCapFromEnvironment) {
  const json expr = {{"tail", {{"rule", {{"rule", "one_minus_q_pow"}, {"exponent", -2}}}}}};
  TempJson f(expr);
  ::setenv("JLM_PRIME_CAP", "50", 1);
  auto r = run_cli({"--input", f.path(), "covolume"});
  EXPECT_EQ(r.code, kInputError);
  EXPECT_NE(r.err.find("truncation"), std::string::npos);
  ::setenv("JLM_PRIME_CAP", "junk", 1);
  EXPECT_EQ(run_cli({"--input", f.path(), "covolume"}).code, kInputError);
  ::unsetenv("JLM_PRIME_CAP");
  r = run_cli({"--input", f.path(), "covolume"});
  EXPECT_EQ(r.code, kOk);
}

TEST(Cli, JsonOutputRoundTrips) {
  // Exact outputs re-parse to the value the library computes directly.
  const std::vector<std::vector<std::string>> cases = {
      {"volume", "--n", "1", "--d", "2", "--dv", "2"},
      {"volume", "--n", "3", "--normalization", "tamagawa"},
      {"steinberg", "--m", "3", "--e", "2"},
      {"arch-degree", "--k", "5"},
      {"gamma-dim", "--covol", "pi/3", "--degree", "(k-1)/(4*pi)", "--k", "9"}};
  for (const auto& args : cases) {
    auto text_args = args;
    const auto text = run_cli(text_args);
    ASSERT_EQ(text.code, kOk) << text.err;
    std::vector<std::string> json_args = {"--format", "json"};
    json_args.insert(json_args.end(), args.begin(), args.end());
    const auto js = run_cli(json_args);
    ASSERT_EQ(js.code, kOk);
    const auto j = json::parse(js.out);
    const char* key = j.contains("value") ? "value" : "gamma_dimension";
    ASSERT_TRUE(j.contains(key)) << js.out;
    const json& v = j[key];
    if (v.is_object()) EXPECT_EQ(v["radicand"], "1");
    const auto value = v.is_object() ? v["scalar"].get<std::string>() : v.get<std::string>();
    EXPECT_EQ(jlm::symexpr::parse_scalar(value), jlm::symexpr::parse_scalar(trim(text.out)));
  }
}

TEST(Cli, NumericOutput) {
  const auto r = run_cli({"--numeric", "--digits", "10", "arch-degree", "--k", "3"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("0.1519817755"), std::string::npos);
}

TEST(Cli, CsvGammaDensityGrid) {
  const auto r = run_cli({"--format", "csv", "gamma-density", "--t-grid", "1:3:1"});
  EXPECT_EQ(r.code, kOk);
  std::istringstream in(r.out);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 4);  // header plus three rows
}

TEST(Cli, VerifyJlRamifiedQuaternion) {
  TempJson f(quaternion_over_q({"r1", "2"}));
  const auto r = run_cli({"--format", "json", "--input", f.path(), "verify-jl"});
  EXPECT_EQ(r.code, kOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "equal");
  EXPECT_EQ(j["archimedean"][0]["status"], "equal");
  EXPECT_EQ(j["finite_places"][0]["d_v"], 2);
}

TEST(Cli, VerifyJlSplit) {
  TempJson f(quaternion_over_q({}));
  const auto r = run_cli({"--input", f.path(), "verify-jl"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("verdict: equal"), std::string::npos);
}

TEST(Cli, VerifyJlRejectsInconsistentPlaces) {
  json doc = quaternion_over_q({"r1", "2"});
  doc["places"].push_back({{"place", "3"}, {"d_v", 2}});
  TempJson outside(doc);
  auto r = run_cli({"--format", "json", "--input", outside.path(), "verify-jl"});
  EXPECT_EQ(r.code, kInputError);
  EXPECT_EQ(json::parse(r.out)["error"]["path"], "/places/1/d_v");

  TempJson missing(quaternion_over_q({"r1", "2"}, false));
  EXPECT_EQ(run_cli({"--input", missing.path(), "verify-jl"}).code, kInputError);

  doc = quaternion_over_q({"r1", "2"});
  doc["setup"]["abs_discriminant"] = 5;
  TempJson bookkeeping(doc);
  r = run_cli({"--input", bookkeeping.path(), "verify-jl"});
  EXPECT_EQ(r.code, kNotEqual);
  EXPECT_NE(r.out.find("tamagawa bookkeeping"), std::string::npos);
}

TEST(Cli, VerifyAllPasses) {
  const auto r = run_cli({"verify-all", "--max-nd", "6"});
  EXPECT_EQ(r.code, kOk) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}
