#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "npl_cli/config.hpp"
#include "npl_cli/run.hpp"
#include "schema.hpp"

using namespace npl;
using namespace npl::cli;
using nlohmann::json;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "npl");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST(Complex, ParseAndFormat) {
  EXPECT_EQ(parse_complex("0.5+0i"), cplx(0.5, 0));
  EXPECT_EQ(parse_complex("0.3+0.4i"), cplx(0.3, 0.4));
  EXPECT_EQ(parse_complex("-0.8"), cplx(-0.8, 0));
  EXPECT_EQ(parse_complex("-i"), cplx(0, -1));
  EXPECT_EQ(parse_complex("2i"), cplx(0, 2));
  EXPECT_EQ(parse_complex("1e-3-2.5e+2i"), cplx(1e-3, -250));
  EXPECT_EQ(parse_complex(" 1 - 2i "), cplx(1, -2));
  EXPECT_THROW(parse_complex("abc"), UsageError);
  EXPECT_THROW(parse_complex("1+xi"), UsageError);
  for (cplx z : {cplx(0.1, -0.2), cplx(-1e-300, 3), cplx(1.0 / 3.0, 2.0 / 7.0)})
    EXPECT_EQ(parse_complex(format_complex(z)), z);
}

TEST(Config, MinimalModesFlags) {
  const RawEntries flags{{"m", "1"}, {"n", "1"}, {"alpha", "0.5+0i"}, {"kmax", "3"}, {"pmax", "3"}};
  const auto c = resolve_config("modes", {}, flags);
  EXPECT_EQ(c.integer("kmax"), 3);
  EXPECT_EQ(c.complex("alpha"), cplx(0.5, 0));
  EXPECT_EQ(c.integer("smax"), 0);
  EXPECT_EQ(c.text("variant"), "problem2");
}

TEST(Config, Errors) {
  EXPECT_THROW(resolve_config("modes", {{"foo", "1"}}, {}), UsageError);
  try {
    resolve_config("modes", {{"foo", "1"}}, {});
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
  }
  try {
    resolve_config("modes", {}, {{"pmax", "3"}});
    FAIL();
  } catch (const UsageError& e) {
    EXPECT_NE(std::string(e.what()).find("kmax"), std::string::npos);
  }
  EXPECT_THROW(resolve_config("modes", {}, {{"kmax", "x"}, {"pmax", "1"}}), UsageError);
  EXPECT_THROW(resolve_config("modes", {}, {{"kmax", "1.5"}, {"pmax", "1"}}), UsageError);
  EXPECT_THROW(resolve_config("modes", {}, {{"kmax", "1"}, {"pmax", "1"}, {"alpha", "0+0i"}}), UsageError);
  EXPECT_THROW(resolve_config("roots", {}, {{"nu", "0.5"}, {"count", "3"}, {"kmax", "3"}}), UsageError);
  EXPECT_THROW(resolve_config("nope", {}, {}), UsageError);
  EXPECT_THROW(resolve_config("verify", {}, {{"k", "1"}, {"p", "1"}, {"variant", "problem4"}}), UsageError);
  EXPECT_THROW(resolve_config("verify", {{"command", "roots"}}, {{"k", "1"}, {"p", "1"}}), UsageError);
}

TEST(Config, FlagsOverrideFile) {
  const auto c = resolve_config("roots", {{"nu", "0.25"}, {"count", "4"}}, {{"count", "2"}});
  EXPECT_EQ(c.real("nu"), 0.25);
  EXPECT_EQ(c.integer("count"), 2);
}

TEST(Config, FileParsing) {
  const auto path = temp_file("npl_cfg_ok.cfg", "# comment\ncommand = roots\nnu = 0.5   # trailing\n\ncount=3\n");
  const auto entries = read_config_file(path.string());
  ASSERT_EQ(entries.size(), 3u);
  EXPECT_EQ(entries[1], (std::pair<std::string, std::string>{"nu", "0.5"}));
  const auto bad = temp_file("npl_cfg_bad.cfg", "nu 0.5\n");
  EXPECT_THROW(read_config_file(bad.string()), UsageError);
  EXPECT_THROW(read_config_file("/nonexistent/npl.cfg"), UsageError);
}

TEST(Config, QuadOrderEnvironmentDefault) {
  setenv("NPL_QUAD_ORDER", "16", 1);
  EXPECT_EQ(resolve_config("roots", {}, {{"nu", "0.5"}, {"count", "1"}}).integer("quad_order"), 16);
  EXPECT_EQ(resolve_config("roots", {}, {{"nu", "0.5"}, {"count", "1"}, {"quad_order", "8"}}).integer("quad_order"), 8);
  setenv("NPL_QUAD_ORDER", "bogus", 1);
  EXPECT_THROW(resolve_config("roots", {}, {{"nu", "0.5"}, {"count", "1"}}), UsageError);
  unsetenv("NPL_QUAD_ORDER");
  EXPECT_EQ(resolve_config("roots", {}, {{"nu", "0.5"}, {"count", "1"}}).integer("quad_order"), 32);
}

TEST(Config, JsonRoundTrip) {
  const std::vector<std::pair<std::string, RawEntries>> cases{
      {"roots", {{"nu", "0.5"}, {"count", "3"}}},
      {"verify", {{"k", "2"}, {"p", "1"}, {"alpha", "0.3+0.4i"}, {"m", "0.5"}}},
      {"sweep", {{"alphas", "0.3,0.5,0.9-0.1i"}, {"kmax", "2"}, {"pmax", "2"}, {"smax", "1"}}},
      {"dispersion", {{"k1", "1"}, {"k2", "-1"}, {"k3", "1"}, {"k4", "1"}, {"k5", "1"}, {"k6", "-1"},
                      {"alpha", "1"}, {"re_min", "0"}, {"re_max", "50"}}},
      {"energy", {{"k", "1"}, {"p", "1"}, {"lambda", "0"}}},
  };
  for (const auto& [cmd, entries] : cases) {
    const auto c = resolve_config(cmd, {}, entries);
    const auto text = config_to_json(c).dump();
    EXPECT_EQ(config_from_json(json::parse(text)), c) << cmd;
  }
}

TEST(Cli, RootsCsv) {
  const auto r = invoke({"roots", "--nu", "0.5", "--count", "3", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "nu,k,zero,residual");
  for (int k = 1; k <= 3; ++k) {
    std::getline(in, line);
    double nu, zero, residual;
    int kk;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%d,%lf,%lf", &nu, &kk, &zero, &residual), 4);
    EXPECT_EQ(kk, k);
    EXPECT_NEAR(zero, k * 3.141592653589793, 1e-10);
  }
}

TEST(Cli, VerifyExample) {
  const auto r = invoke({"verify", "--variant", "problem2", "--m", "1", "--n", "1", "--alpha", "0.5+0i", "--k", "1",
                         "--p", "1", "--s", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_LE(doc["results"]["residual"]["max_rel"].get<double>(), 1e-8);
  EXPECT_EQ(doc["version"], "npl 1.0.0");
  EXPECT_EQ(doc["config"]["command"], "verify");
}

TEST(Cli, SweepRemark1) {
  const auto r = invoke({"sweep", "--variant", "problem2", "--alphas", "0.3,0.5,0.9", "--kmax", "2", "--pmax", "2",
                         "--smax", "1", "--points", "40"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  const auto& lattice = doc["results"]["lattice"];
  EXPECT_EQ(lattice.size(), 3u * 2 * 2 * 3);
  for (const auto& e : lattice) EXPECT_LT(e["lambda"]["re"].get<double>(), 0.0);
  // sorted by index tuple
  EXPECT_EQ(lattice[0]["s"], -1);
  EXPECT_EQ(lattice[1]["s"], 0);
  EXPECT_EQ(lattice.back()["alpha"], "0.9+0i");
}

TEST(Cli, ExitCodes) {
  const auto unknown = temp_file("npl_cfg_unknown.cfg", "foo = 1\n");
  auto r = invoke({"verify", "--config", unknown.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("foo"), std::string::npos);
  EXPECT_EQ(invoke({"modes", "--alpha", "0+0i", "--kmax", "1", "--pmax", "1"}).code, 2);
  EXPECT_EQ(invoke({"modes", "--kmax", "1"}).code, 2);
  EXPECT_EQ(invoke({"modes", "--kmax", "1", "--pmax", "1", "--bogus", "3"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
  EXPECT_EQ(invoke({"--version"}).code, 0);
  // paper-literal Problem-1 sign fails the residual check
  r = invoke({"verify", "--variant", "problem1", "--alpha", "0.5", "--k", "1", "--p", "2", "--convention",
              "paper_literal", "--points", "20"});
  EXPECT_EQ(r.code, 1);
  // parity violation is a usage error
  EXPECT_EQ(invoke({"verify", "--variant", "problem1", "--alpha", "0.5", "--k", "1", "--p", "1"}).code, 2);
  // non-root lambda for problem 3
  EXPECT_EQ(invoke({"verify", "--variant", "problem3", "--lambda", "3", "--k1", "1", "--k2", "1", "--k3", "1",
                    "--k4", "1", "--k5", "1", "--k6", "1", "--alpha", "0.5"})
                .code,
            1);
}

TEST(Cli, ConfigFileWithCommand) {
  const auto path = temp_file("npl_cfg_cmd.cfg", "command = roots\nnu = 0.5\ncount = 2\nformat = csv\n");
  const auto r = invoke({"--config", path.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, 18), "nu,k,zero,residual");
}

TEST(Cli, OutputFilesAndDispersionCsv) {
  const auto dir = std::filesystem::temp_directory_path() / "npl_cli_out";
  std::filesystem::create_directories(dir);
  const auto csv = (dir / "scan.csv").string();
  const auto r = invoke({"dispersion", "--k1", "1", "--k2", "-1", "--k3", "1", "--k4", "1", "--k5", "1", "--k6", "-1",
                         "--alpha", "1", "--re_min", "0", "--re_max", "50", "--density_re", "64", "--format", "csv",
                         "--output_path", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "lambda_re,lambda_im,abs_det");
  std::ifstream cand(csv + ".candidates.json");
  const auto doc = json::parse(cand);
  EXPECT_TRUE(doc["results"]["candidates"].empty());
  EXPECT_TRUE(doc["results"]["theorem"]["guaranteed"].get<bool>());
}

TEST(Cli, DeterministicApartFromTimestamp) {
  const RunConfig c = resolve_config("verify", {}, {{"k", "2"}, {"p", "1"}, {"alpha", "0.3+0.4i"}, {"seed", "7"}});
  std::ostringstream a, b, err;
  RunOptions fixed;
  fixed.timestamp = "T";
  ASSERT_EQ(run(c, a, err, fixed), 0);
  ASSERT_EQ(run(c, b, err, fixed), 0);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Cli, EmbeddedConfigRoundTrips) {
  const auto r = invoke({"modes", "--kmax", "2", "--pmax", "2", "--alpha", "-0.8", "--smax", "1"});
  ASSERT_EQ(r.code, 0);
  const auto doc = json::parse(r.out);
  const RunConfig again = config_from_json(doc["config"]);
  EXPECT_EQ(again, resolve_config("modes", {}, {{"kmax", "2"}, {"pmax", "2"}, {"alpha", "-0.8"}, {"smax", "1"}}));
}

TEST(Cli, GoldenSchemas) {
  for (const auto& c : test::golden_cases()) {
    const auto golden = test::read_golden(NPL_GOLDEN_DIR, c.name);
    ASSERT_FALSE(golden.is_null()) << c.name;
    EXPECT_EQ(golden["args"].get<std::vector<std::string>>(), c.args) << c.name;
    const auto r = invoke(c.args);
    ASSERT_EQ(r.code, 0) << c.name << ": " << r.err;
    EXPECT_EQ(test::schema_of(nlohmann::ordered_json::parse(r.out)), golden["schema"]) << c.name;
  }
}

TEST(Cli, BinaryMatchesInProcessRun) {
  const std::string cmd = std::string(NPL_CLI_PATH) + " roots --nu 0.5 --count 3 --format csv";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string out;
  char buf[256];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  EXPECT_EQ(pclose(pipe), 0);
  EXPECT_EQ(out, invoke({"roots", "--nu", "0.5", "--count", "3", "--format", "csv"}).out);
}
