// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "muefix/cli.hpp"
#include "muefix/common.hpp"
#include "muefix/serialize.hpp"

using namespace muefix;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("muefix_test_" + name);
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("eta output is byte-identical across runs") {
  const std::vector<std::string> args{"eta", "--ensemble", "binary", "--k", "10", "--n", "12", "--seed", "42"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto parsed = json::parse(a.out);
  CHECK(parsed.at("eta").get<double>() >= 0.0);
  CHECK(parsed.at("method").get<std::string>() == "branch_bound");
}

TEST_CASE("curve emits the exact piecewise rows") {
  const auto r = invoke({"curve", "--zeta-min", "0.0625", "--zeta-max", "1.0", "--steps", "16"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "zeta,eta_bound,tag");
  bool saw_half = false;
  while (std::getline(lines, line)) {
    if (line == "0.4375,0.5,lower_bound") saw_half = true;
  }
  CHECK(saw_half);
  CHECK(r.out.find("0.25,1,exact") != std::string::npos);
  CHECK(r.out.find("0.5,,unknown") != std::string::npos);
  CHECK(r.out.find("0.9375,0,zero") != std::string::npos);
}

TEST_CASE("bounds table carries the documented header") {
  const auto csv = invoke({"bounds", "--k", "10", "--n", "14"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("j,term_log2\n", 0) == 0);
  const auto js = invoke({"bounds", "--k", "10", "--n", "14", "--format", "json"});
  const auto parsed = json::parse(js.out);
  CHECK(parsed.contains("value_log2"));
  CHECK(parsed.at("params").at("u").get<double>() == 1.5);
  const auto gauss = invoke({"bounds", "--family", "gaussian", "--k", "12", "--n", "16",
                             "--format", "json", "--g1-threshold", "0.5"});
  const auto gparsed = json::parse(gauss.out);
  CHECK(gparsed.contains("g1_weight1_prob"));
}

TEST_CASE("gen round-trips through eta --in") {
  const auto path = temp_file("matrix.json");
  const auto gen = invoke({"gen", "--ensemble", "binary", "--k", "6", "--n", "8", "--seed", "9",
                           "--out", path.string()});
  REQUIRE(gen.code == 0);
  const auto from_file = invoke({"eta", "--in", path.string()});
  const auto direct = invoke({"eta", "--ensemble", "binary", "--k", "6", "--n", "8", "--seed", "9"});
  CHECK(from_file.code == 0);
  CHECK(from_file.out == direct.out);
  std::filesystem::remove(path);
}

TEST_CASE("detect emits a verdict whose witness verifies") {
  const auto r = invoke({"detect", "--ensemble", "binary", "--k", "8", "--n", "4", "--seed", "1"});
  REQUIRE(r.code == 0);
  const auto parsed = json::parse(r.out);
  if (!parsed.at("detecting").get<bool>()) {
    REQUIRE(parsed.at("witness").is_array());
    const auto h = gen_binary_antipodal(8, 4, 1);
    std::vector<std::int8_t> w;
    for (const auto& e : parsed.at("witness")) w.push_back(static_cast<std::int8_t>(e.get<int>()));
    CHECK(verify_witness(h, TernaryVector::from(w)));
  }
}

TEST_CASE("sweep runs a minimal config with documented defaults") {
  const auto cfg_path = temp_file("config.json");
  {
    std::ofstream f(cfg_path);
    f << R"({"estimator":"event_prob","k_list":[4,6],"zeta":0.5,"trials":20})";
  }
  const auto cfg = cli::load_config(cfg_path.string());
  CHECK(cfg.gamma == 1.0);
  CHECK(cfg.u_exp == 1.5);
  CHECK(cfg.trials == 20);

  const auto r = invoke({"sweep", "--config", cfg_path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("k,n,zeta,gamma,estimate,ci_low,ci_high,trials,seed\n", 0) == 0);
  const auto r4 = invoke({"--threads", "4", "sweep", "--config", cfg_path.string()});
  CHECK(r.out == r4.out);
  std::filesystem::remove(cfg_path);
}

TEST_CASE("config errors name every violated constraint") {
  const auto cfg_path = temp_file("bad_config.json");
  {
    std::ofstream f(cfg_path);
    f << R"({"estimator":"event_prob","k_list":[4],"zeta":0.5,"gamma":1.5})";
  }
  CHECK_THROWS_WITH_AS(cli::load_config(cfg_path.string()), doctest::Contains("(0,1]"),
                       ValidationError);
  {
    std::ofstream f(cfg_path);
    f << R"({"k_list":[4]})";
  }
  try {
    cli::load_config(cfg_path.string());
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("estimator") != std::string::npos);
    CHECK(what.find("zeta") != std::string::npos);
  }
  std::filesystem::remove(cfg_path);
}

TEST_CASE("finite ensembles load alphabets from files and builtins") {
  const auto alpha_path = temp_file("alphabet.json");
  {
    std::ofstream f(alpha_path);
    f << R"({"symbols":[["1"],["-1"],["2"],["-2"]],)"
      << R"("probabilities":["1/4","1/4","1/4","1/4"]})";
  }
  const auto r = invoke({"detect", "--ensemble", "finite", "--alphabet", alpha_path.string(),
                         "--k", "6", "--n", "8", "--seed", "2"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).contains("detecting"));
  const auto q = invoke({"eta", "--ensemble", "finite", "--alphabet", "qpsk", "--k", "4", "--n",
                         "4", "--seed", "2"});
  CHECK(q.code == 0);
  std::filesystem::remove(alpha_path);
}

TEST_CASE("a k_list containing 1 is accepted with a zeta target") {
  const auto cfg_path = temp_file("k1_config.json");
  {
    std::ofstream f(cfg_path);
    f << R"({"estimator":"event_prob","k_list":[1,4],"zeta":0.4,"trials":30})";
  }
  const auto r = invoke({"sweep", "--config", cfg_path.string()});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(first.rfind("1,1,0,", 0) == 0);         // k=1: single chip, zeta recorded as 0
  CHECK(first.find(",0,0,") != std::string::npos);  // estimate exactly zero
  std::filesystem::remove(cfg_path);
}

TEST_CASE("exit codes: usage 1, capacity 2, success 0") {
  CHECK(invoke({"--no-such-flag"}).code == 1);
  CHECK(invoke({"eta", "--ensemble", "binary", "--k", "25", "--n", "30", "--seed", "1",
                "--method", "brute"}).code == 2);
  CHECK(invoke({"eta", "--ensemble", "binary", "--k", "4", "--n", "6", "--seed", "1"}).code == 0);
  CHECK(invoke({"gen", "--ensemble", "finite", "--k", "4", "--n", "6", "--seed", "1"}).code == 1);
}

TEST_CASE("ber subcommand emits the documented CSV") {
  const auto r = invoke({"ber", "--ensemble", "binary", "--k", "2", "--n", "4", "--seed", "3",
                         "--sigma", "0.8", "--trials", "200"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("sigma,pe,ci_low,ci_high,eta_hat,bit_errors,bits,trials,seed\n", 0) == 0);
}

TEST_CASE("selftest passes and exits zero") {
  std::ostringstream sink;
  CHECK(cli::selftest(sink));
}

TEST_SUITE_END();
