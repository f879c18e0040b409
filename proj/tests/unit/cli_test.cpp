// Copyright 2026 The gaussmoser Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "gaussmoser");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = gaussmoser::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
  args.push_back("--no-timing");
  const auto r = run(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return json::parse(r.out);
}

}  // namespace

TEST(Cli, DocumentSchema) {
  const auto doc = run_json({"phi", "--t", "0"});
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"cmd", "params", "result", "error_estimate", "warnings",
                                            "elapsed_ms"}));
  EXPECT_EQ(doc["cmd"], "phi");
  EXPECT_DOUBLE_EQ(doc["result"]["value"].get<double>(), 0.5);
  EXPECT_TRUE(doc["elapsed_ms"].is_null());
  const auto timed = json::parse(run({"phi", "--t", "1"}).out);
  EXPECT_TRUE(timed["elapsed_ms"].is_number());
}

TEST(Cli, DeterministicOutput) {
  const std::vector<std::vector<std::string>> cases = {
      {"lambda", "--beta", "1", "--M", "2", "--t", "10"},
      {"norm", "--beta", "2", "--t", "3"},
      {"condition", "--beta", "1", "--phi", "pow:0.5", "--eps", "0.5"},
      {"asympt", "--name", "psi", "--sigma", "-0.5"},
  };
  for (auto c : cases) {
    c.push_back("--no-timing");
    const auto a = run(c);
    const auto b = run(c);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out) << c[0];
  }
}

TEST(Cli, LambdaMatchesOracle) {
  const auto doc = run_json({"lambda", "--beta", "1", "--M", "2", "--t", "10"});
  EXPECT_NEAR(doc["result"]["log_lambda"].get<double>(), -1.2862853243346566, 1e-9);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"phi", "--t", "0"}).code, 0);
  EXPECT_EQ(run({"lambda", "--beta", "3", "--t", "5"}).code, 2);
  EXPECT_EQ(run({"lambda", "--t", "abc"}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"iso", "--s", "1.5"}).code, 2);
  EXPECT_EQ(run({"lambda", "--t", "5", "--format", "csv"}).code, 2);
  EXPECT_EQ(run({"bound", "--beta", "1", "--M", "2", "--phi", "pow:0.5"}).code, 4);
}

TEST(Cli, CsvForAsymptotics) {
  const auto r = run({"asympt", "--name", "psi", "--sigma", "-0.5", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,remainder_ratio_order_0,remainder_ratio_order_1");
  int rows = 0;
  for (std::string line; std::getline(in, line);) rows += !line.empty();
  EXPECT_EQ(rows, 6);
}

TEST(Cli, ConfigFileAndOverride) {
  const std::string path = ::testing::TempDir() + "gaussmoser_cli_config.txt";
  {
    std::ofstream f(path);
    f << "# lambda settings\nbeta = 2\nM = 2\nt = 20\n";
  }
  const auto doc = run_json({"--config", path, "lambda"});
  EXPECT_NEAR(doc["result"]["log_lambda"].get<double>(), -0.070782809024149675, 1e-9);
  const auto over = run_json({"--config", path, "lambda", "--t", "2"});
  EXPECT_NEAR(over["result"]["log_lambda"].get<double>(), 1.5119140594036985, 1e-9);
  EXPECT_EQ(run({"--config", path + ".missing", "lambda"}).code, 2);
  std::remove(path.c_str());
}

TEST(Cli, OutputFile) {
  const std::string path = ::testing::TempDir() + "gaussmoser_cli_out.json";
  const auto r = run({"iso", "--s", "0.3", "--output", path, "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream f(path);
  const auto doc = json::parse(f);
  EXPECT_NEAR(doc["result"]["value"].get<double>(), 0.34769261420007376, 1e-14);
  std::remove(path.c_str());
}

TEST(Cli, RegistryCoversSubcommands) {
  const auto& reg = gaussmoser::cli::operation_registry();
  const auto& subs = gaussmoser::cli::subcommand_names();
  std::set<std::string> known(subs.begin(), subs.end());
  std::set<std::string> used;
  for (const auto& e : reg) {
    EXPECT_TRUE(known.count(e.subcommand)) << e.operation << " -> " << e.subcommand;
    used.insert(e.subcommand);
  }
  EXPECT_EQ(used, known);
  for (const auto& s : subs) EXPECT_EQ(run({s, "--help"}).code, 0) << s;
}
