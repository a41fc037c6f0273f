//
// Copyright 2026 The bioaug Authors
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
//


#include "cli.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "test_util.h"

namespace bioaug {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "bioaug");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return (testing::data_dir() / name).string(); }

TEST(Cli, NoVerbIsConfigError) { EXPECT_EQ(run({}).code, cli::kExitConfig); }

TEST(Cli, HelpIsOk) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("augment"), std::string::npos);
}

TEST(Cli, UnknownFlagIsConfigError) {
  EXPECT_EQ(run({"augment", "--bogus", "1"}).code, cli::kExitConfig);
}

TEST(Cli, InvalidValueIsConfigError) {
  const auto r = run({"augment", "--dataset", data("re_fixture.jsonl"),
                      "--notions", data("notions.tsv"), "--sigma", "1.5"});
  EXPECT_EQ(r.code, cli::kExitConfig);
  EXPECT_NE(r.err.find("sigma"), std::string::npos);
}

TEST(Cli, MissingDatasetFileIsRuntimeError) {
  const auto r = run({"augment", "--dataset", "/nonexistent.jsonl", "--notions",
                      data("notions.tsv")});
  EXPECT_EQ(r.code, cli::kExitRuntime);
  EXPECT_NE(r.err.find("does not exist"), std::string::npos);
}

TEST(Cli, AugmentWritesOutputs) {
  const auto dir = testing::fresh_dir("cli-augment");
  const auto r = run({"augment", "--dataset", data("re_fixture.jsonl"),
                      "--notions", data("notions.tsv"), "--mock-generator",
                      "synonym", "--proportion", "0.5", "--output",
                      (dir / "o.jsonl").string(), "--report",
                      (dir / "r.json").string(), "--stats",
                      (dir / "s.json").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("attempted 5"), std::string::npos);
  const auto report = nlohmann::json::parse(testing::slurp(dir / "r.json"));
  EXPECT_EQ(report["counts"]["attempted"], 5);
  EXPECT_TRUE(std::filesystem::exists(dir / "s.json"));
}

TEST(Cli, ConfigFileSuppliesOptions) {
  const auto dir = testing::fresh_dir("cli-config");
  std::ofstream(dir / "run.ini") << "[augment]\n"
                                 << "dataset=\"" << data("re_fixture.jsonl") << "\"\n"
                                 << "notions=\"" << data("notions.tsv") << "\"\n"
                                 << "proportion=0.0\n";
  const auto r = run({"--config", (dir / "run.ini").string(), "augment"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("attempted 0"), std::string::npos) << r.out;
  // Flags win over the file.
  const auto r2 = run({"--config", (dir / "run.ini").string(), "augment",
                       "--proportion", "1.0"});
  EXPECT_NE(r2.out.find("attempted 10"), std::string::npos) << r2.out;
}

TEST(Cli, EnvironmentSuppliesEndpoint) {
  ::setenv("BIOAUG_ENDPOINT", "http://127.0.0.1:1", 1);
  // With an endpoint from the environment the http backend passes
  // validation and fails only when the unreachable server is called.
  const auto r = run({"augment", "--dataset", data("re_fixture.jsonl"),
                      "--notions", data("notions.tsv"), "--backend", "http",
                      "--proportion", "0"});
  ::unsetenv("BIOAUG_ENDPOINT");
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  const auto r2 = run({"augment", "--dataset", data("re_fixture.jsonl"),
                       "--notions", data("notions.tsv"), "--backend", "http"});
  EXPECT_EQ(r2.code, cli::kExitConfig);
  EXPECT_NE(r2.err.find("endpoint"), std::string::npos);
}

TEST(Cli, AttributeEmitsOneRecordPerInstance) {
  const auto dir = testing::fresh_dir("cli-attr");
  const auto r = run({"attribute", "--dataset", data("ner_fixture.jsonl"),
                      "--notions", data("notions.tsv"), "--output",
                      (dir / "a.jsonl").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::istringstream lines(testing::slurp(dir / "a.jsonl"));
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    EXPECT_TRUE(nlohmann::json::parse(line).contains("id"));
    ++n;
  }
  EXPECT_EQ(n, 6u);
}

TEST(Cli, DebateAcceptsAgreeablePair) {
  const auto dir = testing::fresh_dir("cli-debate");
  const auto r = run({"debate", "--original", "Give a dose of aspirin .",
                      "--augmented", "Give a quantity of aspirin .", "--entity",
                      "aspirin", "--transcript", (dir / "t.json").string()});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  const auto t = nlohmann::json::parse(testing::slurp(dir / "t.json"));
  EXPECT_TRUE(t.contains("iterations"));
  EXPECT_EQ(run({"debate", "--original", "a"}).code, cli::kExitConfig);
}

TEST(Cli, EvalPrintsMetrics) {
  const auto r = run({"eval", "--gold", data("re_fixture.jsonl"),
                      "--predictions", data("re_fixture.jsonl")});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("f1"), std::string::npos);
  const auto bad = run({"eval", "--gold", data("re_fixture.jsonl"),
                        "--predictions", data("ner_fixture.jsonl")});
  EXPECT_EQ(bad.code, cli::kExitRuntime);
}

TEST(Cli, PromptsRenderAndList) {
  const auto all = run({"prompts"});
  EXPECT_EQ(all.code, cli::kExitOk);
  EXPECT_NE(all.out.find("Multi-agents System Debate"), std::string::npos);
  const auto one = run({"prompts", "--template", "distinguish", "--var",
                        "original=A b .", "--var", "augmented=A c ."});
  EXPECT_EQ(one.code, cli::kExitOk) << one.err;
  EXPECT_NE(one.out.find("‘A c .’"), std::string::npos);
  EXPECT_EQ(run({"prompts", "--template", "nope"}).code, cli::kExitConfig);
  EXPECT_NE(run({"prompts", "--template", "distinguish", "--var",
                 "original=x"}).code,
            cli::kExitOk);
}

}  // namespace
}  // namespace bioaug
