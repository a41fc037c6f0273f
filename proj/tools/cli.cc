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

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bioaug/corpus.h"
#include "bioaug/error.h"
#include "bioaug/metrics.h"
#include "bioaug/mocks.h"
#include "bioaug/pipeline.h"
#include "bioaug/prompts.h"
#include "bioaug/reflection.h"
#include "bioaug/remote.h"

namespace bioaug::cli {

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("cannot write " + path);
}

void add_backend_options(CLI::App* app, RunConfig& c) {
  app->add_option("--backend", c.backend, "mock or http")
      ->capture_default_str();
  app->add_option("--endpoint", c.endpoint, "model server base URL")
      ->envname("BIOAUG_ENDPOINT");
  app->add_option("--api-key", c.api_key, "bearer token for the model server")
      ->envname("BIOAUG_API_KEY");
  app->add_option("--mock-generator", c.mock_generator, "identity or synonym")
      ->capture_default_str();
  app->add_option("--mock-grade", c.mock_grade, "grade of the offline agents")
      ->capture_default_str();
}

void add_dataset_options(CLI::App* app, RunConfig& c) {
  app->add_option("--dataset", c.dataset_path, "input dataset");
  app->add_option("--format", c.dataset_format,
                  "jsonl, conll-bio, re-tsv, qa-json or tc-csv")
      ->capture_default_str();
  app->add_option("--notions", c.notions_path, "label definitions (TSV)");
  app->add_option("--task", c.task, "ner, re, tc or qa");
}

void add_run_options(CLI::App* app, RunConfig& c, std::string& stats_path) {
  add_dataset_options(app, c);
  add_backend_options(app, c);
  app->add_option("--n", c.n, "keywords kept (0 = automatic)")
      ->capture_default_str();
  app->add_option("--k", c.k, "exemplars per key structure")
      ->capture_default_str();
  app->add_option("--sigma", c.sigma, "acceptance threshold")
      ->capture_default_str();
  app->add_option("--max-iters", c.max_iters, "debate iterations")
      ->capture_default_str();
  app->add_option("--n-agents", c.n_agents, "debate agents")
      ->capture_default_str();
  app->add_option("--threshold", c.similarity_threshold,
                  "key-structure similarity threshold")
      ->capture_default_str();
  app->add_option("--max-rounds", c.max_rounds, "key-structure rounds")
      ->capture_default_str();
  app->add_option("--proportion", c.proportion,
                  "share of instances to augment")
      ->capture_default_str();
  app->add_option("--seed", c.seed, "global seed")->capture_default_str();
  app->add_option("--workers", c.workers, "worker threads (0 = all cores)")
      ->capture_default_str();
  app->add_option("--output", c.output_path, "augmented dataset (jsonl)");
  app->add_option("--report", c.report_path, "report (json)");
  app->add_option("--stats", stats_path, "timing and cache statistics (json)");
  app->add_option("--transcripts", c.transcript_dir,
                  "directory for debate transcripts");
  app->add_option("--cache", c.cache_path, "persistent response cache");
  app->add_option("--predictions", c.predictions_path,
                  "predictions to score against the input");
}

int config_failure(std::ostream& err, const std::vector<std::string>& errors) {
  for (const auto& e : errors) err << "config error: " << e << "\n";
  return kExitConfig;
}

int run_augment(const RunConfig& config, const std::string& stats_path,
                std::ostream& out, std::ostream& err) {
  if (auto errors = validate_config(config); !errors.empty()) {
    return config_failure(err, errors);
  }
  const auto result = augment_dataset(config);
  out << render_report(result.report);
  if (!stats_path.empty()) {
    write_text(stats_path, stats_json(result.report).dump(2) + "\n");
  }
  return kExitOk;
}

int run_attribute(const RunConfig& config, const std::string& output,
                  std::ostream& out, std::ostream& err) {
  std::vector<std::string> errors;
  if (config.dataset_path.empty()) errors.push_back("dataset_path: required");
  RunConfig check = config;
  check.dataset_path = "-";
  for (auto& e : validate_config(check)) errors.push_back(e);
  if (!errors.empty()) return config_failure(err, errors);

  const Dataset dataset =
      load_dataset(config.dataset_path, parse_format(config.dataset_format));
  NotionTable notions;
  if (!config.notions_path.empty()) notions = load_notions(config.notions_path);
  BackendSet backends(config, dataset, nullptr);
  const auto records = attribute_batch(dataset, notions, *backends.view().lexicon,
                                       *backends.view().bio, config.n,
                                       config.workers);
  std::string text;
  for (const auto& r : records) text += r.dump() + "\n";
  if (output.empty()) {
    out << text;
  } else {
    write_text(output, text);
  }
  return kExitOk;
}

struct DebateArgs {
  std::string original;
  std::string augmented;
  std::vector<std::string> entities;
  std::string transcript;
};

int run_debate_verb(const RunConfig& config, const DebateArgs& args,
                    std::ostream& out, std::ostream& err) {
  std::vector<std::string> errors;
  if (args.original.empty()) errors.push_back("original: required");
  if (args.augmented.empty()) errors.push_back("augmented: required");
  if (config.backend != "mock" && config.backend != "http") {
    errors.push_back("backend: expected mock or http");
  }
  if (config.backend == "http" && config.endpoint.empty()) {
    errors.push_back("endpoint: required for the http backend");
  }
  if (!(config.sigma > 0.0 && config.sigma <= 1.0)) {
    errors.push_back("sigma: must lie in (0, 1]");
  }
  if (config.max_iters < 1) errors.push_back("max_iters: must be at least 1");
  if (config.n_agents < 2) {
    errors.push_back("n_agents: a judge and at least one reviewer are needed");
  }
  if (config.mock_grade < 0 || config.mock_grade > 100) {
    errors.push_back("mock_grade: must lie in [0, 100]");
  }
  if (!errors.empty()) return config_failure(err, errors);

  std::vector<std::unique_ptr<AgentBackend>> owned;
  for (std::size_t i = 0; i < config.n_agents; ++i) {
    const std::string id = "agent-" + std::to_string(i + 1);
    if (config.backend == "http") {
      owned.push_back(std::make_unique<HttpAgent>(
          Endpoint{config.endpoint, config.api_key}, id));
    } else {
      owned.push_back(make_agreeable_agent(id, config.mock_grade));
    }
  }
  std::vector<AgentBackend*> agents;
  for (auto& a : owned) agents.push_back(a.get());

  DebateSubject subject{args.original, args.augmented, args.entities};
  DebateTranscript transcript;
  int code = kExitOk;
  try {
    transcript = run_debate(subject, agents,
                            DebateConfig{config.sigma, config.max_iters},
                            config.seed)
                     .transcript;
  } catch (const DebateAborted& e) {
    err << "error: " << e.what() << "\n";
    transcript = e.transcript();
    code = kExitRuntime;
  }
  const auto j = to_json(transcript);
  if (!args.transcript.empty()) write_text(args.transcript, j.dump(2) + "\n");
  if (code == kExitOk) {
    out << "outcome " << j["outcome"].get<std::string>() << " after "
        << transcript.iterations.size() << " iteration(s)\n"
        << "final: " << transcript.final_sentence << "\n";
  }
  return code;
}

struct EvalArgs {
  std::string gold;
  std::string format = "jsonl";
  std::string predictions;
  std::string task;
  std::string output;
};

int run_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> errors;
  if (args.gold.empty()) errors.push_back("gold: required");
  if (args.predictions.empty()) errors.push_back("predictions: required");
  try {
    parse_format(args.format);
  } catch (const std::exception& e) {
    errors.push_back(std::string("format: ") + e.what());
  }
  if (!args.task.empty()) {
    try {
      parse_task(args.task);
    } catch (const std::exception& e) {
      errors.push_back(std::string("task: ") + e.what());
    }
  }
  if (!errors.empty()) return config_failure(err, errors);

  const Dataset gold = load_dataset(args.gold, parse_format(args.format));
  if (gold.empty()) throw Error("gold dataset is empty");
  const TaskType task = args.task.empty() ? gold.front().task : parse_task(args.task);
  const auto table = compute_metrics(gold, args.predictions, task);
  out << render_metrics(table) << "\n";
  if (!args.output.empty()) write_text(args.output, to_json(table).dump(2) + "\n");
  return kExitOk;
}

struct PromptArgs {
  std::string id = "all";
  std::string task = "NER";
  std::vector<std::string> vars;
};

int run_prompts(const PromptArgs& args, std::ostream& out, std::ostream& err) {
  PromptVariables vars;
  for (const auto& kv : args.vars) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      return config_failure(err, {"var: expected name=value, got '" + kv + "'"});
    }
    vars[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  std::vector<PromptTemplate> ids;
  if (args.id == "all") {
    ids = {PromptTemplate::kDebateInitial, PromptTemplate::kDebateReview,
           PromptTemplate::kDebateRevision, PromptTemplate::kTaskAnswer,
           PromptTemplate::kDistinguish};
  } else {
    try {
      ids = {parse_prompt_template(args.id)};
    } catch (const std::exception& e) {
      return config_failure(err, {std::string("template: ") + e.what()});
    }
  }
  bool first = true;
  for (auto id : ids) {
    if (!first) out << "\n";
    first = false;
    if (ids.size() > 1) out << "=== " << to_string(id) << " ===\n";
    if (vars.empty()) {
      out << prompt_source(id, args.task) << "\n";
    } else {
      auto v = vars;
      if (id == PromptTemplate::kTaskAnswer && !v.count("task")) v["task"] = args.task;
      out << render_prompt(id, v) << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Biomedical data augmentation: attribution, infilling and "
               "multi-agent review"};
  app.name("bioaug");
  app.require_subcommand(1);
  app.set_config("--config", "", "INI configuration file");

  RunConfig augment_cfg;
  std::string stats_path;
  auto* augment = app.add_subcommand("augment", "augment a dataset");
  add_run_options(augment, augment_cfg, stats_path);

  RunConfig attr_cfg;
  std::string attr_output;
  auto* attribute = app.add_subcommand("attribute", "emit attribution maps");
  add_dataset_options(attribute, attr_cfg);
  add_backend_options(attribute, attr_cfg);
  attribute->add_option("--n", attr_cfg.n, "keywords kept (0 = automatic)");
  attribute->add_option("--workers", attr_cfg.workers, "worker threads");
  attribute->add_option("--output", attr_output, "JSON lines output");

  RunConfig debate_cfg;
  DebateArgs debate_args;
  auto* debate = app.add_subcommand("debate", "review one sentence pair");
  add_backend_options(debate, debate_cfg);
  debate->add_option("--original", debate_args.original, "original sentence");
  debate->add_option("--augmented", debate_args.augmented, "augmented sentence");
  debate->add_option("--entity", debate_args.entities,
                     "entity surface every revision must keep");
  debate->add_option("--sigma", debate_cfg.sigma, "acceptance threshold")
      ->capture_default_str();
  debate->add_option("--max-iters", debate_cfg.max_iters, "iterations")
      ->capture_default_str();
  debate->add_option("--n-agents", debate_cfg.n_agents, "agents")
      ->capture_default_str();
  debate->add_option("--seed", debate_cfg.seed, "seed")->capture_default_str();
  debate->add_option("--transcript", debate_args.transcript,
                     "transcript output (json)");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "score predictions against gold");
  eval->add_option("--gold", eval_args.gold, "gold dataset");
  eval->add_option("--format", eval_args.format, "gold dataset format")
      ->capture_default_str();
  eval->add_option("--predictions", eval_args.predictions,
                   "predictions (canonical jsonl)");
  eval->add_option("--task", eval_args.task, "ner, re, tc or qa");
  eval->add_option("--output", eval_args.output, "metrics (json)");

  PromptArgs prompt_args;
  auto* prompts = app.add_subcommand("prompts", "print prompt templates");
  prompts->add_option("--template", prompt_args.id,
                      "debate_initial, debate_review, debate_revision, "
                      "task_answer, distinguish or all")
      ->capture_default_str();
  prompts->add_option("--task", prompt_args.task, "NER, RE, TC or QA")
      ->capture_default_str();
  prompts->add_option("--var", prompt_args.vars, "name=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (augment->parsed()) return run_augment(augment_cfg, stats_path, out, err);
    if (attribute->parsed()) {
      return run_attribute(attr_cfg, attr_output, out, err);
    }
    if (debate->parsed()) return run_debate_verb(debate_cfg, debate_args, out, err);
    if (eval->parsed()) return run_eval(eval_args, out, err);
    if (prompts->parsed()) return run_prompts(prompt_args, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace bioaug::cli
