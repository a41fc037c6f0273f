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

// HTTP clients for a model server speaking the bodies in wire.h.
// 429, 503 and connection failures are retried with exponential backoff;
// 422 maps to ContractViolation, any other error status to Error.

#ifndef BIOAUG_REMOTE_H_
#define BIOAUG_REMOTE_H_

#include <string>

#include "bioaug/attribution.h"
#include "bioaug/generation.h"
#include "bioaug/reflection.h"
#include "bioaug/wire.h"

namespace bioaug {

struct Endpoint {
  // e.g. "http://127.0.0.1:8080"
  std::string base_url;
  // Sent as "Authorization: Bearer <key>" when non-empty.
  std::string api_key;
  int timeout_seconds = 60;
  int max_retries = 3;
  int backoff_ms = 200;
};

// POSTs a JSON body and returns the parsed JSON reply.
wire::Json post_json(const Endpoint& endpoint, const std::string& path,
                     const wire::Json& body);

// True when GET /health answers 200.
bool check_health(const Endpoint& endpoint);

class HttpScorer final : public ScorerBackend {
 public:
  HttpScorer(Endpoint endpoint, ScorerKind kind, std::string id = "http-scorer")
      : endpoint_(std::move(endpoint)), kind_(kind), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  ScorerKind kind() const override { return kind_; }
  double score(const ScoreRequest& request) override;

 private:
  Endpoint endpoint_;
  ScorerKind kind_;
  std::string id_;
};

class HttpGenerator final : public GeneratorBackend {
 public:
  explicit HttpGenerator(Endpoint endpoint, std::string id = "http-infill")
      : endpoint_(std::move(endpoint)), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  std::vector<std::string> infill(const InfillRequest& request) override;

 private:
  Endpoint endpoint_;
  std::string id_;
};

class HttpExtractor final : public ExtractorBackend {
 public:
  explicit HttpExtractor(Endpoint endpoint, std::string id = "http-extractor")
      : endpoint_(std::move(endpoint)), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  std::string extract(const ExtractRequest& request) override;

 private:
  Endpoint endpoint_;
  std::string id_;
};

class HttpAgent final : public AgentBackend {
 public:
  explicit HttpAgent(Endpoint endpoint, std::string id = "http-agent")
      : endpoint_(std::move(endpoint)), id_(std::move(id)) {}
  std::string id() const override { return id_; }
  std::string chat(const ChatRequest& request) override;

 private:
  Endpoint endpoint_;
  std::string id_;
};

}  // namespace bioaug

#endif  // BIOAUG_REMOTE_H_
