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

#include "bioaug/remote.h"

#include <algorithm>
#include <chrono>
#include <thread>

#include <httplib.h>

#include "bioaug/error.h"
#include "bioaug/hashing.h"

namespace bioaug {

namespace {

httplib::Client make_client(const Endpoint& ep) {
  httplib::Client cli(ep.base_url);
  cli.set_connection_timeout(ep.timeout_seconds, 0);
  cli.set_read_timeout(ep.timeout_seconds, 0);
  cli.set_write_timeout(ep.timeout_seconds, 0);
  if (!ep.api_key.empty()) cli.set_bearer_token_auth(ep.api_key);
  return cli;
}

void pause(const Endpoint& ep, int attempt, const httplib::Result* res) {
  long ms = static_cast<long>(ep.backoff_ms) << std::min(attempt, 10);
  if (res && *res && (*res)->has_header("Retry-After")) {
    try {
      // Seconds; capped so a hostile header cannot stall the run.
      ms = std::min<long>(std::stol((*res)->get_header_value("Retry-After")) *
                              1000,
                          10'000);
    } catch (const std::exception&) {
    }
  }
  std::this_thread::sleep_for(std::chrono::milliseconds(ms));
}

}  // namespace

wire::Json post_json(const Endpoint& endpoint, const std::string& path,
                     const wire::Json& body) {
  const std::string payload = body.dump();
  const std::string where = endpoint.base_url + path;
  std::string last;
  for (int attempt = 0; attempt <= endpoint.max_retries; ++attempt) {
    auto cli = make_client(endpoint);
    auto res = cli.Post(path, payload, "application/json");
    if (!res) {
      last = "connection failed (" + httplib::to_string(res.error()) + ")";
    } else if (res->status == 429 || res->status == 503) {
      last = "status " + std::to_string(res->status);
    } else if (res->status == 422) {
      throw ContractViolation(where + ": " + res->body);
    } else if (res->status < 200 || res->status >= 300) {
      throw Error(where + ": status " + std::to_string(res->status) + ": " +
                  res->body);
    } else {
      try {
        return wire::Json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(where + ": malformed JSON reply: " + e.what());
      }
    }
    if (attempt < endpoint.max_retries) pause(endpoint, attempt, &res);
  }
  throw RetriableError(where + ": " + last + " after " +
                           std::to_string(endpoint.max_retries + 1) +
                           " attempts",
                       sha256_hex(payload));
}

bool check_health(const Endpoint& endpoint) {
  auto cli = make_client(endpoint);
  auto res = cli.Get(wire::kHealthPath);
  return res && res->status == 200;
}

double HttpScorer::score(const ScoreRequest& request) {
  if (request.kind != kind_) {
    throw Error("scorer '" + id_ + "' serves " + std::string(to_string(kind_)) +
                " requests only");
  }
  return wire::parse_score_response(
      post_json(endpoint_, wire::kScorePath, wire::score_request(request)));
}

std::vector<std::string> HttpGenerator::infill(const InfillRequest& request) {
  return wire::parse_infill_response(
      post_json(endpoint_, wire::kInfillPath, wire::infill_request(request)));
}

std::string HttpExtractor::extract(const ExtractRequest& request) {
  return wire::parse_extract_response(
      post_json(endpoint_, wire::kExtractPath, wire::extract_request(request)));
}

std::string HttpAgent::chat(const ChatRequest& request) {
  return wire::parse_chat_response(
      post_json(endpoint_, wire::kChatPath, wire::chat_request(request)));
}

}  // namespace bioaug
