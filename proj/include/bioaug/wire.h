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

// JSON bodies exchanged with a model server.
//
//   POST /v1/score    {sequence: [tok], restriction_text?, kind}  -> {score}
//   POST /v1/infill   {template_tokens: [tok], mask_sentinel,
//                      restriction_text, key_structure, seed}     -> {tokens}
//   POST /v1/extract  {concatenated_sentences, failing_pairs?}    -> {structure_text}
//   POST /v1/chat     {system, user, temperature, top_p, seed}    -> {text}
//   GET  /health                                                  -> 200
//
// The validators return the list of schema violations (empty when valid)
// and are shared by the clients and by conformance tests of any server.

#ifndef BIOAUG_WIRE_H_
#define BIOAUG_WIRE_H_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bioaug/attribution.h"
#include "bioaug/generation.h"
#include "bioaug/reflection.h"

namespace bioaug::wire {

inline constexpr const char* kScorePath = "/v1/score";
inline constexpr const char* kInfillPath = "/v1/infill";
inline constexpr const char* kExtractPath = "/v1/extract";
inline constexpr const char* kChatPath = "/v1/chat";
inline constexpr const char* kHealthPath = "/health";

using Json = nlohmann::ordered_json;

Json score_request(const ScoreRequest& req);
ScoreRequest parse_score_request(const Json& body);
Json score_response(double score);
double parse_score_response(const Json& body);

// Template tokens are the rendered template split on spaces: the masked
// sentence, the separator and the marked entities.
Json infill_request(const InfillRequest& req);
InfillRequest parse_infill_request(const Json& body);
Json infill_response(const std::vector<std::string>& tokens);
std::vector<std::string> parse_infill_response(const Json& body);

Json extract_request(const ExtractRequest& req);
ExtractRequest parse_extract_request(const Json& body);
Json extract_response(const std::string& structure);
std::string parse_extract_response(const Json& body);

Json chat_request(const ChatRequest& req);
ChatRequest parse_chat_request(const Json& body);
Json chat_response(const std::string& text);
std::string parse_chat_response(const Json& body);

std::vector<std::string> validate_score_request(const Json& body);
std::vector<std::string> validate_score_response(const Json& body);
std::vector<std::string> validate_infill_request(const Json& body);
std::vector<std::string> validate_infill_response(const Json& body);
std::vector<std::string> validate_extract_request(const Json& body);
std::vector<std::string> validate_extract_response(const Json& body);
std::vector<std::string> validate_chat_request(const Json& body);
std::vector<std::string> validate_chat_response(const Json& body);

}  // namespace bioaug::wire

#endif  // BIOAUG_WIRE_H_
