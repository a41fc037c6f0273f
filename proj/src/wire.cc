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

#include "bioaug/wire.h"

#include <cmath>

#include "bioaug/error.h"
#include "bioaug/masked_template.h"
#include "text_util.h"

namespace bioaug::wire {

namespace {

using Issues = std::vector<std::string>;

void require_object(const Json& body, Issues& out) {
  if (!body.is_object()) out.push_back("body: expected an object");
}

void require_string(const Json& body, const char* field, Issues& out,
                    bool optional = false) {
  if (!body.is_object()) return;
  auto it = body.find(field);
  if (it == body.end()) {
    if (!optional) out.push_back(std::string(field) + ": missing");
    return;
  }
  if (!it->is_string()) out.push_back(std::string(field) + ": expected a string");
}

void require_string_array(const Json& body, const char* field, Issues& out,
                          bool non_empty) {
  if (!body.is_object()) return;
  auto it = body.find(field);
  if (it == body.end()) {
    out.push_back(std::string(field) + ": missing");
    return;
  }
  if (!it->is_array()) {
    out.push_back(std::string(field) + ": expected an array of strings");
    return;
  }
  if (non_empty && it->empty()) {
    out.push_back(std::string(field) + ": must not be empty");
  }
  for (const auto& v : *it) {
    if (!v.is_string()) {
      out.push_back(std::string(field) + ": expected an array of strings");
      return;
    }
  }
}

void require_number(const Json& body, const char* field, Issues& out,
                    bool optional = false) {
  if (!body.is_object()) return;
  auto it = body.find(field);
  if (it == body.end()) {
    if (!optional) out.push_back(std::string(field) + ": missing");
    return;
  }
  if (!it->is_number() || !std::isfinite(it->get<double>())) {
    out.push_back(std::string(field) + ": expected a finite number");
  }
}

void require_seed(const Json& body, Issues& out) {
  if (!body.is_object()) return;
  auto it = body.find("seed");
  if (it == body.end()) {
    out.push_back("seed: missing");
  } else if (!it->is_number_unsigned() && !it->is_number_integer()) {
    out.push_back("seed: expected an unsigned integer");
  } else if (it->is_number_integer() && it->get<std::int64_t>() < 0) {
    out.push_back("seed: expected an unsigned integer");
  }
}

void throw_if(const Issues& issues, const char* what) {
  if (issues.empty()) return;
  std::string msg = std::string(what) + ": " + issues.front();
  for (std::size_t i = 1; i < issues.size(); ++i) msg += "; " + issues[i];
  throw ParseError(msg);
}

std::vector<std::string> split_spaces(std::string_view s) {
  std::vector<std::string> out;
  for (auto p : internal::split(s, ' ')) {
    if (!p.empty()) out.emplace_back(p);
  }
  return out;
}

}  // namespace

Issues validate_score_request(const Json& body) {
  Issues out;
  require_object(body, out);
  require_string_array(body, "sequence", out, true);
  require_string(body, "restriction_text", out, true);
  require_string(body, "kind", out);
  if (out.empty()) {
    const auto kind = body["kind"].get<std::string>();
    if (kind != "task-logit" && kind != "inference-relativity") {
      out.push_back("kind: expected task-logit or inference-relativity");
    }
  }
  return out;
}

Issues validate_score_response(const Json& body) {
  Issues out;
  require_object(body, out);
  require_number(body, "score", out);
  return out;
}

Issues validate_infill_request(const Json& body) {
  Issues out;
  require_object(body, out);
  require_string_array(body, "template_tokens", out, true);
  require_string(body, "mask_sentinel", out);
  require_string(body, "restriction_text", out);
  require_string(body, "key_structure", out);
  require_seed(body, out);
  return out;
}

Issues validate_infill_response(const Json& body) {
  Issues out;
  require_object(body, out);
  require_string_array(body, "tokens", out, true);
  return out;
}

Issues validate_extract_request(const Json& body) {
  Issues out;
  require_object(body, out);
  require_string(body, "concatenated_sentences", out);
  if (body.is_object() && body.contains("failing_pairs")) {
    const auto& fp = body["failing_pairs"];
    if (!fp.is_array()) {
      out.push_back("failing_pairs: expected an array");
    } else {
      for (const auto& p : fp) {
        Issues inner;
        require_object(p, inner);
        require_number(p, "source_index", inner);
        require_number(p, "similarity", inner);
        if (!inner.empty()) {
          out.push_back("failing_pairs: " + inner.front());
          break;
        }
      }
    }
  }
  return out;
}

Issues validate_extract_response(const Json& body) {
  Issues out;
  require_object(body, out);
  require_string(body, "structure_text", out);
  return out;
}

Issues validate_chat_request(const Json& body) {
  Issues out;
  require_object(body, out);
  require_string(body, "system", out);
  require_string(body, "user", out);
  require_number(body, "temperature", out);
  require_number(body, "top_p", out);
  require_seed(body, out);
  return out;
}

Issues validate_chat_response(const Json& body) {
  Issues out;
  require_object(body, out);
  require_string(body, "text", out);
  return out;
}

Json score_request(const ScoreRequest& req) {
  Json j;
  j["sequence"] = req.sequence;
  if (!req.restriction_text.empty()) {
    j["restriction_text"] = req.restriction_text;
  }
  j["kind"] = std::string(to_string(req.kind));
  return j;
}

ScoreRequest parse_score_request(const Json& body) {
  throw_if(validate_score_request(body), "score request");
  ScoreRequest req;
  req.sequence = body["sequence"].get<std::vector<std::string>>();
  req.restriction_text = body.value("restriction_text", std::string());
  req.kind = parse_scorer_kind(body["kind"].get<std::string>());
  return req;
}

Json score_response(double score) { return Json{{"score", score}}; }

double parse_score_response(const Json& body) {
  throw_if(validate_score_response(body), "score response");
  return body["score"].get<double>();
}

Json infill_request(const InfillRequest& req) {
  Json j;
  j["template_tokens"] = split_spaces(render_template(req.tmpl));
  j["mask_sentinel"] = req.tmpl.sentinel;
  j["restriction_text"] = req.restriction_text;
  j["key_structure"] = req.key_structure;
  j["seed"] = req.seed;
  return j;
}

InfillRequest parse_infill_request(const Json& body) {
  throw_if(validate_infill_request(body), "infill request");
  InfillRequest req;
  std::string rendered;
  for (const auto& t : body["template_tokens"]) {
    if (!rendered.empty()) rendered += ' ';
    rendered += t.get<std::string>();
  }
  req.tmpl = parse_template(rendered);
  req.tmpl.sentinel = body["mask_sentinel"].get<std::string>();
  req.restriction_text = body["restriction_text"].get<std::string>();
  req.key_structure = body["key_structure"].get<std::string>();
  req.seed = body["seed"].get<std::uint64_t>();
  return req;
}

Json infill_response(const std::vector<std::string>& tokens) {
  return Json{{"tokens", tokens}};
}

std::vector<std::string> parse_infill_response(const Json& body) {
  throw_if(validate_infill_response(body), "infill response");
  return body["tokens"].get<std::vector<std::string>>();
}

Json extract_request(const ExtractRequest& req) {
  std::string joined;
  for (std::size_t i = 0; i < req.sources.size(); ++i) {
    if (i) joined += '\n';
    joined += req.sources[i];
  }
  Json j;
  j["concatenated_sentences"] = joined;
  if (!req.failing_pairs.empty()) {
    Json pairs = Json::array();
    for (const auto& p : req.failing_pairs) {
      pairs.push_back(
          Json{{"source_index", p.source_index}, {"similarity", p.similarity}});
    }
    j["failing_pairs"] = pairs;
  }
  return j;
}

ExtractRequest parse_extract_request(const Json& body) {
  throw_if(validate_extract_request(body), "extract request");
  ExtractRequest req;
  for (auto line :
       internal::split(body["concatenated_sentences"].get<std::string>(), '\n')) {
    req.sources.emplace_back(line);
  }
  if (body.contains("failing_pairs")) {
    for (const auto& p : body["failing_pairs"]) {
      req.failing_pairs.push_back(FailingPair{
          p["source_index"].get<std::size_t>(), p["similarity"].get<double>()});
    }
  }
  return req;
}

Json extract_response(const std::string& structure) {
  return Json{{"structure_text", structure}};
}

std::string parse_extract_response(const Json& body) {
  throw_if(validate_extract_response(body), "extract response");
  return body["structure_text"].get<std::string>();
}

Json chat_request(const ChatRequest& req) {
  Json j;
  j["system"] = req.system;
  j["user"] = req.user;
  j["temperature"] = req.temperature;
  j["top_p"] = req.top_p;
  j["seed"] = req.seed;
  return j;
}

ChatRequest parse_chat_request(const Json& body) {
  throw_if(validate_chat_request(body), "chat request");
  ChatRequest req;
  req.system = body["system"].get<std::string>();
  req.user = body["user"].get<std::string>();
  req.temperature = body["temperature"].get<double>();
  req.top_p = body["top_p"].get<double>();
  req.seed = body["seed"].get<std::uint64_t>();
  return req;
}

Json chat_response(const std::string& text) { return Json{{"text", text}}; }

std::string parse_chat_response(const Json& body) {
  throw_if(validate_chat_response(body), "chat response");
  return body["text"].get<std::string>();
}

}  // namespace bioaug::wire
