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

#include "bioaug/cache.h"

#include "bioaug/error.h"
#include "bioaug/hashing.h"
#include "bioaug/wire.h"
#include "text_util.h"

namespace bioaug {

std::string cache_fingerprint(std::string_view backend_id,
                              std::string_view operation,
                              const nlohmann::ordered_json& request,
                              std::uint64_t seed) {
  std::string key(backend_id);
  key += '\n';
  key += operation;
  key += '\n';
  key += request.dump();
  key += '\n';
  key += std::to_string(seed);
  return sha256_hex(key);
}

ResponseCache::ResponseCache(std::filesystem::path path)
    : path_(std::move(path)) {
  std::error_code ec;
  if (!std::filesystem::exists(*path_, ec)) return;
  std::map<std::string, nlohmann::json> loaded;
  try {
    const std::string content = internal::read_file(*path_);
    std::size_t line_no = 0;
    for (auto line : internal::split_lines(content)) {
      ++line_no;
      if (internal::trim(line).empty()) continue;
      auto rec = nlohmann::json::parse(line, nullptr, false);
      if (rec.is_discarded() || !rec.is_object() || !rec.contains("key") ||
          !rec["key"].is_string() || !rec.contains("value")) {
        throw Error("line " + std::to_string(line_no) + " is not a cache record");
      }
      loaded[rec["key"].get<std::string>()] = rec["value"];
    }
  } catch (const std::exception& e) {
    warning_ = "cache file " + path_->string() +
               " is corrupt, starting cold: " + e.what();
    return;
  }
  entries_ = std::move(loaded);
}

std::optional<nlohmann::json> ResponseCache::get(const std::string& key) {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  return it->second;
}

void ResponseCache::put(const std::string& key, nlohmann::json value) {
  std::lock_guard lock(mu_);
  entries_.emplace(key, std::move(value));
}

void ResponseCache::save() const {
  if (!path_) return;
  std::string out;
  {
    std::lock_guard lock(mu_);
    for (const auto& [k, v] : entries_) {
      out += nlohmann::json{{"key", k}, {"value", v}}.dump();
      out += '\n';
    }
  }
  internal::write_file_atomic(*path_, out);
}

std::size_t ResponseCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

double ResponseCache::hit_rate() const {
  const double total = static_cast<double>(hits() + misses());
  return total == 0.0 ? 0.0 : static_cast<double>(hits()) / total;
}

double CachedScorer::score(const ScoreRequest& request) {
  const auto key =
      cache_fingerprint(inner_.id(), "score", wire::score_request(request), 0);
  if (auto hit = cache_.get(key)) return hit->get<double>();
  const double v = inner_.score(request);
  cache_.put(key, v);
  return v;
}

std::vector<std::string> CachedGenerator::infill(const InfillRequest& request) {
  const auto key = cache_fingerprint(inner_.id(), "infill",
                                     wire::infill_request(request), request.seed);
  if (auto hit = cache_.get(key)) return hit->get<std::vector<std::string>>();
  auto v = inner_.infill(request);
  cache_.put(key, v);
  return v;
}

std::string CachedExtractor::extract(const ExtractRequest& request) {
  const auto key = cache_fingerprint(inner_.id(), "extract",
                                     wire::extract_request(request), 0);
  if (auto hit = cache_.get(key)) return hit->get<std::string>();
  auto v = inner_.extract(request);
  cache_.put(key, v);
  return v;
}

std::string CachedAgent::chat(const ChatRequest& request) {
  // Offline agents answer from the context map, so it is part of the key.
  auto body = wire::chat_request(request);
  body["purpose"] = std::string(to_string(request.purpose));
  body["context"] = request.context;
  const auto key = cache_fingerprint(inner_.id(), "chat", body, request.seed);
  if (auto hit = cache_.get(key)) return hit->get<std::string>();
  auto v = inner_.chat(request);
  cache_.put(key, v);
  return v;
}

}  // namespace bioaug
