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

// Persistent response cache keyed on sha256(backend id, full request, seed).
// Stored as JSON lines {"key": ..., "value": ...} sorted by key. A file that
// fails to parse is ignored as a whole (cold start) and a warning recorded.

#ifndef BIOAUG_CACHE_H_
#define BIOAUG_CACHE_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "bioaug/attribution.h"
#include "bioaug/generation.h"
#include "bioaug/reflection.h"

namespace bioaug {

std::string cache_fingerprint(std::string_view backend_id,
                              std::string_view operation,
                              const nlohmann::ordered_json& request,
                              std::uint64_t seed);

class ResponseCache {
 public:
  // In-memory only.
  ResponseCache() = default;
  // Loads `path` if it exists; save() writes back to it.
  explicit ResponseCache(std::filesystem::path path);

  std::optional<nlohmann::json> get(const std::string& key);
  void put(const std::string& key, nlohmann::json value);
  void save() const;

  std::size_t size() const;
  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }
  double hit_rate() const;
  // Non-empty after a cold start caused by a corrupt file.
  const std::string& warning() const { return warning_; }

 private:
  std::optional<std::filesystem::path> path_;
  mutable std::mutex mu_;
  std::map<std::string, nlohmann::json> entries_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
  std::string warning_;
};

class CachedScorer final : public ScorerBackend {
 public:
  CachedScorer(ScorerBackend& inner, ResponseCache& cache)
      : inner_(inner), cache_(cache) {}
  std::string id() const override { return inner_.id(); }
  ScorerKind kind() const override { return inner_.kind(); }
  double score(const ScoreRequest& request) override;

 private:
  ScorerBackend& inner_;
  ResponseCache& cache_;
};

class CachedGenerator final : public GeneratorBackend {
 public:
  CachedGenerator(GeneratorBackend& inner, ResponseCache& cache)
      : inner_(inner), cache_(cache) {}
  std::string id() const override { return inner_.id(); }
  std::vector<std::string> infill(const InfillRequest& request) override;

 private:
  GeneratorBackend& inner_;
  ResponseCache& cache_;
};

class CachedExtractor final : public ExtractorBackend {
 public:
  CachedExtractor(ExtractorBackend& inner, ResponseCache& cache)
      : inner_(inner), cache_(cache) {}
  std::string id() const override { return inner_.id(); }
  std::string extract(const ExtractRequest& request) override;

 private:
  ExtractorBackend& inner_;
  ResponseCache& cache_;
};

class CachedAgent final : public AgentBackend {
 public:
  CachedAgent(AgentBackend& inner, ResponseCache& cache)
      : inner_(inner), cache_(cache) {}
  std::string id() const override { return inner_.id(); }
  std::string chat(const ChatRequest& request) override;

 private:
  AgentBackend& inner_;
  ResponseCache& cache_;
};

}  // namespace bioaug

#endif  // BIOAUG_CACHE_H_
