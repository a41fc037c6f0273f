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

// Multi-agent review of an (original, augmented) sentence pair. Each
// iteration draws a judge uniformly at random; the judge lists the
// discrepancies, every other agent elaborates on them along four aspects,
// the judge revises the augmented sentence and every other agent grades the
// revision. The loop continues while the mean grade is <= sigma.
//
// Agent answers are requested inside a fenced block of tagged lines:
//
//   ```answer
//   DISCREPANCY: <fragment of original> || <fragment of augmented> || <locus>
//   ASPECT: <aspect> || <reasonable|unreasonable> || <rationale>
//   REVISED: <sentence>
//   GRADE: <integer 0-100>
//   ```

#ifndef BIOAUG_REFLECTION_H_
#define BIOAUG_REFLECTION_H_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bioaug/error.h"

namespace bioaug {

enum class PromptPurpose { kDiscrepancy, kElaborate, kRevise, kGrade, kOther };

std::string_view to_string(PromptPurpose purpose);

struct ChatRequest {
  std::string system;
  std::string user;
  std::uint64_t seed = 0;
  double temperature = 0.1;
  double top_p = 0.1;
  // Local metadata for offline agents; never sent over the wire.
  PromptPurpose purpose = PromptPurpose::kOther;
  std::map<std::string, std::string> context;
};

class AgentBackend {
 public:
  virtual ~AgentBackend() = default;
  virtual std::string id() const = 0;
  virtual std::string chat(const ChatRequest& request) = 0;
};

// Replies through a callback; used for tests and offline runs.
class ScriptedAgent final : public AgentBackend {
 public:
  using Responder = std::function<std::string(const ChatRequest&)>;
  ScriptedAgent(std::string id, Responder responder)
      : id_(std::move(id)), responder_(std::move(responder)) {}
  std::string id() const override { return id_; }
  std::string chat(const ChatRequest& request) override {
    return responder_(request);
  }

 private:
  std::string id_;
  Responder responder_;
};

// Agent that finds the first differing token window, accepts every aspect,
// keeps the augmented sentence and grades `grade` (0-100).
std::unique_ptr<AgentBackend> make_agreeable_agent(std::string id,
                                                   int grade = 100);

struct DiscrepancyReview {
  std::string original_fragment;
  std::string augmented_fragment;
  std::string locus;

  bool operator==(const DiscrepancyReview&) const = default;
};

enum class Aspect {
  kWordDefinition,
  kWordSimilarity,
  kSyntaxCorrectness,
  kUsageExample
};
inline constexpr std::array<Aspect, 4> kAllAspects = {
    Aspect::kWordDefinition, Aspect::kWordSimilarity,
    Aspect::kSyntaxCorrectness, Aspect::kUsageExample};

std::string_view to_string(Aspect aspect);

enum class Verdict { kReasonable, kUnreasonable };

struct AspectReview {
  Aspect aspect = Aspect::kWordDefinition;
  Verdict verdict = Verdict::kReasonable;
  std::string rationale;
  std::string reviewer_id;
};

struct Grade {
  double value = 0.0;
  std::string grader_id;
  std::size_t iteration = 0;
};

struct ReviewerSet {
  std::string reviewer_id;
  std::vector<AspectReview> reviews;
};

struct IterationRecord {
  std::size_t iteration = 0;
  std::size_t judge_index = 0;
  std::string judge_id;
  std::vector<DiscrepancyReview> discrepancies;
  std::size_t dropped_lines = 0;
  // One set per non-judge agent.
  std::vector<ReviewerSet> aspect_reviews;
  std::string revised;
  bool revision_noop = false;
  // One grade per non-judge agent.
  std::vector<Grade> grades;
  double acceptance = 0.0;
};

enum class DebateOutcome { kAccepted, kExhausted };

struct DebateTranscript {
  std::string original;
  std::string initial_augmented;
  std::vector<IterationRecord> iterations;
  DebateOutcome outcome = DebateOutcome::kExhausted;
  std::string final_sentence;
};

nlohmann::json to_json(const DebateTranscript& t);

struct DebateConfig {
  double sigma = 0.8;
  std::size_t max_iters = 5;
};

struct DebateSubject {
  std::string original;
  std::string augmented;
  // Every revision must keep these (space-joined token surfaces).
  std::vector<std::string> entity_surfaces;
};

// Raised when an agent keeps failing; the transcript holds every completed
// iteration.
class DebateAborted : public Error {
 public:
  DebateAborted(const std::string& what, DebateTranscript partial)
      : Error(what), transcript_(std::move(partial)) {}
  const DebateTranscript& transcript() const { return transcript_; }

 private:
  DebateTranscript transcript_;
};

// Uniform over [0, n). Throws when n < 2.
std::size_t select_judge(std::size_t n, std::mt19937_64& rng);

// Lines of the fenced answer block (or of the whole text if unfenced).
std::vector<std::string> answer_lines(std::string_view response);

std::vector<DiscrepancyReview> review_discrepancies(
    AgentBackend& judge, std::string_view original, std::string_view augmented,
    std::uint64_t seed, std::size_t* dropped_lines = nullptr);

std::vector<AspectReview> elaborate(AgentBackend& reviewer,
                                    const DiscrepancyReview& discrepancy,
                                    std::string_view original,
                                    std::string_view augmented,
                                    std::uint64_t seed);

struct Revision {
  std::string sentence;
  bool noop = false;
};

Revision revise(AgentBackend& judge, std::string_view original,
                std::string_view augmented,
                const std::vector<ReviewerSet>& reviews,
                const std::vector<std::string>& entity_surfaces,
                std::uint64_t seed);

Grade grade(AgentBackend& grader, std::string_view original,
            std::string_view augmented, std::size_t iteration,
            std::uint64_t seed);

struct DebateResult {
  DebateTranscript transcript;
  bool accepted() const {
    return transcript.outcome == DebateOutcome::kAccepted;
  }
};

DebateResult run_debate(const DebateSubject& subject,
                        const std::vector<AgentBackend*>& agents,
                        const DebateConfig& config, std::uint64_t seed);

}  // namespace bioaug

#endif  // BIOAUG_REFLECTION_H_
