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

#include <atomic>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "bioaug/error.h"
#include "bioaug/mocks.h"
#include "bioaug/remote.h"
#include "test_util.h"

namespace bioaug {
namespace {

using wire::Json;

TEST(Wire, ScoreRoundTrip) {
  ScoreRequest r{{"a", "b"}, "notion", ScorerKind::kInferenceRelativity};
  const auto j = wire::score_request(r);
  EXPECT_TRUE(wire::validate_score_request(j).empty());
  const auto back = wire::parse_score_request(j);
  EXPECT_EQ(back.sequence, r.sequence);
  EXPECT_EQ(back.restriction_text, "notion");
  EXPECT_EQ(back.kind, r.kind);
  EXPECT_DOUBLE_EQ(wire::parse_score_response(wire::score_response(1.5)), 1.5);
}

TEST(Wire, InfillCarriesRenderedTemplate) {
  InfillRequest r;
  r.tmpl = build_masked_template({"give", "dose", "of", "aspirin"}, {1},
                                 {{Span{3, 3}, "CHEM", "aspirin"}});
  r.restriction_text = "n";
  r.key_structure = "k";
  r.seed = 42;
  const auto j = wire::infill_request(r);
  EXPECT_TRUE(wire::validate_infill_request(j).empty());
  EXPECT_EQ(j["template_tokens"].size(), 8u);
  EXPECT_EQ(j["mask_sentinel"], "[M]");
  const auto back = wire::parse_infill_request(j);
  EXPECT_EQ(back.tmpl, r.tmpl);
  EXPECT_EQ(back.seed, 42u);
}

TEST(Wire, ExtractJoinsSources) {
  ExtractRequest r{{"s | n", "x | n"}, {{1, 0.5}}};
  const auto j = wire::extract_request(r);
  EXPECT_EQ(j["concatenated_sentences"], "s | n\nx | n");
  EXPECT_TRUE(wire::validate_extract_request(j).empty());
  const auto back = wire::parse_extract_request(j);
  EXPECT_EQ(back.sources, r.sources);
  ASSERT_EQ(back.failing_pairs.size(), 1u);
  EXPECT_DOUBLE_EQ(back.failing_pairs[0].similarity, 0.5);
}

TEST(Wire, ChatOmitsLocalMetadata) {
  ChatRequest r{"sys", "user", 9, 0.1, 0.1, PromptPurpose::kGrade,
                {{"iteration", "1"}}};
  const auto j = wire::chat_request(r);
  EXPECT_TRUE(wire::validate_chat_request(j).empty());
  EXPECT_FALSE(j.contains("purpose"));
  EXPECT_FALSE(j.contains("context"));
  EXPECT_EQ(wire::parse_chat_request(j).user, "user");
}

TEST(Wire, ValidatorsNameFields) {
  EXPECT_EQ(wire::validate_score_request(Json::object()).front(),
            "sequence: missing");
  EXPECT_FALSE(wire::validate_score_response({{"score", "x"}}).empty());
  EXPECT_FALSE(wire::validate_infill_response({{"tokens", 3}}).empty());
  EXPECT_FALSE(wire::validate_extract_response(Json::object()).empty());
  EXPECT_FALSE(wire::validate_chat_response({{"txt", ""}}).empty());
  EXPECT_THROW(wire::parse_score_response({{"nope", 1}}), ParseError);
}

// Minimal server speaking the contracts, backed by the mocks.
class FakeServer {
 public:
  FakeServer() {
    scorer_ = make_pair_bonus_scorer(5);
    const auto reject = [](httplib::Response& res,
                           const std::vector<std::string>& issues) {
      res.status = 422;
      res.set_content(Json{{"errors", issues}}.dump(), "application/json");
    };
    srv_.Post(wire::kScorePath, [this, reject](const httplib::Request& req,
                                               httplib::Response& res) {
      if (req.get_header_value("Authorization") != expected_auth) {
        res.status = 401;
        return;
      }
      if (flaky_503.load() > 0) {
        --flaky_503;
        res.status = 503;
        return;
      }
      const auto body = Json::parse(req.body, nullptr, false);
      if (body.is_discarded()) {
        res.status = 400;
        return;
      }
      if (auto issues = wire::validate_score_request(body); !issues.empty()) {
        return reject(res, issues);
      }
      const auto r = wire::parse_score_request(body);
      res.set_content(wire::score_response(scorer_->score(r)).dump(),
                      "application/json");
    });
    srv_.Post(wire::kInfillPath, [this, reject](const httplib::Request& req,
                                                httplib::Response& res) {
      const auto body = Json::parse(req.body);
      if (auto issues = wire::validate_infill_request(body); !issues.empty()) {
        return reject(res, issues);
      }
      if (drop_entity) {
        res.set_content(wire::infill_response({"only", "filler"}).dump(),
                        "application/json");
        return;
      }
      const auto r = wire::parse_infill_request(body);
      std::vector<std::string> out;
      for (const auto& t : r.tmpl.tokens) out.push_back(t == "[M]" ? "w" : t);
      res.set_content(wire::infill_response(out).dump(), "application/json");
    });
    srv_.Post(wire::kExtractPath, [reject](const httplib::Request& req,
                                           httplib::Response& res) {
      const auto body = Json::parse(req.body);
      if (auto issues = wire::validate_extract_request(body); !issues.empty()) {
        return reject(res, issues);
      }
      EchoExtractor echo;
      res.set_content(
          wire::extract_response(echo.extract(wire::parse_extract_request(body)))
              .dump(),
          "application/json");
    });
    srv_.Post(wire::kChatPath, [reject](const httplib::Request& req,
                                        httplib::Response& res) {
      const auto body = Json::parse(req.body);
      if (auto issues = wire::validate_chat_request(body); !issues.empty()) {
        return reject(res, issues);
      }
      res.set_content(wire::chat_response(testing::grade_reply(88)).dump(),
                      "application/json");
    });
    srv_.Post("/v1/garbage", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("{not json", "application/json");
    });
    srv_.Get(wire::kHealthPath, [](const httplib::Request&, httplib::Response& res) {
      res.set_content("ok", "text/plain");
    });
    port_ = srv_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { srv_.listen_after_bind(); });
    srv_.wait_until_ready();
  }
  ~FakeServer() {
    srv_.stop();
    thread_.join();
  }

  Endpoint endpoint() const {
    Endpoint e;
    e.base_url = "http://127.0.0.1:" + std::to_string(port_);
    e.api_key = "secret";
    e.timeout_seconds = 5;
    e.backoff_ms = 1;
    return e;
  }
  ScorerBackend& scorer() { return *scorer_; }

  std::atomic<int> flaky_503{0};
  bool drop_entity = false;
  std::string expected_auth = "Bearer secret";

 private:
  httplib::Server srv_;
  std::unique_ptr<MockScorer> scorer_;
  int port_ = 0;
  std::thread thread_;
};

TEST(Http, Health) {
  FakeServer srv;
  EXPECT_TRUE(check_health(srv.endpoint()));
  Endpoint dead;
  dead.base_url = "http://127.0.0.1:1";
  dead.timeout_seconds = 1;
  EXPECT_FALSE(check_health(dead));
}

TEST(Http, ScoreMatchesLocalBackend) {
  FakeServer srv;
  HttpScorer s(srv.endpoint(), ScorerKind::kTaskLogit);
  ScoreRequest r{{"aspirin", "dose"}, "", ScorerKind::kTaskLogit};
  EXPECT_DOUBLE_EQ(s.score(r), srv.scorer().score(r));
}

TEST(Http, ScorerRejectsKindMismatch) {
  FakeServer srv;
  HttpScorer s(srv.endpoint(), ScorerKind::kTaskLogit);
  EXPECT_THROW(s.score({{"a"}, "r", ScorerKind::kInferenceRelativity}), Error);
}

TEST(Http, RetriesOn503) {
  FakeServer srv;
  srv.flaky_503 = 2;
  HttpScorer s(srv.endpoint(), ScorerKind::kTaskLogit);
  EXPECT_NO_THROW(s.score({{"a"}, "", ScorerKind::kTaskLogit}));
  EXPECT_EQ(srv.flaky_503.load(), 0);
}

TEST(Http, ExhaustedRetriesAreRetriable) {
  FakeServer srv;
  srv.flaky_503 = 100;
  auto ep = srv.endpoint();
  ep.max_retries = 2;
  try {
    post_json(ep, wire::kScorePath,
              wire::score_request({{"a"}, "", ScorerKind::kTaskLogit}));
    FAIL();
  } catch (const RetriableError& e) {
    EXPECT_EQ(e.fingerprint().size(), 64u);
  }
  EXPECT_EQ(srv.flaky_503.load(), 97);
}

TEST(Http, SchemaViolationIs422) {
  FakeServer srv;
  EXPECT_THROW(post_json(srv.endpoint(), wire::kScorePath, Json{{"x", 1}}),
               ContractViolation);
}

TEST(Http, AuthFailureIsError) {
  FakeServer srv;
  srv.expected_auth = "Bearer other";
  try {
    HttpScorer(srv.endpoint(), ScorerKind::kTaskLogit)
        .score({{"a"}, "", ScorerKind::kTaskLogit});
    FAIL();
  } catch (const RetriableError&) {
    FAIL() << "401 must not be retried";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("401"), std::string::npos);
  }
}

TEST(Http, BadJsonIsParseError) {
  FakeServer srv;
  EXPECT_THROW(post_json(srv.endpoint(), "/v1/garbage", Json::object()),
               ParseError);
}

TEST(Http, InfillExtractChat) {
  FakeServer srv;
  const auto ep = srv.endpoint();
  InfillRequest r;
  r.tmpl = build_masked_template({"give", "dose", "of", "aspirin"}, {1},
                                 {{Span{3, 3}, "CHEM", "aspirin"}});
  HttpGenerator gen(ep);
  const auto out = gen.infill(r);
  EXPECT_EQ(out.front(), "w");
  HttpExtractor ex(ep);
  EXPECT_EQ(ex.extract({{"s | n", "x | n"}, {}}), "s | n");
  HttpAgent agent(ep);
  EXPECT_EQ(grade(agent, "a", "b", 1, 1).value, 0.88);
}

TEST(Http, GeneratorContractEnforcedDownstream) {
  FakeServer srv;
  srv.drop_entity = true;
  TaskInstance p;
  p.id = "p";
  p.task = TaskType::kNer;
  set_tokens(p, {"give", "dose", "of", "aspirin"});
  p.entities = {{Span{3, 3}, "CHEM", "aspirin"}};
  const auto tmpl = build_masked_template(p.token_texts(), {1}, p.entities);
  HttpGenerator gen(srv.endpoint());
  EXPECT_THROW(generate_candidate(p, tmpl, "", "", gen, 1), ContractViolation);
}

}  // namespace
}  // namespace bioaug
