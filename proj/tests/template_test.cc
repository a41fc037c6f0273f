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


#include "bioaug/masked_template.h"

#include <random>

#include <gtest/gtest.h>

#include "bioaug/error.h"
#include "test_util.h"

namespace bioaug {
namespace {

const std::vector<std::string> kSentence = {"give", "dose", "of", "aspirin"};
const EntityMention kAspirin{Span{3, 3}, "CHEM", "aspirin"};

TEST(MaskedTemplate, RendersHandExample) {
  const auto t = build_masked_template(kSentence, {1}, {kAspirin});
  EXPECT_EQ(render_template(t), "[M] dose [M] aspirin | <s:CHEM> aspirin </s:CHEM>");
  EXPECT_EQ(t.mask_count(), 2u);
}

TEST(MaskedTemplate, SlotCountsMatchSentence) {
  const auto t = build_masked_template(kSentence, {}, {kAspirin});
  EXPECT_EQ(t.tokens.size(), kSentence.size());
  EXPECT_EQ(t.mask_count(), 3u);
  const auto all = build_masked_template(kSentence, {0, 1, 2}, {kAspirin});
  EXPECT_EQ(all.mask_count(), 0u);
}

TEST(MaskedTemplate, EscapesReservedCharacters) {
  const std::vector<std::string> s = {"a|b", "[x]", "<y", "back\\slash", "e"};
  const auto t =
      build_masked_template(s, {0, 1, 2, 3}, {{Span{4, 4}, "T", "e"}});
  const auto r = render_template(t);
  EXPECT_EQ(r, "a\\|b \\[x] \\<y back\\\\slash e | <s:T> e </s:T>");
  EXPECT_EQ(parse_template(r), t);
}

TEST(MaskedTemplate, EscapeRoundTrip) {
  for (std::string s : {"", "plain", "\\", "[M]", "<s:T>", "a|b\\c"}) {
    EXPECT_EQ(unescape_token(escape_token(s)), s);
  }
}

TEST(MaskedTemplate, SentinelInSentenceIsRejected) {
  EXPECT_THROW(build_masked_template({"a", "[M]", "b"}, {}, {}),
               ContractViolation);
}

TEST(MaskedTemplate, BadTypeAndBoundsRejected) {
  EXPECT_THROW(build_masked_template(kSentence, {9}, {}), Error);
  EXPECT_THROW(build_masked_template(kSentence, {}, {{Span{2, 5}, "T", "x"}}),
               Error);
  EXPECT_THROW(
      build_masked_template(kSentence, {}, {{Span{3, 3}, "A B", "aspirin"}}),
      ContractViolation);
}

TEST(MaskedTemplate, ParseRejectsMalformed) {
  EXPECT_THROW(parse_template("[M] a | <s:T> a"), ParseError);
  EXPECT_THROW(parse_template("[M] a | a </s:T>"), ParseError);
  EXPECT_THROW(parse_template("[M] a | <s:T> </s:T>"), ParseError);
}

TEST(MaskedTemplate, InversionRecoversKeywordsAndSpans) {
  const std::vector<std::string> s = {"Tardive", "dyskinesia", "after",
                                      "haloperidol", "use", "."};
  const std::vector<EntityMention> ents = {
      {Span{0, 1}, "DISEASE", "Tardive dyskinesia"},
      {Span{3, 3}, "CHEM", "haloperidol"}};
  const auto t = build_masked_template(s, {2, 5}, ents);
  const auto inv = invert_template(parse_template(render_template(t)), s);
  EXPECT_EQ(inv.keywords, (std::vector<std::size_t>{2, 5}));
  EXPECT_EQ(inv.entity_spans, (std::vector<Span>{{0, 1}, {3, 3}}));
}

TEST(MaskedTemplate, InversionDetectsMismatchAndAmbiguity) {
  const auto t = build_masked_template(kSentence, {1}, {kAspirin});
  EXPECT_THROW(invert_template(t, {"give", "dose"}), Error);
  EXPECT_THROW(invert_template(t, {"give", "DOSE", "of", "aspirin"}), Error);
  // "aspirin" twice among unmasked tokens.
  const std::vector<std::string> twice = {"aspirin", "dose", "of", "aspirin"};
  const auto amb = build_masked_template(twice, {0, 1}, {kAspirin});
  EXPECT_THROW(invert_template(amb, twice), Error);
}

TEST(MaskedTemplate, RandomRoundTripAndInversion) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    auto inst = testing::random_instance(rng, 4 + trial % 12, 1 + trial % 3);
    std::vector<std::size_t> kw;
    std::bernoulli_distribution coin(0.4);
    for (std::size_t i = 0; i < inst.tokens.size(); ++i) {
      bool in_entity = false;
      for (const auto& e : inst.entities) in_entity |= e.span.contains(i);
      if (!in_entity && coin(rng)) kw.push_back(i);
    }
    const auto t = build_masked_template(inst.tokens, kw, inst.entities);
    const auto back = parse_template(render_template(t));
    ASSERT_EQ(back, t);
    const auto inv = invert_template(back, inst.tokens);
    EXPECT_EQ(inv.keywords, kw);
    for (std::size_t j = 0; j < inst.entities.size(); ++j) {
      EXPECT_EQ(inv.entity_spans[j], inst.entities[j].span);
    }
  }
}

}  // namespace
}  // namespace bioaug
