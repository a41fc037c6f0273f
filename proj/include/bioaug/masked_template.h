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

// The infill template: the sentence with everything outside the keyword set
// and the entity spans replaced by the mask sentinel, followed by the
// entities wrapped in typed markers:
//
//   [M] dose [M] aspirin | <s:CHEM> aspirin </s:CHEM>
//
// Inside rendered tokens and surfaces the characters '\', '<', '[' and '|'
// are backslash-escaped, so the sentinel, the separator and the markers
// never collide with sentence text.

#ifndef BIOAUG_MASKED_TEMPLATE_H_
#define BIOAUG_MASKED_TEMPLATE_H_

#include <string>
#include <string_view>
#include <vector>

#include "bioaug/corpus.h"

namespace bioaug {

struct MarkedEntity {
  std::string entity_type;
  // Space-joined surface tokens.
  std::string surface;

  bool operator==(const MarkedEntity&) const = default;
};

struct MaskedTemplate {
  // One slot per sentence token; masked slots hold the sentinel.
  std::vector<std::string> tokens;
  std::vector<MarkedEntity> entities;
  std::string sentinel = "[M]";

  std::size_t mask_count() const;
  bool operator==(const MaskedTemplate&) const = default;
};

std::string open_marker(std::string_view entity_type);
std::string close_marker(std::string_view entity_type);

std::string escape_token(std::string_view token);
std::string unescape_token(std::string_view token);

// `entities` are appended in the order given (e1, e2 for relations).
MaskedTemplate build_masked_template(const std::vector<std::string>& sentence,
                                     const std::vector<std::size_t>& keywords,
                                     const std::vector<EntityMention>& entities);

std::string render_template(const MaskedTemplate& tmpl);
MaskedTemplate parse_template(std::string_view rendered);

struct TemplateInversion {
  std::vector<std::size_t> keywords;
  // Parallel to MaskedTemplate::entities.
  std::vector<Span> entity_spans;
};

// Recovers K and the entity spans from a template and its source sentence.
// Throws Error when the template does not fit the sentence or an entity
// surface is ambiguous among the unmasked tokens.
TemplateInversion invert_template(const MaskedTemplate& tmpl,
                                  const std::vector<std::string>& sentence);

}  // namespace bioaug

#endif  // BIOAUG_MASKED_TEMPLATE_H_
