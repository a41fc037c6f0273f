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

#include <algorithm>

#include "bioaug/error.h"
#include "text_util.h"

namespace bioaug {

namespace {

constexpr std::string_view kSeparator = "|";

void check_type(std::string_view type) {
  if (type.empty() ||
      type.find_first_of(" \t\n\r<>\\") != std::string_view::npos) {
    throw ContractViolation("entity type '" + std::string(type) +
                            "' cannot be used inside a marker");
  }
}

bool is_open_marker(std::string_view tok) {
  return tok.size() > 4 && tok.starts_with("<s:") && tok.back() == '>';
}

bool is_close_marker(std::string_view tok) {
  return tok.size() > 5 && tok.starts_with("</s:") && tok.back() == '>';
}

std::vector<std::string> surface_tokens(std::string_view surface) {
  std::vector<std::string> out;
  for (auto part : internal::split(surface, ' ')) {
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

}  // namespace

std::size_t MaskedTemplate::mask_count() const {
  return static_cast<std::size_t>(
      std::count(tokens.begin(), tokens.end(), sentinel));
}

std::string open_marker(std::string_view entity_type) {
  check_type(entity_type);
  return "<s:" + std::string(entity_type) + ">";
}

std::string close_marker(std::string_view entity_type) {
  check_type(entity_type);
  return "</s:" + std::string(entity_type) + ">";
}

std::string escape_token(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (char c : token) {
    if (c == '\\' || c == '<' || c == '[' || c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string unescape_token(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (std::size_t i = 0; i < token.size(); ++i) {
    if (token[i] == '\\' && i + 1 < token.size()) ++i;
    out += token[i];
  }
  return out;
}

MaskedTemplate build_masked_template(
    const std::vector<std::string>& sentence,
    const std::vector<std::size_t>& keywords,
    const std::vector<EntityMention>& entities) {
  std::vector<bool> keep(sentence.size(), false);
  for (std::size_t k : keywords) {
    if (k >= sentence.size()) throw Error("keyword index out of bounds");
    keep[k] = true;
  }
  MaskedTemplate tmpl;
  for (const auto& e : entities) {
    if (e.span.start > e.span.end || e.span.end >= sentence.size()) {
      throw Error("entity span out of bounds");
    }
    check_type(e.entity_type);
    for (std::size_t i = e.span.start; i <= e.span.end; ++i) keep[i] = true;
    tmpl.entities.push_back(MarkedEntity{e.entity_type, e.surface});
  }
  tmpl.tokens.reserve(sentence.size());
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (sentence[i] == tmpl.sentinel) {
      throw ContractViolation("sentence token " + std::to_string(i) +
                              " collides with the mask sentinel");
    }
    tmpl.tokens.push_back(keep[i] ? sentence[i] : tmpl.sentinel);
  }
  return tmpl;
}

std::string render_template(const MaskedTemplate& tmpl) {
  std::string out;
  auto append = [&out](std::string_view piece) {
    if (!out.empty()) out += ' ';
    out += piece;
  };
  for (const auto& tok : tmpl.tokens) {
    append(tok == tmpl.sentinel ? tok : escape_token(tok));
  }
  for (const auto& e : tmpl.entities) {
    append(kSeparator);
    append(open_marker(e.entity_type));
    for (const auto& t : surface_tokens(e.surface)) append(escape_token(t));
    append(close_marker(e.entity_type));
  }
  return out;
}

MaskedTemplate parse_template(std::string_view rendered) {
  MaskedTemplate tmpl;
  std::vector<std::string_view> parts;
  for (auto p : internal::split(rendered, ' ')) {
    if (!p.empty()) parts.push_back(p);
  }
  std::size_t i = 0;
  for (; i < parts.size() && parts[i] != kSeparator; ++i) {
    tmpl.tokens.push_back(parts[i] == tmpl.sentinel ? std::string(parts[i])
                                                    : unescape_token(parts[i]));
  }
  while (i < parts.size()) {
    // parts[i] is a separator.
    if (++i >= parts.size() || !is_open_marker(parts[i])) {
      throw ParseError("template: expected an opening entity marker");
    }
    const auto type = parts[i].substr(3, parts[i].size() - 4);
    std::vector<std::string> surface;
    for (++i; i < parts.size() && !is_close_marker(parts[i]); ++i) {
      surface.push_back(unescape_token(parts[i]));
    }
    if (i >= parts.size() || parts[i] != close_marker(type)) {
      throw ParseError("template: unbalanced entity marker for type '" +
                       std::string(type) + "'");
    }
    if (surface.empty()) throw ParseError("template: empty entity surface");
    tmpl.entities.push_back(MarkedEntity{std::string(type), join_tokens(surface)});
    ++i;
    if (i < parts.size() && parts[i] != kSeparator) {
      throw ParseError("template: expected '|' between marked entities");
    }
  }
  return tmpl;
}

TemplateInversion invert_template(const MaskedTemplate& tmpl,
                                  const std::vector<std::string>& sentence) {
  if (tmpl.tokens.size() != sentence.size()) {
    throw Error("template length does not match the sentence");
  }
  std::vector<bool> unmasked(sentence.size(), false);
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (tmpl.tokens[i] == tmpl.sentinel) continue;
    if (tmpl.tokens[i] != sentence[i]) {
      throw Error("template token " + std::to_string(i) +
                  " differs from the sentence");
    }
    unmasked[i] = true;
  }

  TemplateInversion inv;
  std::vector<bool> assigned(sentence.size(), false);
  for (std::size_t j = 0; j < tmpl.entities.size(); ++j) {
    const auto surface = surface_tokens(tmpl.entities[j].surface);
    if (surface.empty()) throw Error("empty entity surface");
    std::vector<std::size_t> starts;
    for (std::size_t p = 0; p + surface.size() <= sentence.size(); ++p) {
      bool ok = true;
      for (std::size_t q = 0; q < surface.size() && ok; ++q) {
        ok = unmasked[p + q] && !assigned[p + q] && sentence[p + q] == surface[q];
      }
      if (ok) starts.push_back(p);
    }
    if (starts.empty()) {
      throw Error("entity '" + tmpl.entities[j].surface +
                  "' not found among unmasked tokens");
    }
    // Repeated identical entities are matched to occurrences left to right.
    const auto same_surface = static_cast<std::size_t>(std::count_if(
        tmpl.entities.begin() + static_cast<std::ptrdiff_t>(j),
        tmpl.entities.end(), [&](const MarkedEntity& e) {
          return e.surface == tmpl.entities[j].surface;
        }));
    if (starts.size() != 1 && starts.size() != same_surface) {
      throw Error("entity '" + tmpl.entities[j].surface +
                  "' is ambiguous among unmasked tokens");
    }
    const Span span{starts.front(), starts.front() + surface.size() - 1};
    for (std::size_t q = span.start; q <= span.end; ++q) assigned[q] = true;
    inv.entity_spans.push_back(span);
  }
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (unmasked[i] && !assigned[i]) inv.keywords.push_back(i);
  }
  return inv;
}

}  // namespace bioaug
