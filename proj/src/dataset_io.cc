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

// Dataset readers and the canonical writer. Third-party layouts are
// normalized into TaskInstance records; everything downstream only sees the
// canonical model.

#include <algorithm>
#include <nlohmann/json.hpp>

#include "bioaug/corpus.h"
#include "bioaug/error.h"
#include "text_util.h"

namespace bioaug {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using internal::split;
using internal::split_lines;
using internal::trim;

[[noreturn]] void fail(std::string_view source, std::size_t line,
                       std::string_view field, std::string_view msg) {
  throw ParseError(std::string(source) + ":" + std::to_string(line) +
                   ": field '" + std::string(field) + "': " +
                   std::string(msg));
}

void check_valid(const TaskInstance& inst, std::string_view source,
                 std::size_t line) {
  auto report = validate_instance(inst);
  if (!report.empty()) fail(source, line, "record", report.front());
}

// Token offsets are recovered by scanning `text` for each token in order.
bool locate_tokens(std::string_view text, std::vector<Token>& tokens) {
  std::size_t pos = 0;
  for (auto& t : tokens) {
    const std::size_t at = text.find(t.text, pos);
    if (at == std::string_view::npos) return false;
    t.begin = at;
    t.end = at + t.text.size();
    pos = t.end;
  }
  return true;
}

// Finds `surface` (already tokenized) in `tokens`, skipping any position
// overlapping `avoid`.
std::optional<Span> find_surface(const std::vector<Token>& tokens,
                                 const std::vector<Token>& surface,
                                 const std::optional<Span>& avoid) {
  if (surface.empty() || surface.size() > tokens.size()) return std::nullopt;
  for (std::size_t i = 0; i + surface.size() <= tokens.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < surface.size() && match; ++j) {
      match = tokens[i + j].text == surface[j].text;
    }
    if (!match) continue;
    Span s{i, i + surface.size() - 1};
    if (avoid && s.overlaps(*avoid)) continue;
    return s;
  }
  return std::nullopt;
}

// --- canonical jsonl -------------------------------------------------------

template <typename T>
T get_field(const json& rec, const char* field, std::string_view source,
            std::size_t line) {
  auto it = rec.find(field);
  if (it == rec.end()) fail(source, line, field, "missing");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    fail(source, line, field, "wrong type");
  }
}

std::string opt_string(const json& rec, const char* field,
                       std::string_view source, std::size_t line) {
  if (!rec.contains(field) || rec[field].is_null()) return {};
  return get_field<std::string>(rec, field, source, line);
}

TaskInstance parse_canonical_record(const json& rec, std::string_view source,
                                    std::size_t line) {
  if (!rec.is_object()) fail(source, line, "record", "not a JSON object");
  TaskInstance inst;
  inst.id = get_field<std::string>(rec, "id", source, line);
  try {
    inst.task = parse_task(get_field<std::string>(rec, "task", source, line));
  } catch (const ParseError&) {
    fail(source, line, "task", "unknown task tag");
  }
  inst.text = get_field<std::string>(rec, "text", source, line);
  if (rec.contains("tokens")) {
    auto texts = get_field<std::vector<std::string>>(rec, "tokens", source,
                                                      line);
    for (std::size_t i = 0; i < texts.size(); ++i) {
      inst.tokens.push_back(Token{texts[i], i, 0, 0});
    }
    if (!locate_tokens(inst.text, inst.tokens)) {
      fail(source, line, "tokens", "tokens do not occur in order in text");
    }
  } else {
    inst.tokens = tokenize(inst.text);
  }
  if (rec.contains("entities")) {
    const auto& ents = rec["entities"];
    if (!ents.is_array()) fail(source, line, "entities", "not an array");
    for (const auto& e : ents) {
      EntityMention m;
      m.span.start = get_field<std::size_t>(e, "start", source, line);
      m.span.end = get_field<std::size_t>(e, "end", source, line);
      m.entity_type = get_field<std::string>(e, "type", source, line);
      m.surface = span_surface(inst.tokens, m.span);
      if (e.contains("surface") &&
          get_field<std::string>(e, "surface", source, line) != m.surface) {
        fail(source, line, "entities.surface",
             "does not match the tokens of the span");
      }
      inst.entities.push_back(std::move(m));
    }
  }
  if (rec.contains("pair") && !rec["pair"].is_null()) {
    auto pair = get_field<std::vector<std::size_t>>(rec, "pair", source, line);
    if (pair.size() != 2) fail(source, line, "pair", "expected two indices");
    inst.entity_pair = std::array<std::size_t, 2>{pair[0], pair[1]};
  }
  inst.relation = opt_string(rec, "relation", source, line);
  if (rec.contains("topics")) {
    inst.topics =
        get_field<std::vector<std::string>>(rec, "topics", source, line);
  }
  inst.question = opt_string(rec, "question", source, line);
  inst.answer = opt_string(rec, "answer", source, line);
  if (rec.contains("parent_id") && !rec["parent_id"].is_null()) {
    inst.parent_id = get_field<std::string>(rec, "parent_id", source, line);
  }
  return inst;
}

Dataset parse_canonical(std::string_view content, std::string_view source) {
  Dataset ds;
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    json rec;
    try {
      rec = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      fail(source, i + 1, "record", e.what());
    }
    ds.push_back(parse_canonical_record(rec, source, i + 1));
    check_valid(ds.back(), source, i + 1);
  }
  return ds;
}

// --- conll-bio -------------------------------------------------------------

Dataset parse_conll(std::string_view content, std::string_view source) {
  Dataset ds;
  std::vector<std::string> words;
  std::vector<EntityMention> ents;
  std::size_t first_line = 0;

  auto flush = [&] {
    if (words.empty()) return;
    TaskInstance inst;
    inst.id = "conll-" + std::to_string(ds.size());
    inst.task = TaskType::kNer;
    set_tokens(inst, words);
    for (auto& e : ents) e.surface = span_surface(inst.tokens, e.span);
    inst.entities = std::move(ents);
    check_valid(inst, source, first_line);
    ds.push_back(std::move(inst));
    words.clear();
    ents.clear();
  };

  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.starts_with("-DOCSTART-")) continue;
    if (words.empty()) first_line = i + 1;
    // Token and tag are separated by a tab or by the last run of spaces.
    std::size_t cut = line.find('\t');
    if (cut == std::string_view::npos) cut = line.find_last_of(' ');
    if (cut == std::string_view::npos) fail(source, i + 1, "tag", "missing");
    const auto word = trim(line.substr(0, cut));
    const auto tag = trim(line.substr(cut + 1));
    if (word.empty()) fail(source, i + 1, "token", "empty");
    const std::size_t idx = words.size();
    words.emplace_back(word);
    if (tag == "O") continue;
    if (tag.size() < 3 || tag[1] != '-' || (tag[0] != 'B' && tag[0] != 'I')) {
      fail(source, i + 1, "tag", "expected O, B-TYPE or I-TYPE");
    }
    const std::string type(tag.substr(2));
    const bool continues = tag[0] == 'I' && !ents.empty() &&
                           ents.back().span.end + 1 == idx &&
                           ents.back().entity_type == type;
    if (continues) {
      ents.back().span.end = idx;
    } else {
      // A dangling I- tag opens a new mention.
      ents.push_back(EntityMention{Span{idx, idx}, type, {}});
    }
  }
  flush();
  return ds;
}

// --- re-tsv ----------------------------------------------------------------

// Rows are `sentence, e1, e2, label` or
// `sentence, e1, e1_type, e2, e2_type, label`.
Dataset parse_re_tsv(std::string_view content, std::string_view source) {
  Dataset ds;
  const auto lines = split_lines(content);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto cols = split(lines[i], '\t');
    std::string_view sentence, e1, e2, t1 = "E1", t2 = "E2", label;
    std::size_t label_col = 0;
    if (cols.size() == 4) {
      sentence = cols[0], e1 = cols[1], e2 = cols[2], label = cols[3];
      label_col = 4;
    } else if (cols.size() == 6) {
      sentence = cols[0], e1 = cols[1], t1 = cols[2], e2 = cols[3];
      t2 = cols[4], label = cols[5];
      label_col = 6;
    } else {
      fail(source, i + 1, "row", "expected 4 or 6 tab-separated columns");
    }
    if (trim(label).empty()) {
      fail(source, i + 1, "column " + std::to_string(label_col) + " (relation)",
           "empty relation label");
    }
    TaskInstance inst;
    inst.id = "re-" + std::to_string(ds.size());
    inst.task = TaskType::kRe;
    inst.text = std::string(trim(sentence));
    inst.tokens = tokenize(inst.text);
    inst.relation = std::string(trim(label));
    const auto s1 = find_surface(inst.tokens, tokenize(e1), std::nullopt);
    if (!s1) fail(source, i + 1, "column 2 (e1)", "not found in sentence");
    const auto s2 = find_surface(inst.tokens, tokenize(e2), s1);
    if (!s2) fail(source, i + 1, "e2", "not found in sentence");
    inst.entities.push_back(EntityMention{
        *s1, std::string(trim(t1)), span_surface(inst.tokens, *s1)});
    inst.entities.push_back(EntityMention{
        *s2, std::string(trim(t2)), span_surface(inst.tokens, *s2)});
    inst.entity_pair = std::array<std::size_t, 2>{0, 1};
    check_valid(inst, source, i + 1);
    ds.push_back(std::move(inst));
  }
  return ds;
}

// --- qa-json ---------------------------------------------------------------

// Either an array of {id, question, passage, answer} objects or a
// PubMedQA-style object keyed by id with QUESTION / CONTEXTS /
// final_decision members.
Dataset parse_qa_json(std::string_view content, std::string_view source) {
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::parse_error& e) {
    fail(source, 1, "document", e.what());
  }
  Dataset ds;
  auto add = [&](std::string id, std::string question, std::string passage,
                 std::string answer, std::size_t rec_no) {
    TaskInstance inst;
    inst.id = std::move(id);
    inst.task = TaskType::kQa;
    inst.text = std::move(passage);
    inst.tokens = tokenize(inst.text);
    inst.question = std::move(question);
    inst.answer = std::move(answer);
    check_valid(inst, source, rec_no);
    ds.push_back(std::move(inst));
  };
  if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const auto& r = doc[i];
      add(get_field<std::string>(r, "id", source, i + 1),
          get_field<std::string>(r, "question", source, i + 1),
          get_field<std::string>(r, "passage", source, i + 1),
          get_field<std::string>(r, "answer", source, i + 1), i + 1);
    }
  } else if (doc.is_object()) {
    std::size_t rec_no = 0;
    for (const auto& [id, r] : doc.items()) {
      ++rec_no;
      auto contexts =
          get_field<std::vector<std::string>>(r, "CONTEXTS", source, rec_no);
      std::string passage;
      for (const auto& c : contexts) {
        if (!passage.empty()) passage += ' ';
        passage += c;
      }
      add(id, get_field<std::string>(r, "QUESTION", source, rec_no), passage,
          get_field<std::string>(r, "final_decision", source, rec_no), rec_no);
    }
  } else {
    fail(source, 1, "document", "expected an array or an object");
  }
  return ds;
}

// --- tc-csv ----------------------------------------------------------------

// RFC 4180 style: comma separated, double-quoted fields may contain commas,
// newlines and doubled quotes. Returns rows with their starting line.
std::vector<std::pair<std::size_t, std::vector<std::string>>> parse_csv(
    std::string_view content, std::string_view source) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  std::size_t line = 1, row_line = 1;
  auto end_row = [&] {
    if (any || !field.empty() || !row.empty()) {
      row.push_back(std::move(field));
      rows.emplace_back(row_line, std::move(row));
    }
    row.clear();
    field.clear();
    any = false;
  };
  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        any = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        row_line = line;
        break;
      default:
        field += c;
        any = true;
    }
  }
  if (quoted) fail(source, row_line, "record", "unterminated quoted field");
  end_row();
  return rows;
}

// Header `id,text,labels`; labels are ';'-separated.
Dataset parse_tc_csv(std::string_view content, std::string_view source) {
  const auto rows = parse_csv(content, source);
  Dataset ds;
  if (rows.empty()) return ds;
  const auto& header = rows.front().second;
  if (header.size() != 3 || trim(header[0]) != "id" ||
      trim(header[1]) != "text" || trim(header[2]) != "labels") {
    fail(source, 1, "header", "expected 'id,text,labels'");
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line, cols] = rows[r];
    if (cols.size() != 3) fail(source, line, "row", "expected 3 columns");
    TaskInstance inst;
    inst.id = std::string(trim(cols[0]));
    inst.task = TaskType::kTc;
    inst.text = cols[1];
    inst.tokens = tokenize(inst.text);
    for (auto label : split(cols[2], ';')) {
      label = trim(label);
      if (!label.empty()) inst.topics.emplace_back(label);
    }
    if (inst.topics.empty()) fail(source, line, "labels", "no topic label");
    check_valid(inst, source, line);
    ds.push_back(std::move(inst));
  }
  return ds;
}

ordered_json to_json(const TaskInstance& inst) {
  ordered_json rec;
  rec["id"] = inst.id;
  rec["task"] = std::string(to_string(inst.task));
  rec["text"] = inst.text;
  if (tokenize(inst.text) != inst.tokens) {
    rec["tokens"] = inst.token_texts();
  }
  if (!inst.entities.empty()) {
    ordered_json ents = ordered_json::array();
    for (const auto& e : inst.entities) {
      ents.push_back({{"start", e.span.start},
                      {"end", e.span.end},
                      {"type", e.entity_type},
                      {"surface", e.surface}});
    }
    rec["entities"] = std::move(ents);
  }
  if (inst.entity_pair) {
    rec["pair"] = {(*inst.entity_pair)[0], (*inst.entity_pair)[1]};
  }
  if (!inst.relation.empty()) rec["relation"] = inst.relation;
  if (!inst.topics.empty()) rec["topics"] = inst.topics;
  if (!inst.question.empty()) rec["question"] = inst.question;
  if (!inst.answer.empty()) rec["answer"] = inst.answer;
  if (inst.parent_id) rec["parent_id"] = *inst.parent_id;
  return rec;
}

}  // namespace

DatasetFormat parse_format(std::string_view tag) {
  if (tag == "jsonl" || tag == "canonical-jsonl") return DatasetFormat::kCanonicalJsonl;
  if (tag == "conll-bio") return DatasetFormat::kConllBio;
  if (tag == "re-tsv") return DatasetFormat::kReTsv;
  if (tag == "qa-json") return DatasetFormat::kQaJson;
  if (tag == "tc-csv") return DatasetFormat::kTcCsv;
  throw ParseError("unknown dataset format '" + std::string(tag) + "'");
}

Dataset parse_dataset(std::string_view content, DatasetFormat format,
                      std::string_view source_name) {
  switch (format) {
    case DatasetFormat::kCanonicalJsonl:
      return parse_canonical(content, source_name);
    case DatasetFormat::kConllBio: return parse_conll(content, source_name);
    case DatasetFormat::kReTsv: return parse_re_tsv(content, source_name);
    case DatasetFormat::kQaJson: return parse_qa_json(content, source_name);
    case DatasetFormat::kTcCsv: return parse_tc_csv(content, source_name);
  }
  throw ParseError("unknown dataset format");
}

Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  if (!std::filesystem::exists(path)) {
    throw Error("dataset file '" + path.string() + "' does not exist");
  }
  return parse_dataset(internal::read_file(path), format, path.string());
}

std::string serialize_dataset(const Dataset& ds) {
  std::string out;
  for (const auto& inst : ds) {
    out += to_json(inst).dump();
    out += '\n';
  }
  return out;
}

void write_dataset(const Dataset& ds, const std::filesystem::path& path) {
  for (const auto& inst : ds) {
    auto report = validate_instance(inst, &ds);
    if (!report.empty()) {
      throw Error("refusing to write invalid instance '" + inst.id +
                  "': " + report.front());
    }
  }
  internal::write_file_atomic(path, serialize_dataset(ds));
}

NotionTable load_notions(const std::filesystem::path& path) {
  return parse_notions(internal::read_file(path));
}

}  // namespace bioaug
