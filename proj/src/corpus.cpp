#include "kblink/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "kblink/errors.hpp"
#include "kblink/text.hpp"

namespace kblink {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string string_field(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    throw MalformedDocument(line, std::string("key '") + key + "' must be a string");
  return it->get<std::string>();
}

std::size_t offset_field(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_unsigned())
    throw MalformedDocument(line, std::string("mention key '") + key + "' must be a non-negative integer");
  return it->get<std::size_t>();
}

Mention parse_mention(const json& m, std::size_t line) {
  if (!m.is_object()) throw MalformedDocument(line, "mention must be an object");
  Mention mention;
  mention.start = offset_field(m, "start", line);
  mention.end = offset_field(m, "end", line);
  mention.surface = string_field(m, "surface", line);
  if (auto it = m.find("ner_type"); it != m.end() && !it->is_null()) {
    auto t = it->is_string() ? parse_ner_type(it->get<std::string>()) : std::nullopt;
    if (!t) throw MalformedDocument(line, "invalid mention ner_type");
    mention.ner_type = t;
  }
  if (auto it = m.find("pos"); it != m.end() && !it->is_null()) {
    auto p = it->is_string() ? parse_pos_category(it->get<std::string>()) : std::nullopt;
    if (!p) throw MalformedDocument(line, "invalid mention pos");
    mention.pos_tag = p;
  }
  if (auto it = m.find("gold"); it != m.end() && !it->is_null()) {
    if (!it->is_string() || it->get<std::string>().empty())
      throw MalformedDocument(line, "mention gold must be an entity id or \"NIL\"");
    auto g = it->get<std::string>();
    mention.gold = g == kNilLiteral ? LinkTarget::nil() : LinkTarget::to(std::move(g));
  }
  return mention;
}

}  // namespace

void validate_document(const Document& doc) {
  const auto offsets = utf8::codepoint_offsets(doc.text);
  const std::size_t length = offsets.size() - 1;
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (std::size_t i = 0; i < doc.mentions.size(); ++i) {
    const Mention& m = doc.mentions[i];
    if (m.start >= m.end || m.end > length) throw SpanMismatch(doc.id, i);
    if (utf8::slice(doc.text, offsets, m.start, m.end) != m.surface) throw SpanMismatch(doc.id, i);
    spans.emplace_back(m.start, m.end);
  }
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 1; i < spans.size(); ++i)
    if (spans[i].first < spans[i - 1].second) throw OverlappingMentions(doc.id);
}

std::vector<Document> read_corpus(std::istream& in) {
  std::vector<Document> docs;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) throw MalformedDocument(line_number, "invalid JSON object");

    Document doc;
    doc.id = string_field(obj, "id", line_number);
    doc.category = string_field(obj, "category", line_number);
    doc.text = string_field(obj, "text", line_number);
    if (!ids.insert(doc.id).second) throw MalformedDocument(line_number, "duplicate document id " + doc.id);
    auto it = obj.find("mentions");
    if (it != obj.end() && !it->is_null()) {
      if (!it->is_array()) throw MalformedDocument(line_number, "'mentions' must be an array");
      for (const json& m : *it) doc.mentions.push_back(parse_mention(m, line_number));
    }
    validate_document(doc);
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_corpus(in);
}

void write_corpus(std::ostream& out, const std::vector<Document>& docs) {
  for (const Document& doc : docs) {
    ordered_json mentions = ordered_json::array();
    for (const Mention& m : doc.mentions) {
      ordered_json jm;
      jm["start"] = m.start;
      jm["end"] = m.end;
      jm["surface"] = m.surface;
      if (m.ner_type) jm["ner_type"] = to_string(*m.ner_type);
      if (m.pos_tag) jm["pos"] = to_string(*m.pos_tag);
      if (m.gold) jm["gold"] = m.gold->is_nil() ? std::string(kNilLiteral) : *m.gold->entity;
      mentions.push_back(std::move(jm));
    }
    ordered_json obj;
    obj["id"] = doc.id;
    obj["category"] = doc.category;
    obj["text"] = doc.text;
    obj["mentions"] = std::move(mentions);
    out << obj.dump() << '\n';
  }
}

std::size_t count_sentences(std::string_view text, NormalizerProfile profile) {
  static constexpr std::string_view kQuestionArabic = "\xD8\x9F";  // U+061F
  std::size_t count = 0;
  std::size_t begin = 0;
  auto close = [&](std::size_t end) {
    if (!tokenize(text.substr(begin, end - begin), profile).empty()) ++count;
  };
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    if (c == '.' || c == '!' || c == '?' || c == '\n') {
      close(i);
      begin = ++i;
    } else if (text.substr(i, kQuestionArabic.size()) == kQuestionArabic) {
      close(i);
      i += kQuestionArabic.size();
      begin = i;
    } else {
      ++i;
    }
  }
  close(text.size());
  return count;
}

namespace {

void finish(CorpusStats& s) {
  auto ratio = [](std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
  s.words_per_article = ratio(s.words, s.documents);
  s.entities_per_article = ratio(s.entities, s.documents);
  s.candidates_per_mention = ratio(s.candidates, s.entities);
}

}  // namespace

CorpusStatsReport corpus_stats(const std::vector<Document>& docs, const KnowledgeBase& kb) {
  CorpusStatsReport report;
  for (const Document& doc : docs) {
    CorpusStats one;
    one.documents = 1;
    one.sentences = count_sentences(doc.text, kb.profile());
    one.words = tokenize(doc.text, kb.profile()).size();
    one.entities = doc.mentions.size();
    for (const Mention& m : doc.mentions) one.candidates += kb.lookup_alias(m.surface).size();

    for (CorpusStats* s : {&report.total, &report.per_category[doc.category]}) {
      s->documents += one.documents;
      s->sentences += one.sentences;
      s->words += one.words;
      s->entities += one.entities;
      s->candidates += one.candidates;
    }
  }
  finish(report.total);
  for (auto& [cat, s] : report.per_category) finish(s);
  return report;
}

namespace {

struct StatRow {
  const char* label;
  std::string (*format)(const CorpusStats&);
};

constexpr StatRow kStatRows[] = {
    {"Documents", [](const CorpusStats& s) { return fmt::format("{}", s.documents); }},
    {"Sentences", [](const CorpusStats& s) { return fmt::format("{}", s.sentences); }},
    {"Words", [](const CorpusStats& s) { return fmt::format("{}", s.words); }},
    {"Entities", [](const CorpusStats& s) { return fmt::format("{}", s.entities); }},
    {"Candidates", [](const CorpusStats& s) { return fmt::format("{}", s.candidates); }},
    {"Words per article", [](const CorpusStats& s) { return fmt::format("{:.1f}", s.words_per_article); }},
    {"Entities per article", [](const CorpusStats& s) { return fmt::format("{:.1f}", s.entities_per_article); }},
    {"Candidates per Entity mentions",
     [](const CorpusStats& s) { return fmt::format("{:.1f}", s.candidates_per_mention); }},
};

ordered_json stats_json(const CorpusStats& s) {
  ordered_json j;
  j["documents"] = s.documents;
  j["sentences"] = s.sentences;
  j["words"] = s.words;
  j["entities"] = s.entities;
  j["candidates"] = s.candidates;
  j["words_per_article"] = s.words_per_article;
  j["entities_per_article"] = s.entities_per_article;
  j["candidates_per_mention"] = s.candidates_per_mention;
  return j;
}

}  // namespace

std::string render_stats_table(const CorpusStatsReport& report, bool per_category) {
  std::vector<std::string> headers = {"Dataset"};
  std::vector<const CorpusStats*> columns;
  if (per_category)
    for (const auto& [cat, s] : report.per_category) {
      headers.push_back(cat);
      columns.push_back(&s);
    }
  headers.push_back(per_category ? "Total" : "Count");
  columns.push_back(&report.total);

  std::vector<std::vector<std::string>> rows;
  rows.push_back(headers);
  for (const StatRow& r : kStatRows) {
    std::vector<std::string> row = {r.label};
    for (const CorpusStats* s : columns) row.push_back(r.format(*s));
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> widths(headers.size(), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], utf8::length(row[i]));

  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::size_t pad = widths[i] - utf8::length(row[i]);
      if (i == 0) {
        out += row[i] + std::string(pad, ' ');
      } else {
        out += "  " + std::string(pad, ' ') + row[i];
      }
    }
    out += '\n';
  }
  return out;
}

std::string render_stats_records(const CorpusStatsReport& report) {
  ordered_json j;
  j["total"] = stats_json(report.total);
  ordered_json cats = ordered_json::object();
  for (const auto& [cat, s] : report.per_category) cats[cat] = stats_json(s);
  j["per_category"] = std::move(cats);
  return j.dump(2) + "\n";
}

}  // namespace kblink
