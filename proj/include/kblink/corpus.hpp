#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "kblink/kb.hpp"
#include "kblink/types.hpp"

namespace kblink {

/// Link target of a mention: an entity, or NIL when `entity` is empty.
struct LinkTarget {
  std::optional<EntityId> entity;

  static LinkTarget nil() { return {}; }
  static LinkTarget to(EntityId id) { return LinkTarget{std::move(id)}; }
  bool is_nil() const { return !entity.has_value(); }

  bool operator==(const LinkTarget&) const = default;
};

/// An annotated span. Offsets are Unicode code points into the document text.
struct Mention {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  std::optional<NerType> ner_type;
  std::optional<PosCategory> pos_tag;
  std::optional<LinkTarget> gold;  // absent: not annotated

  bool operator==(const Mention&) const = default;
};

struct Document {
  std::string id;
  std::string category;
  std::string text;
  std::vector<Mention> mentions;

  bool operator==(const Document&) const = default;
};

/// Checks span bounds, surface/slice agreement and non-overlap.
/// Throws SpanMismatch or OverlappingMentions.
void validate_document(const Document& doc);

/// Throws MalformedDocument, OverlappingMentions or SpanMismatch.
std::vector<Document> read_corpus(std::istream& in);
std::vector<Document> load_corpus(const std::filesystem::path& path);

void write_corpus(std::ostream& out, const std::vector<Document>& docs);

struct CorpusStats {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t words = 0;
  std::size_t entities = 0;
  std::size_t candidates = 0;
  double words_per_article = 0.0;
  double entities_per_article = 0.0;
  double candidates_per_mention = 0.0;

  bool operator==(const CorpusStats&) const = default;
};

struct CorpusStatsReport {
  CorpusStats total;
  std::map<std::string, CorpusStats> per_category;
};

/// Sentences are approximated as stretches between . ! ? U+061F or newline
/// that contain at least one token.
std::size_t count_sentences(std::string_view text, NormalizerProfile profile = NormalizerProfile::kPersian);

/// Candidates are counted with `lookup_alias` on each mention surface,
/// before any filtering.
CorpusStatsReport corpus_stats(const std::vector<Document>& docs, const KnowledgeBase& kb);

/// Two-column dataset-properties table; one row per category column when
/// `per_category` is set.
std::string render_stats_table(const CorpusStatsReport& report, bool per_category = false);
std::string render_stats_records(const CorpusStatsReport& report);

}  // namespace kblink
