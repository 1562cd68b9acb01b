#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kblink/types.hpp"

namespace kblink {

struct EntityRecord {
  EntityId id;
  std::string canonical_label;
  std::set<std::string> variant_labels;
  std::string kb_class;
  NerType ner_type = NerType::kUnknown;
  PosCategory pos_category = PosCategory::kUnknown;
  std::string article_text;
  std::set<EntityId> out_links;
  bool rare = false;

  bool operator==(const EntityRecord&) const = default;
};

// Sparse term-frequency vector, sorted by term.
using TermCounts = std::vector<std::pair<std::string, std::uint32_t>>;

/// Immutable entity store with the normalized alias index, the article
/// term statistics used for TF-IDF and the hyperlink graph.
///
/// Built once by `KnowledgeBase::build` (or read back from an index cache)
/// and safe to share between threads afterwards.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  /// Indexes `records`. Links to ids outside the set, and self links, are
  /// dropped; their number is reported through `dropped_links`.
  static KnowledgeBase build(std::vector<EntityRecord> records, const ReferenceLists& lists,
                             NormalizerProfile profile, std::size_t* dropped_links = nullptr);

  const EntityRecord* find(std::string_view id) const;
  const EntityRecord& at(std::string_view id) const;  // throws UnknownEntity
  bool contains(std::string_view id) const { return find(id) != nullptr; }

  /// Entities whose canonical label or a variant normalizes to the same key
  /// as `surface`. Empty when nothing matches.
  const std::set<EntityId>& lookup_alias(std::string_view surface) const;

  /// Undirected: true when either entity's article links the other.
  bool link_exists(std::string_view a, std::string_view b) const;

  std::size_t size() const { return entities_.size(); }
  std::size_t doc_count() const { return doc_count_; }
  std::uint32_t doc_freq(const std::string& term) const;
  const TermCounts& article_terms(std::string_view id) const;
  NormalizerProfile profile() const { return profile_; }

  const std::map<EntityId, EntityRecord, std::less<>>& entities() const { return entities_; }
  const std::map<std::string, std::set<EntityId>, std::less<>>& alias_index() const { return alias_index_; }
  const std::map<std::string, std::uint32_t, std::less<>>& doc_freq_table() const { return doc_freq_; }

  bool operator==(const KnowledgeBase&) const = default;

 private:
  friend class IndexReader;

  NormalizerProfile profile_ = NormalizerProfile::kPersian;
  std::map<EntityId, EntityRecord, std::less<>> entities_;
  std::map<std::string, std::set<EntityId>, std::less<>> alias_index_;
  std::map<EntityId, TermCounts, std::less<>> article_terms_;
  std::map<std::string, std::uint32_t, std::less<>> doc_freq_;
  std::size_t doc_count_ = 0;
};

struct LoadedKb {
  KnowledgeBase kb;
  ReferenceLists lists;
  std::size_t dropped_links = 0;
};

/// Parses one dump line. Throws MalformedRecord on schema violations.
EntityRecord parse_entity_record(std::string_view line, std::size_t line_number);

/// Reads a line-delimited dump; blank lines are skipped.
/// Throws MalformedRecord or DuplicateEntityId.
std::vector<EntityRecord> read_entity_records(std::istream& in);

ReferenceLists parse_reference_lists(std::string_view json_text, NormalizerProfile profile);
ReferenceLists load_reference_lists(const std::filesystem::path& path, NormalizerProfile profile);

LoadedKb load_kb(const std::filesystem::path& dump_path, const std::filesystem::path& lists_path,
                 NormalizerProfile profile = NormalizerProfile::kPersian);

/// Writes a knowledge base and its reference lists as a versioned binary
/// cache. Output is byte-identical for identical inputs.
void write_index(std::ostream& out, const KnowledgeBase& kb, const ReferenceLists& lists);

/// Throws IndexFormatError on a bad magic header, unsupported version or
/// truncated payload.
LoadedKb read_index(std::istream& in);

inline constexpr std::uint32_t kIndexFormatVersion = 1;

}  // namespace kblink
