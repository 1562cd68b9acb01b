#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kblink/corpus.hpp"
#include "kblink/link_corpus.hpp"

namespace kblink {

struct AmbiguityEntry {
  EntityId id;
  double score = 0.0;

  bool operator==(const AmbiguityEntry&) const = default;
};

// A mention as it appears in a prediction file: the corpus mention minus
// `gold`, plus the linker's decision.
struct PredictedMention {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  std::optional<NerType> ner_type;
  std::optional<PosCategory> pos_tag;
  LinkTarget prediction;
  double score = 0.0;
  std::vector<AmbiguityEntry> ambiguity;

  bool operator==(const PredictedMention&) const = default;
};

struct PredictedDocument {
  std::string id;
  std::string category;
  std::string text;
  std::vector<PredictedMention> mentions;

  bool operator==(const PredictedDocument&) const = default;
};

std::vector<PredictedDocument> make_predictions(const std::vector<Document>& docs, const CorpusResults& results);

/// One JSON object per line, keys in a fixed order; doubles use the
/// shortest round-trip representation.
void write_predictions(std::ostream& out, const std::vector<PredictedDocument>& preds);

/// Throws MalformedDocument on schema violations.
std::vector<PredictedDocument> read_predictions(std::istream& in);

}  // namespace kblink
