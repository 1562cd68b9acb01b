#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace kblink {

using EntityId = std::string;

// Literal used for an explicit "unlinkable" annotation or prediction in
// corpus and prediction files. No entity may use it as its id.
inline constexpr std::string_view kNilLiteral = "NIL";

enum class NerType { kPer, kLoc, kOrg, kWork, kOther, kUnknown };
enum class PosCategory { kProperNoun, kCommonNoun, kOther, kUnknown };

std::string_view to_string(NerType t);
std::string_view to_string(PosCategory p);
std::optional<NerType> parse_ner_type(std::string_view s);
std::optional<PosCategory> parse_pos_category(std::string_view s);

enum class NormalizerProfile { kPersian, kIdentity };

std::string_view to_string(NormalizerProfile p);
std::optional<NormalizerProfile> parse_normalizer_profile(std::string_view s);

struct ClassFilter {
  std::set<std::string> triggers;  // normalized
  double penalty = 1.0;            // strictly inside (0, 1)
};

// Hand-maintained lists that drive the candidate filters and stopword removal.
// All strings are stored normalized with the knowledge base's profile.
struct ReferenceLists {
  std::set<EntityId> rare_blocklist;
  std::map<std::string, ClassFilter> class_filters;
  std::map<NerType, std::set<std::string>> type_mapping;
  std::set<std::string> stopwords;

  bool is_stopword(const std::string& term) const { return stopwords.contains(term); }
};

}  // namespace kblink
