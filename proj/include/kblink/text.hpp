#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kblink/types.hpp"

namespace kblink {

/// Canonical form used for alias keys and term matching.
///
/// The Persian profile applies, in order: NFC composition, Arabic Kaf/Yeh to
/// their Persian forms, removal of tatweel and harakat (U+064B..U+0652),
/// deletion of ZWNJ, whitespace collapsing and trimming, and full case
/// folding. A final NFC pass keeps the result idempotent when a deletion
/// brings a base and a combining mark together. The identity profile
/// returns its input unchanged.
std::string normalize(std::string_view s, NormalizerProfile profile = NormalizerProfile::kPersian);

/// A token with offsets in Unicode code points into the original text.
struct Token {
  std::string text;  // normalized
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive

  bool operator==(const Token&) const = default;
};

/// Splits on Unicode whitespace and punctuation (general category P*).
/// Tokens whose normalized form is empty are dropped.
std::vector<Token> tokenize(std::string_view s, NormalizerProfile profile = NormalizerProfile::kPersian);

/// Token texts with stopwords removed; order and duplicates kept.
std::vector<std::string> content_terms(std::span<const Token> tokens, const ReferenceLists& lists);

namespace utf8 {

/// Byte offset of every code point plus one trailing entry for the end.
/// Each maximal ill-formed subsequence counts as one code point.
std::vector<std::size_t> codepoint_offsets(std::string_view s);

std::size_t length(std::string_view s);

/// Substring by code point range; clamps to the string length.
std::string_view slice(std::string_view s, std::span<const std::size_t> offsets, std::size_t start,
                       std::size_t end);

}  // namespace utf8

}  // namespace kblink
