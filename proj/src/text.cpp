#include "kblink/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <array>
#include <stdexcept>

namespace kblink {

namespace {

constexpr UChar32 kArabicKaf = 0x0643;
constexpr UChar32 kPersianKaf = 0x06A9;
constexpr UChar32 kArabicYeh = 0x064A;
constexpr UChar32 kPersianYeh = 0x06CC;
constexpr UChar32 kTatweel = 0x0640;
constexpr UChar32 kZwnj = 0x200C;

bool is_harakat(UChar32 c) { return c >= 0x064B && c <= 0x0652; }

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
  return *n;
}

icu::UnicodeString to_nfc(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(s, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
  return out;
}

bool is_separator(UChar32 c) { return u_isUWhiteSpace(c) || u_ispunct(c); }

}  // namespace

std::string_view to_string(NerType t) {
  switch (t) {
    case NerType::kPer: return "PER";
    case NerType::kLoc: return "LOC";
    case NerType::kOrg: return "ORG";
    case NerType::kWork: return "WORK";
    case NerType::kOther: return "OTHER";
    case NerType::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::string_view to_string(PosCategory p) {
  switch (p) {
    case PosCategory::kProperNoun: return "PROPER_NOUN";
    case PosCategory::kCommonNoun: return "COMMON_NOUN";
    case PosCategory::kOther: return "OTHER";
    case PosCategory::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::optional<NerType> parse_ner_type(std::string_view s) {
  static constexpr std::array kAll = {NerType::kPer,  NerType::kLoc,   NerType::kOrg,
                                      NerType::kWork, NerType::kOther, NerType::kUnknown};
  for (NerType t : kAll)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

std::optional<PosCategory> parse_pos_category(std::string_view s) {
  static constexpr std::array kAll = {PosCategory::kProperNoun, PosCategory::kCommonNoun,
                                      PosCategory::kOther, PosCategory::kUnknown};
  for (PosCategory p : kAll)
    if (to_string(p) == s) return p;
  return std::nullopt;
}

std::string_view to_string(NormalizerProfile p) {
  return p == NormalizerProfile::kPersian ? "persian" : "identity";
}

std::optional<NormalizerProfile> parse_normalizer_profile(std::string_view s) {
  if (s == "persian") return NormalizerProfile::kPersian;
  if (s == "identity") return NormalizerProfile::kIdentity;
  return std::nullopt;
}

std::string normalize(std::string_view s, NormalizerProfile profile) {
  if (profile == NormalizerProfile::kIdentity) return std::string(s);

  const icu::UnicodeString composed =
      to_nfc(icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size()))));

  icu::UnicodeString mapped;
  bool pending_space = false;
  for (int32_t i = 0; i < composed.length();) {
    UChar32 c = composed.char32At(i);
    i += U16_LENGTH(c);
    if (c == kTatweel || is_harakat(c) || c == kZwnj) continue;
    if (u_isUWhiteSpace(c)) {
      pending_space = true;
      continue;
    }
    if (c == kArabicKaf) c = kPersianKaf;
    else if (c == kArabicYeh) c = kPersianYeh;
    if (pending_space && !mapped.isEmpty()) mapped.append(static_cast<UChar>(u' '));
    pending_space = false;
    mapped.append(c);
  }
  mapped.foldCase();

  std::string out;
  to_nfc(mapped).toUTF8String(out);
  return out;
}

std::vector<Token> tokenize(std::string_view s, NormalizerProfile profile) {
  std::vector<Token> tokens;
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());

  int32_t pos = 0;
  std::size_t cp = 0;
  int32_t token_byte = -1;
  std::size_t token_cp = 0;
  auto flush = [&](int32_t end_byte, std::size_t end_cp) {
    if (token_byte < 0) return;
    std::string text = normalize(s.substr(token_byte, end_byte - token_byte), profile);
    if (!text.empty()) tokens.push_back(Token{std::move(text), token_cp, end_cp});
    token_byte = -1;
  };

  while (pos < length) {
    const int32_t here = pos;
    UChar32 c;
    U8_NEXT(bytes, pos, length, c);
    if (c < 0) c = 0xFFFD;
    if (is_separator(c)) {
      flush(here, cp);
    } else if (token_byte < 0) {
      token_byte = here;
      token_cp = cp;
    }
    ++cp;
  }
  flush(length, cp);
  return tokens;
}

std::vector<std::string> content_terms(std::span<const Token> tokens, const ReferenceLists& lists) {
  std::vector<std::string> terms;
  terms.reserve(tokens.size());
  for (const Token& t : tokens)
    if (!lists.is_stopword(t.text)) terms.push_back(t.text);
  return terms;
}

namespace utf8 {

std::vector<std::size_t> codepoint_offsets(std::string_view s) {
  std::vector<std::size_t> offsets;
  offsets.reserve(s.size() + 1);
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  int32_t pos = 0;
  while (pos < length) {
    offsets.push_back(static_cast<std::size_t>(pos));
    UChar32 c;
    U8_NEXT(bytes, pos, length, c);
  }
  offsets.push_back(s.size());
  return offsets;
}

std::size_t length(std::string_view s) { return codepoint_offsets(s).size() - 1; }

std::string_view slice(std::string_view s, std::span<const std::size_t> offsets, std::size_t start,
                       std::size_t end) {
  const std::size_t n = offsets.size() - 1;
  start = std::min(start, n);
  end = std::min(std::max(end, start), n);
  return s.substr(offsets[start], offsets[end] - offsets[start]);
}

}  // namespace utf8

}  // namespace kblink
