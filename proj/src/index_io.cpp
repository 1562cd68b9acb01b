// Binary index cache.
//
// Layout (all integers little-endian):
//   magic "KBLINKIX" | u32 version | u8 profile
//   entities | alias index | article term counts | doc freq | u64 doc_count
//   reference lists
//   trailer "XIKNILBK"
// Strings are u64 length + bytes; containers are u64 count + elements, in
// their std::map / std::set order, so equal inputs give equal bytes.

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "kblink/errors.hpp"
#include "kblink/kb.hpp"

namespace kblink {

namespace {

constexpr std::array<char, 8> kMagic = {'K', 'B', 'L', 'I', 'N', 'K', 'I', 'X'};
constexpr std::array<char, 8> kTrailer = {'X', 'I', 'K', 'N', 'I', 'L', 'B', 'K'};

static_assert(std::endian::native == std::endian::little, "index cache assumes a little-endian host");

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void bytes(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
  void u8(std::uint8_t v) { bytes(&v, 1); }
  void u32(std::uint32_t v) { bytes(&v, 4); }
  void u64(std::uint64_t v) { bytes(&v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  void strings(const std::set<std::string>& set) {
    u64(set.size());
    for (const auto& s : set) str(s);
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw IndexFormatError("index cache is truncated");
  }
  std::uint8_t u8() {
    std::uint8_t v;
    bytes(&v, 1);
    return v;
  }
  std::uint32_t u32() {
    std::uint32_t v;
    bytes(&v, 4);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    bytes(&v, 8);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint64_t n = u64();
    if (n > kMaxString) throw IndexFormatError("index cache string length out of range");
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }
  std::set<std::string> strings() {
    std::set<std::string> out;
    for (std::uint64_t i = 0, n = u64(); i < n; ++i) out.insert(str());
    return out;
  }

 private:
  static constexpr std::uint64_t kMaxString = 1ull << 28;
  std::istream& in_;
};

template <typename E>
E checked_enum(std::uint8_t raw, std::uint8_t max, const char* what) {
  if (raw > max) throw IndexFormatError(std::string("index cache has invalid ") + what);
  return static_cast<E>(raw);
}

}  // namespace

class IndexReader {
 public:
  static KnowledgeBase read_kb(Reader& r, NormalizerProfile profile) {
    KnowledgeBase kb;
    kb.profile_ = profile;
    for (std::uint64_t i = 0, n = r.u64(); i < n; ++i) {
      EntityRecord rec;
      rec.id = r.str();
      rec.canonical_label = r.str();
      rec.variant_labels = r.strings();
      rec.kb_class = r.str();
      rec.ner_type = checked_enum<NerType>(r.u8(), static_cast<std::uint8_t>(NerType::kUnknown), "ner type");
      rec.pos_category =
          checked_enum<PosCategory>(r.u8(), static_cast<std::uint8_t>(PosCategory::kUnknown), "pos category");
      rec.article_text = r.str();
      rec.out_links = r.strings();
      rec.rare = r.u8() != 0;
      EntityId id = rec.id;
      kb.entities_.emplace(std::move(id), std::move(rec));
    }
    for (std::uint64_t i = 0, n = r.u64(); i < n; ++i) {
      std::string key = r.str();
      kb.alias_index_.emplace(std::move(key), r.strings());
    }
    for (std::uint64_t i = 0, n = r.u64(); i < n; ++i) {
      EntityId id = r.str();
      TermCounts terms;
      for (std::uint64_t j = 0, m = r.u64(); j < m; ++j) {
        std::string term = r.str();
        terms.emplace_back(std::move(term), r.u32());
      }
      kb.article_terms_.emplace(std::move(id), std::move(terms));
    }
    for (std::uint64_t i = 0, n = r.u64(); i < n; ++i) {
      std::string term = r.str();
      kb.doc_freq_.emplace(std::move(term), r.u32());
    }
    kb.doc_count_ = r.u64();
    return kb;
  }

  static void write_kb(Writer& w, const KnowledgeBase& kb) {
    w.u64(kb.entities_.size());
    for (const auto& [id, rec] : kb.entities_) {
      w.str(rec.id);
      w.str(rec.canonical_label);
      w.strings(rec.variant_labels);
      w.str(rec.kb_class);
      w.u8(static_cast<std::uint8_t>(rec.ner_type));
      w.u8(static_cast<std::uint8_t>(rec.pos_category));
      w.str(rec.article_text);
      w.strings(rec.out_links);
      w.u8(rec.rare ? 1 : 0);
    }
    w.u64(kb.alias_index_.size());
    for (const auto& [key, ids] : kb.alias_index_) {
      w.str(key);
      w.strings(ids);
    }
    w.u64(kb.article_terms_.size());
    for (const auto& [id, terms] : kb.article_terms_) {
      w.str(id);
      w.u64(terms.size());
      for (const auto& [term, count] : terms) {
        w.str(term);
        w.u32(count);
      }
    }
    w.u64(kb.doc_freq_.size());
    for (const auto& [term, df] : kb.doc_freq_) {
      w.str(term);
      w.u32(df);
    }
    w.u64(kb.doc_count_);
  }
};

void write_index(std::ostream& out, const KnowledgeBase& kb, const ReferenceLists& lists) {
  Writer w(out);
  w.bytes(kMagic.data(), kMagic.size());
  w.u32(kIndexFormatVersion);
  w.u8(static_cast<std::uint8_t>(kb.profile()));
  IndexReader::write_kb(w, kb);

  w.strings(lists.rare_blocklist);
  w.u64(lists.class_filters.size());
  for (const auto& [cls, filter] : lists.class_filters) {
    w.str(cls);
    w.strings(filter.triggers);
    w.f64(filter.penalty);
  }
  w.u64(lists.type_mapping.size());
  for (const auto& [type, classes] : lists.type_mapping) {
    w.u8(static_cast<std::uint8_t>(type));
    w.strings(classes);
  }
  w.strings(lists.stopwords);
  w.bytes(kTrailer.data(), kTrailer.size());
  if (!out) throw IoError("failed to write index cache");
}

LoadedKb read_index(std::istream& in) {
  Reader r(in);
  std::array<char, 8> magic{};
  try {
    r.bytes(magic.data(), magic.size());
  } catch (const IndexFormatError&) {
    throw IndexFormatError("not an index cache (missing magic header)");
  }
  if (magic != kMagic) throw IndexFormatError("not an index cache (bad magic header)");
  const std::uint32_t version = r.u32();
  if (version != kIndexFormatVersion)
    throw IndexFormatError("index cache version " + std::to_string(version) + " is not supported (expected " +
                           std::to_string(kIndexFormatVersion) + "); rebuild the index");
  const auto profile = checked_enum<NormalizerProfile>(r.u8(), 1, "normalizer profile");

  LoadedKb loaded;
  loaded.kb = IndexReader::read_kb(r, profile);

  ReferenceLists& lists = loaded.lists;
  lists.rare_blocklist = r.strings();
  for (std::uint64_t i = 0, n = r.u64(); i < n; ++i) {
    std::string cls = r.str();
    ClassFilter f;
    f.triggers = r.strings();
    f.penalty = r.f64();
    lists.class_filters.emplace(std::move(cls), std::move(f));
  }
  for (std::uint64_t i = 0, n = r.u64(); i < n; ++i) {
    auto type = checked_enum<NerType>(r.u8(), static_cast<std::uint8_t>(NerType::kUnknown), "ner type");
    lists.type_mapping.emplace(type, r.strings());
  }
  lists.stopwords = r.strings();

  std::array<char, 8> trailer{};
  r.bytes(trailer.data(), trailer.size());
  if (trailer != kTrailer) throw IndexFormatError("index cache trailer is corrupt");
  return loaded;
}

}  // namespace kblink
