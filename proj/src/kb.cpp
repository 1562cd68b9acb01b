#include "kblink/kb.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "kblink/errors.hpp"
#include "kblink/text.hpp"

namespace kblink {

using nlohmann::json;

namespace {

std::string require_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw MalformedRecord(line, std::string("missing key '") + key + "'");
  if (!it->is_string()) throw MalformedRecord(line, std::string("key '") + key + "' must be a string");
  return it->get<std::string>();
}

std::string optional_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) throw MalformedRecord(line, std::string("key '") + key + "' must be a string");
  return it->get<std::string>();
}

std::set<std::string> optional_string_set(const json& obj, const char* key, std::size_t line) {
  std::set<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) throw MalformedRecord(line, std::string("key '") + key + "' must be an array");
  for (const json& v : *it) {
    if (!v.is_string()) throw MalformedRecord(line, std::string("key '") + key + "' must hold strings");
    out.insert(v.get<std::string>());
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

EntityRecord parse_entity_record(std::string_view line, std::size_t line_number) {
  json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded()) throw MalformedRecord(line_number, "invalid JSON");
  if (!obj.is_object()) throw MalformedRecord(line_number, "record must be an object");

  EntityRecord rec;
  rec.id = require_string(obj, "id", line_number);
  if (rec.id.empty()) throw MalformedRecord(line_number, "empty id");
  if (rec.id == kNilLiteral) throw MalformedRecord(line_number, "id 'NIL' is reserved");
  rec.canonical_label = require_string(obj, "label", line_number);
  if (rec.canonical_label.empty()) throw MalformedRecord(line_number, "empty label");
  rec.variant_labels = optional_string_set(obj, "variants", line_number);
  rec.kb_class = optional_string(obj, "class", line_number);
  rec.article_text = optional_string(obj, "article", line_number);
  rec.out_links = optional_string_set(obj, "links", line_number);

  if (std::string s = optional_string(obj, "ner_type", line_number); !s.empty()) {
    auto t = parse_ner_type(s);
    if (!t) throw MalformedRecord(line_number, "unknown ner_type '" + s + "'");
    rec.ner_type = *t;
  }
  if (std::string s = optional_string(obj, "pos", line_number); !s.empty()) {
    auto p = parse_pos_category(s);
    if (!p) throw MalformedRecord(line_number, "unknown pos '" + s + "'");
    rec.pos_category = *p;
  }
  if (auto it = obj.find("rare"); it != obj.end() && !it->is_null()) {
    if (!it->is_boolean()) throw MalformedRecord(line_number, "key 'rare' must be a boolean");
    rec.rare = it->get<bool>();
  }
  return rec;
}

std::vector<EntityRecord> read_entity_records(std::istream& in) {
  std::vector<EntityRecord> records;
  std::set<EntityId> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    EntityRecord rec = parse_entity_record(line, line_number);
    if (!seen.insert(rec.id).second) throw DuplicateEntityId(rec.id);
    records.push_back(std::move(rec));
  }
  return records;
}

ReferenceLists parse_reference_lists(std::string_view json_text, NormalizerProfile profile) {
  json obj = json::parse(json_text, nullptr, false);
  if (obj.is_discarded() || !obj.is_object()) throw ConfigError("reference lists: invalid JSON object");

  auto strings = [](const json& arr, const std::string& what) {
    std::vector<std::string> out;
    if (!arr.is_array()) throw ConfigError("reference lists: '" + what + "' must be an array");
    for (const json& v : arr) {
      if (!v.is_string()) throw ConfigError("reference lists: '" + what + "' must hold strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  };

  ReferenceLists lists;
  if (obj.contains("rare_blocklist"))
    for (auto& id : strings(obj["rare_blocklist"], "rare_blocklist")) lists.rare_blocklist.insert(id);

  if (obj.contains("class_filters")) {
    const json& filters = obj["class_filters"];
    if (!filters.is_object()) throw ConfigError("reference lists: 'class_filters' must be an object");
    for (const auto& [cls, entry] : filters.items()) {
      if (!entry.is_object() || !entry.contains("penalty") || !entry["penalty"].is_number())
        throw ConfigError("reference lists: class filter '" + cls + "' needs a numeric penalty");
      ClassFilter f;
      f.penalty = entry["penalty"].get<double>();
      if (!(f.penalty > 0.0 && f.penalty < 1.0))
        throw ConfigError("reference lists: penalty of class '" + cls + "' must lie strictly in (0, 1)");
      if (entry.contains("triggers"))
        for (auto& t : strings(entry["triggers"], "triggers")) {
          std::string n = normalize(t, profile);
          if (!n.empty()) f.triggers.insert(std::move(n));
        }
      lists.class_filters.emplace(cls, std::move(f));
    }
  }

  if (obj.contains("type_mapping")) {
    const json& mapping = obj["type_mapping"];
    if (!mapping.is_object()) throw ConfigError("reference lists: 'type_mapping' must be an object");
    for (const auto& [type, classes] : mapping.items()) {
      auto t = parse_ner_type(type);
      if (!t) throw ConfigError("reference lists: unknown ner type '" + type + "' in type_mapping");
      auto& bucket = lists.type_mapping[*t];
      for (auto& c : strings(classes, "type_mapping." + type)) bucket.insert(c);
    }
  }

  if (obj.contains("stopwords"))
    for (auto& w : strings(obj["stopwords"], "stopwords")) {
      std::string n = normalize(w, profile);
      if (!n.empty()) lists.stopwords.insert(std::move(n));
    }
  return lists;
}

ReferenceLists load_reference_lists(const std::filesystem::path& path, NormalizerProfile profile) {
  return parse_reference_lists(read_file(path), profile);
}

KnowledgeBase KnowledgeBase::build(std::vector<EntityRecord> records, const ReferenceLists& lists,
                                   NormalizerProfile profile, std::size_t* dropped_links) {
  KnowledgeBase kb;
  kb.profile_ = profile;
  for (EntityRecord& rec : records) {
    if (kb.entities_.contains(rec.id)) throw DuplicateEntityId(rec.id);
    EntityId id = rec.id;
    kb.entities_.emplace(std::move(id), std::move(rec));
  }

  std::size_t dropped = 0;
  for (auto& [id, rec] : kb.entities_) {
    for (auto it = rec.out_links.begin(); it != rec.out_links.end();) {
      if (*it == id || !kb.entities_.contains(*it)) {
        it = rec.out_links.erase(it);
        ++dropped;
      } else {
        ++it;
      }
    }
  }
  if (dropped_links) *dropped_links = dropped;

  for (const auto& [id, rec] : kb.entities_) {
    auto add = [&](const std::string& label) {
      std::string key = normalize(label, profile);
      if (!key.empty()) kb.alias_index_[key].insert(id);
    };
    add(rec.canonical_label);
    for (const std::string& v : rec.variant_labels) add(v);

    std::map<std::string, std::uint32_t> counts;
    for (std::string& term : content_terms(tokenize(rec.article_text, profile), lists)) ++counts[std::move(term)];
    if (!rec.article_text.empty()) ++kb.doc_count_;
    for (const auto& [term, n] : counts) ++kb.doc_freq_[term];
    kb.article_terms_.emplace(id, TermCounts(counts.begin(), counts.end()));
  }
  return kb;
}

const EntityRecord* KnowledgeBase::find(std::string_view id) const {
  auto it = entities_.find(id);
  return it == entities_.end() ? nullptr : &it->second;
}

const EntityRecord& KnowledgeBase::at(std::string_view id) const {
  const EntityRecord* rec = find(id);
  if (!rec) throw UnknownEntity(std::string(id));
  return *rec;
}

const std::set<EntityId>& KnowledgeBase::lookup_alias(std::string_view surface) const {
  static const std::set<EntityId> kEmpty;
  auto it = alias_index_.find(normalize(surface, profile_));
  return it == alias_index_.end() ? kEmpty : it->second;
}

bool KnowledgeBase::link_exists(std::string_view a, std::string_view b) const {
  const EntityRecord& ea = at(a);
  const EntityRecord& eb = at(b);
  return ea.out_links.contains(eb.id) || eb.out_links.contains(ea.id);
}

std::uint32_t KnowledgeBase::doc_freq(const std::string& term) const {
  auto it = doc_freq_.find(term);
  return it == doc_freq_.end() ? 0 : it->second;
}

const TermCounts& KnowledgeBase::article_terms(std::string_view id) const {
  auto it = article_terms_.find(id);
  if (it == article_terms_.end()) throw UnknownEntity(std::string(id));
  return it->second;
}

LoadedKb load_kb(const std::filesystem::path& dump_path, const std::filesystem::path& lists_path,
                 NormalizerProfile profile) {
  std::ifstream dump(dump_path, std::ios::binary);
  if (!dump) throw IoError("cannot open " + dump_path.string());
  LoadedKb loaded;
  loaded.lists = load_reference_lists(lists_path, profile);
  loaded.kb = KnowledgeBase::build(read_entity_records(dump), loaded.lists, profile, &loaded.dropped_links);
  if (loaded.dropped_links > 0)
    std::cerr << "warning: dropped " << loaded.dropped_links << " link(s) to entities outside the dump\n";
  return loaded;
}

}  // namespace kblink
