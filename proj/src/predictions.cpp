#include "kblink/predictions.hpp"

#include <nlohmann/json.hpp>

#include "kblink/errors.hpp"

namespace kblink {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<PredictedDocument> make_predictions(const std::vector<Document>& docs, const CorpusResults& results) {
  if (docs.size() != results.size()) throw AlignmentError("document and result counts differ");
  std::vector<PredictedDocument> out;
  out.reserve(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const Document& doc = docs[d];
    if (doc.mentions.size() != results[d].size())
      throw AlignmentError("mention and result counts differ in document " + doc.id);
    PredictedDocument pd{doc.id, doc.category, doc.text, {}};
    for (const LinkResult& r : results[d]) {
      const Mention& m = doc.mentions.at(r.mention_index);
      PredictedMention pm;
      pm.start = m.start;
      pm.end = m.end;
      pm.surface = m.surface;
      pm.ner_type = m.ner_type;
      pm.pos_tag = m.pos_tag;
      pm.prediction = r.decision ? LinkTarget::to(*r.decision) : LinkTarget::nil();
      pm.score = r.score;
      for (const ScoredCandidate& c : r.ambiguity_list) pm.ambiguity.push_back({c.entity_id, c.combined});
      pd.mentions.push_back(std::move(pm));
    }
    out.push_back(std::move(pd));
  }
  return out;
}

void write_predictions(std::ostream& out, const std::vector<PredictedDocument>& preds) {
  for (const PredictedDocument& doc : preds) {
    ordered_json mentions = ordered_json::array();
    for (const PredictedMention& m : doc.mentions) {
      ordered_json jm;
      jm["start"] = m.start;
      jm["end"] = m.end;
      jm["surface"] = m.surface;
      if (m.ner_type) jm["ner_type"] = to_string(*m.ner_type);
      if (m.pos_tag) jm["pos"] = to_string(*m.pos_tag);
      jm["prediction"] = m.prediction.is_nil() ? std::string(kNilLiteral) : *m.prediction.entity;
      jm["score"] = m.score;
      ordered_json amb = ordered_json::array();
      for (const AmbiguityEntry& a : m.ambiguity) {
        ordered_json ja;
        ja["id"] = a.id;
        ja["score"] = a.score;
        amb.push_back(std::move(ja));
      }
      jm["ambiguity"] = std::move(amb);
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

std::vector<PredictedDocument> read_predictions(std::istream& in) {
  std::vector<PredictedDocument> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) throw MalformedDocument(line_number, "invalid JSON object");
    try {
      PredictedDocument doc;
      doc.id = obj.at("id").get<std::string>();
      doc.category = obj.value("category", "");
      doc.text = obj.value("text", "");
      for (const json& m : obj.at("mentions")) {
        PredictedMention pm;
        pm.start = m.at("start").get<std::size_t>();
        pm.end = m.at("end").get<std::size_t>();
        pm.surface = m.at("surface").get<std::string>();
        if (m.contains("ner_type")) pm.ner_type = parse_ner_type(m["ner_type"].get<std::string>());
        if (m.contains("pos")) pm.pos_tag = parse_pos_category(m["pos"].get<std::string>());
        const auto pred = m.at("prediction").get<std::string>();
        pm.prediction = pred == kNilLiteral ? LinkTarget::nil() : LinkTarget::to(pred);
        pm.score = m.value("score", 0.0);
        if (m.contains("ambiguity"))
          for (const json& a : m["ambiguity"])
            pm.ambiguity.push_back({a.at("id").get<std::string>(), a.at("score").get<double>()});
        doc.mentions.push_back(std::move(pm));
      }
      out.push_back(std::move(doc));
    } catch (const json::exception& e) {
      throw MalformedDocument(line_number, e.what());
    }
  }
  return out;
}

}  // namespace kblink
