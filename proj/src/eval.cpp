#include "kblink/eval.hpp"

#include <algorithm>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "kblink/errors.hpp"
#include "kblink/text.hpp"

namespace kblink {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double f1(double precision, double recall) {
  if (!(precision >= 0.0 && precision <= 1.0)) throw DomainError("precision outside [0, 1]");
  if (!(recall >= 0.0 && recall <= 1.0)) throw DomainError("recall outside [0, 1]");
  const double sum = precision + recall;
  return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

MetricRow metrics_from_counts(const Counts& counts) {
  MetricRow row;
  row.counts = counts;
  row.precision = ratio(counts.tp, counts.tp + counts.fp);
  row.recall = ratio(counts.tp, counts.tp + counts.fn);
  row.f1 = f1(row.precision, row.recall);
  return row;
}

EvalReport score_predictions(const std::vector<Document>& gold, const std::vector<PredictedDocument>& predictions) {
  std::unordered_map<std::string, const PredictedDocument*> by_id;
  for (const PredictedDocument& p : predictions)
    if (!by_id.emplace(p.id, &p).second) throw AlignmentError("duplicate prediction for document " + p.id);
  if (by_id.size() != gold.size())
    throw AlignmentError(fmt::format("{} gold documents but {} predicted documents", gold.size(), by_id.size()));

  std::map<std::string, Counts> counts;
  for (const Document& doc : gold) {
    auto it = by_id.find(doc.id);
    if (it == by_id.end()) throw AlignmentError("no prediction for document " + doc.id);
    const PredictedDocument& pred = *it->second;
    if (pred.mentions.size() != doc.mentions.size())
      throw AlignmentError(fmt::format("document {}: {} gold mentions but {} predictions", doc.id,
                                       doc.mentions.size(), pred.mentions.size()));

    Counts& c = counts[doc.category];
    for (std::size_t i = 0; i < doc.mentions.size(); ++i) {
      const Mention& g = doc.mentions[i];
      const PredictedMention& p = pred.mentions[i];
      if (g.start != p.start || g.end != p.end)
        throw AlignmentError(fmt::format("document {}: mention {} spans differ", doc.id, i));
      if (!g.gold) continue;
      const bool gold_nil = g.gold->is_nil();
      const bool pred_nil = p.prediction.is_nil();
      if (gold_nil && pred_nil) continue;
      if (gold_nil) {
        ++c.fp;
      } else if (pred_nil) {
        ++c.fn;
      } else if (*g.gold->entity == *p.prediction.entity) {
        ++c.tp;
      } else {
        ++c.fp;
        ++c.fn;
      }
    }
  }

  EvalReport report;
  Counts total;
  for (const auto& [cat, c] : counts) {
    report.per_category.emplace(cat, metrics_from_counts(c));
    total += c;
  }
  report.total = metrics_from_counts(total);
  return report;
}

std::string render_eval_table(const EvalReport& report) {
  std::size_t width = std::string_view("Category").size();
  for (const auto& [cat, row] : report.per_category) width = std::max(width, utf8::length(cat));
  width = std::max(width, std::string_view("Total").size());

  auto line = [&](std::string_view name, const std::string& p, const std::string& r, const std::string& f) {
    return std::string(name) + std::string(width - utf8::length(name), ' ') + fmt::format("  {:>6}  {:>6}  {:>6}\n", p, r, f);
  };
  auto row_line = [&](std::string_view name, const MetricRow& row) {
    return line(name, fmt::format("{:.4f}", row.precision), fmt::format("{:.4f}", row.recall),
                fmt::format("{:.4f}", row.f1));
  };

  std::string out = line("Category", "P", "R", "F1");
  for (const auto& [cat, row] : report.per_category) out += row_line(cat, row);
  out += row_line("Total", report.total);
  return out;
}

std::string render_eval_records(const EvalReport& report) {
  using nlohmann::ordered_json;
  auto row_json = [](const MetricRow& row) {
    ordered_json j;
    j["tp"] = row.counts.tp;
    j["fp"] = row.counts.fp;
    j["fn"] = row.counts.fn;
    j["precision"] = row.precision;
    j["recall"] = row.recall;
    j["f1"] = row.f1;
    return j;
  };
  ordered_json j;
  ordered_json cats = ordered_json::object();
  for (const auto& [cat, row] : report.per_category) cats[cat] = row_json(row);
  j["per_category"] = std::move(cats);
  j["total"] = row_json(report.total);
  return j.dump(2) + "\n";
}

}  // namespace kblink
