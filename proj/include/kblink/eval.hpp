#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "kblink/corpus.hpp"
#include "kblink/predictions.hpp"

namespace kblink {

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const Counts&) const = default;
};

struct MetricRow {
  Counts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::map<std::string, MetricRow> per_category;
  MetricRow total;  // micro-averaged
};

/// Harmonic mean of precision and recall; 0 when both are 0.
/// Throws DomainError when either lies outside [0, 1].
double f1(double precision, double recall);

MetricRow metrics_from_counts(const Counts& counts);

/// Per mention: matching link is tp; a wrong link is fp and fn; a missed
/// link (predicted NIL) is fn; a link where gold says NIL is fp; NIL/NIL
/// and unannotated mentions are not counted.
/// Predictions are aligned to gold by document id and mention index; throws
/// AlignmentError on any mismatch.
EvalReport score_predictions(const std::vector<Document>& gold, const std::vector<PredictedDocument>& predictions);

/// Aligned text table: Category | P | R | F1, four decimals, Total last.
std::string render_eval_table(const EvalReport& report);

/// JSON record with raw counts and metrics for every row.
std::string render_eval_records(const EvalReport& report);

}  // namespace kblink
