#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "kblink/corpus.hpp"
#include "kblink/kb.hpp"
#include "kblink/text.hpp"
#include "kblink/types.hpp"

namespace kblink {

struct FilterSwitches {
  bool type = true;
  bool pos = true;
  bool popularity = true;
  bool class_penalty = true;

  bool operator==(const FilterSwitches&) const = default;
};

struct LinkerConfig {
  double lambda = 0.5;          // weight of the context score; graph gets 1 - lambda
  double nil_threshold = 0.05;  // winners scoring below this become NIL
  FilterSwitches filters;
  // Tokens taken on each side of the mention for the context vector;
  // 0 uses the whole document.
  std::size_t context_window = 0;
  // idf(t) = ln((1 + N) / (1 + df)) + 1 when set, ln(N / df) otherwise
  // (0 for terms absent from the knowledge base).
  bool smooth_idf = true;
  NormalizerProfile normalizer = NormalizerProfile::kPersian;

  bool operator==(const LinkerConfig&) const = default;
};

/// Throws ConfigError when lambda or the threshold is out of range, or when
/// context scoring is active without a stopword list.
void validate(const LinkerConfig& cfg, const ReferenceLists& lists);

struct ScoredCandidate {
  EntityId entity_id;
  double context_score = 0.0;
  double graph_score = 0.0;
  double penalty = 1.0;
  double combined = 0.0;

  bool operator==(const ScoredCandidate&) const = default;
};

struct LinkResult {
  std::size_t mention_index = 0;
  std::optional<EntityId> decision;  // empty means NIL
  double score = 0.0;
  std::vector<ScoredCandidate> ambiguity_list;  // combined descending, then id ascending

  bool is_nil() const { return !decision.has_value(); }
  bool operator==(const LinkResult&) const = default;
};

struct FilterResult {
  std::set<EntityId> kept;
  std::map<EntityId, double> penalties;  // one entry per kept candidate
};

// Post-filter candidate sets of every mention of a document, by mention index.
using CandidateSets = std::vector<std::set<EntityId>>;

std::set<EntityId> generate_candidates(const Mention& mention, const KnowledgeBase& kb);

/// Type, POS, popularity and class-penalty heuristics, applied in that
/// order. Filters only ever remove candidates; the class filter looks for
/// its trigger terms anywhere in the document.
FilterResult filter_candidates(const std::set<EntityId>& candidates, const Mention& mention, const Document& doc,
                               const KnowledgeBase& kb, const ReferenceLists& lists, const LinkerConfig& cfg);

/// TF-IDF cosine between the mention's context (document minus the mention
/// span, stopwords removed) and the entity's article.
double context_score(const Mention& mention, const Document& doc, const EntityRecord& entity,
                     const KnowledgeBase& kb, const ReferenceLists& lists, const LinkerConfig& cfg = {});

/// Number of distinct candidates of the other mentions linked to
/// `candidate`, divided by the largest such count among the candidates of
/// mention `mention_index` (0 when that maximum is 0).
double graph_score(const EntityId& candidate, std::size_t mention_index, const CandidateSets& doc_candidates,
                   const KnowledgeBase& kb);

/// Scores the kept candidates of one mention, picks the best (ties go to
/// the lowest id) and abstains when it scores below the NIL threshold.
LinkResult rank_and_select(std::size_t mention_index, const Document& doc, const KnowledgeBase& kb,
                           const ReferenceLists& lists, const LinkerConfig& cfg, const CandidateSets& doc_candidates,
                           const std::map<EntityId, double>& penalties);

/// Runs the whole pipeline on one document; one result per mention in order.
std::vector<LinkResult> link_document(const Document& doc, const KnowledgeBase& kb, const ReferenceLists& lists,
                                      const LinkerConfig& cfg);

namespace detail {

using TermBag = std::map<std::string, std::uint32_t>;

/// Context bag for a mention given the document's tokens.
TermBag mention_context(std::span<const Token> doc_tokens, const Mention& mention, const ReferenceLists& lists,
                        std::size_t window);

double idf(const KnowledgeBase& kb, const std::string& term, bool smooth);

double tfidf_cosine(const TermBag& context, const TermCounts& article, const KnowledgeBase& kb, bool smooth);

}  // namespace detail

}  // namespace kblink
