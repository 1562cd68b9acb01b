#include "kblink/linker.hpp"

#include <algorithm>
#include <cmath>

#include "kblink/errors.hpp"

namespace kblink {

void validate(const LinkerConfig& cfg, const ReferenceLists& lists) {
  if (!(cfg.lambda >= 0.0 && cfg.lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
  // Thresholds above 1 are allowed: they force every mention to NIL.
  if (!(cfg.nil_threshold >= 0.0) || !std::isfinite(cfg.nil_threshold))
    throw ConfigError("nil_threshold must be a finite value >= 0");
  if (cfg.lambda > 0.0 && lists.stopwords.empty())
    throw ConfigError("context scoring needs a non-empty stopword list");
}

std::set<EntityId> generate_candidates(const Mention& mention, const KnowledgeBase& kb) {
  return kb.lookup_alias(mention.surface);
}

namespace {

std::set<std::string> document_terms(const Document& doc, const KnowledgeBase& kb, const ReferenceLists& lists) {
  auto terms = content_terms(tokenize(doc.text, kb.profile()), lists);
  return {std::make_move_iterator(terms.begin()), std::make_move_iterator(terms.end())};
}

bool intersects(const std::set<std::string>& a, const std::set<std::string>& b) {
  const auto& small = a.size() < b.size() ? a : b;
  const auto& large = a.size() < b.size() ? b : a;
  return std::any_of(small.begin(), small.end(), [&](const std::string& s) { return large.contains(s); });
}

FilterResult filter_with_terms(const std::set<EntityId>& candidates, const Mention& mention,
                               const std::set<std::string>& doc_terms, const KnowledgeBase& kb,
                               const ReferenceLists& lists, const LinkerConfig& cfg) {
  const std::set<std::string>* allowed_classes = nullptr;
  if (cfg.filters.type && mention.ner_type && *mention.ner_type != NerType::kUnknown) {
    auto it = lists.type_mapping.find(*mention.ner_type);
    if (it != lists.type_mapping.end()) allowed_classes = &it->second;
  }

  FilterResult result;
  for (const EntityId& id : candidates) {
    const EntityRecord& e = kb.at(id);
    if (allowed_classes && !allowed_classes->contains(e.kb_class)) continue;
    if (cfg.filters.pos && mention.pos_tag && *mention.pos_tag != PosCategory::kUnknown &&
        e.pos_category != PosCategory::kUnknown && e.pos_category != *mention.pos_tag)
      continue;
    if (cfg.filters.popularity && (e.rare || lists.rare_blocklist.contains(id))) continue;

    double penalty = 1.0;
    if (cfg.filters.class_penalty) {
      auto it = lists.class_filters.find(e.kb_class);
      if (it != lists.class_filters.end() && !intersects(it->second.triggers, doc_terms)) penalty = it->second.penalty;
    }
    result.kept.insert(id);
    result.penalties.emplace(id, penalty);
  }
  return result;
}

// Raw link counts of every candidate of `mention_index` against the union
// of the other mentions' candidates.
std::map<EntityId, std::size_t> raw_graph_counts(std::size_t mention_index, const CandidateSets& doc_candidates,
                                                 const KnowledgeBase& kb) {
  std::set<EntityId> others;
  for (std::size_t m = 0; m < doc_candidates.size(); ++m)
    if (m != mention_index) others.insert(doc_candidates[m].begin(), doc_candidates[m].end());

  std::map<EntityId, std::size_t> raw;
  for (const EntityId& c : doc_candidates.at(mention_index)) {
    std::size_t n = 0;
    for (const EntityId& o : others)
      if (o != c && kb.link_exists(c, o)) ++n;
    raw.emplace(c, n);
  }
  return raw;
}

LinkResult select(std::size_t mention_index, std::vector<ScoredCandidate> scored, double nil_threshold) {
  std::sort(scored.begin(), scored.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.combined != b.combined) return a.combined > b.combined;
    return a.entity_id < b.entity_id;
  });

  LinkResult result;
  result.mention_index = mention_index;
  if (scored.empty()) return result;
  result.score = scored.front().combined;
  if (scored.front().combined < nil_threshold) {
    result.ambiguity_list = std::move(scored);
    return result;
  }
  result.decision = scored.front().entity_id;
  result.ambiguity_list.assign(std::make_move_iterator(scored.begin() + 1), std::make_move_iterator(scored.end()));
  return result;
}

LinkResult rank_with_tokens(std::size_t mention_index, const Document& doc, std::span<const Token> doc_tokens,
                            const KnowledgeBase& kb, const ReferenceLists& lists, const LinkerConfig& cfg,
                            const CandidateSets& doc_candidates, const std::map<EntityId, double>& penalties) {
  const Mention& mention = doc.mentions.at(mention_index);
  const detail::TermBag context = detail::mention_context(doc_tokens, mention, lists, cfg.context_window);
  const auto raw = raw_graph_counts(mention_index, doc_candidates, kb);
  std::size_t max_raw = 0;
  for (const auto& [id, n] : raw) max_raw = std::max(max_raw, n);

  std::vector<ScoredCandidate> scored;
  for (const EntityId& id : doc_candidates[mention_index]) {
    ScoredCandidate c;
    c.entity_id = id;
    c.context_score = detail::tfidf_cosine(context, kb.article_terms(id), kb, cfg.smooth_idf);
    c.graph_score = max_raw == 0 ? 0.0 : static_cast<double>(raw.at(id)) / static_cast<double>(max_raw);
    auto p = penalties.find(id);
    c.penalty = p == penalties.end() ? 1.0 : p->second;
    c.combined = c.penalty * (cfg.lambda * c.context_score + (1.0 - cfg.lambda) * c.graph_score);
    scored.push_back(std::move(c));
  }
  return select(mention_index, std::move(scored), cfg.nil_threshold);
}

}  // namespace

FilterResult filter_candidates(const std::set<EntityId>& candidates, const Mention& mention, const Document& doc,
                               const KnowledgeBase& kb, const ReferenceLists& lists, const LinkerConfig& cfg) {
  return filter_with_terms(candidates, mention, document_terms(doc, kb, lists), kb, lists, cfg);
}

namespace detail {

TermBag mention_context(std::span<const Token> doc_tokens, const Mention& mention, const ReferenceLists& lists,
                        std::size_t window) {
  std::vector<const Token*> before;
  std::vector<const Token*> after;
  for (const Token& t : doc_tokens) {
    if (t.end <= mention.start) before.push_back(&t);
    else if (t.start >= mention.end) after.push_back(&t);
  }
  if (window > 0) {
    if (before.size() > window) before.erase(before.begin(), before.end() - static_cast<std::ptrdiff_t>(window));
    if (after.size() > window) after.resize(window);
  }

  TermBag bag;
  for (const auto* side : {&before, &after})
    for (const Token* t : *side)
      if (!lists.is_stopword(t->text)) ++bag[t->text];
  return bag;
}

double idf(const KnowledgeBase& kb, const std::string& term, bool smooth) {
  const double n = static_cast<double>(kb.doc_count());
  const double df = static_cast<double>(kb.doc_freq(term));
  if (smooth) return std::log((1.0 + n) / (1.0 + df)) + 1.0;
  return df == 0.0 ? 0.0 : std::log(n / df);
}

double tfidf_cosine(const TermBag& context, const TermCounts& article, const KnowledgeBase& kb, bool smooth) {
  if (context.empty() || article.empty()) return 0.0;

  double dot = 0.0;
  double context_norm = 0.0;
  double article_norm = 0.0;
  auto c = context.begin();
  auto a = article.begin();
  // Merge walk over the two sorted term lists.
  while (c != context.end() || a != article.end()) {
    const bool take_c = a == article.end() || (c != context.end() && c->first <= a->first);
    const bool take_a = c == context.end() || (a != article.end() && a->first <= c->first);
    const std::string& term = take_c ? c->first : a->first;
    const double w = idf(kb, term, smooth);
    const double wc = take_c ? c->second * w : 0.0;
    const double wa = take_a ? a->second * w : 0.0;
    dot += wc * wa;
    context_norm += wc * wc;
    article_norm += wa * wa;
    if (take_c) ++c;
    if (take_a) ++a;
  }
  if (context_norm <= 0.0 || article_norm <= 0.0) return 0.0;
  // Rounding can push a self-similarity a hair above 1.
  return std::min(1.0, dot / (std::sqrt(context_norm) * std::sqrt(article_norm)));
}

}  // namespace detail

double context_score(const Mention& mention, const Document& doc, const EntityRecord& entity,
                     const KnowledgeBase& kb, const ReferenceLists& lists, const LinkerConfig& cfg) {
  const auto tokens = tokenize(doc.text, kb.profile());
  const auto context = detail::mention_context(tokens, mention, lists, cfg.context_window);
  return detail::tfidf_cosine(context, kb.article_terms(entity.id), kb, cfg.smooth_idf);
}

double graph_score(const EntityId& candidate, std::size_t mention_index, const CandidateSets& doc_candidates,
                   const KnowledgeBase& kb) {
  const auto raw = raw_graph_counts(mention_index, doc_candidates, kb);
  std::size_t max_raw = 0;
  for (const auto& [id, n] : raw) max_raw = std::max(max_raw, n);
  auto it = raw.find(candidate);
  if (it == raw.end() || max_raw == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(max_raw);
}

LinkResult rank_and_select(std::size_t mention_index, const Document& doc, const KnowledgeBase& kb,
                           const ReferenceLists& lists, const LinkerConfig& cfg, const CandidateSets& doc_candidates,
                           const std::map<EntityId, double>& penalties) {
  const auto tokens = tokenize(doc.text, kb.profile());
  return rank_with_tokens(mention_index, doc, tokens, kb, lists, cfg, doc_candidates, penalties);
}

std::vector<LinkResult> link_document(const Document& doc, const KnowledgeBase& kb, const ReferenceLists& lists,
                                      const LinkerConfig& cfg) {
  const auto tokens = tokenize(doc.text, kb.profile());
  std::set<std::string> doc_terms;
  for (const Token& t : tokens)
    if (!lists.is_stopword(t.text)) doc_terms.insert(t.text);

  CandidateSets kept;
  std::vector<std::map<EntityId, double>> penalties;
  kept.reserve(doc.mentions.size());
  penalties.reserve(doc.mentions.size());
  for (const Mention& m : doc.mentions) {
    FilterResult f = filter_with_terms(generate_candidates(m, kb), m, doc_terms, kb, lists, cfg);
    kept.push_back(std::move(f.kept));
    penalties.push_back(std::move(f.penalties));
  }

  std::vector<LinkResult> results;
  results.reserve(doc.mentions.size());
  for (std::size_t i = 0; i < doc.mentions.size(); ++i)
    results.push_back(rank_with_tokens(i, doc, tokens, kb, lists, cfg, kept, penalties[i]));
  return results;
}

}  // namespace kblink
