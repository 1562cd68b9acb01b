#pragma once

#include <vector>

#include "kblink/linker.hpp"

namespace kblink {

using CorpusResults = std::vector<std::vector<LinkResult>>;

/// Links every document on up to `jobs` OpenMP threads (0 picks the
/// runtime default). Results come back in input order and are identical to
/// `link_corpus_serial` for any thread count.
CorpusResults link_corpus(const std::vector<Document>& docs, const KnowledgeBase& kb, const ReferenceLists& lists,
                          const LinkerConfig& cfg, int jobs = 0);

/// Single-threaded reference used by the tests and the benchmark.
CorpusResults link_corpus_serial(const std::vector<Document>& docs, const KnowledgeBase& kb,
                                 const ReferenceLists& lists, const LinkerConfig& cfg);

int default_jobs();

}  // namespace kblink
