#include "kblink/link_corpus.hpp"

#include <omp.h>

#include <exception>
#include <thread>

namespace kblink {

int default_jobs() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

CorpusResults link_corpus_serial(const std::vector<Document>& docs, const KnowledgeBase& kb,
                                 const ReferenceLists& lists, const LinkerConfig& cfg) {
  CorpusResults out;
  out.reserve(docs.size());
  for (const Document& doc : docs) out.push_back(link_document(doc, kb, lists, cfg));
  return out;
}

CorpusResults link_corpus(const std::vector<Document>& docs, const KnowledgeBase& kb, const ReferenceLists& lists,
                          const LinkerConfig& cfg, int jobs) {
  if (jobs <= 0) jobs = default_jobs();
  CorpusResults out(docs.size());
  const auto n = static_cast<std::ptrdiff_t>(docs.size());

  // Exceptions must not escape an OpenMP region; keep the first and rethrow.
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 4) num_threads(jobs)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = link_document(docs[i], kb, lists, cfg);
    } catch (...) {
#pragma omp critical(kblink_link_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace kblink
