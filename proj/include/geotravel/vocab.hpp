#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geotravel/textprep.hpp"

namespace geotravel {

/// Sparse unigram counts over a vocabulary. Entries are sorted by index and
/// every count is at least one.
struct SparseCounts {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;
  std::uint32_t dimension = 0;
};

struct VocabEntry {
  std::string term;
  std::uint64_t tf = 0;  // total corpus frequency
  std::uint64_t df = 0;  // number of documents containing the term
};

/// Capped unigram vocabulary. Terms above the document-frequency cap are
/// dropped first, then the most frequent max_terms survive; indices run by
/// descending frequency with lexicographic tie-break, so construction is
/// deterministic for a given corpus.
class Vocabulary {
 public:
  /// Throws EmptyCorpus when docs is empty.
  static Vocabulary build(std::span<const TokenizedDoc> docs,
                          std::size_t max_terms = 3000, double max_df_ratio = 0.6);

  std::size_t size() const { return entries_.size(); }
  std::uint64_t n_docs() const { return n_docs_; }
  std::size_t max_terms() const { return max_terms_; }
  double max_df_ratio() const { return max_df_ratio_; }
  const std::vector<VocabEntry>& entries() const { return entries_; }

  std::optional<std::uint32_t> index_of(std::string_view term) const;

  void save(std::ostream& os) const;
  static Vocabulary load(std::istream& is);

 private:
  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::uint64_t n_docs_ = 0;
  std::size_t max_terms_ = 0;
  double max_df_ratio_ = 0.0;

  void rebuild_index();
};

/// Per-document term counts over the vocabulary; out-of-vocabulary tokens
/// are ignored.
SparseCounts bow_vector(const TokenizedDoc& doc, const Vocabulary& v);

}  // namespace geotravel
