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

/// Dense per-document feature vector.
using DenseVector = std::vector<float>;

struct EmbedConfig {
  int dims = 100;
  int window = 2;
  int epochs = 10;
  int negatives = 5;
  int min_count = 5;
  float initial_lr = 0.025f;
  bool subsample = false;          // frequent-word subsampling, off by default
  double subsample_threshold = 1e-3;
  std::uint64_t seed = 1;
  int workers = 1;  // 1 = deterministic; >1 = lock-free asynchronous updates
};

/// Word vectors trained by skip-gram with negative sampling. Holds both the
/// input (word) and output (context) tables plus every hyperparameter used,
/// and is immutable once trained.
class EmbeddingModel {
 public:
  const EmbedConfig& config() const { return cfg_; }
  int dims() const { return cfg_.dims; }
  std::size_t vocab_size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::uint64_t>& frequencies() const { return freqs_; }

  std::optional<std::uint32_t> index_of(std::string_view term) const;
  std::span<const float> input_vector(std::uint32_t index) const;
  std::span<const float> output_vector(std::uint32_t index) const;

  void save(std::ostream& os) const;
  static EmbeddingModel load(std::istream& is);

 private:
  EmbedConfig cfg_;
  std::vector<std::string> terms_;
  std::vector<std::uint64_t> freqs_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<float> input_;   // vocab_size x dims, row-major
  std::vector<float> output_;  // same shape

  friend EmbeddingModel train_embeddings(std::span<const TokenizedDoc>,
                                         const EmbedConfig&);
};

/// Trains skip-gram with negative sampling over the corpus. One tweet is one
/// sentence; windows never span documents. Terms occurring fewer than
/// min_count times are excluded (throws EmptyVocabulary when nothing
/// survives). With workers == 1 the result is bit-reproducible for a seed.
EmbeddingModel train_embeddings(std::span<const TokenizedDoc> docs,
                                const EmbedConfig& cfg);

/// Mean of the input vectors of the doc's in-vocabulary tokens; the zero
/// vector when none are known.
DenseVector boe_vector(const TokenizedDoc& doc, const EmbeddingModel& m);

/// The k most cosine-similar terms to `term` (itself excluded), descending,
/// ties broken lexicographically. Throws TermNotFound for unknown terms.
std::vector<std::pair<std::string, double>> nearest_neighbors(
    std::string_view term, std::size_t k, const EmbeddingModel& m);

// Negative-sampling objective for a single (center, positive, negatives)
// update, in double precision:
//   L = -log sigmoid(center.positive) - sum_i log sigmoid(-center.neg_i)

double sgns_loss(std::span<const double> center, std::span<const double> positive,
                 const std::vector<std::vector<double>>& negatives);

struct SgnsGradient {
  std::vector<double> center;
  std::vector<double> positive;
  std::vector<std::vector<double>> negatives;
};

SgnsGradient sgns_gradient(std::span<const double> center,
                           std::span<const double> positive,
                           const std::vector<std::vector<double>>& negatives);

}  // namespace geotravel
