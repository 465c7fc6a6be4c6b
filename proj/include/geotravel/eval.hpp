#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "geotravel/classify.hpp"
#include "geotravel/corpus.hpp"

namespace geotravel {

/// Transport-mode keyword set used to seed candidate positives.
struct TermQuery {
  std::vector<std::string> terms;

  /// bicicleta, moto, onibus, ônibus, carro, taxi, táxi, metro, metrô,
  /// trem, caminhar.
  static TermQuery defaults();
};

/// True iff the normalized text contains a query term with whitespace on
/// both sides; start and end of text count as delimiters.
bool matches_query(std::string_view normalized_text, const TermQuery& q);

/// Retains tweets whose (normalized) text matches the query.
std::vector<Tweet> bootstrap_candidates(std::span<const Tweet> corpus,
                                        const TermQuery& q);

struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;
};

/// Counts with travel (true) as the positive class. Throws LengthMismatch
/// unless both sequences have the same nonzero length.
Confusion confusion(const std::vector<bool>& preds, const std::vector<bool>& golds);

/// Positive-class precision, recall and F1. A zero denominator reports the
/// metric as 0 with its defined flag cleared.
struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_defined = false;
  bool recall_defined = false;
  bool f1_defined = false;
};

Prf prf1(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn, std::uint64_t fn);
Prf prf1(const Confusion& c);

/// ROC points (fpr, tpr), threshold swept descending over distinct scores
/// with ties collapsed, starting at (0,0) and ending at (1,1). Throws
/// DegenerateLabels unless both classes appear in golds.
std::vector<std::pair<double, double>> roc_curve(std::span<const double> scores,
                                                 const std::vector<bool>& golds);

/// Trapezoidal area under roc_curve; equals the probability that a random
/// positive outscores a random negative, ties counting one half.
double auc(std::span<const double> scores, const std::vector<bool>& golds);

/// The full metric bundle for one scored test set.
struct EvalReport {
  Confusion counts;
  Prf prf;
  std::vector<std::pair<double, double>> roc_points;
  double auc = 0.0;
};

EvalReport evaluate(std::span<const double> scores, const std::vector<bool>& preds,
                    const std::vector<bool>& golds);

std::string report_to_json(const EvalReport& r);
void roc_to_csv(std::ostream& os, std::span<const std::pair<double, double>> points);

/// A tweet with its features, before labels are known.
struct FeaturizedTweet {
  std::int64_t tweet_id = 0;
  FeatureVector features;
};

/// Joins annotations (tweet_id -> label) to candidate features. Every
/// annotated id must exist among the candidates (AnnotationOrphan otherwise);
/// candidates without an annotation are skipped.
Dataset assemble_gold(std::span<const FeaturizedTweet> candidates,
                      std::span<const std::pair<std::int64_t, bool>> annotations,
                      std::uint32_t sparse_dim, std::uint32_t dense_dim);

/// Throws LeakageDetected when the two datasets share a tweet id.
void check_disjoint(const Dataset& train, const Dataset& test);

/// Reads a two-column CSV "tweet_id,label" with label travel|non_travel.
/// A header row is skipped when present.
std::vector<std::pair<std::int64_t, bool>> read_annotations(std::istream& is);

}  // namespace geotravel
