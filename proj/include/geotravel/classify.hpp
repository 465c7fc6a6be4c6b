#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "geotravel/embed.hpp"
#include "geotravel/vocab.hpp"

namespace geotravel {

/// Sparse count block concatenated with a dense block. Sparse indices occupy
/// [0, V), dense ones [V, V + dims). Either block may be empty (ablation
/// configurations).
struct FeatureVector {
  SparseCounts sparse;
  DenseVector dense;

  std::uint32_t total_dim() const {
    return sparse.dimension + static_cast<std::uint32_t>(dense.size());
  }
  /// Value at a flat feature index.
  float at(std::uint32_t index) const;
};

FeatureVector combine_features(SparseCounts bow, DenseVector boe);

struct LabeledExample {
  std::int64_t tweet_id = 0;
  bool travel = false;  // positive class
  FeatureVector features;
};

/// Which feature blocks a model consumes.
enum class FeatureMode { bow, boe, bow_boe };

/// Parses "bow", "boe" or "bow+boe".
FeatureMode parse_feature_mode(std::string_view s);
std::string feature_mode_name(FeatureMode mode);

/// Builds the feature vector for one document under the given mode. vocab
/// may be null only when the mode excludes the sparse block, and likewise
/// for the embedding model.
FeatureVector featurize(const TokenizedDoc& doc, FeatureMode mode,
                        const Vocabulary* vocab, const EmbeddingModel* embeddings);

/// A labeled collection with a fixed (V, dims) schema. Adding an example
/// with a different shape throws SchemaMismatch; tweet ids must be unique.
class Dataset {
 public:
  Dataset(std::uint32_t sparse_dim, std::uint32_t dense_dim)
      : sparse_dim_(sparse_dim), dense_dim_(dense_dim) {}

  void add(LabeledExample example);

  std::uint32_t sparse_dim() const { return sparse_dim_; }
  std::uint32_t dense_dim() const { return dense_dim_; }
  std::uint32_t total_dim() const { return sparse_dim_ + dense_dim_; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  const std::vector<LabeledExample>& examples() const { return examples_; }
  const LabeledExample& operator[](std::size_t i) const { return examples_[i]; }

  std::size_t positives() const { return positives_; }
  std::size_t negatives() const { return examples_.size() - positives_; }

 private:
  std::uint32_t sparse_dim_;
  std::uint32_t dense_dim_;
  std::size_t positives_ = 0;
  std::vector<LabeledExample> examples_;
  std::unordered_set<std::int64_t> ids_;
};

enum class LossKind : std::uint8_t { hinge = 1, logistic = 2 };

struct LinearConfig {
  LossKind loss = LossKind::hinge;
  double l2 = 1e-4;
  int epochs = 50;
  double lr = 0.1;
  std::uint64_t seed = 1;
  bool shuffle = true;      // reshuffle example order each epoch
  bool full_batch = false;  // batch gradient steps instead of per-example SGD
  // Scale each feature by its inverse standard deviation during training
  // (no centering, so sparsity is preserved); the scales fold into the
  // stored weights, leaving prediction untouched. Off by default: the blocks
  // are concatenated raw.
  bool standardize = false;
};

/// Linear classifier trained by SGD on hinge or logistic loss. Weights are
/// kept as 32-bit floats, matching the file format exactly.
class LinearModel {
 public:
  LossKind loss_kind() const { return loss_; }
  std::uint32_t sparse_dim() const { return sparse_dim_; }
  std::uint32_t dense_dim() const { return dense_dim_; }
  std::span<const float> weights() const { return weights_; }
  float bias() const { return bias_; }

  /// Raw margin w.x + b.
  double margin(const FeatureVector& x) const;
  /// Hinge: the margin. Logistic: sigmoid of it.
  double score(const FeatureVector& x) const;
  /// Positive iff score exceeds the loss threshold (0 margin / 0.5 probability).
  bool label(const FeatureVector& x) const;

  void save(std::ostream& os) const;

 private:
  LossKind loss_ = LossKind::hinge;
  std::uint32_t sparse_dim_ = 0;
  std::uint32_t dense_dim_ = 0;
  std::vector<float> weights_;
  float bias_ = 0.0f;

  friend LinearModel train_linear(const Dataset&, const LinearConfig&);
  friend struct ModelFile;
};

/// Trains on the dataset, minimizing (1/n) sum loss + (l2/2)||w||^2 with the
/// bias unregularized. Throws DegenerateLabels unless both classes appear.
LinearModel train_linear(const Dataset& data, const LinearConfig& cfg);

// Per-example loss at raw margin z with y in {-1,+1}, and its derivative in
// z. Shared by the trainers and by finite-difference checks.
double linear_loss(LossKind kind, double z, int y);
double linear_dloss_dz(LossKind kind, double z, int y);

struct ForestConfig {
  int n_trees = 100;
  int max_features = 0;  // per-split sample size; 0 = ceil(sqrt(total_dim))
  int max_depth = 0;     // 0 = unlimited
  int min_samples_split = 2;
  std::uint64_t seed = 1;
};

struct TreeNode {
  std::uint32_t feature = 0;
  float threshold = 0.0f;
  std::int32_t left = -1;  // -1 on both sides marks a leaf
  std::int32_t right = -1;
  std::uint64_t count_neg = 0;
  std::uint64_t count_pos = 0;

  bool is_leaf() const { return left < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // preorder, root first
  std::uint64_t bootstrap_seed = 0;
  std::vector<std::uint32_t> oob_indices;  // not serialized

  bool vote(const FeatureVector& x) const;
};

/// Bagged gini-split trees; score is the fraction of trees voting positive.
class ForestModel {
 public:
  std::uint32_t sparse_dim() const { return sparse_dim_; }
  std::uint32_t dense_dim() const { return dense_dim_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }

  double score(const FeatureVector& x) const;
  bool label(const FeatureVector& x) const { return score(x) > 0.5; }

  void save(std::ostream& os) const;

 private:
  std::uint32_t sparse_dim_ = 0;
  std::uint32_t dense_dim_ = 0;
  std::vector<DecisionTree> trees_;

  friend ForestModel train_random_forest(const Dataset&, const ForestConfig&);
  friend struct ModelFile;
};

ForestModel train_random_forest(const Dataset& data, const ForestConfig& cfg);

/// Gini impurity of a two-class count pair.
double gini_impurity(std::uint64_t neg, std::uint64_t pos);

struct Prediction {
  double score = 0.0;
  bool label = false;
};

std::vector<Prediction> predict_batch(const LinearModel& m, const Dataset& data);
std::vector<Prediction> predict_batch(const ForestModel& m, const Dataset& data);

/// Either trained model kind, as stored in a model file.
using AnyModel = std::variant<LinearModel, ForestModel>;

struct ModelFile {
  static AnyModel load(std::istream& is);
};

double predict_score(const AnyModel& m, const FeatureVector& x);
bool predict_label(const AnyModel& m, const FeatureVector& x);
std::uint32_t model_sparse_dim(const AnyModel& m);
std::uint32_t model_dense_dim(const AnyModel& m);

}  // namespace geotravel
