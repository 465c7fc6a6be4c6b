#include "geotravel/classify.hpp"

#include <algorithm>
#include <cmath>

#include "geotravel/binio.hpp"
#include "geotravel/errors.hpp"
#include "geotravel/rng.hpp"

namespace geotravel {

namespace {

constexpr char kMagic[4] = {'T', 'R', 'V', 'L'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint8_t kKindForest = 3;

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

float FeatureVector::at(std::uint32_t index) const {
  if (index < sparse.dimension) {
    auto it = std::lower_bound(sparse.entries.begin(), sparse.entries.end(), index,
                               [](const auto& e, std::uint32_t i) { return e.first < i; });
    if (it != sparse.entries.end() && it->first == index)
      return static_cast<float>(it->second);
    return 0.0f;
  }
  return dense[index - sparse.dimension];
}

FeatureVector combine_features(SparseCounts bow, DenseVector boe) {
  return FeatureVector{std::move(bow), std::move(boe)};
}

FeatureMode parse_feature_mode(std::string_view s) {
  if (s == "bow") return FeatureMode::bow;
  if (s == "boe") return FeatureMode::boe;
  if (s == "bow+boe") return FeatureMode::bow_boe;
  throw std::invalid_argument("unknown feature mode: " + std::string(s));
}

std::string feature_mode_name(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::bow: return "bow";
    case FeatureMode::boe: return "boe";
    case FeatureMode::bow_boe: return "bow+boe";
  }
  return "?";
}

FeatureVector featurize(const TokenizedDoc& doc, FeatureMode mode,
                        const Vocabulary* vocab, const EmbeddingModel* embeddings) {
  SparseCounts bow;
  DenseVector boe;
  if (mode != FeatureMode::boe) {
    if (!vocab) throw std::invalid_argument("feature mode needs a vocabulary");
    bow = bow_vector(doc, *vocab);
  }
  if (mode != FeatureMode::bow) {
    if (!embeddings) throw std::invalid_argument("feature mode needs an embedding model");
    boe = boe_vector(doc, *embeddings);
  }
  return combine_features(std::move(bow), std::move(boe));
}

void Dataset::add(LabeledExample example) {
  if (example.features.sparse.dimension != sparse_dim_ ||
      example.features.dense.size() != dense_dim_)
    throw SchemaMismatch("example shape does not match the dataset schema");
  for (const auto& [index, count] : example.features.sparse.entries) {
    if (index >= sparse_dim_) throw SchemaMismatch("sparse index out of range");
    if (count == 0) throw std::invalid_argument("sparse counts must be positive");
  }
  for (float v : example.features.dense)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite dense feature");
  if (!ids_.insert(example.tweet_id).second)
    throw std::invalid_argument("duplicate tweet id " +
                                std::to_string(example.tweet_id));
  if (example.travel) ++positives_;
  examples_.push_back(std::move(example));
}

double linear_loss(LossKind kind, double z, int y) {
  double m = y * z;
  if (kind == LossKind::hinge) return m < 1.0 ? 1.0 - m : 0.0;
  if (m >= 0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

double linear_dloss_dz(LossKind kind, double z, int y) {
  double m = y * z;
  if (kind == LossKind::hinge) return m < 1.0 ? -static_cast<double>(y) : 0.0;
  return -static_cast<double>(y) * sigmoid(-m);
}

namespace {

double sparse_margin(const std::vector<double>& w, double scale, double bias,
                     const FeatureVector& x, std::uint32_t sparse_dim,
                     const std::vector<double>& feature_scale) {
  double dot = 0.0;
  for (const auto& [index, count] : x.sparse.entries)
    dot += w[index] * (count * feature_scale[index]);
  for (std::size_t j = 0; j < x.dense.size(); ++j)
    dot += w[sparse_dim + j] *
           (static_cast<double>(x.dense[j]) * feature_scale[sparse_dim + j]);
  return scale * dot + bias;
}

/// Per-dimension inverse standard deviation over the dataset (no centering);
/// constant dimensions keep scale 1.
std::vector<double> inverse_std_scales(const Dataset& data) {
  const std::size_t dim = data.total_dim();
  const std::uint32_t sparse_dim = data.sparse_dim();
  std::vector<double> sum(dim, 0.0), sum_sq(dim, 0.0);
  for (const LabeledExample& ex : data.examples()) {
    for (const auto& [index, count] : ex.features.sparse.entries) {
      double v = count;
      sum[index] += v;
      sum_sq[index] += v * v;
    }
    for (std::size_t j = 0; j < ex.features.dense.size(); ++j) {
      double v = ex.features.dense[j];
      sum[sparse_dim + j] += v;
      sum_sq[sparse_dim + j] += v * v;
    }
  }
  const double n = static_cast<double>(data.size());
  std::vector<double> scales(dim, 1.0);
  for (std::size_t k = 0; k < dim; ++k) {
    double mean = sum[k] / n;
    double variance = sum_sq[k] / n - mean * mean;
    if (variance > 1e-24) scales[k] = 1.0 / std::sqrt(variance);
  }
  return scales;
}

void train_sgd(const Dataset& data, const LinearConfig& cfg, std::vector<double>& w,
               double& bias, const std::vector<double>& feature_scale) {
  const std::uint32_t sparse_dim = data.sparse_dim();
  double scale = 1.0;
  Rng rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) rng.shuffle(order);
    for (std::size_t i : order) {
      const LabeledExample& ex = data[i];
      int y = ex.travel ? 1 : -1;
      double z = sparse_margin(w, scale, bias, ex.features, sparse_dim, feature_scale);
      double dz = linear_dloss_dz(cfg.loss, z, y);

      // w <- (1 - lr*l2) w - lr*dz*x, with w held as scale*values so the
      // shrink touches every coordinate in O(1).
      scale *= 1.0 - cfg.lr * cfg.l2;
      if (scale < 1e-9) {
        for (double& v : w) v *= scale;
        scale = 1.0;
      }
      if (dz != 0.0) {
        double step = cfg.lr * dz / scale;
        for (const auto& [index, count] : ex.features.sparse.entries)
          w[index] -= step * (count * feature_scale[index]);
        for (std::size_t j = 0; j < ex.features.dense.size(); ++j)
          w[sparse_dim + j] -= step * (static_cast<double>(ex.features.dense[j]) *
                                       feature_scale[sparse_dim + j]);
        bias -= cfg.lr * dz;
      }
    }
  }
  for (double& v : w) v *= scale;
}

void train_full_batch(const Dataset& data, const LinearConfig& cfg,
                      std::vector<double>& w, double& bias,
                      const std::vector<double>& feature_scale) {
  const std::uint32_t sparse_dim = data.sparse_dim();
  const double n = static_cast<double>(data.size());
  std::vector<double> grad(w.size());

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    for (const LabeledExample& ex : data.examples()) {
      int y = ex.travel ? 1 : -1;
      double z = sparse_margin(w, 1.0, bias, ex.features, sparse_dim, feature_scale);
      double dz = linear_dloss_dz(cfg.loss, z, y);
      if (dz == 0.0) continue;
      for (const auto& [index, count] : ex.features.sparse.entries)
        grad[index] += dz * (count * feature_scale[index]);
      for (std::size_t j = 0; j < ex.features.dense.size(); ++j)
        grad[sparse_dim + j] += dz * (static_cast<double>(ex.features.dense[j]) *
                                      feature_scale[sparse_dim + j]);
      grad_bias += dz;
    }
    for (std::size_t k = 0; k < w.size(); ++k)
      w[k] -= cfg.lr * (grad[k] / n + cfg.l2 * w[k]);
    bias -= cfg.lr * grad_bias / n;
  }
}

}  // namespace

LinearModel train_linear(const Dataset& data, const LinearConfig& cfg) {
  if (data.positives() == 0 || data.negatives() == 0)
    throw DegenerateLabels("training requires at least one example of each class");
  if (cfg.epochs < 1 || cfg.lr <= 0.0 || cfg.l2 < 0.0)
    throw std::invalid_argument("bad linear training hyperparameters");

  std::vector<double> feature_scale(data.total_dim(), 1.0);
  if (cfg.standardize) feature_scale = inverse_std_scales(data);

  std::vector<double> w(data.total_dim(), 0.0);
  double bias = 0.0;
  if (cfg.full_batch)
    train_full_batch(data, cfg, w, bias, feature_scale);
  else
    train_sgd(data, cfg, w, bias, feature_scale);

  // Fold the feature scales into the weights so prediction sees raw inputs.
  for (std::size_t k = 0; k < w.size(); ++k) w[k] *= feature_scale[k];

  LinearModel m;
  m.loss_ = cfg.loss;
  m.sparse_dim_ = data.sparse_dim();
  m.dense_dim_ = data.dense_dim();
  m.weights_.resize(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) m.weights_[k] = static_cast<float>(w[k]);
  m.bias_ = static_cast<float>(bias);
  return m;
}

double LinearModel::margin(const FeatureVector& x) const {
  if (x.sparse.dimension != sparse_dim_ || x.dense.size() != dense_dim_)
    throw SchemaMismatch("feature vector shape does not match the model schema");
  double dot = static_cast<double>(bias_);
  for (const auto& [index, count] : x.sparse.entries)
    dot += static_cast<double>(weights_[index]) * count;
  for (std::size_t j = 0; j < x.dense.size(); ++j)
    dot += static_cast<double>(weights_[sparse_dim_ + j]) * static_cast<double>(x.dense[j]);
  return dot;
}

double LinearModel::score(const FeatureVector& x) const {
  double z = margin(x);
  return loss_ == LossKind::logistic ? sigmoid(z) : z;
}

bool LinearModel::label(const FeatureVector& x) const {
  double threshold = loss_ == LossKind::logistic ? 0.5 : 0.0;
  return score(x) > threshold;
}

double ForestModel::score(const FeatureVector& x) const {
  if (x.sparse.dimension != sparse_dim_ || x.dense.size() != dense_dim_)
    throw SchemaMismatch("feature vector shape does not match the model schema");
  std::size_t votes = 0;
  for (const DecisionTree& tree : trees_)
    if (tree.vote(x)) ++votes;
  return static_cast<double>(votes) / static_cast<double>(trees_.size());
}

bool DecisionTree::vote(const FeatureVector& x) const {
  std::size_t node = 0;
  while (!nodes[node].is_leaf()) {
    const TreeNode& n = nodes[node];
    node = static_cast<std::size_t>(x.at(n.feature) <= n.threshold ? n.left : n.right);
  }
  return nodes[node].count_pos > nodes[node].count_neg;
}

std::vector<Prediction> predict_batch(const LinearModel& m, const Dataset& data) {
  std::vector<Prediction> out;
  out.reserve(data.size());
  for (const LabeledExample& ex : data.examples()) {
    double s = m.score(ex.features);
    double threshold = m.loss_kind() == LossKind::logistic ? 0.5 : 0.0;
    out.push_back({s, s > threshold});
  }
  return out;
}

std::vector<Prediction> predict_batch(const ForestModel& m, const Dataset& data) {
  std::vector<Prediction> out;
  out.reserve(data.size());
  for (const LabeledExample& ex : data.examples()) {
    double s = m.score(ex.features);
    out.push_back({s, s > 0.5});
  }
  return out;
}

void LinearModel::save(std::ostream& os) const {
  os.write(kMagic, 4);
  binio::write_u32(os, kFormatVersion);
  binio::write_u8(os, static_cast<std::uint8_t>(loss_));
  binio::write_u32(os, sparse_dim_);
  binio::write_u32(os, dense_dim_);
  binio::write_u32(os, static_cast<std::uint32_t>(weights_.size()));
  for (float w : weights_) binio::write_f32(os, w);
  binio::write_f32(os, bias_);
}

void ForestModel::save(std::ostream& os) const {
  os.write(kMagic, 4);
  binio::write_u32(os, kFormatVersion);
  binio::write_u8(os, kKindForest);
  binio::write_u32(os, sparse_dim_);
  binio::write_u32(os, dense_dim_);
  binio::write_u32(os, static_cast<std::uint32_t>(trees_.size()));
  for (const DecisionTree& tree : trees_) {
    binio::write_u64(os, tree.bootstrap_seed);
    binio::write_u32(os, static_cast<std::uint32_t>(tree.nodes.size()));
    for (const TreeNode& n : tree.nodes) {
      binio::write_u32(os, n.feature);
      binio::write_f32(os, n.threshold);
      binio::write_i32(os, n.left);
      binio::write_i32(os, n.right);
      binio::write_u64(os, n.count_neg);
      binio::write_u64(os, n.count_pos);
    }
  }
}

AnyModel ModelFile::load(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("not a classifier model file");
  if (binio::read_u32(is) != kFormatVersion)
    throw IoError("unsupported classifier model version");
  std::uint8_t kind = binio::read_u8(is);
  std::uint32_t sparse_dim = binio::read_u32(is);
  std::uint32_t dense_dim = binio::read_u32(is);

  if (kind == static_cast<std::uint8_t>(LossKind::hinge) ||
      kind == static_cast<std::uint8_t>(LossKind::logistic)) {
    LinearModel m;
    m.loss_ = static_cast<LossKind>(kind);
    m.sparse_dim_ = sparse_dim;
    m.dense_dim_ = dense_dim;
    std::uint32_t n = binio::read_u32(is);
    if (n != sparse_dim + dense_dim)
      throw IoError("weight count does not match the model schema");
    m.weights_.resize(n);
    for (float& w : m.weights_) w = binio::read_f32(is);
    m.bias_ = binio::read_f32(is);
    return m;
  }
  if (kind == kKindForest) {
    ForestModel m;
    m.sparse_dim_ = sparse_dim;
    m.dense_dim_ = dense_dim;
    std::uint32_t n_trees = binio::read_u32(is);
    m.trees_.resize(n_trees);
    for (DecisionTree& tree : m.trees_) {
      tree.bootstrap_seed = binio::read_u64(is);
      std::uint32_t n_nodes = binio::read_u32(is);
      tree.nodes.resize(n_nodes);
      for (std::uint32_t i = 0; i < n_nodes; ++i) {
        TreeNode& n = tree.nodes[i];
        n.feature = binio::read_u32(is);
        n.threshold = binio::read_f32(is);
        n.left = binio::read_i32(is);
        n.right = binio::read_i32(is);
        n.count_neg = binio::read_u64(is);
        n.count_pos = binio::read_u64(is);
        // Preorder layout: children always come after their parent.
        bool leaf = n.left < 0 && n.right < 0;
        bool valid_split =
            n.left > static_cast<std::int32_t>(i) &&
            n.right > static_cast<std::int32_t>(i) &&
            n.left < static_cast<std::int32_t>(n_nodes) &&
            n.right < static_cast<std::int32_t>(n_nodes) &&
            n.feature < sparse_dim + dense_dim;
        if (!leaf && !valid_split) throw IoError("malformed tree node in model file");
      }
      if (tree.nodes.empty()) throw IoError("empty tree in model file");
    }
    return m;
  }
  throw IoError("unknown model kind in file");
}

double predict_score(const AnyModel& m, const FeatureVector& x) {
  return std::visit([&](const auto& model) { return model.score(x); }, m);
}

bool predict_label(const AnyModel& m, const FeatureVector& x) {
  return std::visit([&](const auto& model) { return model.label(x); }, m);
}

std::uint32_t model_sparse_dim(const AnyModel& m) {
  return std::visit([](const auto& model) { return model.sparse_dim(); }, m);
}

std::uint32_t model_dense_dim(const AnyModel& m) {
  return std::visit([](const auto& model) { return model.dense_dim(); }, m);
}

}  // namespace geotravel
