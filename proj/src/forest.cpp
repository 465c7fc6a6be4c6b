#include <algorithm>
#include <cmath>
#include <numeric>

#include "geotravel/classify.hpp"
#include "geotravel/errors.hpp"
#include "geotravel/rng.hpp"

namespace geotravel {

double gini_impurity(std::uint64_t neg, std::uint64_t pos) {
  std::uint64_t n = neg + pos;
  if (n == 0) return 0.0;
  double pn = static_cast<double>(neg) / static_cast<double>(n);
  double pp = static_cast<double>(pos) / static_cast<double>(n);
  return 1.0 - pn * pn - pp * pp;
}

namespace {

struct TreeFitter {
  const Dataset& data;
  const ForestConfig& cfg;
  std::uint32_t total_dim;
  std::uint32_t max_features;
  Rng rng;
  std::vector<TreeNode> nodes;
  std::vector<std::uint32_t> feature_pool;  // reshuffled per node

  TreeFitter(const Dataset& d, const ForestConfig& c, std::uint32_t mf,
             std::uint64_t seed)
      : data(d), cfg(c), total_dim(d.total_dim()), max_features(mf), rng(seed) {
    feature_pool.resize(total_dim);
    std::iota(feature_pool.begin(), feature_pool.end(), 0u);
  }

  /// Builds the subtree over `samples` (bootstrap indices, multiplicity
  /// preserved) and returns its root node index. Nodes end up in preorder.
  std::int32_t build(std::vector<std::uint32_t>& samples, int depth) {
    std::int32_t self = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();

    std::uint64_t pos = 0;
    for (std::uint32_t i : samples)
      if (data[i].travel) ++pos;
    std::uint64_t neg = samples.size() - pos;
    nodes[static_cast<std::size_t>(self)].count_neg = neg;
    nodes[static_cast<std::size_t>(self)].count_pos = pos;

    bool pure = pos == 0 || neg == 0;
    bool too_small = samples.size() < static_cast<std::size_t>(cfg.min_samples_split);
    bool too_deep = cfg.max_depth > 0 && depth >= cfg.max_depth;
    if (pure || too_small || too_deep) return self;

    double parent_gini = gini_impurity(neg, pos);
    const double n = static_cast<double>(samples.size());

    // Feature subset for this node: partial Fisher-Yates over the pool.
    for (std::uint32_t k = 0; k < max_features; ++k) {
      std::size_t j = k + rng.index(total_dim - k);
      std::swap(feature_pool[k], feature_pool[j]);
    }

    double best_decrease = 0.0;
    std::uint32_t best_feature = 0;
    float best_threshold = 0.0f;
    bool found = false;

    std::vector<std::pair<float, bool>> values(samples.size());
    for (std::uint32_t k = 0; k < max_features; ++k) {
      std::uint32_t f = feature_pool[k];
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const LabeledExample& ex = data[samples[i]];
        values[i] = {ex.features.at(f), ex.travel};
      }
      std::sort(values.begin(), values.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      std::uint64_t left_pos = 0, left_neg = 0;
      for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        if (values[i].second)
          ++left_pos;
        else
          ++left_neg;
        if (values[i].first == values[i + 1].first) continue;

        float threshold = static_cast<float>(
            0.5 * (static_cast<double>(values[i].first) + values[i + 1].first));
        // The stored threshold must reproduce this exact partition.
        if (!(threshold >= values[i].first && threshold < values[i + 1].first))
          threshold = values[i].first;

        std::uint64_t right_pos = pos - left_pos;
        std::uint64_t right_neg = neg - left_neg;
        double nl = static_cast<double>(left_pos + left_neg);
        double nr = n - nl;
        double decrease = parent_gini - (nl / n) * gini_impurity(left_neg, left_pos) -
                          (nr / n) * gini_impurity(right_neg, right_pos);
        if (decrease > best_decrease + 1e-12) {
          best_decrease = decrease;
          best_feature = f;
          best_threshold = threshold;
          found = true;
        }
      }
    }
    if (!found) return self;

    std::vector<std::uint32_t> left, right;
    left.reserve(samples.size());
    right.reserve(samples.size());
    for (std::uint32_t i : samples) {
      if (data[i].features.at(best_feature) <= best_threshold)
        left.push_back(i);
      else
        right.push_back(i);
    }
    samples.clear();
    samples.shrink_to_fit();

    nodes[static_cast<std::size_t>(self)].feature = best_feature;
    nodes[static_cast<std::size_t>(self)].threshold = best_threshold;
    std::int32_t l = build(left, depth + 1);
    nodes[static_cast<std::size_t>(self)].left = l;
    std::int32_t r = build(right, depth + 1);
    nodes[static_cast<std::size_t>(self)].right = r;
    return self;
  }
};

}  // namespace

ForestModel train_random_forest(const Dataset& data, const ForestConfig& cfg) {
  if (data.positives() == 0 || data.negatives() == 0)
    throw DegenerateLabels("training requires at least one example of each class");
  if (cfg.n_trees < 1) throw std::invalid_argument("n_trees must be at least 1");
  if (cfg.min_samples_split < 2)
    throw std::invalid_argument("min_samples_split must be at least 2");

  const std::uint32_t total_dim = data.total_dim();
  std::uint32_t max_features =
      cfg.max_features > 0
          ? static_cast<std::uint32_t>(cfg.max_features)
          : static_cast<std::uint32_t>(
                std::ceil(std::sqrt(static_cast<double>(total_dim))));
  max_features = std::min(max_features, total_dim);

  ForestModel m;
  m.sparse_dim_ = data.sparse_dim();
  m.dense_dim_ = data.dense_dim();
  m.trees_.reserve(static_cast<std::size_t>(cfg.n_trees));

  const std::size_t n = data.size();
  for (int t = 0; t < cfg.n_trees; ++t) {
    std::uint64_t tree_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(t));
    Rng bootstrap_rng(tree_seed);

    std::vector<std::uint32_t> samples(n);
    std::vector<bool> drawn(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t pick = static_cast<std::uint32_t>(bootstrap_rng.index(n));
      samples[i] = pick;
      drawn[pick] = true;
    }

    DecisionTree tree;
    tree.bootstrap_seed = tree_seed;
    for (std::uint32_t i = 0; i < n; ++i)
      if (!drawn[i]) tree.oob_indices.push_back(i);

    TreeFitter fitter(data, cfg, max_features, mix_seed(tree_seed, 0x7ee));
    fitter.build(samples, 0);
    tree.nodes = std::move(fitter.nodes);
    m.trees_.push_back(std::move(tree));
  }
  return m;
}

}  // namespace geotravel
