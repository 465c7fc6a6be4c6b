#include "geotravel/embed.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "geotravel/binio.hpp"
#include "geotravel/errors.hpp"
#include "geotravel/rng.hpp"

namespace geotravel {

namespace {

constexpr char kMagic[4] = {'B', 'O', 'E', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

/// Cumulative unigram^(3/4) distribution for negative sampling; sampled by
/// binary search over a uniform draw.
struct NegativeTable {
  std::vector<double> cumulative;

  explicit NegativeTable(const std::vector<std::uint64_t>& freqs) {
    cumulative.resize(freqs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
      total += std::pow(static_cast<double>(freqs[i]), 0.75);
      cumulative[i] = total;
    }
    for (double& c : cumulative) c /= total;
    cumulative.back() = 1.0;
  }

  std::uint32_t sample(Rng& rng) const {
    double u = rng.uniform();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return static_cast<std::uint32_t>(it - cumulative.begin());
  }
};

/// Number of (center, context) pairs one document contributes per epoch.
std::uint64_t pairs_in_doc(std::size_t len, int window) {
  std::uint64_t pairs = 0;
  for (std::size_t t = 0; t < len; ++t) {
    std::size_t left = std::min<std::size_t>(t, static_cast<std::size_t>(window));
    std::size_t right = std::min<std::size_t>(len - 1 - t, static_cast<std::size_t>(window));
    pairs += left + right;
  }
  return pairs;
}

struct TrainerShared {
  const EmbedConfig* cfg;
  const NegativeTable* table;
  float* input;
  float* output;
  std::size_t vocab_size;
};

/// Processes a slice of documents for all epochs. In parallel mode several
/// workers run this concurrently over disjoint slices, writing to the shared
/// tables without locks; the result is then non-deterministic.
void train_slice(const TrainerShared& shared,
                 std::span<const std::vector<std::uint32_t>> docs,
                 std::uint64_t worker_seed, std::uint64_t total_updates) {
  const EmbedConfig& cfg = *shared.cfg;
  const int dims = cfg.dims;
  const double lr_floor = static_cast<double>(cfg.initial_lr) * 1e-4;
  Rng rng(worker_seed);
  std::vector<float> center_grad(static_cast<std::size_t>(dims));
  std::uint64_t done = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const std::vector<std::uint32_t>& doc : docs) {
      const std::size_t len = doc.size();
      for (std::size_t t = 0; t < len; ++t) {
        std::size_t lo = t >= static_cast<std::size_t>(cfg.window)
                             ? t - static_cast<std::size_t>(cfg.window)
                             : 0;
        std::size_t hi = std::min(len - 1, t + static_cast<std::size_t>(cfg.window));
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == t) continue;
          double progress = total_updates > 0
                                ? static_cast<double>(done) / static_cast<double>(total_updates)
                                : 0.0;
          double lr = std::max(static_cast<double>(cfg.initial_lr) * (1.0 - progress),
                               lr_floor);
          ++done;

          const std::uint32_t center = doc[t];
          const std::uint32_t positive = doc[c];
          float* v = shared.input + static_cast<std::size_t>(center) * dims;
          std::fill(center_grad.begin(), center_grad.end(), 0.0f);

          for (int n = 0; n <= cfg.negatives; ++n) {
            std::uint32_t target;
            double label;
            if (n == 0) {
              target = positive;
              label = 1.0;
            } else {
              target = shared.table->sample(rng);
              for (int retry = 0; target == positive && retry < 100; ++retry)
                target = shared.table->sample(rng);
              if (target == positive) continue;  // single-term vocabulary
              label = 0.0;
            }
            float* u = shared.output + static_cast<std::size_t>(target) * dims;
            double z = 0.0;
            for (int d = 0; d < dims; ++d) z += static_cast<double>(v[d]) * u[d];
            float g = static_cast<float>((label - sigmoid(z)) * lr);
            for (int d = 0; d < dims; ++d) {
              center_grad[static_cast<std::size_t>(d)] += g * u[d];
              u[d] += g * v[d];
            }
          }
          for (int d = 0; d < dims; ++d) v[d] += center_grad[static_cast<std::size_t>(d)];
        }
      }
    }
  }
}

}  // namespace

EmbeddingModel train_embeddings(std::span<const TokenizedDoc> docs,
                                const EmbedConfig& cfg) {
  if (docs.empty()) throw EmptyCorpus("cannot train embeddings on zero documents");
  if (cfg.dims < 1 || cfg.window < 1 || cfg.epochs < 1 || cfg.negatives < 1)
    throw std::invalid_argument("dims, window, epochs and negatives must be positive");

  // Vocabulary: total frequency with the min-count threshold, indices by
  // descending frequency then lexicographic order.
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const TokenizedDoc& doc : docs)
    for (const std::string& token : doc.tokens) counts[token] += 1;

  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [term, count] : counts)
    if (count >= static_cast<std::uint64_t>(cfg.min_count)) kept.emplace_back(term, count);
  if (kept.empty())
    throw EmptyVocabulary("no term reaches min_count " + std::to_string(cfg.min_count));
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  EmbeddingModel m;
  m.cfg_ = cfg;
  m.terms_.reserve(kept.size());
  m.freqs_.reserve(kept.size());
  for (auto& [term, count] : kept) {
    m.index_[term] = static_cast<std::uint32_t>(m.terms_.size());
    m.terms_.push_back(term);
    m.freqs_.push_back(count);
  }

  const std::size_t v = m.terms_.size();
  const std::size_t dims = static_cast<std::size_t>(cfg.dims);
  m.input_.resize(v * dims);
  m.output_.assign(v * dims, 0.0f);

  Rng init_rng(cfg.seed);
  const double half_spread = 0.5 / static_cast<double>(cfg.dims);
  for (float& w : m.input_)
    w = static_cast<float>(init_rng.uniform(-half_spread, half_spread));

  // Token ids per document, unknown terms dropped before windowing. With
  // subsampling on, frequent words are randomly thinned here.
  std::uint64_t total_tokens = 0;
  for (const auto& [term, count] : kept) total_tokens += count;
  Rng subsample_rng(mix_seed(cfg.seed, 0x5ab5a));
  std::vector<std::vector<std::uint32_t>> encoded(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    encoded[i].reserve(docs[i].tokens.size());
    for (const std::string& token : docs[i].tokens) {
      auto it = m.index_.find(token);
      if (it == m.index_.end()) continue;
      if (cfg.subsample) {
        double freq_ratio = static_cast<double>(m.freqs_[it->second]) /
                            static_cast<double>(total_tokens);
        double keep = std::sqrt(cfg.subsample_threshold / freq_ratio) +
                      cfg.subsample_threshold / freq_ratio;
        if (keep < 1.0 && subsample_rng.uniform() >= keep) continue;
      }
      encoded[i].push_back(it->second);
    }
  }

  NegativeTable table(m.freqs_);
  TrainerShared shared{&cfg, &table, m.input_.data(), m.output_.data(), v};

  int workers = std::max(1, cfg.workers);
  if (workers == 1) {
    std::uint64_t pairs_per_epoch = 0;
    for (const auto& doc : encoded) pairs_per_epoch += pairs_in_doc(doc.size(), cfg.window);
    train_slice(shared, encoded, mix_seed(cfg.seed, 1),
                pairs_per_epoch * static_cast<std::uint64_t>(cfg.epochs));
  } else {
    // Lock-free asynchronous mode: disjoint document slices, shared tables,
    // no mutual exclusion. Statistically equivalent, not reproducible.
    std::size_t per_worker = (encoded.size() + static_cast<std::size_t>(workers) - 1) /
                             static_cast<std::size_t>(workers);
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      std::size_t begin = std::min(encoded.size(), static_cast<std::size_t>(w) * per_worker);
      std::size_t end = std::min(encoded.size(), begin + per_worker);
      if (begin >= end) break;
      std::span<const std::vector<std::uint32_t>> slice(encoded.data() + begin, end - begin);
      std::uint64_t slice_pairs = 0;
      for (const auto& doc : slice) slice_pairs += pairs_in_doc(doc.size(), cfg.window);
      threads.emplace_back(train_slice, shared, slice,
                           mix_seed(cfg.seed, static_cast<std::uint64_t>(w) + 1),
                           slice_pairs * static_cast<std::uint64_t>(cfg.epochs));
    }
    for (std::thread& t : threads) t.join();
  }

  return m;
}

std::optional<std::uint32_t> EmbeddingModel::index_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const float> EmbeddingModel::input_vector(std::uint32_t index) const {
  return {input_.data() + static_cast<std::size_t>(index) * static_cast<std::size_t>(cfg_.dims),
          static_cast<std::size_t>(cfg_.dims)};
}

std::span<const float> EmbeddingModel::output_vector(std::uint32_t index) const {
  return {output_.data() + static_cast<std::size_t>(index) * static_cast<std::size_t>(cfg_.dims),
          static_cast<std::size_t>(cfg_.dims)};
}

DenseVector boe_vector(const TokenizedDoc& doc, const EmbeddingModel& m) {
  const std::size_t dims = static_cast<std::size_t>(m.dims());
  std::vector<double> sum(dims, 0.0);
  std::size_t known = 0;
  for (const std::string& token : doc.tokens) {
    auto idx = m.index_of(token);
    if (!idx) continue;
    std::span<const float> vec = m.input_vector(*idx);
    for (std::size_t d = 0; d < dims; ++d) sum[d] += vec[d];
    ++known;
  }
  DenseVector out(dims, 0.0f);
  if (known > 0)
    for (std::size_t d = 0; d < dims; ++d)
      out[d] = static_cast<float>(sum[d] / static_cast<double>(known));
  return out;
}

std::vector<std::pair<std::string, double>> nearest_neighbors(
    std::string_view term, std::size_t k, const EmbeddingModel& m) {
  auto query = m.index_of(term);
  if (!query) throw TermNotFound("unknown term: " + std::string(term));
  if (k < 1) throw std::invalid_argument("k must be at least 1");

  auto norm = [&](std::span<const float> v) {
    double s = 0.0;
    for (float x : v) s += static_cast<double>(x) * x;
    return std::sqrt(s);
  };
  std::span<const float> qv = m.input_vector(*query);
  double qn = norm(qv);

  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(m.vocab_size() - 1);
  for (std::uint32_t i = 0; i < m.vocab_size(); ++i) {
    if (i == *query) continue;
    std::span<const float> v = m.input_vector(i);
    double dot = 0.0;
    for (std::size_t d = 0; d < v.size(); ++d) dot += static_cast<double>(qv[d]) * v[d];
    double denom = qn * norm(v);
    double cosine = denom > 0.0 ? dot / denom : 0.0;
    scored.emplace_back(m.terms()[i], cosine);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

void EmbeddingModel::save(std::ostream& os) const {
  os.write(kMagic, 4);
  binio::write_u32(os, kFormatVersion);
  binio::write_u32(os, static_cast<std::uint32_t>(cfg_.dims));
  binio::write_u32(os, static_cast<std::uint32_t>(cfg_.window));
  binio::write_u32(os, static_cast<std::uint32_t>(cfg_.epochs));
  binio::write_u32(os, static_cast<std::uint32_t>(cfg_.negatives));
  binio::write_u32(os, static_cast<std::uint32_t>(cfg_.min_count));
  binio::write_u64(os, cfg_.seed);
  binio::write_u64(os, terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    binio::write_string(os, terms_[i]);
    binio::write_u64(os, freqs_[i]);
  }
  for (float w : input_) binio::write_f32(os, w);
  for (float w : output_) binio::write_f32(os, w);
}

EmbeddingModel EmbeddingModel::load(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("not an embedding model file");
  if (binio::read_u32(is) != kFormatVersion)
    throw IoError("unsupported embedding model version");

  EmbeddingModel m;
  m.cfg_.dims = static_cast<int>(binio::read_u32(is));
  m.cfg_.window = static_cast<int>(binio::read_u32(is));
  m.cfg_.epochs = static_cast<int>(binio::read_u32(is));
  m.cfg_.negatives = static_cast<int>(binio::read_u32(is));
  m.cfg_.min_count = static_cast<int>(binio::read_u32(is));
  m.cfg_.seed = binio::read_u64(is);
  std::uint64_t vocab = binio::read_u64(is);
  m.terms_.reserve(vocab);
  m.freqs_.reserve(vocab);
  for (std::uint64_t i = 0; i < vocab; ++i) {
    std::string term = binio::read_string(is);
    m.index_[term] = static_cast<std::uint32_t>(i);
    m.terms_.push_back(std::move(term));
    m.freqs_.push_back(binio::read_u64(is));
  }
  std::size_t n = static_cast<std::size_t>(vocab) * static_cast<std::size_t>(m.cfg_.dims);
  m.input_.resize(n);
  for (float& w : m.input_) w = binio::read_f32(is);
  m.output_.resize(n);
  for (float& w : m.output_) w = binio::read_f32(is);
  return m;
}

double sgns_loss(std::span<const double> center, std::span<const double> positive,
                 const std::vector<std::vector<double>>& negatives) {
  auto dot = [](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  double loss = -std::log(sigmoid(dot(center, positive)));
  for (const auto& neg : negatives) loss -= std::log(sigmoid(-dot(center, neg)));
  return loss;
}

SgnsGradient sgns_gradient(std::span<const double> center,
                           std::span<const double> positive,
                           const std::vector<std::vector<double>>& negatives) {
  auto dot = [](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  const std::size_t dims = center.size();
  SgnsGradient g;
  g.center.assign(dims, 0.0);
  g.positive.assign(dims, 0.0);

  double gp = sigmoid(dot(center, positive)) - 1.0;
  for (std::size_t d = 0; d < dims; ++d) {
    g.center[d] += gp * positive[d];
    g.positive[d] = gp * center[d];
  }
  for (const auto& neg : negatives) {
    double gn = sigmoid(dot(center, neg));
    std::vector<double> grad_neg(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      g.center[d] += gn * neg[d];
      grad_neg[d] = gn * center[d];
    }
    g.negatives.push_back(std::move(grad_neg));
  }
  return g;
}

}  // namespace geotravel
