#include "geotravel/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <unordered_map>
#include <unordered_set>

#include "geotravel/analytics.hpp"
#include "geotravel/corpus.hpp"
#include "geotravel/digest.hpp"
#include "geotravel/errors.hpp"
#include "geotravel/eval.hpp"
#include "geotravel/rng.hpp"
#include "geotravel/vocab.hpp"

namespace geotravel {

namespace fs = std::filesystem;
using nlohmann::json;

void write_tokenized_docs(std::ostream& os, std::span<const TokenizedDoc> docs) {
  for (const TokenizedDoc& doc : docs) {
    json j;
    j["id"] = doc.tweet_id;
    j["tokens"] = doc.tokens;
    os << j.dump() << '\n';
  }
}

std::vector<TokenizedDoc> read_tokenized_docs(std::istream& is) {
  std::vector<TokenizedDoc> docs;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("id") || !j.contains("tokens"))
      throw IoError("invalid tokenized-docs line");
    TokenizedDoc doc;
    doc.tweet_id = j["id"].get<std::int64_t>();
    doc.tokens = j["tokens"].get<std::vector<std::string>>();
    docs.push_back(std::move(doc));
  }
  return docs;
}

SplitIds split_annotations(std::span<const std::pair<std::int64_t, bool>> annotations,
                           double test_fraction, bool balance_train,
                           std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("test_fraction must be in [0, 1)");
  std::vector<std::pair<std::int64_t, bool>> pool(annotations.begin(), annotations.end());
  Rng rng(mix_seed(seed, 0x5917));
  rng.shuffle(pool);

  std::size_t n_test = static_cast<std::size_t>(test_fraction * static_cast<double>(pool.size()));
  SplitIds split;
  split.test.reserve(n_test);
  for (std::size_t i = 0; i < n_test; ++i) split.test.push_back(pool[i].first);

  std::vector<std::int64_t> train_pos, train_neg;
  for (std::size_t i = n_test; i < pool.size(); ++i)
    (pool[i].second ? train_pos : train_neg).push_back(pool[i].first);
  if (balance_train) {
    std::size_t keep = std::min(train_pos.size(), train_neg.size());
    train_pos.resize(keep);
    train_neg.resize(keep);
  }
  split.train.reserve(train_pos.size() + train_neg.size());
  split.train.insert(split.train.end(), train_pos.begin(), train_pos.end());
  split.train.insert(split.train.end(), train_neg.begin(), train_neg.end());
  return split;
}

namespace {

struct ManifestWriter {
  const RunConfig& cfg;
  std::string dir;

  void write(const std::string& stage, const std::vector<std::string>& inputs,
             const std::vector<std::string>& outputs, bool ok,
             const std::string& error = "") const {
    json j;
    j["stage"] = stage;
    j["status"] = ok ? "ok" : "failed";
    if (!error.empty()) j["error"] = error;
    j["seed"] = cfg.seed;
    json in = json::array(), out = json::array();
    for (const std::string& p : inputs)
      in.push_back({{"path", p}, {"digest", fs::exists(p) ? file_digest(p) : "missing"}});
    for (const std::string& p : outputs)
      out.push_back({{"path", p}, {"digest", fs::exists(p) ? file_digest(p) : "missing"}});
    j["inputs"] = std::move(in);
    j["outputs"] = std::move(out);
    std::ofstream f(dir + "/" + stage + ".manifest.json");
    f << j.dump(2) << '\n';
  }
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  return out;
}

}  // namespace

int run_pipeline(const RunConfig& cfg, std::ostream& log) {
  if (cfg.input.empty() || !fs::exists(cfg.input)) {
    log << "error: input file missing: " << cfg.input << "\n";
    return 2;
  }
  if (cfg.annotations.empty() || !fs::exists(cfg.annotations)) {
    log << "error: annotations file missing: " << cfg.annotations << "\n";
    return 2;
  }
  fs::create_directories(cfg.output_dir);
  const std::string dir = cfg.output_dir;
  ManifestWriter manifest{cfg, dir};

  const std::string filtered_path = dir + "/filtered.jsonl";
  const std::string stats_path = dir + "/stats.json";
  const std::string tokens_path = dir + "/tokens.jsonl";
  const std::string split_path = dir + "/split.json";
  const std::string vocab_path = dir + "/vocab.json";
  const std::string embed_path = dir + "/embeddings.boem";
  const std::string model_path = dir + "/model.bin";
  const std::string report_path = dir + "/eval_report.json";
  const std::string roc_path = dir + "/roc.csv";

  std::string stage = "filter";
  try {
    // filter
    {
      std::ifstream in = open_input(cfg.input);
      std::ofstream out = open_output(filtered_path);
      CorpusStats stats = filter_stream(in, out, cfg.city, cfg.language, &log);
      open_output(stats_path) << stats_to_json(stats) << '\n';
      manifest.write("filter", {cfg.input}, {filtered_path, stats_path}, true);
      log << "filter: retained " << stats.lang_and_inside << " of " << stats.total
          << " records\n";
    }

    // preprocess
    stage = "preprocess";
    std::vector<Tweet> tweets;
    std::vector<TokenizedDoc> docs;
    {
      std::ifstream in = open_input(filtered_path);
      tweets = read_tweets(in);
      docs.reserve(tweets.size());
      for (const Tweet& t : tweets)
        docs.push_back({t.id, tokenize(normalize(t.text))});
      std::ofstream out = open_output(tokens_path);
      write_tokenized_docs(out, docs);
      manifest.write("preprocess", {filtered_path}, {tokens_path}, true);
      log << "preprocess: tokenized " << docs.size() << " documents\n";
    }

    // vocab (training-set vocabulary, so the split is derived here first)
    stage = "vocab";
    std::vector<std::pair<std::int64_t, bool>> annotations;
    SplitIds split;
    Vocabulary vocab;
    {
      std::ifstream ann_in = open_input(cfg.annotations);
      annotations = read_annotations(ann_in);
      split = split_annotations(annotations, cfg.test_fraction, cfg.balance_train, cfg.seed);

      std::unordered_set<std::int64_t> train_ids(split.train.begin(), split.train.end());
      std::vector<TokenizedDoc> train_docs;
      for (const TokenizedDoc& d : docs)
        if (train_ids.count(d.tweet_id)) train_docs.push_back(d);
      if (train_docs.empty())
        throw EmptyCorpus("no annotated training documents after the split");
      vocab = Vocabulary::build(train_docs, cfg.vocab_max_terms, cfg.vocab_max_df_ratio);

      json sj;
      sj["train"] = split.train;
      sj["test"] = split.test;
      open_output(split_path) << sj.dump(2) << '\n';
      std::ofstream vout = open_output(vocab_path);
      vocab.save(vout);
      manifest.write("vocab", {tokens_path, cfg.annotations}, {vocab_path, split_path}, true);
      log << "vocab: " << vocab.size() << " terms from " << train_docs.size()
          << " training documents\n";
    }

    // embed (unsupervised, over the whole filtered corpus)
    stage = "embed";
    EmbedConfig embed_cfg = cfg.embed;
    embed_cfg.seed = cfg.seed;
    embed_cfg.workers = cfg.workers;
    EmbeddingModel embeddings = train_embeddings(docs, embed_cfg);
    {
      std::ofstream out = open_output(embed_path);
      embeddings.save(out);
      manifest.write("embed", {tokens_path}, {embed_path}, true);
      log << "embed: " << embeddings.vocab_size() << " terms x " << embeddings.dims()
          << " dims\n";
    }

    // train
    stage = "train";
    FeatureMode mode = parse_feature_mode(cfg.features);
    std::unordered_map<std::int64_t, const TokenizedDoc*> doc_by_id;
    for (const TokenizedDoc& d : docs) doc_by_id[d.tweet_id] = &d;
    const Vocabulary* vocab_ptr = mode == FeatureMode::boe ? nullptr : &vocab;
    const EmbeddingModel* embed_ptr = mode == FeatureMode::bow ? nullptr : &embeddings;
    std::uint32_t sparse_dim =
        vocab_ptr ? static_cast<std::uint32_t>(vocab.size()) : 0;
    std::uint32_t dense_dim =
        embed_ptr ? static_cast<std::uint32_t>(embeddings.dims()) : 0;

    auto build_dataset = [&](const std::vector<std::int64_t>& ids) {
      std::unordered_map<std::int64_t, bool> label_by_id(annotations.begin(),
                                                         annotations.end());
      Dataset data(sparse_dim, dense_dim);
      for (std::int64_t id : ids) {
        auto it = doc_by_id.find(id);
        if (it == doc_by_id.end())
          throw AnnotationOrphan("annotated id " + std::to_string(id) +
                                 " is not in the filtered corpus");
        data.add({id, label_by_id.at(id), featurize(*it->second, mode, vocab_ptr, embed_ptr)});
      }
      return data;
    };

    Dataset train_set = build_dataset(split.train);
    Dataset test_set = build_dataset(split.test);
    check_disjoint(train_set, test_set);

    AnyModel model = [&]() -> AnyModel {
      if (cfg.classifier == "rf") {
        ForestConfig fc;
        fc.n_trees = cfg.rf_trees;
        fc.max_features = cfg.rf_max_features;
        fc.max_depth = cfg.rf_max_depth;
        fc.seed = cfg.seed;
        return train_random_forest(train_set, fc);
      }
      LinearConfig lc;
      lc.loss = cfg.classifier == "logreg" ? LossKind::logistic : LossKind::hinge;
      lc.l2 = cfg.linear_l2;
      lc.lr = cfg.linear_lr;
      lc.epochs = cfg.linear_epochs;
      lc.standardize = cfg.standardize;
      lc.seed = cfg.seed;
      return train_linear(train_set, lc);
    }();
    {
      std::ofstream out = open_output(model_path);
      std::visit([&](const auto& m) { m.save(out); }, model);
      manifest.write("train", {tokens_path, vocab_path, embed_path, split_path},
                     {model_path}, true);
      log << "train: " << cfg.classifier << " on " << train_set.size()
          << " examples (" << train_set.positives() << " positive)\n";
    }

    // eval
    stage = "eval";
    {
      std::vector<double> scores;
      std::vector<bool> preds, golds;
      for (const LabeledExample& ex : test_set.examples()) {
        scores.push_back(predict_score(model, ex.features));
        preds.push_back(predict_label(model, ex.features));
        golds.push_back(ex.travel);
      }
      EvalReport report = evaluate(scores, preds, golds);
      open_output(report_path) << report_to_json(report) << '\n';
      std::ofstream rout = open_output(roc_path);
      roc_to_csv(rout, report.roc_points);
      manifest.write("eval", {model_path, split_path}, {report_path, roc_path}, true);
      log << "eval: precision " << report.prf.precision << " recall " << report.prf.recall
          << " f1 " << report.prf.f1 << " auc " << report.auc << "\n";
    }

    // analyze
    stage = "analyze";
    {
      std::vector<Tweet> positives;
      std::ofstream pred_out = open_output(dir + "/predictions.jsonl");
      for (std::size_t i = 0; i < tweets.size(); ++i) {
        bool label = predict_label(model, featurize(docs[i], mode, vocab_ptr, embed_ptr));
        json pj;
        pj["id"] = tweets[i].id;
        pj["travel"] = label;
        pred_out << pj.dump() << '\n';
        if (label) positives.push_back(tweets[i]);
      }

      open_output(dir + "/dow_all.json")
          << dow_to_json(day_of_week_histogram(tweets, cfg.utc_offset_minutes)) << '\n';
      open_output(dir + "/dow_positive.json")
          << dow_to_json(day_of_week_histogram(positives, cfg.utc_offset_minutes)) << '\n';
      {
        std::ofstream f = open_output(dir + "/dow_positive.csv");
        dow_to_csv(f, day_of_week_histogram(positives, cfg.utc_offset_minutes));
      }
      open_output(dir + "/users.json")
          << users_to_json(tweets_per_user_distribution(tweets)) << '\n';

      HeatmapGrid grid = heatmap_grid(positives, cfg.city, cfg.heatmap_rows, cfg.heatmap_cols);
      {
        std::ofstream f = open_output(dir + "/heatmap_positive.csv");
        heatmap_to_csv(f, grid);
      }
      {
        std::ofstream f = open_output(dir + "/heatmap_positive.geojson");
        heatmap_to_geojson(f, grid);
      }
      manifest.write("analyze", {filtered_path, model_path},
                     {dir + "/predictions.jsonl", dir + "/dow_all.json",
                      dir + "/dow_positive.json", dir + "/dow_positive.csv",
                      dir + "/users.json", dir + "/heatmap_positive.csv",
                      dir + "/heatmap_positive.geojson"},
                     true);
      log << "analyze: " << positives.size() << " predicted travel-related tweets\n";
    }
  } catch (const std::exception& e) {
    manifest.write(stage, {}, {}, false, e.what());
    log << "error: stage " << stage << " failed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace geotravel
