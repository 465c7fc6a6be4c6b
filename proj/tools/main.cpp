// Command-line front end: filter, stats, preprocess, vocab, embed, train,
// predict, eval, bootstrap, analyze and pipeline subcommands over the
// library, with file-based handoff between stages.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "geotravel/analytics.hpp"
#include "geotravel/classify.hpp"
#include "geotravel/config.hpp"
#include "geotravel/corpus.hpp"
#include "geotravel/errors.hpp"
#include "geotravel/eval.hpp"
#include "geotravel/pipeline.hpp"
#include "geotravel/textprep.hpp"
#include "geotravel/vocab.hpp"

namespace fs = std::filesystem;
using namespace geotravel;

namespace {

std::ifstream open_or_die(const std::string& path) {
  if (!fs::exists(path)) throw IoError("missing file: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  return in;
}

std::ofstream make_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create file: " + path);
  return out;
}

std::vector<Tweet> load_tweets(const std::string& path) {
  std::ifstream in = open_or_die(path);
  return read_tweets(in, nullptr, &std::cerr);
}

std::vector<TokenizedDoc> load_tokens(const std::string& path) {
  std::ifstream in = open_or_die(path);
  return read_tokenized_docs(in);
}

Vocabulary load_vocab(const std::string& path) {
  std::ifstream in = open_or_die(path);
  return Vocabulary::load(in);
}

EmbeddingModel load_embeddings(const std::string& path) {
  std::ifstream in = open_or_die(path);
  return EmbeddingModel::load(in);
}

AnyModel load_model(const std::string& path) {
  std::ifstream in = open_or_die(path);
  return ModelFile::load(in);
}

struct CityFlags {
  double sw_lat = -90, sw_lon = -180, ne_lat = 90, ne_lon = 180;

  void attach(CLI::App* cmd) {
    cmd->add_option("--sw-lat", sw_lat, "City box south-west latitude");
    cmd->add_option("--sw-lon", sw_lon, "City box south-west longitude");
    cmd->add_option("--ne-lat", ne_lat, "City box north-east latitude");
    cmd->add_option("--ne-lon", ne_lon, "City box north-east longitude");
  }
  GeoBox box() const {
    return GeoBox(GeoPoint(sw_lat, sw_lon), GeoPoint(ne_lat, ne_lon));
  }
};

/// Feature assembly shared by train, predict, eval and analyze.
struct FeatureStack {
  FeatureMode mode = FeatureMode::bow_boe;
  std::optional<Vocabulary> vocab;
  std::optional<EmbeddingModel> embeddings;

  void load(const std::string& features, const std::string& vocab_path,
            const std::string& embed_path) {
    mode = parse_feature_mode(features);
    if (mode != FeatureMode::boe) {
      if (vocab_path.empty()) throw ConfigError("feature mode needs --vocab");
      vocab = load_vocab(vocab_path);
    }
    if (mode != FeatureMode::bow) {
      if (embed_path.empty()) throw ConfigError("feature mode needs --embeddings");
      embeddings = load_embeddings(embed_path);
    }
  }
  /// Infers the mode from a loaded model's schema instead of a flag.
  void load_for_model(const AnyModel& model, const std::string& vocab_path,
                      const std::string& embed_path) {
    bool needs_vocab = model_sparse_dim(model) > 0;
    bool needs_embed = model_dense_dim(model) > 0;
    mode = needs_vocab ? (needs_embed ? FeatureMode::bow_boe : FeatureMode::bow)
                       : FeatureMode::boe;
    if (needs_vocab) {
      if (vocab_path.empty()) throw ConfigError("this model needs --vocab");
      vocab = load_vocab(vocab_path);
      if (vocab->size() != model_sparse_dim(model))
        throw SchemaMismatch("vocabulary size does not match the model schema");
    }
    if (needs_embed) {
      if (embed_path.empty()) throw ConfigError("this model needs --embeddings");
      embeddings = load_embeddings(embed_path);
      if (static_cast<std::uint32_t>(embeddings->dims()) != model_dense_dim(model))
        throw SchemaMismatch("embedding dims do not match the model schema");
    }
  }

  FeatureVector features(const TokenizedDoc& doc) const {
    return featurize(doc, mode, vocab ? &*vocab : nullptr,
                     embeddings ? &*embeddings : nullptr);
  }
  std::uint32_t sparse_dim() const {
    return vocab ? static_cast<std::uint32_t>(vocab->size()) : 0;
  }
  std::uint32_t dense_dim() const {
    return embeddings ? static_cast<std::uint32_t>(embeddings->dims()) : 0;
  }
};

TokenizedDoc preprocess_tweet(const Tweet& t) {
  return {t.id, tokenize(normalize(t.text))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Travel-related tweet pipeline: geo filtering, text features, "
               "classification and spatio-temporal analytics"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  int workers = 1;
  std::string config_path;
  app.add_option("--seed", seed, "Seed for every stochastic stage")->capture_default_str();
  app.add_option("--workers", workers, "Worker threads (1 = deterministic)")
      ->capture_default_str();
  app.add_option("--config", config_path, "Run-configuration file");

  // filter
  auto* filter_cmd = app.add_subcommand("filter", "Keep records matching language and city box");
  std::string in_path, out_path, stats_path, lang = "pt";
  CityFlags filter_city;
  filter_cmd->add_option("--input", in_path, "Tweets JSON-lines")->required();
  filter_cmd->add_option("--output", out_path, "Retained records (unmodified lines)")->required();
  filter_cmd->add_option("--stats", stats_path, "Write composition stats JSON here");
  filter_cmd->add_option("--lang", lang, "Language code to keep")->capture_default_str();
  filter_city.attach(filter_cmd);

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Composition stats without writing records");
  std::string stats_in, stats_lang = "pt";
  CityFlags stats_city;
  stats_cmd->add_option("--input", stats_in, "Tweets JSON-lines")->required();
  stats_cmd->add_option("--lang", stats_lang, "Language code")->capture_default_str();
  stats_city.attach(stats_cmd);

  // preprocess
  auto* prep_cmd = app.add_subcommand("preprocess", "Normalize and tokenize tweet text");
  std::string prep_in, prep_out;
  prep_cmd->add_option("--input", prep_in, "Tweets JSON-lines")->required();
  prep_cmd->add_option("--output", prep_out, "Tokenized docs JSON-lines")->required();

  // vocab
  auto* vocab_cmd = app.add_subcommand("vocab", "Build the capped unigram vocabulary");
  std::string vocab_in, vocab_out;
  std::size_t max_terms = 3000;
  double max_df = 0.6;
  vocab_cmd->add_option("--input", vocab_in, "Tokenized docs JSON-lines")->required();
  vocab_cmd->add_option("--output", vocab_out, "Vocabulary JSON")->required();
  vocab_cmd->add_option("--max-terms", max_terms, "Vocabulary cap")->capture_default_str();
  vocab_cmd->add_option("--max-df", max_df, "Document-frequency cap")->capture_default_str();

  // embed train / neighbors
  auto* embed_cmd = app.add_subcommand("embed", "Word embedding training and inspection");
  embed_cmd->require_subcommand(1);
  auto* embed_train = embed_cmd->add_subcommand("train", "Train skip-gram embeddings");
  std::string et_in, et_out;
  EmbedConfig embed_cfg;
  bool deterministic = false;
  embed_train->add_option("--input", et_in, "Tokenized docs JSON-lines")->required();
  embed_train->add_option("--output", et_out, "Model file")->required();
  embed_train->add_option("--dims", embed_cfg.dims)->capture_default_str();
  embed_train->add_option("--window", embed_cfg.window)->capture_default_str();
  embed_train->add_option("--epochs", embed_cfg.epochs)->capture_default_str();
  embed_train->add_option("--negatives", embed_cfg.negatives)->capture_default_str();
  embed_train->add_option("--min-count", embed_cfg.min_count)->capture_default_str();
  embed_train->add_option("--lr", embed_cfg.initial_lr)->capture_default_str();
  embed_train->add_flag("--subsample", embed_cfg.subsample, "Subsample frequent words");
  embed_train->add_flag("--deterministic", deterministic, "Force a single worker");

  auto* embed_nn = embed_cmd->add_subcommand("neighbors", "Nearest terms by cosine");
  std::string nn_model, nn_term;
  std::size_t nn_k = 10;
  embed_nn->add_option("--model", nn_model, "Embedding model file")->required();
  embed_nn->add_option("--term", nn_term, "Query term")->required();
  embed_nn->add_option("-k,--top", nn_k, "Neighbour count")->capture_default_str();

  // train
  auto* train_cmd = app.add_subcommand("train", "Train a classifier on annotated docs");
  std::string tr_tokens, tr_annotations, tr_vocab, tr_embed, tr_out;
  std::string tr_model = "svm", tr_features = "bow+boe";
  LinearConfig linear_cfg;
  ForestConfig forest_cfg;
  train_cmd->add_option("--input", tr_tokens, "Tokenized docs JSON-lines")->required();
  train_cmd->add_option("--annotations", tr_annotations, "CSV tweet_id,label")->required();
  train_cmd->add_option("--model", tr_model, "svm | logreg | rf")->capture_default_str();
  train_cmd->add_option("--features", tr_features, "bow | boe | bow+boe")->capture_default_str();
  train_cmd->add_option("--vocab", tr_vocab, "Vocabulary JSON (bow features)");
  train_cmd->add_option("--embeddings", tr_embed, "Embedding model (boe features)");
  train_cmd->add_option("--output", tr_out, "Classifier model file")->required();
  train_cmd->add_flag("--standardize", linear_cfg.standardize,
                      "Scale features by inverse std during linear training");
  train_cmd->add_option("--l2", linear_cfg.l2)->capture_default_str();
  train_cmd->add_option("--lr", linear_cfg.lr)->capture_default_str();
  train_cmd->add_option("--epochs", linear_cfg.epochs)->capture_default_str();
  train_cmd->add_option("--trees", forest_cfg.n_trees)->capture_default_str();
  train_cmd->add_option("--max-features", forest_cfg.max_features,
                        "Per-split feature sample (0 = sqrt of total)")->capture_default_str();
  train_cmd->add_option("--max-depth", forest_cfg.max_depth)->capture_default_str();

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Score tweets with a trained model");
  std::string pr_model, pr_in, pr_out, pr_vocab, pr_embed;
  predict_cmd->add_option("--model-file", pr_model)->required();
  predict_cmd->add_option("--input", pr_in, "Tweets JSON-lines")->required();
  predict_cmd->add_option("--output", pr_out, "Predictions JSON-lines")->required();
  predict_cmd->add_option("--vocab", pr_vocab);
  predict_cmd->add_option("--embeddings", pr_embed);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Metrics for a model on an annotated test set");
  std::string ev_model, ev_test, ev_annotations, ev_vocab, ev_embed, ev_report, ev_roc;
  eval_cmd->add_option("--model-file", ev_model)->required();
  eval_cmd->add_option("--test", ev_test, "Test tweets JSON-lines")->required();
  eval_cmd->add_option("--annotations", ev_annotations, "CSV tweet_id,label")->required();
  eval_cmd->add_option("--vocab", ev_vocab);
  eval_cmd->add_option("--embeddings", ev_embed);
  eval_cmd->add_option("--report", ev_report, "Report JSON path");
  eval_cmd->add_option("--roc", ev_roc, "ROC points CSV path");

  // bootstrap
  auto* boot_cmd = app.add_subcommand("bootstrap", "Keyword-match candidate positives");
  std::string bs_in, bs_out, bs_terms_file;
  boot_cmd->add_option("--input", bs_in, "Tweets JSON-lines")->required();
  boot_cmd->add_option("--output", bs_out, "Matched tweets JSON-lines")->required();
  boot_cmd->add_option("--terms-file", bs_terms_file, "One lowercase term per line");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Exploratory and result analytics");
  std::string an_mode, an_in, an_out, an_model, an_vocab, an_embed;
  bool positives_only = false;
  int utc_offset = -180;
  std::uint32_t grid_rows = 200, grid_cols = 200;
  std::size_t top_k = 20;
  CityFlags an_city;
  analyze_cmd->add_option("mode", an_mode, "dow | users | hashtags | heatmap")->required();
  analyze_cmd->add_option("--input", an_in, "Tweets JSON-lines")->required();
  analyze_cmd->add_option("--output", an_out, "Output file (stdout when omitted)");
  analyze_cmd->add_flag("--positives-only", positives_only,
                        "Restrict to tweets the model classifies as travel-related");
  analyze_cmd->add_option("--model-file", an_model);
  analyze_cmd->add_option("--vocab", an_vocab);
  analyze_cmd->add_option("--embeddings", an_embed);
  analyze_cmd->add_option("--utc-offset", utc_offset, "Minutes added to UTC")
      ->capture_default_str();
  analyze_cmd->add_option("--rows", grid_rows)->capture_default_str();
  analyze_cmd->add_option("--cols", grid_cols)->capture_default_str();
  analyze_cmd->add_option("-k,--top", top_k, "Hashtag count")->capture_default_str();
  an_city.attach(analyze_cmd);

  // pipeline
  auto* pipe_cmd = app.add_subcommand("pipeline", "Run every stage from one configuration");
  std::string pipe_input, pipe_output_dir, pipe_annotations;
  pipe_cmd->add_option("--input", pipe_input, "Tweets JSON-lines (overrides config)");
  pipe_cmd->add_option("--output-dir", pipe_output_dir, "Artifact directory (overrides config)");
  pipe_cmd->add_option("--annotations", pipe_annotations, "CSV (overrides config)");

  // Global flags remain usable after the subcommand name.
  for (CLI::App* sub : {filter_cmd, stats_cmd, prep_cmd, vocab_cmd, embed_cmd,
                        embed_train, embed_nn, train_cmd, predict_cmd, eval_cmd,
                        boot_cmd, analyze_cmd, pipe_cmd})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*filter_cmd) {
      std::ifstream in = open_or_die(in_path);
      std::ofstream out = make_output(out_path);
      CorpusStats stats = filter_stream(in, out, filter_city.box(), lang, &std::cerr);
      std::string json = stats_to_json(stats);
      if (!stats_path.empty()) make_output(stats_path) << json << '\n';
      std::cout << json << '\n';
    } else if (*stats_cmd) {
      std::ifstream in = open_or_die(stats_in);
      CorpusStats stats = stats_stream(in, stats_city.box(), stats_lang, &std::cerr);
      std::cout << stats_to_json(stats) << '\n';
    } else if (*prep_cmd) {
      std::vector<Tweet> tweets = load_tweets(prep_in);
      std::vector<TokenizedDoc> docs;
      docs.reserve(tweets.size());
      for (const Tweet& t : tweets) docs.push_back(preprocess_tweet(t));
      std::ofstream out = make_output(prep_out);
      write_tokenized_docs(out, docs);
    } else if (*vocab_cmd) {
      std::vector<TokenizedDoc> docs = load_tokens(vocab_in);
      Vocabulary v = Vocabulary::build(docs, max_terms, max_df);
      std::ofstream out = make_output(vocab_out);
      v.save(out);
      std::cerr << "vocabulary: " << v.size() << " terms over " << v.n_docs()
                << " documents\n";
    } else if (*embed_train) {
      embed_cfg.seed = seed;
      embed_cfg.workers = deterministic ? 1 : workers;
      std::vector<TokenizedDoc> docs = load_tokens(et_in);
      EmbeddingModel m = train_embeddings(docs, embed_cfg);
      std::ofstream out = make_output(et_out);
      m.save(out);
      std::cerr << "embeddings: " << m.vocab_size() << " terms x " << m.dims()
                << " dims\n";
    } else if (*embed_nn) {
      EmbeddingModel m = load_embeddings(nn_model);
      for (const auto& [term, cos] : nearest_neighbors(nn_term, nn_k, m))
        std::cout << term << '\t' << cos << '\n';
    } else if (*train_cmd) {
      FeatureStack stack;
      stack.load(tr_features, tr_vocab, tr_embed);
      std::vector<TokenizedDoc> docs = load_tokens(tr_tokens);
      std::ifstream ann_in = open_or_die(tr_annotations);
      auto annotations = read_annotations(ann_in);

      std::vector<FeaturizedTweet> candidates;
      candidates.reserve(docs.size());
      for (const TokenizedDoc& doc : docs)
        candidates.push_back({doc.tweet_id, stack.features(doc)});
      Dataset data = assemble_gold(candidates, annotations, stack.sparse_dim(),
                                   stack.dense_dim());

      std::ofstream out = make_output(tr_out);
      if (tr_model == "rf") {
        forest_cfg.seed = seed;
        train_random_forest(data, forest_cfg).save(out);
      } else if (tr_model == "svm" || tr_model == "logreg") {
        linear_cfg.loss = tr_model == "svm" ? LossKind::hinge : LossKind::logistic;
        linear_cfg.seed = seed;
        train_linear(data, linear_cfg).save(out);
      } else {
        throw ConfigError("unknown --model: " + tr_model);
      }
      std::cerr << "trained " << tr_model << " (" << tr_features << ") on "
                << data.size() << " examples\n";
    } else if (*predict_cmd) {
      AnyModel model = load_model(pr_model);
      FeatureStack stack;
      stack.load_for_model(model, pr_vocab, pr_embed);
      std::vector<Tweet> tweets = load_tweets(pr_in);
      std::ofstream out = make_output(pr_out);
      for (const Tweet& t : tweets) {
        FeatureVector x = stack.features(preprocess_tweet(t));
        nlohmann::json j;
        j["id"] = t.id;
        j["score"] = predict_score(model, x);
        j["travel"] = predict_label(model, x);
        out << j.dump() << '\n';
      }
    } else if (*eval_cmd) {
      AnyModel model = load_model(ev_model);
      FeatureStack stack;
      stack.load_for_model(model, ev_vocab, ev_embed);
      std::vector<Tweet> tweets = load_tweets(ev_test);
      std::ifstream ann_in = open_or_die(ev_annotations);
      std::unordered_map<std::int64_t, bool> gold;
      for (const auto& [id, label] : read_annotations(ann_in)) gold[id] = label;

      std::vector<double> scores;
      std::vector<bool> preds, golds;
      for (const Tweet& t : tweets) {
        auto it = gold.find(t.id);
        if (it == gold.end()) continue;
        FeatureVector x = stack.features(preprocess_tweet(t));
        scores.push_back(predict_score(model, x));
        preds.push_back(predict_label(model, x));
        golds.push_back(it->second);
      }
      EvalReport report = evaluate(scores, preds, golds);
      std::string json = report_to_json(report);
      if (!ev_report.empty()) make_output(ev_report) << json << '\n';
      if (!ev_roc.empty()) {
        std::ofstream roc_out = make_output(ev_roc);
        roc_to_csv(roc_out, report.roc_points);
      }
      std::cout << json << '\n';
    } else if (*boot_cmd) {
      TermQuery query = TermQuery::defaults();
      if (!bs_terms_file.empty()) {
        query.terms.clear();
        std::ifstream terms_in = open_or_die(bs_terms_file);
        std::string term;
        while (std::getline(terms_in, term))
          if (!term.empty()) query.terms.push_back(lowercase_utf8(term));
      }
      std::ifstream in = open_or_die(bs_in);
      std::ofstream out = make_output(bs_out);
      std::string line;
      std::uint64_t matched = 0;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
          Tweet t = parse_tweet_record(line);
          if (matches_query(normalize(t.text), query)) {
            out << line << '\n';
            ++matched;
          }
        } catch (const Error&) {
          // skip malformed lines, matching the filter stage
        }
      }
      std::cerr << "bootstrap: " << matched << " candidate records\n";
    } else if (*analyze_cmd) {
      std::vector<Tweet> tweets = load_tweets(an_in);
      if (positives_only) {
        if (an_model.empty()) throw ConfigError("--positives-only needs --model-file");
        AnyModel model = load_model(an_model);
        FeatureStack stack;
        stack.load_for_model(model, an_vocab, an_embed);
        std::vector<Tweet> kept;
        for (Tweet& t : tweets)
          if (predict_label(model, stack.features(preprocess_tweet(t))))
            kept.push_back(std::move(t));
        tweets = std::move(kept);
      }

      std::ofstream file_out;
      std::ostream* out = &std::cout;
      if (!an_out.empty()) {
        file_out = make_output(an_out);
        out = &file_out;
      }

      if (an_mode == "dow") {
        auto counts = day_of_week_histogram(tweets, utc_offset);
        if (!an_out.empty() && an_out.ends_with(".csv"))
          dow_to_csv(*out, counts);
        else
          *out << dow_to_json(counts) << '\n';
      } else if (an_mode == "users") {
        UserActivitySummary s = tweets_per_user_distribution(tweets);
        if (!an_out.empty() && an_out.ends_with(".csv"))
          users_to_csv(*out, s);
        else
          *out << users_to_json(s) << '\n';
      } else if (an_mode == "hashtags") {
        for (const auto& [tag, count] : top_hashtags(tweets, top_k))
          *out << tag << ',' << count << '\n';
      } else if (an_mode == "heatmap") {
        HeatmapGrid grid = heatmap_grid(tweets, an_city.box(), grid_rows, grid_cols);
        if (!an_out.empty() && an_out.ends_with(".geojson"))
          heatmap_to_geojson(*out, grid);
        else
          heatmap_to_csv(*out, grid);
      } else {
        throw ConfigError("unknown analyze mode: " + an_mode);
      }
    } else if (*pipe_cmd) {
      RunConfig cfg;
      if (!config_path.empty()) {
        std::ifstream cfg_in = open_or_die(config_path);
        load_config(cfg_in, cfg);
      }
      if (!pipe_input.empty()) cfg.input = pipe_input;
      if (!pipe_output_dir.empty()) cfg.output_dir = pipe_output_dir;
      if (!pipe_annotations.empty()) cfg.annotations = pipe_annotations;
      if (app.count("--seed")) cfg.seed = seed;
      if (app.count("--workers")) cfg.workers = workers;
      return run_pipeline(cfg, std::cout);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
