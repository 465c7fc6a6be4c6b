#pragma once

#include <cstdint>
#include <istream>
#include <string>

#include "geotravel/embed.hpp"
#include "geotravel/geo.hpp"

namespace geotravel {

/// Full run configuration for the pipeline. Every field has a usable
/// default; file values overwrite defaults and command-line flags overwrite
/// file values.
struct RunConfig {
  // IO.
  std::string input;
  std::string output_dir = "out";
  std::string annotations;

  // Corpus filter.
  GeoBox city{GeoPoint(-90.0, -180.0), GeoPoint(90.0, 180.0)};
  std::string language = "pt";

  // Vocabulary caps.
  std::size_t vocab_max_terms = 3000;
  double vocab_max_df_ratio = 0.6;

  // Embeddings.
  EmbedConfig embed;

  // Classifier.
  std::string classifier = "svm";  // svm | logreg | rf
  std::string features = "bow+boe";
  double linear_l2 = 1e-4;
  double linear_lr = 0.1;
  int linear_epochs = 50;
  bool standardize = false;
  int rf_trees = 100;
  int rf_max_features = 0;
  int rf_max_depth = 0;

  // Train/test split of the annotated pool.
  double test_fraction = 0.2;
  bool balance_train = true;

  // Analytics.
  int utc_offset_minutes = -180;
  std::uint32_t heatmap_rows = 200;
  std::uint32_t heatmap_cols = 200;

  std::uint64_t seed = 1;
  int workers = 1;
};

/// Parses an INI/TOML-style key=value file into `cfg`. Sections prefix their
/// keys ("[embed]" + "dims = 100" is the key "embed.dims"). Unknown keys are
/// rejected with ConfigError.
void load_config(std::istream& is, RunConfig& cfg);

/// Applies one dotted key/value pair. Throws ConfigError for unknown keys or
/// unparsable values.
void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace geotravel
