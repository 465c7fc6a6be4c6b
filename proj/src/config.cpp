#include "geotravel/config.hpp"

#include <algorithm>
#include <stdexcept>

#include "geotravel/errors.hpp"

namespace geotravel {

namespace {

std::string trim_copy(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
  }
}

std::int64_t to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    std::int64_t v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
  std::int64_t v = to_int(key, value);
  if (v < 0) throw ConfigError("config key '" + key + "': must be non-negative");
  return static_cast<std::uint64_t>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + value + "'");
}

}  // namespace

void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value = unquote(raw);
  if (key == "input") cfg.input = value;
  else if (key == "output_dir") cfg.output_dir = value;
  else if (key == "annotations") cfg.annotations = value;
  else if (key == "language") cfg.language = value;
  else if (key == "city.sw_lat") cfg.city.south_west.lat = to_double(key, value);
  else if (key == "city.sw_lon") cfg.city.south_west.lon = to_double(key, value);
  else if (key == "city.ne_lat") cfg.city.north_east.lat = to_double(key, value);
  else if (key == "city.ne_lon") cfg.city.north_east.lon = to_double(key, value);
  else if (key == "vocab.max_terms") cfg.vocab_max_terms = static_cast<std::size_t>(to_uint(key, value));
  else if (key == "vocab.max_df_ratio") cfg.vocab_max_df_ratio = to_double(key, value);
  else if (key == "embed.dims") cfg.embed.dims = static_cast<int>(to_int(key, value));
  else if (key == "embed.window") cfg.embed.window = static_cast<int>(to_int(key, value));
  else if (key == "embed.epochs") cfg.embed.epochs = static_cast<int>(to_int(key, value));
  else if (key == "embed.negatives") cfg.embed.negatives = static_cast<int>(to_int(key, value));
  else if (key == "embed.min_count") cfg.embed.min_count = static_cast<int>(to_int(key, value));
  else if (key == "embed.lr") cfg.embed.initial_lr = static_cast<float>(to_double(key, value));
  else if (key == "embed.subsample") cfg.embed.subsample = to_bool(key, value);
  else if (key == "classifier.kind") {
    if (value != "svm" && value != "logreg" && value != "rf")
      throw ConfigError("classifier.kind must be svm, logreg or rf");
    cfg.classifier = value;
  } else if (key == "classifier.features") {
    if (value != "bow" && value != "boe" && value != "bow+boe")
      throw ConfigError("classifier.features must be bow, boe or bow+boe");
    cfg.features = value;
  } else if (key == "classifier.standardize") cfg.standardize = to_bool(key, value);
  else if (key == "classifier.l2") cfg.linear_l2 = to_double(key, value);
  else if (key == "classifier.lr") cfg.linear_lr = to_double(key, value);
  else if (key == "classifier.epochs") cfg.linear_epochs = static_cast<int>(to_int(key, value));
  else if (key == "rf.trees") cfg.rf_trees = static_cast<int>(to_int(key, value));
  else if (key == "rf.max_features") cfg.rf_max_features = static_cast<int>(to_int(key, value));
  else if (key == "rf.max_depth") cfg.rf_max_depth = static_cast<int>(to_int(key, value));
  else if (key == "split.test_fraction") cfg.test_fraction = to_double(key, value);
  else if (key == "split.balance_train") cfg.balance_train = to_bool(key, value);
  else if (key == "analytics.utc_offset_minutes") cfg.utc_offset_minutes = static_cast<int>(to_int(key, value));
  else if (key == "heatmap.rows") cfg.heatmap_rows = static_cast<std::uint32_t>(to_uint(key, value));
  else if (key == "heatmap.cols") cfg.heatmap_cols = static_cast<std::uint32_t>(to_uint(key, value));
  else if (key == "seed") cfg.seed = to_uint(key, value);
  else if (key == "workers") cfg.workers = static_cast<int>(to_int(key, value));
  else throw ConfigError("unknown config key: " + key);
}

void load_config(std::istream& is, RunConfig& cfg) {
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    // Strip comments; quoted values never contain '#'.
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::size_t semi = line.find(';');
    if (semi != std::string::npos) line.resize(semi);
    line = trim_copy(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section");
      section = trim_copy(line.substr(1, line.size() - 2));
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim_copy(line.substr(0, eq));
    std::string value = trim_copy(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    apply_config_value(cfg, key, value);
  }
}

}  // namespace geotravel
