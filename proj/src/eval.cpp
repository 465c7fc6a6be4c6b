#include "geotravel/eval.hpp"

#include <algorithm>
#include <json.hpp>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "geotravel/errors.hpp"
#include "geotravel/textprep.hpp"

namespace geotravel {

using nlohmann::json;

TermQuery TermQuery::defaults() {
  return {{"bicicleta", "moto", "onibus", "ônibus", "carro", "taxi", "táxi",
           "metro", "metrô", "trem", "caminhar"}};
}

bool matches_query(std::string_view normalized_text, const TermQuery& q) {
  // space+term+space over the text padded with one space on each side, so
  // occurrences at the boundaries count.
  std::string padded;
  padded.reserve(normalized_text.size() + 2);
  padded.push_back(' ');
  padded.append(normalized_text);
  padded.push_back(' ');
  for (const std::string& term : q.terms)
    if (padded.find(" " + term + " ") != std::string::npos) return true;
  return false;
}

std::vector<Tweet> bootstrap_candidates(std::span<const Tweet> corpus,
                                        const TermQuery& q) {
  if (q.terms.empty()) throw std::invalid_argument("query terms must be non-empty");
  std::vector<Tweet> matched;
  for (const Tweet& t : corpus)
    if (matches_query(normalize(t.text), q)) matched.push_back(t);
  return matched;
}

Confusion confusion(const std::vector<bool>& preds, const std::vector<bool>& golds) {
  if (preds.size() != golds.size() || preds.empty())
    throw LengthMismatch("prediction and gold sequences must have equal nonzero length");
  Confusion c;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (golds[i])
      preds[i] ? ++c.tp : ++c.fn;
    else
      preds[i] ? ++c.fp : ++c.tn;
  }
  return c;
}

Prf prf1(std::uint64_t tp, std::uint64_t fp, std::uint64_t /*tn*/, std::uint64_t fn) {
  Prf r;
  if (tp + fp > 0) {
    r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    r.precision_defined = true;
  }
  if (tp + fn > 0) {
    r.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    r.recall_defined = true;
  }
  if (r.precision + r.recall > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    r.f1_defined = true;
  }
  return r;
}

Prf prf1(const Confusion& c) { return prf1(c.tp, c.fp, c.tn, c.fn); }

std::vector<std::pair<double, double>> roc_curve(std::span<const double> scores,
                                                 const std::vector<bool>& golds) {
  if (scores.size() != golds.size() || scores.empty())
    throw LengthMismatch("score and gold sequences must have equal nonzero length");
  std::uint64_t total_pos = 0;
  for (bool g : golds)
    if (g) ++total_pos;
  std::uint64_t total_neg = golds.size() - total_pos;
  if (total_pos == 0 || total_neg == 0)
    throw DegenerateLabels("ROC requires both classes in the gold labels");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<std::pair<double, double>> points;
  points.emplace_back(0.0, 0.0);
  std::uint64_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    golds[order[i]] ? ++tp : ++fp;
    // Emit one point per distinct threshold; tied scores collapse.
    if (i + 1 < order.size() && scores[order[i + 1]] == scores[order[i]]) continue;
    points.emplace_back(static_cast<double>(fp) / static_cast<double>(total_neg),
                        static_cast<double>(tp) / static_cast<double>(total_pos));
  }
  if (points.back() != std::make_pair(1.0, 1.0)) points.emplace_back(1.0, 1.0);
  return points;
}

double auc(std::span<const double> scores, const std::vector<bool>& golds) {
  auto points = roc_curve(scores, golds);
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    double dx = points[i + 1].first - points[i].first;
    area += dx * (points[i + 1].second + points[i].second) / 2.0;
  }
  return area;
}

EvalReport evaluate(std::span<const double> scores, const std::vector<bool>& preds,
                    const std::vector<bool>& golds) {
  EvalReport r;
  r.counts = confusion(preds, golds);
  r.prf = prf1(r.counts);
  r.roc_points = roc_curve(scores, golds);
  for (std::size_t i = 0; i + 1 < r.roc_points.size(); ++i) {
    double dx = r.roc_points[i + 1].first - r.roc_points[i].first;
    r.auc += dx * (r.roc_points[i + 1].second + r.roc_points[i].second) / 2.0;
  }
  return r;
}

std::string report_to_json(const EvalReport& r) {
  json j;
  j["tp"] = r.counts.tp;
  j["fp"] = r.counts.fp;
  j["tn"] = r.counts.tn;
  j["fn"] = r.counts.fn;
  j["precision"] = r.prf.precision;
  j["recall"] = r.prf.recall;
  j["f1"] = r.prf.f1;
  j["precision_defined"] = r.prf.precision_defined;
  j["recall_defined"] = r.prf.recall_defined;
  j["f1_defined"] = r.prf.f1_defined;
  json pts = json::array();
  for (const auto& [fpr, tpr] : r.roc_points) pts.push_back({fpr, tpr});
  j["roc_points"] = std::move(pts);
  j["auc"] = r.auc;
  return j.dump(2);
}

void roc_to_csv(std::ostream& os, std::span<const std::pair<double, double>> points) {
  os << "fpr,tpr\n";
  for (const auto& [fpr, tpr] : points) os << fpr << ',' << tpr << '\n';
}

Dataset assemble_gold(std::span<const FeaturizedTweet> candidates,
                      std::span<const std::pair<std::int64_t, bool>> annotations,
                      std::uint32_t sparse_dim, std::uint32_t dense_dim) {
  std::unordered_map<std::int64_t, const FeaturizedTweet*> by_id;
  by_id.reserve(candidates.size());
  for (const FeaturizedTweet& c : candidates) by_id[c.tweet_id] = &c;

  Dataset data(sparse_dim, dense_dim);
  for (const auto& [tweet_id, label] : annotations) {
    auto it = by_id.find(tweet_id);
    if (it == by_id.end())
      throw AnnotationOrphan("annotated id " + std::to_string(tweet_id) +
                             " has no candidate tweet");
    data.add({tweet_id, label, it->second->features});
  }
  return data;
}

void check_disjoint(const Dataset& train, const Dataset& test) {
  std::unordered_set<std::int64_t> train_ids;
  train_ids.reserve(train.size());
  for (const LabeledExample& ex : train.examples()) train_ids.insert(ex.tweet_id);
  for (const LabeledExample& ex : test.examples())
    if (train_ids.count(ex.tweet_id))
      throw LeakageDetected("tweet " + std::to_string(ex.tweet_id) +
                            " appears in both train and test");
}

std::vector<std::pair<std::int64_t, bool>> read_annotations(std::istream& is) {
  std::vector<std::pair<std::int64_t, bool>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line == "tweet_id,label") continue;
    std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw Error("annotations line " + std::to_string(line_no) + ": expected tweet_id,label");
    std::string label = line.substr(comma + 1);
    bool travel;
    if (label == "travel")
      travel = true;
    else if (label == "non_travel")
      travel = false;
    else
      throw Error("annotations line " + std::to_string(line_no) + ": unknown label '" +
                  label + "'");
    try {
      out.emplace_back(std::stoll(line.substr(0, comma)), travel);
    } catch (const std::exception&) {
      throw Error("annotations line " + std::to_string(line_no) + ": bad tweet id");
    }
  }
  return out;
}

}  // namespace geotravel
