#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geotravel/errors.hpp"
#include "geotravel/eval.hpp"
#include "geotravel/rng.hpp"

using namespace geotravel;

namespace {

Tweet text_tweet(std::int64_t id, const std::string& text) {
  Tweet t;
  t.id = id;
  t.text = text;
  t.lang = "pt";
  t.created_at = 1489305600;
  return t;
}

/// Brute-force pairwise statistic: P(score_pos > score_neg) + 0.5 ties.
double pairwise_auc(const std::vector<double>& scores, const std::vector<bool>& golds) {
  double wins = 0.0;
  std::uint64_t pairs = 0;
  for (std::size_t p = 0; p < scores.size(); ++p) {
    if (!golds[p]) continue;
    for (std::size_t n = 0; n < scores.size(); ++n) {
      if (golds[n]) continue;
      ++pairs;
      if (scores[p] > scores[n])
        wins += 1.0;
      else if (scores[p] == scores[n])
        wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

}  // namespace

TEST_SUITE_BEGIN("eval");

TEST_CASE("query matching is space-delimited") {
  TermQuery q = TermQuery::defaults();
  CHECK(matches_query("peguei o ônibus agora", q));
  CHECK_FALSE(matches_query("metrópole linda", q));
  CHECK_FALSE(matches_query("motorista cansado", q));
  CHECK(matches_query("carro", q));          // boundaries count as delimiters
  CHECK(matches_query("carro quebrado", q));
  CHECK(matches_query("meu carro", q));
  CHECK_FALSE(matches_query("", q));
}

TEST_CASE("bootstrap_candidates normalizes before matching") {
  std::vector<Tweet> corpus = {
      text_tweet(1, "Peguei o ÔNIBUS lotado"),
      text_tweet(2, "dia lindo na praia"),
      text_tweet(3, "esperando o metrô https://t.co/x"),
      text_tweet(4, "metrópole agitada"),
  };
  auto matched = bootstrap_candidates(corpus, TermQuery::defaults());
  REQUIRE(matched.size() == 2);
  CHECK(matched[0].id == 1);
  CHECK(matched[1].id == 3);
}

TEST_CASE("bootstrap equals the padded-scan oracle on random corpora") {
  TermQuery q{{"bus", "car"}};
  Rng rng(71);
  std::vector<std::string> pieces = {"bus", "car",  "busca", "carro", "ab",
                                     "x",   "bus.", "", "carioca"};
  for (int round = 0; round < 500; ++round) {
    std::string text;
    std::size_t n = rng.index(6);
    for (std::size_t i = 0; i < n; ++i) {
      if (i) text += ' ';
      text += pieces[rng.index(pieces.size())];
    }
    std::string padded = " " + text + " ";
    bool oracle = padded.find(" bus ") != std::string::npos ||
                  padded.find(" car ") != std::string::npos;
    CHECK(matches_query(text, q) == oracle);
  }
}

TEST_CASE("confusion counts and errors") {
  CHECK_THROWS_AS(confusion({true}, {true, false}), LengthMismatch);
  CHECK_THROWS_AS(confusion({}, {}), LengthMismatch);

  Confusion c = confusion({true, false}, {true, false});
  CHECK(c.tp == 1);
  CHECK(c.tn == 1);
  CHECK(c.fp == 0);
  CHECK(c.fn == 0);

  c = confusion({true}, {false});
  CHECK(c.fp == 1);

  // 1000-item recount.
  Rng rng(73);
  std::vector<bool> preds, golds;
  for (int i = 0; i < 1000; ++i) {
    preds.push_back(rng.uniform() < 0.5);
    golds.push_back(rng.uniform() < 0.5);
  }
  c = confusion(preds, golds);
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (int i = 0; i < 1000; ++i) {
    if (golds[i] && preds[i]) ++tp;
    if (!golds[i] && preds[i]) ++fp;
    if (!golds[i] && !preds[i]) ++tn;
    if (golds[i] && !preds[i]) ++fn;
  }
  CHECK(c.tp == tp);
  CHECK(c.fp == fp);
  CHECK(c.tn == tn);
  CHECK(c.fn == fn);
  CHECK(c.tp + c.fp + c.tn + c.fn == 1000);
}

TEST_CASE("prf1 reproduces published arithmetic") {
  // F1 from (precision, recall) pairs, exercised through integer counts
  // chosen to land exactly on the published ratios: 71 positives, recall
  // 53/71 = 0.7465 and 45/71 = 0.6338.
  Prf r = prf1(53, 0, 929, 18);
  CHECK(r.precision == doctest::Approx(1.0));
  CHECK(r.recall == doctest::Approx(0.7465).epsilon(1e-3));
  CHECK(r.f1 == doctest::Approx(0.8548).epsilon(1e-3));

  r = prf1(45, 0, 929, 26);
  CHECK(r.precision == doctest::Approx(1.0));
  CHECK(r.f1 == doctest::Approx(0.7759).epsilon(1e-3));

  SUBCASE("degenerate counts flag undefined ratios") {
    r = prf1(0, 0, 10, 0);
    CHECK(r.precision == 0.0);
    CHECK(r.recall == 0.0);
    CHECK(r.f1 == 0.0);
    CHECK_FALSE(r.precision_defined);
    CHECK_FALSE(r.recall_defined);
    CHECK_FALSE(r.f1_defined);
  }
}

TEST_CASE("f1 lies between precision and recall") {
  Rng rng(79);
  for (int round = 0; round < 500; ++round) {
    Prf r = prf1(1 + rng.index(50), rng.index(50), rng.index(50), rng.index(50));
    if (!r.f1_defined) continue;
    CHECK(r.f1 <= std::max(r.precision, r.recall) + 1e-12);
    CHECK(r.f1 >= std::min(r.precision, r.recall) - 1e-12);
    CHECK(r.precision >= 0.0);
    CHECK(r.precision <= 1.0);
    CHECK(r.recall >= 0.0);
    CHECK(r.recall <= 1.0);
  }
}

TEST_CASE("roc fixed shapes") {
  SUBCASE("perfect separation passes through (0,1)") {
    std::vector<double> scores = {0.9, 0.8, 0.2, 0.1};
    auto points = roc_curve(scores, {true, true, false, false});
    CHECK(std::find(points.begin(), points.end(), std::make_pair(0.0, 1.0)) !=
          points.end());
    CHECK(points.front() == std::make_pair(0.0, 0.0));
    CHECK(points.back() == std::make_pair(1.0, 1.0));
  }
  SUBCASE("constant scores give the diagonal") {
    std::vector<double> scores = {0.5, 0.5, 0.5, 0.5};
    auto points = roc_curve(scores, {true, false, true, false});
    REQUIRE(points.size() == 2);
    CHECK(points[0] == std::make_pair(0.0, 0.0));
    CHECK(points[1] == std::make_pair(1.0, 1.0));
  }
  SUBCASE("single-class labels are rejected") {
    std::vector<double> scores = {0.5, 0.2};
    CHECK_THROWS_AS(roc_curve(scores, {true, true}), DegenerateLabels);
  }
}

TEST_CASE("roc matches a brute-force threshold sweep") {
  Rng rng(83);
  std::vector<double> scores;
  std::vector<bool> golds;
  for (int i = 0; i < 200; ++i) {
    scores.push_back(static_cast<double>(rng.index(20)) / 10.0);  // deliberate ties
    golds.push_back(rng.uniform() < 0.4);
  }
  golds[0] = true;
  golds[1] = false;

  auto points = roc_curve(scores, golds);
  double total_pos = static_cast<double>(std::count(golds.begin(), golds.end(), true));
  double total_neg = static_cast<double>(golds.size()) - total_pos;

  // Every swept point must equal the confusion computed at its threshold.
  std::vector<double> distinct = scores;
  std::sort(distinct.begin(), distinct.end(), std::greater<>());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  REQUIRE(points.size() >= distinct.size() + 1);
  for (std::size_t k = 0; k < distinct.size(); ++k) {
    double threshold = distinct[k];
    double tp = 0, fp = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= threshold) (golds[i] ? tp : fp) += 1;
    }
    CHECK(points[k + 1].first == doctest::Approx(fp / total_neg).epsilon(1e-12));
    CHECK(points[k + 1].second == doctest::Approx(tp / total_pos).epsilon(1e-12));
  }

  // Monotone in both coordinates.
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    CHECK(points[i + 1].first >= points[i].first);
    CHECK(points[i + 1].second >= points[i].second);
  }
}

TEST_CASE("auc fixed points and pairwise equivalence") {
  std::vector<double> separated = {0.9, 0.8, 0.2, 0.1};
  std::vector<double> constant = {0.5, 0.5, 0.5, 0.5};
  CHECK(auc(separated, {true, true, false, false}) == doctest::Approx(1.0));
  CHECK(auc(constant, {true, false, true, false}) == doctest::Approx(0.5));

  Rng rng(89);
  for (int round = 0; round < 20; ++round) {
    std::vector<double> scores;
    std::vector<bool> golds;
    std::size_t n = 100 + rng.index(400);
    for (std::size_t i = 0; i < n; ++i) {
      scores.push_back(static_cast<double>(rng.index(30)));
      golds.push_back(rng.uniform() < 0.3);
    }
    golds[0] = true;
    golds[1] = false;
    CHECK(std::abs(auc(scores, golds) - pairwise_auc(scores, golds)) < 1e-12);
  }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
  Rng rng(97);
  std::vector<double> scores;
  std::vector<bool> golds;
  for (int i = 0; i < 300; ++i) {
    scores.push_back(rng.uniform(-2.0, 2.0));
    golds.push_back(rng.uniform() < 0.5);
  }
  golds[0] = true;
  golds[1] = false;
  double base = auc(scores, golds);

  std::vector<double> transformed = scores;
  for (double& s : transformed) s = std::exp(s) + 3.0;
  CHECK(auc(transformed, golds) == base);
  for (double& s : transformed) s = 2.0 * s + 1.0;
  CHECK(auc(transformed, golds) == base);
}

TEST_CASE("assemble_gold joins annotations to features") {
  std::vector<FeaturizedTweet> candidates;
  for (std::int64_t id = 1; id <= 6; ++id) {
    SparseCounts sc;
    sc.dimension = 3;
    sc.entries = {{static_cast<std::uint32_t>(id % 3), 1}};
    candidates.push_back({id, combine_features(sc, {})});
  }
  std::vector<std::pair<std::int64_t, bool>> annotations = {
      {1, true}, {2, true}, {3, false}, {4, false}};
  Dataset data = assemble_gold(candidates, annotations, 3, 0);
  CHECK(data.size() == 4);
  CHECK(data.positives() == 2);
  CHECK(data.negatives() == 2);

  SUBCASE("unknown id is an orphan") {
    annotations.push_back({99, true});
    CHECK_THROWS_AS(assemble_gold(candidates, annotations, 3, 0), AnnotationOrphan);
  }
  SUBCASE("imbalanced sets are accepted") {
    std::vector<std::pair<std::int64_t, bool>> skewed = {
        {1, true}, {2, false}, {3, false}, {4, false}, {5, false}, {6, false}};
    Dataset test = assemble_gold(candidates, skewed, 3, 0);
    CHECK(test.positives() == 1);
    CHECK(test.negatives() == 5);
  }
  SUBCASE("held-out shape with 71 positives in 1000 is fine") {
    std::vector<FeaturizedTweet> pool;
    std::vector<std::pair<std::int64_t, bool>> labels;
    for (std::int64_t id = 1; id <= 1000; ++id) {
      pool.push_back({id, combine_features(SparseCounts{{}, 3}, {})});
      labels.emplace_back(id, id <= 71);
    }
    Dataset test = assemble_gold(pool, labels, 3, 0);
    CHECK(test.positives() == 71);
    CHECK(test.negatives() == 929);
  }
  SUBCASE("train/test overlap is leakage") {
    std::vector<std::pair<std::int64_t, bool>> overlap = {{3, false}, {5, true}};
    Dataset test = assemble_gold(candidates, overlap, 3, 0);
    CHECK_THROWS_AS(check_disjoint(data, test), LeakageDetected);
    std::vector<std::pair<std::int64_t, bool>> fresh = {{5, true}, {6, false}};
    Dataset clean = assemble_gold(candidates, fresh, 3, 0);
    CHECK_NOTHROW(check_disjoint(data, clean));
  }
}

TEST_CASE("annotation csv parsing") {
  std::istringstream in("tweet_id,label\n1,travel\n2,non_travel\n\n3,travel\n");
  auto rows = read_annotations(in);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::make_pair<std::int64_t, bool>(1, true));
  CHECK(rows[1] == std::make_pair<std::int64_t, bool>(2, false));
  CHECK(rows[2] == std::make_pair<std::int64_t, bool>(3, true));

  std::istringstream bad("1,maybe\n");
  CHECK_THROWS_AS(read_annotations(bad), Error);
}

TEST_CASE("report json carries the full bundle") {
  std::vector<double> scores = {0.9, 0.7, 0.3, 0.1};
  std::vector<bool> preds = {true, true, false, false};
  std::vector<bool> golds = {true, false, true, false};
  EvalReport r = evaluate(scores, preds, golds);
  CHECK(r.counts.tp == 1);
  CHECK(r.counts.fp == 1);
  CHECK(r.counts.fn == 1);
  CHECK(r.counts.tn == 1);
  CHECK(r.auc == doctest::Approx(0.75));
  std::string j = report_to_json(r);
  for (const char* key : {"precision", "recall", "f1", "roc_points", "auc", "tp"})
    CHECK(j.find(key) != std::string::npos);

  std::ostringstream csv;
  roc_to_csv(csv, r.roc_points);
  CHECK(csv.str().rfind("fpr,tpr\n", 0) == 0);
}

TEST_SUITE_END();
