// Integration test for the command-line binary: every subcommand exercised
// over the bundled fixture through real files and process exits.
//
// Usage: cli_tests <path-to-geotravel-binary> <fixtures-dir>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "geotravel/digest.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;
std::string g_binary;
fs::path g_dir;

void expect(bool ok, const std::string& what) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
  if (!ok) ++g_failures;
}

int run_command(const std::string& args) {
  std::string cmd = g_binary + " " + args + " > " + (g_dir / "stdout.txt").string() +
                    " 2> " + (g_dir / "stderr.txt").string();
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string last_stdout() { return read_file(g_dir / "stdout.txt"); }

std::size_t line_count(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: cli_tests <geotravel-binary> <fixtures-dir>\n");
    return 2;
  }
  g_binary = argv[1];
  fs::path fixtures = argv[2];
  g_dir = fs::temp_directory_path() / "geotravel_cli_test";
  fs::remove_all(g_dir);
  fs::create_directories(g_dir);

  const std::string tweets = (fixtures / "synthetic_tweets.jsonl").string();
  const std::string annotations = (fixtures / "annotations.csv").string();
  const std::string config = (fixtures / "run.toml").string();
  const std::string city = " --sw-lat -23.1 --sw-lon -43.8 --ne-lat -22.7 --ne-lon -43.0";

  // Help exits cleanly for the app and for every subcommand.
  expect(run_command("--help") == 0, "--help exits 0");
  for (const char* sub : {"filter", "stats", "preprocess", "vocab", "embed", "train",
                          "predict", "eval", "bootstrap", "analyze", "pipeline"})
    expect(run_command(std::string(sub) + " --help") == 0,
           std::string(sub) + " --help exits 0");

  // Missing input file exits 2.
  expect(run_command("filter --input /nonexistent.jsonl --output " +
                     (g_dir / "x.jsonl").string()) == 2,
         "missing input exits 2");
  expect(run_command("pipeline --config " + config + " --input /nonexistent.jsonl "
                     "--annotations " + annotations + " --output-dir " +
                     (g_dir / "px").string()) == 2,
         "pipeline with missing input exits 2");

  // filter: unmodified lines out, stats on stdout.
  fs::path filtered = g_dir / "filtered.jsonl";
  fs::path stats_file = g_dir / "stats.json";
  expect(run_command("filter --input " + tweets + " --output " + filtered.string() +
                     " --stats " + stats_file.string() + " --lang pt" + city) == 0,
         "filter exits 0");
  {
    json stats = json::parse(read_file(stats_file), nullptr, false);
    bool ok = !stats.is_discarded() && stats["skipped_malformed"] == 1 &&
              stats["lang_and_inside"] == 600 &&
              line_count(filtered) == stats["lang_and_inside"];
    expect(ok, "filter stats line up with the fixture");
  }

  // stats subcommand agrees with the filter stats.
  expect(run_command("stats --input " + tweets + " --lang pt" + city) == 0,
         "stats exits 0");
  expect(json::parse(last_stdout(), nullptr, false) ==
             json::parse(read_file(stats_file), nullptr, false),
         "stats matches filter stats");

  // preprocess -> vocab -> embed train.
  fs::path tokens = g_dir / "tokens.jsonl";
  expect(run_command("preprocess --input " + filtered.string() + " --output " +
                     tokens.string()) == 0,
         "preprocess exits 0");
  expect(line_count(tokens) == line_count(filtered), "one tokenized doc per record");

  fs::path vocab_file = g_dir / "vocab.json";
  expect(run_command("vocab --input " + tokens.string() + " --output " +
                     vocab_file.string() + " --max-terms 3000 --max-df 0.6") == 0,
         "vocab exits 0");

  fs::path embed_file = g_dir / "embeddings.boem";
  expect(run_command("embed train --input " + tokens.string() + " --output " +
                     embed_file.string() +
                     " --dims 24 --window 2 --epochs 3 --min-count 3 --seed 9 "
                     "--deterministic") == 0,
         "embed train exits 0");

  // Deterministic retrain gives a byte-identical model file.
  fs::path embed_again = g_dir / "embeddings2.boem";
  run_command("embed train --input " + tokens.string() + " --output " +
              embed_again.string() +
              " --dims 24 --window 2 --epochs 3 --min-count 3 --seed 9 --deterministic");
  expect(geotravel::file_digest(embed_file.string()) ==
             geotravel::file_digest(embed_again.string()),
         "deterministic embed retrain is byte-identical");

  expect(run_command("embed neighbors --model " + embed_file.string() +
                     " --term ônibus -k 3") == 0,
         "embed neighbors exits 0");

  // bootstrap finds keyword candidates.
  fs::path candidates = g_dir / "candidates.jsonl";
  expect(run_command("bootstrap --input " + filtered.string() + " --output " +
                     candidates.string()) == 0,
         "bootstrap exits 0");
  expect(line_count(candidates) > 100, "bootstrap matched the formal transport tweets");

  // train -> predict -> eval.
  fs::path model_file = g_dir / "model.bin";
  expect(run_command("train --input " + tokens.string() + " --annotations " +
                     annotations + " --model svm --features bow+boe --vocab " +
                     vocab_file.string() + " --embeddings " + embed_file.string() +
                     " --output " + model_file.string() + " --seed 4") == 0,
         "train exits 0");

  fs::path predictions = g_dir / "predictions.jsonl";
  expect(run_command("predict --model-file " + model_file.string() + " --input " +
                     filtered.string() + " --vocab " + vocab_file.string() +
                     " --embeddings " + embed_file.string() + " --output " +
                     predictions.string()) == 0,
         "predict exits 0");
  expect(line_count(predictions) == line_count(filtered), "one prediction per record");

  fs::path report = g_dir / "report.json";
  expect(run_command("eval --model-file " + model_file.string() + " --test " +
                     filtered.string() + " --annotations " + annotations +
                     " --vocab " + vocab_file.string() + " --embeddings " +
                     embed_file.string() + " --report " + report.string() +
                     " --roc " + (g_dir / "roc.csv").string()) == 0,
         "eval exits 0");
  {
    json r = json::parse(read_file(report), nullptr, false);
    bool ok = !r.is_discarded() && r.contains("f1") && r.contains("auc") &&
              r["tp"].get<int>() + r["fn"].get<int>() == 120;
    expect(ok, "eval report covers the 120 annotated positives");
  }

  // analyze, all four modes; heatmap respects the city flags.
  expect(run_command("analyze dow --input " + filtered.string() + " --output " +
                     (g_dir / "dow.csv").string()) == 0,
         "analyze dow exits 0");
  expect(run_command("analyze users --input " + filtered.string()) == 0,
         "analyze users exits 0");
  expect(run_command("analyze hashtags --input " + filtered.string() + " -k 5") == 0,
         "analyze hashtags exits 0");
  expect(run_command("analyze heatmap --input " + filtered.string() + city +
                     " --rows 10 --cols 10 --output " +
                     (g_dir / "heat.csv").string()) == 0,
         "analyze heatmap exits 0");
  expect(run_command("analyze heatmap --input " + filtered.string() + city +
                     " --rows 5 --cols 5 --positives-only --model-file " +
                     model_file.string() + " --vocab " + vocab_file.string() +
                     " --embeddings " + embed_file.string() + " --output " +
                     (g_dir / "heat_pos.geojson").string()) == 0,
         "analyze heatmap --positives-only exits 0");
  expect(read_file(g_dir / "heat_pos.geojson").find("FeatureCollection") !=
             std::string::npos,
         "geojson heatmap emitted");

  // Parallel embedding training works (test makes no determinism claim).
  expect(run_command("embed train --input " + tokens.string() + " --output " +
                     (g_dir / "embeddings_par.boem").string() +
                     " --dims 16 --epochs 2 --min-count 3 --workers 2") == 0,
         "embed train with two workers exits 0");

  // A failing stage exits 1, marks its manifest failed, and leaves the
  // artifacts of earlier stages in place.
  {
    fs::path bad_annotations = g_dir / "bad_annotations.csv";
    std::ofstream bad(bad_annotations);
    bad << "tweet_id,label\n999999999,travel\n1,non_travel\n";
    bad.close();
    fs::path fail_dir = g_dir / "pipeline_fail";
    expect(run_command("pipeline --config " + config + " --input " + tweets +
                       " --annotations " + bad_annotations.string() +
                       " --output-dir " + fail_dir.string()) == 1,
           "pipeline with orphan annotation exits 1");
    expect(fs::exists(fail_dir / "filtered.jsonl"),
           "partial artifacts retained after a stage failure");
    bool marked = false;
    for (const auto& entry : fs::directory_iterator(fail_dir)) {
      if (entry.path().filename().string().find(".manifest.json") == std::string::npos)
        continue;
      json manifest = json::parse(read_file(entry.path()), nullptr, false);
      if (!manifest.is_discarded() && manifest["status"] == "failed") marked = true;
    }
    expect(marked, "a manifest records the failed stage");
  }

  // pipeline from the bundled config, plus a digest-stable rerun.
  fs::path out_dir = g_dir / "pipeline_out";
  std::string pipeline_args = "pipeline --config " + config + " --input " + tweets +
                              " --annotations " + annotations + " --output-dir " +
                              out_dir.string();
  expect(run_command(pipeline_args) == 0, "pipeline exits 0");
  for (const char* artifact :
       {"filtered.jsonl", "stats.json", "tokens.jsonl", "vocab.json", "split.json",
        "embeddings.boem", "model.bin", "eval_report.json", "roc.csv",
        "predictions.jsonl", "heatmap_positive.csv", "dow_positive.json",
        "filter.manifest.json", "train.manifest.json", "analyze.manifest.json"})
    expect(fs::exists(out_dir / artifact), std::string("pipeline wrote ") + artifact);

  // Every non-manifest artifact must be listed as an output in some stage
  // manifest.
  {
    std::set<std::string> declared;
    for (const auto& entry : fs::directory_iterator(out_dir)) {
      std::string name = entry.path().filename().string();
      if (name.find(".manifest.json") == std::string::npos) continue;
      json manifest = json::parse(read_file(entry.path()), nullptr, false);
      if (manifest.is_discarded()) continue;
      for (const json& output : manifest["outputs"])
        declared.insert(fs::path(output["path"].get<std::string>()).filename().string());
    }
    bool complete = true;
    for (const auto& entry : fs::directory_iterator(out_dir)) {
      std::string name = entry.path().filename().string();
      if (name.find(".manifest.json") != std::string::npos) continue;
      if (!declared.count(name)) {
        std::printf("  undeclared artifact: %s\n", name.c_str());
        complete = false;
      }
    }
    expect(complete, "every artifact is declared in a stage manifest");
  }

  std::map<std::string, std::string> digests;
  for (const auto& entry : fs::directory_iterator(out_dir))
    digests[entry.path().filename().string()] =
        geotravel::file_digest(entry.path().string());
  expect(run_command(pipeline_args) == 0, "pipeline rerun exits 0");
  bool stable = true;
  for (const auto& entry : fs::directory_iterator(out_dir))
    if (digests[entry.path().filename().string()] !=
        geotravel::file_digest(entry.path().string()))
      stable = false;
  expect(stable, "pipeline rerun artifacts are digest-identical");

  if (g_failures == 0) std::printf("cli: all checks passed\n");
  return g_failures == 0 ? 0 : 1;
}
