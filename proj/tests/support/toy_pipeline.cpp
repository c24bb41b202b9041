#include "toy_pipeline.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"

namespace oracle {

namespace fs = std::filesystem;

namespace {

const std::set<fs::path> kUncompared{"model.bin"};

std::vector<fs::path> list_files(const fs::path& root) {
  std::vector<fs::path> out;
  if (!fs::exists(root)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    fs::path rel = fs::relative(entry.path(), root);
    if (kUncompared.count(rel)) continue;
    out.push_back(rel);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

fs::path golden_dir() { return source_dir() / "tests" / "golden" / "toy"; }

PipelineRun run_toy_pipeline(const fs::path& out_dir, unsigned jobs) {
  const fs::path toy = source_dir() / "data" / "toy";
  auto in = [&](const char* name) { return (toy / name).string(); };
  auto out = [&](const char* name) { return (out_dir / name).string(); };

  const std::vector<std::vector<std::string>> steps{
      {"ingest", "--input", in("speeches.jsonl"), "--out", out("speeches.jsonl")},
      {"segment", "--speeches", out("speeches.jsonl"), "--out", out("sentences.tsv")},
      {"agree", "--annotations", in("annotations.csv"), "--out", out("agreement.csv")},
      {"gold", "--annotations", in("annotations.csv"), "--out", out("gold.tsv")},
      {"dict-score", "--sentences", out("sentences.tsv"), "--dictionary",
       in("dictionary_demo.txt"), "--out", out("dict_scores.tsv"), "--profile",
       out("dict_profile.csv"), "--speeches", out("speeches.jsonl")},
      {"train", "--sentences", out("sentences.tsv"), "--gold", out("gold.tsv"), "--out",
       out("model.bin"), "--log", out("train_log.csv")},
      {"predict", "--model", out("model.bin"), "--sentences", out("sentences.tsv"), "--out",
       out("predictions.tsv")},
      {"calibrate", "--predictions", out("predictions.tsv"), "--gold", out("gold.tsv"), "--out",
       out("thresholds.json")},
      {"evaluate", "--predictions", out("predictions.tsv"), "--gold", out("gold.tsv"),
       "--thresholds", out("thresholds.json"), "--out", out("metrics.csv")},
      {"cv", "--sentences", out("sentences.tsv"), "--gold", out("gold.tsv"), "--out",
       out("cv_metrics.csv"), "--json", out("cv_metrics.json")},
      {"aggregate", "--predictions", out("predictions.tsv"), "--sentences", out("sentences.tsv"),
       "--speeches", out("speeches.jsonl"), "--level", "party", "--out", out("party.csv")},
      {"aggregate", "--predictions", out("predictions.tsv"), "--sentences", out("sentences.tsv"),
       "--speeches", out("speeches.jsonl"), "--level", "politician", "--out",
       out("politicians.csv")},
      {"index", "--aggregates", out("politicians.csv"), "--out", out("politician_index.csv")},
      {"rank", "--aggregates", out("politicians.csv"), "--out", out("ranking.csv")},
      {"prevalence", "--predictions", out("predictions.tsv"), "--thresholds",
       out("thresholds.json"), "--out", out("prevalence.csv")},
      {"correlate", "--aggregates", out("party.csv"), "--survey", in("survey_demo.csv"),
       "--party-map", in("party_map.csv"), "--term", "19", "--out", out("correlation.csv")},
      {"oos-check", "--fixture", in("oos_demo.tsv"), "--model", out("model.bin"),
       "--thresholds", out("thresholds.json"), "--out", out("oos.tsv")},
      {"report", "--speeches", out("speeches.jsonl"), "--sentences", out("sentences.tsv"),
       "--predictions", out("predictions.tsv"), "--thresholds", out("thresholds.json"),
       "--dictionary", in("dictionary_demo.txt"), "--annotations", in("annotations.csv"),
       "--metrics", out("cv_metrics.csv"), "--out-dir", out("report")},
  };

  PipelineRun run;
  for (const auto& step : steps) {
    std::vector<std::string> args{"--config", in("popscope.toml"), "--jobs",
                                  std::to_string(jobs)};
    args.insert(args.end(), step.begin(), step.end());
    std::ostringstream sout, serr;
    const int code = popscope::cli::run(args, sout, serr);
    if (code != 0) {
      run.ok = false;
      run.log += step.front() + " exited with " + std::to_string(code) + ": " + serr.str();
      break;
    }
  }
  return run;
}

std::vector<fs::path> golden_files() { return list_files(golden_dir()); }

std::vector<std::string> diff_against_golden(const fs::path& out_dir) {
  std::vector<std::string> diffs;
  const auto expected = golden_files();
  const auto produced = list_files(out_dir);
  for (const auto& rel : expected) {
    if (!fs::exists(out_dir / rel)) {
      diffs.push_back(rel.string() + " (missing)");
    } else if (slurp(out_dir / rel) != slurp(golden_dir() / rel)) {
      diffs.push_back(rel.string());
    }
  }
  for (const auto& rel : produced) {
    if (std::find(expected.begin(), expected.end(), rel) == expected.end()) {
      diffs.push_back(rel.string() + " (no golden)");
    }
  }
  if (expected.empty()) diffs.push_back("no golden files in " + golden_dir().string());
  return diffs;
}

void update_golden(const fs::path& out_dir) {
  fs::remove_all(golden_dir());
  for (const auto& rel : list_files(out_dir)) {
    fs::create_directories((golden_dir() / rel).parent_path());
    fs::copy_file(out_dir / rel, golden_dir() / rel, fs::copy_options::overwrite_existing);
  }
}

}  // namespace oracle
