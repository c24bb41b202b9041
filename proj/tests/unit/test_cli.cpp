#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"
#include "popscope/annotations.hpp"
#include "popscope/predictions.hpp"
#include "popscope/rng.hpp"
#include "popscope/table_io.hpp"

using namespace popscope;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string toy(const char* name) { return (oracle::source_dir() / "data/toy" / name).string(); }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream(path, std::ios::binary) << content;
}

}  // namespace

TEST(Cli, VersionAndUsage) {
  const auto v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_FALSE(v.out.empty());
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"agree"}).code, 2);  // missing required options
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, AgreementReportAndManifest) {
  const auto dir = oracle::fresh_dir("cli_agree");
  const auto csv = dir / "agreement.csv";
  const auto r = run({"agree", "--annotations", toy("annotations.csv"), "--out", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(oracle::slurp(csv));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[0].rfind("label,n,fleiss_kappa", 0), 0u);
  EXPECT_EQ(lines[5].rfind("Total / Mean", 0), 0u);
  const auto manifest = oracle::slurp(fs::path(csv.string() + ".manifest.json"));
  EXPECT_NE(manifest.find("annotations.csv"), std::string::npos);
  EXPECT_NE(manifest.find(io::sha256_hex(oracle::slurp(csv))), std::string::npos);
  EXPECT_EQ(manifest.find(dir.string()), std::string::npos);
}

TEST(Cli, MissingInputIsExitOne) {
  const auto dir = oracle::fresh_dir("cli_missing");
  const auto r = run({"gold", "--annotations", (dir / "nope.csv").string(), "--out",
                      (dir / "gold.tsv").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("nope.csv"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir / "gold.tsv"));
}

TEST(Cli, InvalidScoresNameTheLine) {
  const auto dir = oracle::fresh_dir("cli_import");
  write_file(dir / "scores.tsv",
             "sentence_id\tp_antielite\tp_pplcentr\tp_left\tp_right\n"
             "a\t0.1\t0.1\t0.1\t0.1\n"
             "b\t0.1\t-0.2\t0.1\t0.1\n");
  const auto r = run({"import-scores", "--input", (dir / "scores.tsv").string(), "--out",
                      (dir / "out.tsv").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST(Cli, ConfigFileSuppliesOptions) {
  const auto dir = oracle::fresh_dir("cli_config");
  write_file(dir / "run.toml", "[gold]\nannotations = \"" + toy("annotations.csv") + "\"\n");
  const auto r = run({"--config", (dir / "run.toml").string(), "gold", "--out",
                      (dir / "gold.tsv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "gold.tsv"));
  EXPECT_EQ(run({"--config", (dir / "absent.toml").string(), "gold", "--out",
                 (dir / "g.tsv").string()})
                .code,
            1);
}

TEST(Cli, CalibratedF1MatchesEvaluation) {
  const auto dir = oracle::fresh_dir("cli_calibrate");
  Rng rng(2024);
  std::vector<PredictionVector> preds;
  std::vector<GoldLabelRecord> gold;
  for (int i = 0; i < 120; ++i) {
    const std::string id = "s" + std::to_string(i);
    PredictionVector pv{id, {}};
    GoldLabelRecord g{id, {}, 2};
    for (std::size_t d = 0; d < 4; ++d) {
      g.labels[d] = rng.uniform() < 0.3;
      pv.p[d] = std::min(1.0, 0.35 * rng.uniform() + (g.labels[d] ? 0.3 : 0.0) + 0.2 * rng.uniform());
    }
    preds.push_back(pv);
    gold.push_back(g);
  }
  {
    std::ofstream p(dir / "pred.tsv");
    write_predictions_tsv(p, preds);
    std::ofstream g(dir / "gold.tsv");
    write_gold_tsv(g, gold);
  }
  const auto cal = run({"calibrate", "--predictions", (dir / "pred.tsv").string(), "--gold",
                        (dir / "gold.tsv").string(), "--out", (dir / "t.json").string()});
  ASSERT_EQ(cal.code, 0) << cal.err;
  const auto eval = run({"evaluate", "--predictions", (dir / "pred.tsv").string(), "--gold",
                         (dir / "gold.tsv").string(), "--thresholds", (dir / "t.json").string(),
                         "--out", (dir / "m.csv").string()});
  ASSERT_EQ(eval.code, 0) << eval.err;
  const auto file = read_thresholds_json(dir / "t.json");
  ASSERT_TRUE(file.f1.has_value());
  const auto table = io::read_table(dir / "m.csv", io::Format::Csv);
  const auto c_f1 = table.require_column("f1", "metrics");
  for (std::size_t d = 0; d < 4; ++d) {
    EXPECT_EQ(table.rows[d].fields[c_f1], io::fixed((*file.f1)[d], 6)) << "dimension " << d;
  }
}
