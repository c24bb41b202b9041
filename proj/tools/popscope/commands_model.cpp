#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "popscope/annotations.hpp"
#include "popscope/classifier.hpp"
#include "popscope/corpus.hpp"
#include "popscope/error.hpp"
#include "popscope/evaluation.hpp"
#include "popscope/parallel.hpp"
#include "popscope/predictions.hpp"
#include "popscope/table_io.hpp"
#include "popscope/training.hpp"
#include "stage.hpp"

namespace popscope::cli {

namespace {

struct TrainFlags {
  std::string preset = "native";
  std::optional<std::size_t> epochs, batch_size;
  std::optional<double> lr_init, lr_floor, weight_decay;
  std::optional<unsigned> hash_bits;

  void add_to(CLI::App* sub) {
    sub->add_option("--preset", preset, "Training preset: native or paper-gbert")
        ->capture_default_str();
    sub->add_option("--epochs", epochs, "Override the preset's epochs");
    sub->add_option("--batch-size", batch_size, "Override the preset's batch size");
    sub->add_option("--lr-init", lr_init, "Override the initial learning rate");
    sub->add_option("--lr-floor", lr_floor, "Override the final learning rate");
    sub->add_option("--weight-decay", weight_decay, "Override the weight decay");
    sub->add_option("--hash-bits", hash_bits, "Feature hash space is 2^bits");
  }

  TrainConfig resolve(std::uint64_t seed) const {
    TrainConfig c = TrainConfig::preset(preset);
    if (epochs) c.epochs = *epochs;
    if (batch_size) c.batch_size = *batch_size;
    if (lr_init) c.lr_init = *lr_init;
    if (lr_floor) c.lr_floor = *lr_floor;
    if (weight_decay) c.weight_decay = *weight_decay;
    if (hash_bits) c.features.hash_bits = *hash_bits;
    c.seed = seed;
    c.validate();
    return c;
  }
};

/// Featurized gold sentences, in gold-file order.
std::vector<LabeledExample> join_examples(std::span<const SentenceRecord> sentences,
                                          std::span<const GoldLabelRecord> gold,
                                          const FeatureConfig& features, unsigned jobs) {
  std::unordered_map<std::string_view, const SentenceRecord*> by_id;
  for (const auto& s : sentences) by_id.emplace(s.sentence_id, &s);
  std::vector<const SentenceRecord*> matched(gold.size());
  std::vector<std::string_view> missing;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto it = by_id.find(gold[i].sentence_id);
    if (it == by_id.end()) {
      missing.push_back(gold[i].sentence_id);
    } else {
      matched[i] = it->second;
    }
  }
  if (!missing.empty()) {
    throw ValidationError(fmt::format("{} gold sentence(s) are missing from the sentences file: {}",
                                      missing.size(), missing.front()));
  }
  std::vector<LabeledExample> out(gold.size());
  parallel_for(gold.size(), jobs, [&](std::size_t i) {
    out[i].features = featurize(matched[i]->text, features);
    out[i].gold = gold[i].labels;
  });
  return out;
}

std::string predictions_text(std::span<const PredictionVector> predictions) {
  std::ostringstream buf;
  write_predictions_tsv(buf, predictions);
  return buf.str();
}

void add_train(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path sentences, gold, out;
    std::optional<fs::path> validation_gold, log;
    TrainFlags flags;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("train", "Train the hashed n-gram logistic baseline");
  sub->add_option("--sentences", o->sentences, "Sentences TSV")->required();
  sub->add_option("--gold", o->gold, "Gold TSV of training sentences")->required();
  sub->add_option("--validation-gold", o->validation_gold,
                  "Gold TSV whose loss is logged per epoch");
  sub->add_option("--out", o->out, "Model file")->required();
  sub->add_option("--log", o->log, "Per-epoch loss CSV");
  o->flags.add_to(sub);
  registry.add(sub, [o](Context& ctx) {
    Stage stage("train");
    stage.seed(ctx.seed);
    const TrainConfig config = o->flags.resolve(ctx.seed);
    const auto sentences = read_sentences_tsv(stage.input(o->sentences));
    const auto gold = read_gold_tsv(stage.input(o->gold));
    const auto train = join_examples(sentences, gold, config.features, ctx.jobs);
    std::vector<LabeledExample> validation;
    if (o->validation_gold) {
      validation = join_examples(sentences, read_gold_tsv(stage.input(*o->validation_gold)),
                                 config.features, ctx.jobs);
    }
    const TrainResult result = train_baseline(train, config, validation);
    for (const auto& w : result.warnings) warn(ctx, w);
    std::ostringstream model;
    save_model(model, result.model);
    stage.write(o->out, model.str());
    if (o->log) {
      std::ostringstream log;
      log << "epoch,train_loss,validation_loss,lr\n";
      for (const auto& e : result.log) {
        log << e.epoch << ',' << io::fixed(e.train_loss, 10) << ','
            << (e.validation_loss ? io::fixed(*e.validation_loss, 10) : std::string()) << ','
            << fmt::format("{:.6e}", e.last_lr) << '\n';
      }
      stage.write(*o->log, log.str());
    }
    stage.finish();
    ctx.out << fmt::format("trained on {} sentences for {} epochs; final loss {}\n", train.size(),
                           config.epochs, io::fixed(result.log.back().train_loss, 6));
  });
}

void add_predict(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path model, sentences, out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("predict", "Score sentences with a trained model");
  sub->add_option("--model", o->model, "Model file")->required();
  sub->add_option("--sentences", o->sentences, "Sentences TSV")->required();
  sub->add_option("--out", o->out, "Predictions TSV")->required();
  registry.add(sub, [o](Context& ctx) {
    Stage stage("predict");
    const BaselineModel model = load_model(stage.input(o->model));
    const auto sentences = read_sentences_tsv(stage.input(o->sentences));
    std::vector<std::string> texts;
    texts.reserve(sentences.size());
    for (const auto& s : sentences) texts.push_back(s.text);
    const auto probs = predict_texts(model, texts, ctx.jobs);
    std::vector<PredictionVector> predictions(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      predictions[i] = {sentences[i].sentence_id, probs[i]};
    }
    stage.write(o->out, predictions_text(predictions));
    stage.finish();
    ctx.out << fmt::format("scored {} sentences\n", predictions.size());
  });
}

void add_import_scores(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path input, out;
    std::optional<fs::path> sentences;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("import-scores",
                                 "Validate externally produced scores and write canonical predictions");
  sub->add_option("--input", o->input, "Predictions TSV from an external scorer")->required();
  sub->add_option("--sentences", o->sentences, "Require every id to exist in this sentences TSV");
  sub->add_option("--out", o->out, "Canonical predictions TSV")->required();
  registry.add(sub, [o](Context& ctx) {
    Stage stage("import-scores");
    const auto predictions = import_external_scores(stage.input(o->input));
    if (o->sentences) {
      const auto sentences = read_sentences_tsv(stage.input(*o->sentences));
      std::unordered_map<std::string_view, bool> known;
      for (const auto& s : sentences) known.emplace(s.sentence_id, true);
      for (const auto& pv : predictions) {
        if (!known.count(pv.sentence_id)) {
          throw ValidationError(
              fmt::format("scored sentence {} is not in the sentences file", pv.sentence_id));
        }
      }
      if (predictions.size() != sentences.size()) {
        warn(ctx, fmt::format("{} of {} sentences have scores", predictions.size(),
                              sentences.size()));
      }
    }
    stage.write(o->out, predictions_text(predictions));
    stage.finish();
    ctx.out << fmt::format("imported {} score vectors\n", predictions.size());
  });
}

void add_calibrate(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path predictions, gold, out;
    double grid = 0.001;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("calibrate", "Pick per-dimension thresholds maximizing F1");
  sub->add_option("--predictions", o->predictions, "Predictions TSV")->required();
  sub->add_option("--gold", o->gold, "Gold TSV")->required();
  sub->add_option("--grid", o->grid, "Threshold grid step")->capture_default_str();
  sub->add_option("--out", o->out, "Thresholds JSON")->required();
  registry.add(sub, [o](Context& ctx) {
    Stage stage("calibrate");
    const auto predictions = import_external_scores(stage.input(o->predictions));
    const auto gold = read_gold_tsv(stage.input(o->gold));
    const AlignedEval aligned = align_with_gold(predictions, gold);
    const Calibration cal = calibrate(aligned.probs, aligned.gold, o->grid);
    for (const auto& w : cal.warnings) warn(ctx, w);
    std::ostringstream buf;
    write_thresholds_json(buf, cal.file);
    stage.write(o->out, buf.str());
    stage.finish();
    std::vector<std::string> parts;
    for (Dimension d : kDimensions) {
      parts.push_back(fmt::format("{} {} (F1 {})", column_name(d),
                                  io::fixed(cal.file.thresholds.t[index_of(d)], 3),
                                  io::fixed((*cal.file.f1)[index_of(d)], 3)));
    }
    ctx.out << fmt::format("{}\n", fmt::join(parts, ", "));
  });
}

void add_evaluate(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path predictions, gold, thresholds, out;
    std::optional<fs::path> json;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("evaluate", "Precision, recall and F1 at fixed thresholds");
  sub->add_option("--predictions", o->predictions, "Predictions TSV")->required();
  sub->add_option("--gold", o->gold, "Gold TSV")->required();
  sub->add_option("--thresholds", o->thresholds, "Thresholds JSON")->required();
  sub->add_option("--out", o->out, "Metrics CSV")->required();
  sub->add_option("--json", o->json, "Also write the metrics as JSON");
  registry.add(sub, [o](Context& ctx) {
    Stage stage("evaluate");
    const auto predictions = import_external_scores(stage.input(o->predictions));
    const auto gold = read_gold_tsv(stage.input(o->gold));
    const auto thresholds = read_thresholds_json(stage.input(o->thresholds)).thresholds;
    const AlignedEval aligned = align_with_gold(predictions, gold);
    const MetricsReport report = evaluate(aligned.probs, aligned.gold, thresholds);
    std::ostringstream buf;
    write_metrics_csv(buf, report);
    stage.write(o->out, buf.str());
    if (o->json) {
      std::ostringstream jbuf;
      write_metrics_json(jbuf, report);
      stage.write(*o->json, jbuf.str());
    }
    stage.finish();
    ctx.out << fmt::format("{} sentences; micro F1 {}, macro F1 {}\n", aligned.ids.size(),
                           io::fixed(report.averages.micro.f1, 3),
                           io::fixed(report.averages.macro.f1, 3));
  });
}

void add_cv(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path sentences, gold, out;
    std::optional<fs::path> json;
    std::size_t folds = 5;
    double grid = 0.001;
    TrainFlags flags;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("cv", "k-fold cross-validation of the baseline");
  sub->add_option("--sentences", o->sentences, "Sentences TSV")->required();
  sub->add_option("--gold", o->gold, "Gold TSV")->required();
  sub->add_option("--folds,-k", o->folds, "Number of folds")->capture_default_str();
  sub->add_option("--grid", o->grid, "Threshold grid step")->capture_default_str();
  sub->add_option("--out", o->out, "Metrics CSV (means and standard deviations)")->required();
  sub->add_option("--json", o->json, "Also write the full report as JSON");
  o->flags.add_to(sub);
  registry.add(sub, [o](Context& ctx) {
    Stage stage("cv");
    stage.seed(ctx.seed);
    const TrainConfig config = o->flags.resolve(ctx.seed);
    const auto sentences = read_sentences_tsv(stage.input(o->sentences));
    const auto gold = read_gold_tsv(stage.input(o->gold));
    const auto examples = join_examples(sentences, gold, config.features, ctx.jobs);
    const CvReport report = evaluate_cv(examples, o->folds, config, o->grid, ctx.jobs);
    for (const auto& w : report.warnings) warn(ctx, w);
    std::ostringstream buf;
    write_metrics_csv(buf, report);
    stage.write(o->out, buf.str());
    if (o->json) {
      std::ostringstream jbuf;
      write_metrics_json(jbuf, report);
      stage.write(*o->json, jbuf.str());
    }
    stage.finish();
    ctx.out << fmt::format("{}-fold CV on {} sentences; macro F1 {} ({})\n", o->folds,
                           examples.size(), io::fixed(report.macro[2].mean, 3),
                           io::fixed(report.macro[2].std, 3));
  });
}

}  // namespace

void add_model_commands(CLI::App& app, Registry& registry) {
  add_train(app, registry);
  add_predict(app, registry);
  add_import_scores(app, registry);
  add_calibrate(app, registry);
  add_evaluate(app, registry);
  add_cv(app, registry);
}

}  // namespace popscope::cli
