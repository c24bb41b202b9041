#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "popscope/annotations.hpp"
#include "popscope/corpus.hpp"
#include "popscope/dictionary.hpp"
#include "popscope/error.hpp"
#include "popscope/parallel.hpp"
#include "popscope/predictions.hpp"
#include "popscope/sampling.hpp"
#include "popscope/table_io.hpp"
#include "stage.hpp"

namespace popscope::cli {

namespace {

/// sentence_id,text for the selected sentences, in selection order.
std::string export_csv(const SamplePlan& plan, std::span<const SentenceRecord> sentences) {
  std::unordered_map<std::string_view, const SentenceRecord*> by_id;
  for (const auto& s : sentences) by_id.emplace(s.sentence_id, &s);
  std::ostringstream buf;
  buf << "sentence_id,text\n";
  for (const auto& id : plan.selection) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw ValidationError(fmt::format("selected sentence {} is not in the sentences file", id));
    }
    buf << io::csv_line({id, it->second->text}) << '\n';
  }
  return buf.str();
}

void add_sample_stratified(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path sentences, speeches, dictionary, out;
    std::optional<fs::path> export_path;
    std::size_t size = 2858;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("sample-stratified",
                                 "Initial annotation round stratified by group and dictionary score");
  sub->add_option("--sentences", o->sentences, "Sentences TSV")->required();
  sub->add_option("--speeches", o->speeches, "Speeches JSONL")->required();
  sub->add_option("--dictionary", o->dictionary, "Dictionary file")->required();
  sub->add_option("--size", o->size, "Sentences to draw")->capture_default_str();
  sub->add_option("--out", o->out, "Sample plan JSON")->required();
  sub->add_option("--export", o->export_path, "Also write the selection as CSV (sentence_id,text)");
  registry.add(sub, [o](Context& ctx) {
    Stage stage("sample-stratified");
    stage.seed(ctx.seed);
    const auto sentences = read_sentences_tsv(stage.input(o->sentences));
    const auto speeches = load_speeches(stage, o->speeches);
    const auto spec = DictionarySpec::from_file(stage.input(o->dictionary));
    std::unordered_map<std::string_view, const SpeechRecord*> by_id;
    for (const auto& s : speeches) by_id.emplace(s.speech_id, &s);
    std::vector<StratumItem> items(sentences.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      auto it = by_id.find(sentences[i].speech_id);
      if (it == by_id.end()) {
        throw ValidationError(fmt::format("sentence {} references unknown speech {}",
                                          sentences[i].sentence_id, sentences[i].speech_id));
      }
      items[i].sentence_id = sentences[i].sentence_id;
      items[i].group = it->second->group;
    }
    parallel_for(sentences.size(), ctx.jobs, [&](std::size_t i) {
      items[i].dict_score = dict_score(sentences[i].text, spec).score;
    });
    const SamplePlan plan = stratified_sample(items, o->size, ctx.seed);
    std::ostringstream buf;
    write_sample_plan_json(buf, plan);
    stage.write(o->out, buf.str());
    if (o->export_path) stage.write(*o->export_path, export_csv(plan, sentences));
    stage.finish();
    for (const auto& c : plan.strata) {
      if (c.shortfall() > 0) {
        warn(ctx, fmt::format("cell ({}, {}) has {} sentence(s), {} short of its share",
                              c.group, c.score, c.available, c.shortfall()));
      }
    }
    ctx.out << fmt::format("selected {} sentences from {} cells\n", plan.selection.size(),
                           plan.strata.size());
  });
}

void add_sample_active(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path predictions, thresholds, gold, out;
    std::optional<fs::path> sentences, export_path;
    std::size_t size = 500;
    double edge_fraction = 0.5;
    int round = 1;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("sample-active",
                                 "Active-learning round: edge cases plus the rarest dimension");
  sub->add_option("--predictions", o->predictions, "Predictions TSV for the candidate pool")
      ->required();
  sub->add_option("--thresholds", o->thresholds, "Thresholds JSON")->required();
  sub->add_option("--gold", o->gold, "Gold TSV of already labeled sentences")->required();
  sub->add_option("--size", o->size, "Sentences to draw")->capture_default_str();
  sub->add_option("--edge-fraction", o->edge_fraction, "Share chosen by threshold distance")
      ->capture_default_str();
  sub->add_option("--round", o->round, "Round number recorded in the plan")->capture_default_str();
  sub->add_option("--out", o->out, "Sample plan JSON")->required();
  auto* exp = sub->add_option("--export", o->export_path,
                              "Also write the selection as CSV (needs --sentences)");
  sub->add_option("--sentences", o->sentences, "Sentences TSV (for --export)")->needs(exp);
  registry.add(sub, [o](Context& ctx) {
    Stage stage("sample-active");
    stage.seed(ctx.seed);
    const auto predictions = import_external_scores(stage.input(o->predictions));
    const auto thresholds = read_thresholds_json(stage.input(o->thresholds)).thresholds;
    const auto gold = read_gold_tsv(stage.input(o->gold));
    std::set<std::string> labeled;
    PerDimension<std::size_t> counts{};
    for (const auto& g : gold) {
      labeled.insert(g.sentence_id);
      for (std::size_t d = 0; d < kNumDimensions; ++d) counts[d] += g.labels[d];
    }
    const SamplePlan plan = active_sample(predictions, thresholds, labeled, counts, o->size,
                                          ctx.seed, o->edge_fraction, o->round);
    std::ostringstream buf;
    write_sample_plan_json(buf, plan);
    stage.write(o->out, buf.str());
    if (o->export_path) {
      if (!o->sentences) throw CLI::RequiredError("--export needs --sentences");
      stage.write(*o->export_path,
                  export_csv(plan, read_sentences_tsv(stage.input(*o->sentences))));
    }
    stage.finish();
    ctx.out << fmt::format("selected {} of {} unlabeled sentences ({} edge cases, {} for {})\n",
                           plan.selection.size(), plan.active->pool_size,
                           plan.active->edge_selected, plan.active->rarity_selected,
                           column_name(plan.active->rarity_dimension));
  });
}

void add_band(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path predictions, out;
    std::string dimension;
    std::optional<fs::path> thresholds;
    std::optional<double> center;
    double half_width = 0.15;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("band", "Split sentences into below/edge/above a threshold band");
  sub->add_option("--predictions", o->predictions, "Predictions TSV")->required();
  sub->add_option("--dimension", o->dimension, "antielite, pplcentr, left or right")->required();
  auto* th = sub->add_option("--thresholds", o->thresholds, "Take the center from this file");
  sub->add_option("--center", o->center, "Band center")->excludes(th);
  sub->add_option("--half-width", o->half_width, "Band half-width")->capture_default_str();
  sub->add_option("--out", o->out, "TSV of sentence_id, band, probability")->required();
  registry.add(sub, [o](Context& ctx) {
    Stage stage("band");
    const auto dim = parse_dimension(o->dimension);
    if (!dim) throw CLI::ValidationError("--dimension", "unknown dimension '" + o->dimension + "'");
    const auto predictions = import_external_scores(stage.input(o->predictions));
    BandSpec spec;
    spec.dimension = *dim;
    spec.half_width = o->half_width;
    if (o->thresholds) {
      spec.center = read_thresholds_json(stage.input(*o->thresholds)).thresholds.t[index_of(*dim)];
    } else if (o->center) {
      spec.center = *o->center;
    } else {
      spec.center = ThresholdSet::published().t[index_of(*dim)];
    }
    const BandGroups groups = extract_band(predictions, spec);
    std::unordered_map<std::string_view, const char*> band_of;
    for (const auto& id : groups.below) band_of.emplace(id, "below");
    for (const auto& id : groups.edge) band_of.emplace(id, "edge");
    for (const auto& id : groups.above) band_of.emplace(id, "above");
    std::ostringstream buf;
    buf << "sentence_id\tband\tprobability\n";
    for (const auto& pv : predictions) {
      buf << io::tsv_field(pv.sentence_id) << '\t' << band_of.at(pv.sentence_id) << '\t'
          << io::fixed(pv.p[index_of(*dim)], 6) << '\n';
    }
    stage.write(o->out, buf.str());
    stage.finish();
    ctx.out << fmt::format("{}: [{}, {}] below {}, edge {}, above {}\n", column_name(*dim),
                           io::fixed(spec.center - spec.half_width, 3),
                           io::fixed(spec.center + spec.half_width, 3), groups.below.size(),
                           groups.edge.size(), groups.above.size());
  });
}

}  // namespace

void add_sampling_commands(CLI::App& app, Registry& registry) {
  add_sample_stratified(app, registry);
  add_sample_active(app, registry);
  add_band(app, registry);
}

}  // namespace popscope::cli
