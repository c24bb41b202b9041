#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "popscope/aggregation.hpp"
#include "popscope/annotations.hpp"
#include "popscope/classifier.hpp"
#include "popscope/corpus.hpp"
#include "popscope/dictionary.hpp"
#include "popscope/error.hpp"
#include "popscope/parallel.hpp"
#include "popscope/predictions.hpp"
#include "popscope/table_io.hpp"
#include "stage.hpp"

namespace popscope::cli {

namespace {

ThresholdSet thresholds_or_published(Stage& stage, const std::optional<fs::path>& path) {
  if (!path) return ThresholdSet::published();
  return read_thresholds_json(stage.input(*path)).thresholds;
}

Level require_level(const std::string& name) {
  const auto level = parse_level(name);
  if (!level) throw CLI::ValidationError("--level", "expected speech, politician or party");
  return *level;
}

std::string dimension_list(const std::vector<Dimension>& dims) {
  std::vector<std::string_view> names;
  for (Dimension d : dims) names.push_back(column_name(d));
  return fmt::format("{}", fmt::join(names, ","));
}

void add_aggregate(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path predictions, sentences, speeches, out;
    std::string level = "party";
    std::size_t min_sentences = 4;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("aggregate", "Mean probabilities per speech, politician or party");
  sub->add_option("--predictions", o->predictions, "Predictions TSV")->required();
  sub->add_option("--sentences", o->sentences, "Sentences TSV")->required();
  sub->add_option("--speeches", o->speeches, "Speeches JSONL")->required();
  sub->add_option("--level", o->level, "speech, politician or party")->capture_default_str();
  sub->add_option("--min-sentences", o->min_sentences, "Skip shorter speeches")
      ->capture_default_str();
  sub->add_option("--out", o->out, "Aggregates CSV")->required();
  registry.add(sub, [o](Context& ctx) {
    Stage stage("aggregate");
    const Level level = require_level(o->level);
    const auto predictions = import_external_scores(stage.input(o->predictions));
    const auto sentences = read_sentences_tsv(stage.input(o->sentences));
    const auto speeches = load_speeches(stage, o->speeches);
    const AggregateResult result =
        unit_means(predictions, sentences, speeches, level, o->min_sentences);
    if (result.sentences_without_prediction > 0) {
      warn(ctx, fmt::format("{} sentence(s) have no prediction and were skipped",
                            result.sentences_without_prediction));
    }
    std::ostringstream buf;
    write_aggregates_csv(buf, result.scores);
    stage.write(o->out, buf.str());
    stage.finish();
    ctx.out << fmt::format("{} {} units; {} speech(es) below {} sentences excluded\n",
                           result.scores.size(), level_name(level), result.excluded_speeches,
                           o->min_sentences);
  });
}

void add_index(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path aggregates, out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("index", "Multiplicative populism index per unit");
  sub->add_option("--aggregates", o->aggregates, "Aggregates CSV")->required();
  sub->add_option("--out", o->out, "Index CSV")->required();
  registry.add(sub, [o](Context& ctx) {
    Stage stage("index");
    const auto scores = read_aggregates_csv(stage.input(o->aggregates));
    std::ostringstream buf;
    buf << "level,key,term,antielite,pplcentr,index\n";
    for (const auto& s : scores) {
      buf << level_name(s.level) << ',' << io::csv_field(s.key) << ',' << s.term << ','
          << io::fixed(s.means[index_of(Dimension::AntiElitism)], 8) << ','
          << io::fixed(s.means[index_of(Dimension::PeopleCentrism)], 8) << ','
          << io::fixed(populism_index(s), 8) << '\n';
    }
    stage.write(o->out, buf.str());
    stage.finish();
    ctx.out << fmt::format("{} units indexed\n", scores.size());
  });
}

void add_rank(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path aggregates, out;
    std::size_t top = 5;
    std::optional<std::string> level;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("rank", "Most populist units per term by index");
  sub->add_option("--aggregates", o->aggregates, "Aggregates CSV")->required();
  sub->add_option("--top", o->top, "Rows per term (0 = all)")->capture_default_str();
  sub->add_option("--level", o->level, "Only rank units of this level");
  sub->add_option("--out", o->out, "Ranking CSV")->required();
  registry.add(sub, [o](Context& ctx) {
    Stage stage("rank");
    const auto scores = read_aggregates_csv(stage.input(o->aggregates));
    const std::optional<Level> only = o->level ? std::optional(require_level(*o->level)) : std::nullopt;
    std::vector<RankEntry> entries;
    std::set<Level> levels;
    for (const auto& s : scores) {
      if (only && s.level != *only) continue;
      levels.insert(s.level);
      entries.push_back({s.key, s.term, populism_index(s)});
    }
    if (levels.size() > 1) {
      throw ValidationError("aggregates mix several levels; choose one with --level");
    }
    const auto ranked = rank_units(entries, o->top);
    std::ostringstream buf;
    buf << "term,rank,key,index\n";
    for (std::size_t i = 0, rank = 0; i < ranked.size(); ++i) {
      rank = (i == 0 || ranked[i].term != ranked[i - 1].term) ? 1 : rank + 1;
      buf << ranked[i].term << ',' << rank << ',' << io::csv_field(ranked[i].key) << ','
          << io::fixed(ranked[i].value, 8) << '\n';
    }
    stage.write(o->out, buf.str());
    stage.finish();
    ctx.out << fmt::format("{} ranked rows\n", ranked.size());
  });
}

void add_prevalence(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path predictions, out;
    std::optional<fs::path> thresholds;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("prevalence", "Share of sentences above each threshold");
  sub->add_option("--predictions", o->predictions, "Predictions TSV")->required();
  sub->add_option("--thresholds", o->thresholds,
                  "Thresholds JSON (default: the published checkpoint's thresholds)");
  sub->add_option("--out", o->out, "Prevalence CSV")->required();
  registry.add(sub, [o](Context& ctx) {
    Stage stage("prevalence");
    const auto predictions = import_external_scores(stage.input(o->predictions));
    const ThresholdSet thresholds = thresholds_or_published(stage, o->thresholds);
    const ProbVector pct = prevalence(predictions, thresholds);
    std::ostringstream buf;
    buf << "dimension,threshold,percent,n_sentences\n";
    for (Dimension d : kDimensions) {
      buf << column_name(d) << ',' << io::fixed(thresholds.t[index_of(d)], 6) << ','
          << io::fixed(pct[index_of(d)], 6) << ',' << predictions.size() << '\n';
    }
    stage.write(o->out, buf.str());
    stage.finish();
    ctx.out << fmt::format("prevalence (%): {}\n", fmt::join(pct, " / "));
  });
}

void add_correlate(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path aggregates, survey, out;
    std::optional<fs::path> party_map;
    std::optional<int> term;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("correlate", "Correlate party means with expert survey ratings");
  sub->add_option("--aggregates", o->aggregates, "Party-level aggregates CSV")->required();
  sub->add_option("--survey", o->survey, "Survey CSV")->required();
  sub->add_option("--party-map", o->party_map, "CSV mapping corpus groups to survey parties");
  sub->add_option("--term", o->term, "Electoral term to correlate (needed if several)");
  sub->add_option("--out", o->out, "Correlation CSV")->required();
  registry.add(sub, [o](Context& ctx) {
    Stage stage("correlate");
    const auto all = read_aggregates_csv(stage.input(o->aggregates));
    const auto survey = read_survey_csv(stage.input(o->survey));
    std::map<std::string, std::string> mapping;
    if (o->party_map) mapping = read_party_map_csv(stage.input(*o->party_map));
    std::set<int> terms;
    std::vector<AggregateScore> parties;
    for (const auto& s : all) {
      if (s.level != Level::Party) continue;
      if (o->term && s.term != *o->term) continue;
      terms.insert(s.term);
      parties.push_back(s);
    }
    if (terms.size() > 1) {
      throw ValidationError("aggregates cover several terms; choose one with --term");
    }
    const SurveyCorrelation corr = correlate_survey(parties, survey, mapping);
    for (const auto& g : corr.unmatched_groups) warn(ctx, "no survey row for group " + g);
    for (const auto& p : corr.unmatched_survey) warn(ctx, "survey party " + p + " not in corpus");
    std::ostringstream buf;
    buf << "dimension,survey_variable,r,n_parties\n";
    buf << "antielite,antielite_salience," << io::fixed(corr.r_antielite, 6) << ','
        << corr.matched.size() << '\n';
    buf << "pplcentr,people_vs_elite," << io::fixed(corr.r_pplcentr, 6) << ','
        << corr.matched.size() << '\n';
    stage.write(o->out, buf.str());
    stage.finish();
    ctx.out << fmt::format("r(antielite) = {}, r(pplcentr) = {} over {} parties\n",
                           io::fixed(corr.r_antielite, 3), io::fixed(corr.r_pplcentr, 3),
                           corr.matched.size());
  });
}

void add_oos_check(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path fixture, out;
    std::optional<fs::path> predictions, model, thresholds;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("oos-check",
                                 "Core-dimension flag rate on out-of-sample statements");
  sub->add_option("--fixture", o->fixture, "Statements TSV (id, text, expected_dimensions, source)")
      ->required();
  auto* pred = sub->add_option("--predictions", o->predictions, "Scores keyed by statement id");
  auto* model = sub->add_option("--model", o->model, "Score the statements with this model");
  pred->excludes(model);
  sub->add_option("--thresholds", o->thresholds,
                  "Thresholds JSON (default: the published checkpoint's thresholds)");
  sub->add_option("--out", o->out, "Per-statement results TSV")->required();
  registry.add(sub, [o](Context& ctx) {
    Stage stage("oos-check");
    const auto statements = read_oos_fixture(stage.input(o->fixture));
    if (statements.empty()) throw ValidationError("the statements fixture is empty");
    const ThresholdSet thresholds = thresholds_or_published(stage, o->thresholds);
    std::vector<PredictionVector> predictions(statements.size());
    if (o->model) {
      const BaselineModel m = load_model(stage.input(*o->model));
      std::vector<std::string> texts;
      for (const auto& s : statements) texts.push_back(s.text);
      const auto probs = predict_texts(m, texts, ctx.jobs);
      for (std::size_t i = 0; i < statements.size(); ++i) {
        predictions[i] = {statements[i].id, probs[i]};
      }
    } else if (o->predictions) {
      const auto scored = import_external_scores(stage.input(*o->predictions));
      std::unordered_map<std::string_view, const ProbVector*> by_id;
      for (const auto& pv : scored) by_id.emplace(pv.sentence_id, &pv.p);
      for (std::size_t i = 0; i < statements.size(); ++i) {
        auto it = by_id.find(statements[i].id);
        if (it == by_id.end()) {
          throw ValidationError(fmt::format("no score for statement {}", statements[i].id));
        }
        predictions[i] = {statements[i].id, *it->second};
      }
    } else {
      throw CLI::RequiredError("one of --predictions or --model");
    }
    const CoreFlags flags = any_core_rate(predictions, thresholds);
    const std::set<std::string> flagged(flags.flagged.begin(), flags.flagged.end());
    std::ostringstream buf;
    buf << "id\tp_antielite\tp_pplcentr\tp_left\tp_right\tflagged\texpected_dimensions\t"
           "predicted_dimensions\tsource\n";
    for (std::size_t i = 0; i < statements.size(); ++i) {
      const LabelVector labels = binarize(predictions[i].p, thresholds);
      std::vector<Dimension> predicted;
      for (Dimension d : kDimensions) {
        if (labels[index_of(d)]) predicted.push_back(d);
      }
      buf << io::tsv_field(statements[i].id);
      for (double p : predictions[i].p) buf << '\t' << io::fixed(p, 6);
      buf << '\t' << (flagged.count(statements[i].id) ? 1 : 0) << '\t'
          << dimension_list(statements[i].expected) << '\t' << dimension_list(predicted) << '\t'
          << io::tsv_field(statements[i].source) << '\n';
    }
    stage.write(o->out, buf.str());
    stage.finish();
    ctx.out << fmt::format("{} of {} statements flagged on a core dimension (rate {})\n",
                           flags.flagged.size(), statements.size(), io::fixed(flags.rate, 4));
  });
}

// ---------------------------------------------------------------------------
// report

std::string figure_text(const FigureData& data, Context& ctx) {
  for (const auto& w : data.warnings) warn(ctx, w);
  std::ostringstream buf;
  write_figure_csv(buf, data.rows);
  return buf.str();
}

void agreement_section(std::ostream& md, const AgreementReport& r) {
  md << "## Annotation agreement\n\n";
  md << fmt::format("{} sentences, {} coders per item.\n\n", r.total_sentences, r.coders_per_item);
  md << "| Label | N | Fleiss' kappa | Agreement (%) | Unanimous (%) |\n";
  md << "|---|---:|---:|---:|---:|\n";
  std::size_t total_pos = 0;
  for (const auto& d : r.dimensions) {
    total_pos += d.n_positive_gold;
    md << fmt::format("| {} | {} | {} | {} | {} |\n", display_name(d.dimension), d.n_positive_gold,
                      io::fixed(d.fleiss_kappa, 3), io::fixed(d.pct_agreement, 1),
                      io::fixed(d.pct_unanimous, 1));
  }
  md << fmt::format("| Total / Mean | {} | {} | {} | {} |\n\n", r.total_sentences,
                    io::fixed(r.mean_kappa, 3), io::fixed(r.mean_pct_agreement, 1),
                    io::fixed(r.mean_pct_unanimous, 1));
}

void metrics_section(std::ostream& md, const io::Table& table) {
  md << "## Classification performance\n\n";
  md << "| | Precision | Recall | F1 |\n|---|---:|---:|---:|\n";
  const auto c_dim = table.require_column("dimension", "metrics CSV");
  auto cell = [&](const io::Row& row, std::string_view name) {
    const std::string& value = row.fields[table.require_column(name, "metrics CSV")];
    const std::string& std_value =
        row.fields[table.require_column(fmt::format("{}_std", name), "metrics CSV")];
    const auto v = io::parse_double(value);
    if (!v) throw ValidationError(fmt::format("metrics CSV line {}: bad {}", row.line, name));
    if (std_value.empty()) return io::fixed(*v, 3);
    const auto s = io::parse_double(std_value);
    if (!s) throw ValidationError(fmt::format("metrics CSV line {}: bad {}_std", row.line, name));
    return fmt::format("{} ({})", io::fixed(*v, 3), io::fixed(*s, 3));
  };
  for (const auto& row : table.rows) {
    md << fmt::format("| {} | {} | {} | {} |\n", row.fields[c_dim], cell(row, "precision"),
                      cell(row, "recall"), cell(row, "f1"));
  }
  md << '\n';
}

void add_report(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path speeches, sentences, predictions, out_dir;
    std::optional<fs::path> thresholds, dictionary, annotations, metrics;
    std::size_t min_sentences = 4;
    std::size_t top = 5;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("report", "Figure data CSVs and a Markdown summary");
  sub->add_option("--speeches", o->speeches, "Speeches JSONL")->required();
  sub->add_option("--sentences", o->sentences, "Sentences TSV")->required();
  sub->add_option("--predictions", o->predictions, "Predictions TSV")->required();
  sub->add_option("--thresholds", o->thresholds,
                  "Thresholds JSON (default: the published checkpoint's thresholds)");
  sub->add_option("--dictionary", o->dictionary, "Dictionary for the comparison profile");
  sub->add_option("--annotations", o->annotations, "Annotation CSV for the agreement table");
  sub->add_option("--metrics", o->metrics, "Metrics CSV from cv or evaluate");
  sub->add_option("--min-sentences", o->min_sentences, "Skip shorter speeches")
      ->capture_default_str();
  sub->add_option("--top", o->top, "Politicians listed per term")->capture_default_str();
  sub->add_option("--out-dir", o->out_dir, "Output directory")->required();
  registry.add(sub, [o](Context& ctx) {
    Stage stage("report");
    const auto speeches = load_speeches(stage, o->speeches);
    const auto sentences = read_sentences_tsv(stage.input(o->sentences));
    const auto predictions = import_external_scores(stage.input(o->predictions));
    const ThresholdSet thresholds = thresholds_or_published(stage, o->thresholds);

    const auto party = unit_means(predictions, sentences, speeches, Level::Party, o->min_sentences);
    const auto speech =
        unit_means(predictions, sentences, speeches, Level::Speech, o->min_sentences);
    const auto politician =
        unit_means(predictions, sentences, speeches, Level::Politician, o->min_sentences);

    stage.write(o->out_dir / "figure_party_profile.csv",
                figure_text(party_profile_figure(party.scores), ctx));
    stage.write(o->out_dir / "figure_party_index.csv",
                figure_text(party_index_figure(speech.scores, speeches), ctx));
    if (o->dictionary) {
      const auto spec = DictionarySpec::from_file(stage.input(*o->dictionary));
      std::unordered_map<std::string_view, const SpeechRecord*> by_id;
      for (const auto& s : speeches) by_id.emplace(s.speech_id, &s);
      std::vector<DictionarySentence> items;
      for (const auto& s : sentences) {
        const SpeechRecord* sp = by_id.at(s.speech_id);
        items.push_back({sp->term, sp->group, s.text});
      }
      stage.write(o->out_dir / "figure_dictionary.csv",
                  figure_text(dictionary_figure(dict_party_profile(items, spec)), ctx));
    }

    std::ostringstream md;
    md << "# popscope report\n\n## Corpus\n\n";
    std::set<int> terms;
    for (const auto& s : speeches) terms.insert(s.term);
    md << fmt::format("{} speeches in term(s) {}; {} sentences, {} with predictions.\n\n",
                      speeches.size(), fmt::join(terms, ", "), sentences.size(),
                      predictions.size());
    if (o->annotations) {
      const AnnotationSet set = load_annotations(stage.input(*o->annotations));
      agreement_section(md, agreement_report(set.records));
    }
    if (o->metrics) {
      metrics_section(md, io::read_table(stage.input(*o->metrics), io::Format::Csv));
    }
    const ProbVector pct = prevalence(predictions, thresholds);
    md << "## Prevalence\n\n| Dimension | Threshold | Sentences above (%) |\n|---|---:|---:|\n";
    for (Dimension d : kDimensions) {
      md << fmt::format("| {} | {} | {} |\n", display_name(d),
                        io::fixed(thresholds.t[index_of(d)], 3), io::fixed(pct[index_of(d)], 2));
    }
    md << "\n## Most populist politicians\n\n";
    md << fmt::format("Index = mean anti-elitism x mean people-centrism over speeches with at "
                      "least {} sentences.\n\n",
                      o->min_sentences);
    std::vector<RankEntry> entries;
    for (const auto& s : politician.scores) entries.push_back({s.key, s.term, populism_index(s)});
    const auto ranked = rank_units(entries, o->top);
    md << "| Term | Rank | Politician | Index |\n|---:|---:|---|---:|\n";
    for (std::size_t i = 0, rank = 0; i < ranked.size(); ++i) {
      rank = (i == 0 || ranked[i].term != ranked[i - 1].term) ? 1 : rank + 1;
      md << fmt::format("| {} | {} | {} | {} |\n", ranked[i].term, rank, ranked[i].key,
                        io::fixed(ranked[i].value, 4));
    }
    md << "\n## Party profiles\n\n| Term | Group | Anti-Elitism | People-Centrism | Left | Right |"
          "\n|---:|---|---:|---:|---:|---:|\n";
    for (const auto& s : party.scores) {
      md << fmt::format("| {} | {} | {} | {} | {} | {} |\n", s.term, s.key,
                        io::fixed(s.means[0], 4), io::fixed(s.means[1], 4),
                        io::fixed(s.means[2], 4), io::fixed(s.means[3], 4));
    }
    stage.write(o->out_dir / "summary.md", md.str());
    stage.finish(o->out_dir / "manifest.json");
    ctx.out << fmt::format("report written to {}\n", o->out_dir.string());
  });
}

}  // namespace

void add_aggregation_commands(CLI::App& app, Registry& registry) {
  add_aggregate(app, registry);
  add_index(app, registry);
  add_rank(app, registry);
  add_prevalence(app, registry);
  add_correlate(app, registry);
  add_oos_check(app, registry);
  add_report(app, registry);
}

}  // namespace popscope::cli
