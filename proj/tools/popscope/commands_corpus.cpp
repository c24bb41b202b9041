#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "popscope/annotations.hpp"
#include "popscope/corpus.hpp"
#include "popscope/dictionary.hpp"
#include "popscope/error.hpp"
#include "popscope/parallel.hpp"
#include "popscope/table_io.hpp"
#include "stage.hpp"

namespace popscope::cli {

namespace {

void add_ingest(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path input, out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("ingest", "Validate a speech export and write canonical JSONL");
  sub->add_option("--input", o->input, "Speeches as JSONL or CSV")->required();
  sub->add_option("--out", o->out, "Output speeches JSONL")->required();
  registry.add(sub, [o](Context& ctx) {
    Stage stage("ingest");
    const IngestResult result = ingest_speeches(stage.input(o->input));
    const auto& r = result.report;
    for (const auto& issue : r.malformed) {
      warn(ctx, fmt::format("{} line {}: {}", o->input.filename().string(), issue.line,
                            issue.message));
    }
    std::ostringstream buf;
    write_speeches_jsonl(buf, result.speeches);
    stage.write(o->out, buf.str());
    stage.finish();
    ctx.out << fmt::format(
        "read {} rows: kept {}, dropped {} (empty text {}, missing group {}, malformed {})\n",
        r.rows_read, r.kept, r.dropped(), r.dropped_empty_text, r.dropped_missing_group,
        r.malformed.size());
  });
}

void add_segment(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path speeches, out;
    std::optional<fs::path> abbreviations;
    bool keep_initial = false;
    std::size_t min_sentences = 1;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("segment", "Split speeches into sentences");
  sub->add_option("--speeches", o->speeches, "Speeches JSONL")->required();
  sub->add_option("--out", o->out, "Output sentences TSV")->required();
  sub->add_option("--abbreviations", o->abbreviations,
                  "Abbreviation list (default: built-in German list)");
  sub->add_flag("--keep-initial", o->keep_initial,
                "Keep the first sentence of every speech (dropped by default)");
  sub->add_option("--min-sentences", o->min_sentences,
                  "Drop speeches with fewer surviving sentences")
      ->capture_default_str();
  registry.add(sub, [o](Context& ctx) {
    Stage stage("segment");
    const auto speeches = load_speeches(stage, o->speeches);
    const SentenceSegmenter segmenter(
        o->abbreviations ? AbbreviationList::from_file(stage.input(*o->abbreviations))
                         : AbbreviationList::builtin());
    std::vector<std::vector<SentenceRecord>> parts(speeches.size());
    parallel_for(speeches.size(), ctx.jobs,
                 [&](std::size_t i) { parts[i] = segmenter.segment(speeches[i]); });
    std::vector<SentenceRecord> sentences;
    for (auto& p : parts) {
      sentences.insert(sentences.end(), std::make_move_iterator(p.begin()),
                       std::make_move_iterator(p.end()));
    }
    const std::size_t segmented = sentences.size();
    if (!o->keep_initial) sentences = drop_initial_sentences(std::move(sentences));
    sentences = filter_min_length(std::move(sentences), o->min_sentences);
    std::ostringstream buf;
    write_sentences_tsv(buf, sentences);
    stage.write(o->out, buf.str());
    stage.finish();
    ctx.out << fmt::format("{} speeches -> {} sentences, {} kept after filters\n",
                           speeches.size(), segmented, sentences.size());
  });
}

void add_agree(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path annotations, out;
    std::optional<int> coders;
    std::optional<fs::path> label_counts, sentences, speeches;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("agree", "Inter-annotator agreement per dimension");
  sub->add_option("--annotations", o->annotations, "Annotation CSV")->required();
  sub->add_option("--out", o->out, "Agreement report CSV")->required();
  sub->add_option("--coders-per-item", o->coders,
                  "Raters per sentence (default: the most common count)");
  auto* counts = sub->add_option("--label-counts", o->label_counts,
                                 "Also write label sums per term and group");
  sub->add_option("--sentences", o->sentences, "Sentences TSV (for --label-counts)")
      ->needs(counts);
  sub->add_option("--speeches", o->speeches, "Speeches JSONL (for --label-counts)")
      ->needs(counts);
  registry.add(sub, [o](Context& ctx) {
    Stage stage("agree");
    const AnnotationSet set = load_annotations(stage.input(o->annotations));
    const AgreementReport report = agreement_report(set.records, o->coders);
    for (const auto& w : validate_ideology_cooccurrence(set.records)) {
      warn(ctx, fmt::format("sentence {} coder {}: host ideology without a core dimension",
                            w.sentence_id, w.coder_id));
    }
    if (report.excluded_items > 0) {
      warn(ctx, fmt::format("{} sentence(s) not rated by exactly {} coders were excluded",
                            report.excluded_items, report.coders_per_item));
    }
    std::ostringstream buf;
    write_agreement_csv(buf, report);
    stage.write(o->out, buf.str());
    if (o->label_counts) {
      if (!o->sentences || !o->speeches) {
        throw CLI::RequiredError("--label-counts needs --sentences and --speeches");
      }
      const auto speeches = load_speeches(stage, *o->speeches);
      const auto sentences = read_sentences_tsv(stage.input(*o->sentences));
      std::ostringstream counts_buf;
      write_label_counts_csv(counts_buf, label_counts_by_group(set.records, sentences, speeches));
      stage.write(*o->label_counts, counts_buf.str());
    }
    stage.finish();
    ctx.out << fmt::format("{} sentences, {} coders per item, mean kappa {}\n",
                           report.total_sentences, report.coders_per_item,
                           io::fixed(report.mean_kappa, 3));
  });
}

void add_gold(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path annotations, out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("gold", "Gold labels by the any-coder rule");
  sub->add_option("--annotations", o->annotations, "Annotation CSV")->required();
  sub->add_option("--out", o->out, "Gold TSV")->required();
  registry.add(sub, [o](Context& ctx) {
    Stage stage("gold");
    const AnnotationSet set = load_annotations(stage.input(o->annotations));
    const auto gold = aggregate_gold(set.records);
    std::ostringstream buf;
    write_gold_tsv(buf, gold);
    stage.write(o->out, buf.str());
    stage.finish();
    PerDimension<std::size_t> positives{};
    for (const auto& g : gold) {
      for (std::size_t d = 0; d < kNumDimensions; ++d) positives[d] += g.labels[d];
    }
    ctx.out << fmt::format("{} sentences; positives {}\n", gold.size(), fmt::join(positives, "/"));
  });
}

void add_dict_score(CLI::App& app, Registry& registry) {
  struct Opts {
    fs::path sentences, dictionary, out;
    std::optional<fs::path> speeches, profile;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("dict-score", "Score sentences with a pattern dictionary");
  sub->add_option("--sentences", o->sentences, "Sentences TSV")->required();
  sub->add_option("--dictionary", o->dictionary, "Dictionary file")->required();
  sub->add_option("--out", o->out, "Per-sentence scores TSV")->required();
  auto* profile = sub->add_option("--profile", o->profile,
                                  "Also write mean scores per term and group (CSV)");
  sub->add_option("--speeches", o->speeches, "Speeches JSONL (for --profile)")->needs(profile);
  registry.add(sub, [o](Context& ctx) {
    Stage stage("dict-score");
    const auto sentences = read_sentences_tsv(stage.input(o->sentences));
    const auto spec = DictionarySpec::from_file(stage.input(o->dictionary));
    std::vector<DictMatch> matches(sentences.size());
    parallel_for(sentences.size(), ctx.jobs,
                 [&](std::size_t i) { matches[i] = dict_score(sentences[i].text, spec); });
    std::ostringstream buf;
    buf << "sentence_id\tscore\tmatch_count\tmatched_patterns\n";
    std::size_t positive = 0;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const auto& m = matches[i];
      positive += static_cast<std::size_t>(m.score);
      buf << io::tsv_field(sentences[i].sentence_id) << '\t' << m.score << '\t' << m.match_count
          << '\t' << io::tsv_field(fmt::format("{}", fmt::join(m.matched_patterns, "|"))) << '\n';
    }
    stage.write(o->out, buf.str());
    if (o->profile) {
      if (!o->speeches) throw CLI::RequiredError("--profile needs --speeches");
      const auto speeches = load_speeches(stage, *o->speeches);
      std::unordered_map<std::string_view, const SpeechRecord*> by_id;
      for (const auto& s : speeches) by_id.emplace(s.speech_id, &s);
      std::vector<DictionarySentence> items;
      for (const auto& s : sentences) {
        auto it = by_id.find(s.speech_id);
        if (it == by_id.end()) {
          throw ValidationError(fmt::format("sentence {} references unknown speech {}",
                                            s.sentence_id, s.speech_id));
        }
        items.push_back({it->second->term, it->second->group, s.text});
      }
      std::ostringstream pbuf;
      pbuf << "term,group,n_sentences,mean\n";
      for (const auto& m : dict_party_profile(items, spec)) {
        pbuf << m.term << ',' << io::csv_field(m.group) << ',' << m.n_sentences << ','
             << io::fixed(m.mean, 8) << '\n';
      }
      stage.write(*o->profile, pbuf.str());
    }
    stage.finish();
    ctx.out << fmt::format("{} of {} sentences match\n", positive, sentences.size());
  });
}

}  // namespace

void add_corpus_commands(CLI::App& app, Registry& registry) {
  add_ingest(app, registry);
  add_segment(app, registry);
  add_agree(app, registry);
  add_gold(app, registry);
  add_dict_score(app, registry);
}

}  // namespace popscope::cli
