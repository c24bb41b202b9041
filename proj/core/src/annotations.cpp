#include "popscope/annotations.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

#include "popscope/error.hpp"
#include "popscope/table_io.hpp"

namespace popscope {

namespace {

std::uint8_t parse_binary(const io::Row& row, std::size_t column, std::string_view name) {
  const std::string& v = row.fields[column];
  if (v == "0") return 0;
  if (v == "1") return 1;
  throw ValidationError(
      fmt::format("line {}: column '{}' has non-binary value '{}'", row.line, name, v));
}

}  // namespace

AnnotationSet load_annotations(std::istream& in) {
  const io::Table table = io::read_table(in, io::Format::Csv);
  const char* context = "annotation CSV";
  const std::size_t c_sid = table.require_column("sentence_id", context);
  const std::size_t c_coder = table.require_column("coder_id", context);
  PerDimension<std::size_t> c_dim{};
  for (Dimension d : kDimensions) {
    c_dim[index_of(d)] = table.require_column(column_name(d), context);
  }
  const auto c_eliteless = table.column("eliteless");
  const auto c_pplmore = table.column("pplmore");
  if (c_eliteless.has_value() != c_pplmore.has_value()) {
    throw ValidationError("annotation CSV: columns eliteless and pplmore must appear together");
  }
  const auto c_unsure = table.column("unsure");

  AnnotationSet set;
  set.has_aux_columns = c_eliteless.has_value();
  set.has_unsure_column = c_unsure.has_value();
  set.records.reserve(table.rows.size());
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> seen;
  for (const auto& row : table.rows) {
    AnnotationRecord r;
    r.sentence_id = row.fields[c_sid];
    r.coder_id = row.fields[c_coder];
    if (r.sentence_id.empty() || r.coder_id.empty()) {
      throw ValidationError(fmt::format("line {}: empty sentence_id or coder_id", row.line));
    }
    for (Dimension d : kDimensions) {
      r.labels[index_of(d)] = parse_binary(row, c_dim[index_of(d)], column_name(d));
    }
    if (c_eliteless) {
      r.aux_labels = std::array<std::uint8_t, 2>{parse_binary(row, *c_eliteless, "eliteless"),
                                                 parse_binary(row, *c_pplmore, "pplmore")};
    }
    if (c_unsure) r.unsure = row.fields[*c_unsure];
    seen[{r.sentence_id, r.coder_id}].push_back(row.line);
    set.records.push_back(std::move(r));
  }
  std::string duplicates;
  for (const auto& [key, lines] : seen) {
    if (lines.size() < 2) continue;
    duplicates += fmt::format("\n  sentence_id={} coder_id={} (lines {})", key.first, key.second,
                              fmt::join(lines, ", "));
  }
  if (!duplicates.empty()) {
    throw ValidationError("duplicate (sentence_id, coder_id) pairs:" + duplicates);
  }
  return set;
}

AnnotationSet load_annotations(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  try {
    return load_annotations(in);
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_annotations(std::ostream& out, const AnnotationSet& set) {
  out << "sentence_id,coder_id,antielite,pplcentr,left,right";
  if (set.has_aux_columns) out << ",eliteless,pplmore";
  if (set.has_unsure_column) out << ",unsure";
  out << '\n';
  for (const auto& r : set.records) {
    std::vector<std::string> fields{r.sentence_id, r.coder_id};
    for (auto v : r.labels) fields.push_back(std::to_string(v));
    if (set.has_aux_columns) {
      const auto aux = r.aux_labels.value_or(std::array<std::uint8_t, 2>{});
      fields.push_back(std::to_string(aux[0]));
      fields.push_back(std::to_string(aux[1]));
    }
    if (set.has_unsure_column) fields.push_back(r.unsure.value_or(""));
    out << io::csv_line(fields) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Gold labels

std::vector<GoldLabelRecord> aggregate_gold(std::span<const AnnotationRecord> records) {
  if (records.empty()) throw std::invalid_argument("aggregate_gold: no annotation records");
  std::vector<GoldLabelRecord> gold;
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<std::vector<std::string>> coders;
  for (const auto& r : records) {
    auto [it, inserted] = slot.try_emplace(r.sentence_id, gold.size());
    if (inserted) {
      gold.push_back(GoldLabelRecord{r.sentence_id, {}, 0});
      coders.emplace_back();
    }
    auto& g = gold[it->second];
    for (std::size_t d = 0; d < kNumDimensions; ++d) g.labels[d] |= r.labels[d];
    coders[it->second].push_back(r.coder_id);
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto& c = coders[i];
    std::sort(c.begin(), c.end());
    gold[i].coder_count =
        static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
  }
  return gold;
}

void write_gold_tsv(std::ostream& out, std::span<const GoldLabelRecord> gold) {
  out << "sentence_id\tantielite\tpplcentr\tleft\tright\n";
  for (const auto& g : gold) {
    out << io::tsv_field(g.sentence_id);
    for (auto v : g.labels) out << '\t' << static_cast<int>(v);
    out << '\n';
  }
}

std::vector<GoldLabelRecord> read_gold_tsv(std::istream& in) {
  const io::Table table = io::read_table(in, io::Format::Tsv);
  const char* context = "gold TSV";
  const std::size_t c_sid = table.require_column("sentence_id", context);
  PerDimension<std::size_t> c_dim{};
  for (Dimension d : kDimensions) {
    c_dim[index_of(d)] = table.require_column(column_name(d), context);
  }
  std::vector<GoldLabelRecord> out;
  std::unordered_map<std::string, std::size_t> ids;
  for (const auto& row : table.rows) {
    GoldLabelRecord g;
    g.sentence_id = row.fields[c_sid];
    if (!ids.try_emplace(g.sentence_id, row.line).second) {
      throw ValidationError(
          fmt::format("line {}: duplicate sentence_id '{}'", row.line, g.sentence_id));
    }
    for (Dimension d : kDimensions) {
      g.labels[index_of(d)] = parse_binary(row, c_dim[index_of(d)], column_name(d));
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<GoldLabelRecord> read_gold_tsv(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  try {
    return read_gold_tsv(in);
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

// ---------------------------------------------------------------------------
// Agreement

namespace {

void check_table(std::span<const ItemVotes> table, int coders_per_item) {
  if (coders_per_item < 2) throw std::invalid_argument("coders_per_item must be at least 2");
  if (table.empty()) throw std::invalid_argument("agreement table is empty");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].raters != coders_per_item) {
      throw std::invalid_argument(fmt::format(
          "ragged agreement table: item {} has {} ratings, expected {}", i, table[i].raters,
          coders_per_item));
    }
    if (table[i].positive < 0 || table[i].positive > table[i].raters) {
      throw std::invalid_argument(
          fmt::format("item {} has {} positive votes out of {}", i, table[i].positive,
                      table[i].raters));
    }
  }
}

// Mean over items of the fraction of agreeing rater pairs.
double observed_agreement(std::span<const ItemVotes> table, int n) {
  long double agreeing_pairs = 0;
  for (const auto& item : table) {
    const long long a = item.positive;
    const long long b = n - item.positive;
    agreeing_pairs += static_cast<long double>(a * (a - 1) + b * (b - 1));
  }
  const long double pairs_per_item = static_cast<long double>(n) * (n - 1);
  return static_cast<double>(agreeing_pairs / (pairs_per_item * table.size()));
}

}  // namespace

double fleiss_kappa(std::span<const ItemVotes> table, int coders_per_item) {
  check_table(table, coders_per_item);
  const double p_bar = observed_agreement(table, coders_per_item);
  long long positives = 0;
  for (const auto& item : table) positives += item.positive;
  const long long ratings = static_cast<long long>(table.size()) * coders_per_item;
  const double p1 = static_cast<double>(positives) / static_cast<double>(ratings);
  const double p0 = static_cast<double>(ratings - positives) / static_cast<double>(ratings);
  const double p_e = p0 * p0 + p1 * p1;
  if (p_e >= 1.0) return 1.0;
  return (p_bar - p_e) / (1.0 - p_e);
}

double percent_agreement(std::span<const ItemVotes> table, int coders_per_item) {
  check_table(table, coders_per_item);
  return 100.0 * observed_agreement(table, coders_per_item);
}

double unanimous_agreement(std::span<const ItemVotes> table, int coders_per_item) {
  check_table(table, coders_per_item);
  const auto unanimous = std::count_if(table.begin(), table.end(), [&](const ItemVotes& v) {
    return v.positive == 0 || v.positive == coders_per_item;
  });
  return 100.0 * static_cast<double>(unanimous) / static_cast<double>(table.size());
}

namespace {

struct SentenceVotes {
  int coders = 0;
  PerDimension<int> positive{};
};

std::vector<SentenceVotes> collect_votes(std::span<const AnnotationRecord> records) {
  std::vector<SentenceVotes> votes;
  std::unordered_map<std::string_view, std::size_t> slot;
  for (const auto& r : records) {
    auto [it, inserted] = slot.try_emplace(r.sentence_id, votes.size());
    if (inserted) votes.emplace_back();
    auto& v = votes[it->second];
    ++v.coders;
    for (std::size_t d = 0; d < kNumDimensions; ++d) v.positive[d] += r.labels[d];
  }
  return votes;
}

int modal_coder_count(const std::vector<SentenceVotes>& votes) {
  std::map<int, std::size_t> freq;
  for (const auto& v : votes) ++freq[v.coders];
  int best = 0;
  std::size_t best_count = 0;
  for (const auto& [coders, count] : freq) {
    if (count >= best_count) {
      best = coders;
      best_count = count;
    }
  }
  return best;
}

}  // namespace

PerDimension<std::vector<ItemVotes>> vote_tables(std::span<const AnnotationRecord> records,
                                                 int coders_per_item) {
  PerDimension<std::vector<ItemVotes>> tables;
  for (const auto& v : collect_votes(records)) {
    if (v.coders != coders_per_item) continue;
    for (std::size_t d = 0; d < kNumDimensions; ++d) {
      tables[d].push_back(ItemVotes{v.positive[d], v.coders});
    }
  }
  return tables;
}

AgreementReport agreement_report(std::span<const AnnotationRecord> records,
                                 std::optional<int> coders_per_item) {
  const auto votes = collect_votes(records);
  if (votes.empty()) throw std::invalid_argument("agreement_report: no annotation records");
  AgreementReport report;
  report.total_sentences = votes.size();
  report.coders_per_item = coders_per_item.value_or(modal_coder_count(votes));
  for (const auto& v : votes) {
    if (v.coders != report.coders_per_item) ++report.excluded_items;
  }
  const auto tables = vote_tables(records, report.coders_per_item);
  for (Dimension d : kDimensions) {
    const std::size_t i = index_of(d);
    auto& row = report.dimensions[i];
    row.dimension = d;
    row.n_sentences = tables[i].size();
    row.n_positive_gold = static_cast<std::size_t>(std::count_if(
        votes.begin(), votes.end(), [&](const SentenceVotes& v) { return v.positive[i] > 0; }));
    row.fleiss_kappa = fleiss_kappa(tables[i], report.coders_per_item);
    row.pct_agreement = percent_agreement(tables[i], report.coders_per_item);
    row.pct_unanimous = unanimous_agreement(tables[i], report.coders_per_item);
    report.mean_kappa += row.fleiss_kappa / kNumDimensions;
    report.mean_pct_agreement += row.pct_agreement / kNumDimensions;
    report.mean_pct_unanimous += row.pct_unanimous / kNumDimensions;
  }
  return report;
}

void write_agreement_csv(std::ostream& out, const AgreementReport& report) {
  out << "label,n,fleiss_kappa,pct_agreement,pct_unanimous,n_rated\n";
  for (const auto& row : report.dimensions) {
    out << io::csv_line({std::string(display_name(row.dimension)),
                         std::to_string(row.n_positive_gold), io::fixed(row.fleiss_kappa, 6),
                         io::fixed(row.pct_agreement, 4), io::fixed(row.pct_unanimous, 4),
                         std::to_string(row.n_sentences)})
        << '\n';
  }
  out << io::csv_line({"Total / Mean", std::to_string(report.total_sentences),
                       io::fixed(report.mean_kappa, 6), io::fixed(report.mean_pct_agreement, 4),
                       io::fixed(report.mean_pct_unanimous, 4),
                       std::to_string(report.total_sentences - report.excluded_items)})
      << '\n';
}

std::vector<CooccurrenceWarning> validate_ideology_cooccurrence(
    std::span<const AnnotationRecord> records) {
  std::vector<CooccurrenceWarning> warnings;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& l = records[i].labels;
    const bool host = l[index_of(Dimension::LeftWing)] || l[index_of(Dimension::RightWing)];
    const bool core =
        l[index_of(Dimension::AntiElitism)] || l[index_of(Dimension::PeopleCentrism)];
    if (host && !core) warnings.push_back({i, records[i].sentence_id, records[i].coder_id});
  }
  return warnings;
}

std::vector<GroupLabelCounts> label_counts_by_group(std::span<const AnnotationRecord> records,
                                                    std::span<const SentenceRecord> sentences,
                                                    std::span<const SpeechRecord> speeches) {
  std::unordered_map<std::string_view, const SpeechRecord*> speech_by_id;
  std::map<std::pair<int, std::string>, GroupLabelCounts> rows;
  for (const auto& s : speeches) {
    speech_by_id.emplace(s.speech_id, &s);
    auto key = std::make_pair(s.term, s.group);
    rows.try_emplace(key, GroupLabelCounts{s.term, s.group, {}, {}});
  }
  std::unordered_map<std::string_view, std::string_view> speech_of_sentence;
  for (const auto& s : sentences) speech_of_sentence.emplace(s.sentence_id, s.speech_id);

  for (const auto& r : records) {
    const auto sit = speech_of_sentence.find(r.sentence_id);
    if (sit == speech_of_sentence.end()) {
      throw ValidationError(fmt::format("dangling sentence_id '{}'", r.sentence_id));
    }
    const auto pit = speech_by_id.find(sit->second);
    if (pit == speech_by_id.end()) {
      throw ValidationError(fmt::format("sentence '{}' refers to unknown speech_id '{}'",
                                        r.sentence_id, sit->second));
    }
    auto& row = rows.at({pit->second->term, pit->second->group});
    for (std::size_t d = 0; d < kNumDimensions; ++d) row.labels[d] += r.labels[d];
    if (r.aux_labels) {
      row.aux[0] += (*r.aux_labels)[0];
      row.aux[1] += (*r.aux_labels)[1];
    }
  }
  std::vector<GroupLabelCounts> out;
  out.reserve(rows.size());
  for (auto& [key, row] : rows) out.push_back(std::move(row));
  return out;
}

void write_label_counts_csv(std::ostream& out, std::span<const GroupLabelCounts> counts) {
  out << "term,group,antielite,pplcentr,eliteless,pplmore,left,right\n";
  for (const auto& c : counts) {
    out << io::csv_line({std::to_string(c.term), c.group,
                         std::to_string(c.labels[index_of(Dimension::AntiElitism)]),
                         std::to_string(c.labels[index_of(Dimension::PeopleCentrism)]),
                         std::to_string(c.aux[0]), std::to_string(c.aux[1]),
                         std::to_string(c.labels[index_of(Dimension::LeftWing)]),
                         std::to_string(c.labels[index_of(Dimension::RightWing)])})
        << '\n';
  }
}

}  // namespace popscope
