#include "popscope/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

#include "popscope/error.hpp"
#include "popscope/table_io.hpp"

namespace popscope {

ProbVector prevalence(std::span<const PredictionVector> predictions,
                      const ThresholdSet& thresholds) {
  if (predictions.empty()) throw std::invalid_argument("prevalence of an empty prediction set");
  PerDimension<std::size_t> above{};
  for (const auto& pv : predictions) {
    const LabelVector labels = binarize(pv.p, thresholds);
    for (std::size_t d = 0; d < kNumDimensions; ++d) above[d] += labels[d];
  }
  ProbVector out{};
  for (std::size_t d = 0; d < kNumDimensions; ++d) {
    out[d] = 100.0 * static_cast<double>(above[d]) / static_cast<double>(predictions.size());
  }
  return out;
}

std::string_view level_name(Level level) {
  switch (level) {
    case Level::Speech: return "speech";
    case Level::Politician: return "politician";
    case Level::Party: return "party";
  }
  return "party";
}

std::optional<Level> parse_level(std::string_view name) {
  if (name == "speech") return Level::Speech;
  if (name == "politician") return Level::Politician;
  if (name == "party") return Level::Party;
  return std::nullopt;
}

std::string unit_key(const SpeechRecord& speech, Level level) {
  switch (level) {
    case Level::Speech: return speech.speech_id;
    case Level::Politician:
      return fmt::format("{} {} ({})", speech.speaker_first, speech.speaker_last, speech.group);
    case Level::Party: return speech.group;
  }
  return speech.group;
}

namespace {

std::string list_ids(const std::vector<std::string_view>& ids) {
  const std::size_t shown = std::min<std::size_t>(ids.size(), 10);
  return fmt::format("{}{}",
                     fmt::join(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(shown), ", "),
                     ids.size() > shown ? ", ..." : "");
}

}  // namespace

AggregateResult unit_means(std::span<const PredictionVector> predictions,
                           std::span<const SentenceRecord> sentences,
                           std::span<const SpeechRecord> speeches, Level level,
                           std::size_t min_sentences) {
  if (min_sentences == 0) throw std::invalid_argument("min_sentences must be at least 1");
  std::unordered_map<std::string_view, const SpeechRecord*> speech_by_id;
  for (const auto& s : speeches) speech_by_id.emplace(s.speech_id, &s);

  std::unordered_map<std::string_view, std::size_t> sentence_counts;
  std::unordered_map<std::string_view, const SentenceRecord*> sentence_by_id;
  std::vector<std::string_view> dangling_speeches;
  for (const auto& s : sentences) {
    if (!speech_by_id.count(s.speech_id)) dangling_speeches.push_back(s.sentence_id);
    ++sentence_counts[s.speech_id];
    sentence_by_id.emplace(s.sentence_id, &s);
  }
  if (!dangling_speeches.empty()) {
    throw ValidationError(fmt::format("{} sentence(s) reference unknown speeches: {}",
                                      dangling_speeches.size(), list_ids(dangling_speeches)));
  }

  std::unordered_map<std::string_view, const ProbVector*> prob_by_sentence;
  std::vector<std::string_view> unknown;
  for (const auto& pv : predictions) {
    if (!sentence_by_id.count(pv.sentence_id)) unknown.push_back(pv.sentence_id);
    prob_by_sentence.emplace(pv.sentence_id, &pv.p);
  }
  if (!unknown.empty()) {
    throw ValidationError(fmt::format("{} prediction(s) reference unknown sentences: {}",
                                      unknown.size(), list_ids(unknown)));
  }

  AggregateResult result;
  for (const auto& [speech_id, count] : sentence_counts) {
    if (count < min_sentences) ++result.excluded_speeches;
  }

  struct Sum {
    ProbVector sums{};
    std::size_t n = 0;
  };
  std::map<std::pair<int, std::string>, Sum> units;
  for (const auto& s : sentences) {
    if (sentence_counts[s.speech_id] < min_sentences) continue;
    auto it = prob_by_sentence.find(s.sentence_id);
    if (it == prob_by_sentence.end()) {
      ++result.sentences_without_prediction;
      continue;
    }
    const SpeechRecord& speech = *speech_by_id.at(s.speech_id);
    Sum& u = units[{speech.term, unit_key(speech, level)}];
    for (std::size_t d = 0; d < kNumDimensions; ++d) u.sums[d] += (*it->second)[d];
    ++u.n;
  }
  for (const auto& [key, u] : units) {
    AggregateScore score;
    score.level = level;
    score.term = key.first;
    score.key = key.second;
    score.n_sentences = u.n;
    for (std::size_t d = 0; d < kNumDimensions; ++d) {
      score.means[d] = u.sums[d] / static_cast<double>(u.n);
    }
    result.scores.push_back(std::move(score));
  }
  return result;
}

double populism_index(const ProbVector& means) {
  return means[index_of(Dimension::AntiElitism)] * means[index_of(Dimension::PeopleCentrism)];
}

std::vector<RankEntry> rank_units(std::span<const RankEntry> entries, std::size_t top_n) {
  std::vector<RankEntry> sorted(entries.begin(), entries.end());
  std::sort(sorted.begin(), sorted.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.term != b.term) return a.term < b.term;
    if (a.value != b.value) return a.value > b.value;
    return a.key < b.key;
  });
  if (top_n == 0) return sorted;
  std::vector<RankEntry> out;
  std::size_t in_term = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted[i].term != sorted[i - 1].term) in_term = 0;
    if (in_term++ < top_n) out.push_back(sorted[i]);
  }
  return out;
}

Normalized normalize_max(std::span<const double> values) {
  Normalized out;
  out.values.assign(values.begin(), values.end());
  if (values.empty()) return out;
  const double max = *std::max_element(values.begin(), values.end());
  if (!(max > 0.0)) {
    out.normalized = false;
    return out;
  }
  for (double& v : out.values) v /= max;
  return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson: inputs differ in length");
  if (xs.size() < 2) throw std::invalid_argument("pearson needs at least 2 pairs");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0)) throw UndefinedResultError("pearson: xs has zero variance");
  if (!(syy > 0.0)) throw UndefinedResultError("pearson: ys has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

double require_number(const io::Row& row, std::size_t column, std::string_view name) {
  const auto v = io::parse_double(row.fields[column]);
  if (!v || !std::isfinite(*v)) {
    throw ValidationError(fmt::format("line {}: {} is not a finite number: '{}'", row.line, name,
                                      row.fields[column]));
  }
  return *v;
}

long long require_int(const io::Row& row, std::size_t column, std::string_view name) {
  const auto v = io::parse_int(row.fields[column]);
  if (!v) {
    throw ValidationError(fmt::format("line {}: {} is not an integer: '{}'", row.line, name,
                                      row.fields[column]));
  }
  return *v;
}

template <class F>
auto with_path(const std::filesystem::path& path, F&& read) {
  auto in = io::open_input(path);
  try {
    return read(in);
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace

std::vector<ExpertSurveyRow> read_survey_csv(std::istream& in) {
  const io::Table table = io::read_table(in, io::Format::Csv);
  const char* context = "survey CSV";
  const auto c_party = table.require_column("party", context);
  const auto c_ae = table.require_column("antielite_salience", context);
  const auto c_pe = table.require_column("people_vs_elite", context);
  const auto c_year = table.require_column("year", context);
  std::vector<ExpertSurveyRow> out;
  std::set<std::string> seen;
  for (const auto& row : table.rows) {
    ExpertSurveyRow r;
    r.party = row.fields[c_party];
    if (!seen.insert(r.party).second) {
      throw ValidationError(fmt::format("line {}: duplicate party '{}'", row.line, r.party));
    }
    r.antielite_salience = require_number(row, c_ae, "antielite_salience");
    r.people_vs_elite = require_number(row, c_pe, "people_vs_elite");
    r.year = static_cast<int>(require_int(row, c_year, "year"));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ExpertSurveyRow> read_survey_csv(const std::filesystem::path& path) {
  return with_path(path, [](std::istream& in) { return read_survey_csv(in); });
}

std::map<std::string, std::string> read_party_map_csv(const std::filesystem::path& path) {
  return with_path(path, [](std::istream& in) {
    const io::Table table = io::read_table(in, io::Format::Csv);
    const auto c_group = table.require_column("group", "party map CSV");
    const auto c_party = table.require_column("party", "party map CSV");
    std::map<std::string, std::string> out;
    for (const auto& row : table.rows) {
      if (!out.emplace(row.fields[c_group], row.fields[c_party]).second) {
        throw ValidationError(
            fmt::format("line {}: group '{}' mapped twice", row.line, row.fields[c_group]));
      }
    }
    return out;
  });
}

SurveyCorrelation correlate_survey(std::span<const AggregateScore> party_means,
                                   std::span<const ExpertSurveyRow> survey,
                                   const std::map<std::string, std::string>& mapping) {
  std::map<std::string, const ExpertSurveyRow*> by_party;
  for (const auto& row : survey) by_party.emplace(row.party, &row);
  std::map<std::string, const AggregateScore*> by_group;
  for (const auto& s : party_means) {
    if (!by_group.emplace(s.key, &s).second) {
      throw std::invalid_argument(
          fmt::format("party '{}' appears more than once; correlate one term at a time", s.key));
    }
  }

  SurveyCorrelation out;
  std::set<std::string> used;
  for (const auto& [group, score] : by_group) {
    auto m = mapping.find(group);
    const std::string& name = m != mapping.end() ? m->second : group;
    auto it = by_party.find(name);
    if (it == by_party.end()) {
      out.unmatched_groups.push_back(group);
      continue;
    }
    used.insert(name);
    MatchedParty mp;
    mp.group = group;
    mp.party = name;
    mp.antielite_mean = score->means[index_of(Dimension::AntiElitism)];
    mp.pplcentr_mean = score->means[index_of(Dimension::PeopleCentrism)];
    mp.antielite_salience = it->second->antielite_salience;
    mp.people_vs_elite = it->second->people_vs_elite;
    out.matched.push_back(std::move(mp));
  }
  for (const auto& [party, row] : by_party) {
    if (!used.count(party)) out.unmatched_survey.push_back(party);
  }
  if (out.matched.size() < 2) {
    throw ValidationError(fmt::format(
        "only {} party/parties matched the survey; at least 2 are needed", out.matched.size()));
  }
  std::vector<double> ae, sal, pc, pve;
  for (const auto& mp : out.matched) {
    ae.push_back(mp.antielite_mean);
    sal.push_back(mp.antielite_salience);
    pc.push_back(mp.pplcentr_mean);
    pve.push_back(mp.people_vs_elite);
  }
  out.r_antielite = pearson(ae, sal);
  out.r_pplcentr = pearson(pc, pve);
  return out;
}

CoreFlags any_core_rate(std::span<const PredictionVector> predictions,
                        const ThresholdSet& thresholds) {
  if (predictions.empty()) throw std::invalid_argument("core rate of an empty prediction set");
  CoreFlags out;
  const auto ae = index_of(Dimension::AntiElitism);
  const auto pc = index_of(Dimension::PeopleCentrism);
  for (const auto& pv : predictions) {
    if (pv.p[ae] > thresholds.t[ae] || pv.p[pc] > thresholds.t[pc]) {
      out.flagged.push_back(pv.sentence_id);
    }
  }
  out.rate = static_cast<double>(out.flagged.size()) / static_cast<double>(predictions.size());
  return out;
}

void write_aggregates_csv(std::ostream& out, std::span<const AggregateScore> scores) {
  out << "level,key,term,n_sentences,antielite,pplcentr,left,right,index\n";
  for (const auto& s : scores) {
    out << level_name(s.level) << ',' << io::csv_field(s.key) << ',' << s.term << ','
        << s.n_sentences;
    for (double m : s.means) out << ',' << io::fixed(m, 8);
    out << ',' << io::fixed(populism_index(s), 8) << '\n';
  }
}

std::vector<AggregateScore> read_aggregates_csv(std::istream& in) {
  const io::Table table = io::read_table(in, io::Format::Csv);
  const char* context = "aggregates CSV";
  const auto c_level = table.require_column("level", context);
  const auto c_key = table.require_column("key", context);
  const auto c_term = table.require_column("term", context);
  const auto c_n = table.require_column("n_sentences", context);
  PerDimension<std::size_t> c_dim{};
  for (Dimension d : kDimensions) c_dim[index_of(d)] = table.require_column(column_name(d), context);
  std::vector<AggregateScore> out;
  for (const auto& row : table.rows) {
    AggregateScore s;
    const auto level = parse_level(row.fields[c_level]);
    if (!level) {
      throw ValidationError(
          fmt::format("line {}: unknown level '{}'", row.line, row.fields[c_level]));
    }
    s.level = *level;
    s.key = row.fields[c_key];
    s.term = static_cast<int>(require_int(row, c_term, "term"));
    const auto n = require_int(row, c_n, "n_sentences");
    if (n < 1) throw ValidationError(fmt::format("line {}: n_sentences must be >= 1", row.line));
    s.n_sentences = static_cast<std::size_t>(n);
    for (Dimension d : kDimensions) {
      const double v = require_number(row, c_dim[index_of(d)], column_name(d));
      if (v < 0.0 || v > 1.0) {
        throw ValidationError(
            fmt::format("line {}: {} mean {} is outside [0, 1]", row.line, column_name(d), v));
      }
      s.means[index_of(d)] = v;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<AggregateScore> read_aggregates_csv(const std::filesystem::path& path) {
  return with_path(path, [](std::istream& in) { return read_aggregates_csv(in); });
}

namespace {

/// values[(term, group)][dimension name]; normalizes per (term, dimension).
FigureData build_figure(const std::map<std::pair<int, std::string>, std::vector<double>>& values,
                        const std::vector<std::string>& dimensions) {
  FigureData out;
  std::map<int, std::vector<std::pair<std::string, const std::vector<double>*>>> by_term;
  for (const auto& [key, v] : values) by_term[key.first].emplace_back(key.second, &v);
  for (const auto& [term, groups] : by_term) {
    std::vector<std::vector<double>> normalized(dimensions.size());
    for (std::size_t d = 0; d < dimensions.size(); ++d) {
      std::vector<double> column;
      for (const auto& g : groups) column.push_back((*g.second)[d]);
      auto n = normalize_max(column);
      if (!n.normalized) {
        out.warnings.push_back(fmt::format(
            "term {}: {} has no positive value; left unnormalized", term, dimensions[d]));
      }
      normalized[d] = std::move(n.values);
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (std::size_t d = 0; d < dimensions.size(); ++d) {
        out.rows.push_back(
            FigureRow{term, groups[g].first, dimensions[d], (*groups[g].second)[d], normalized[d][g]});
      }
    }
  }
  return out;
}

}  // namespace

FigureData party_profile_figure(std::span<const AggregateScore> party_scores) {
  std::map<std::pair<int, std::string>, std::vector<double>> values;
  for (const auto& s : party_scores) {
    if (s.level != Level::Party) {
      throw std::invalid_argument("party profile needs party-level scores");
    }
    values[{s.term, s.key}].assign(s.means.begin(), s.means.end());
  }
  std::vector<std::string> dims;
  for (Dimension d : kDimensions) dims.emplace_back(column_name(d));
  return build_figure(values, dims);
}

FigureData party_index_figure(std::span<const AggregateScore> speech_scores,
                              std::span<const SpeechRecord> speeches) {
  std::unordered_map<std::string_view, const SpeechRecord*> by_id;
  for (const auto& s : speeches) by_id.emplace(s.speech_id, &s);
  std::map<std::pair<int, std::string>, std::pair<double, std::size_t>> sums;
  for (const auto& s : speech_scores) {
    if (s.level != Level::Speech) {
      throw std::invalid_argument("party index figure needs speech-level scores");
    }
    auto it = by_id.find(s.key);
    if (it == by_id.end()) {
      throw ValidationError(fmt::format("speech '{}' is not in the corpus", s.key));
    }
    auto& acc = sums[{s.term, it->second->group}];
    acc.first += populism_index(s);
    ++acc.second;
  }
  std::map<std::pair<int, std::string>, std::vector<double>> values;
  for (const auto& [key, acc] : sums) {
    values[key] = {acc.first / static_cast<double>(acc.second)};
  }
  return build_figure(values, {"index"});
}

FigureData dictionary_figure(std::span<const GroupTermMean> means) {
  std::map<std::pair<int, std::string>, std::vector<double>> values;
  for (const auto& m : means) values[{m.term, m.group}] = {m.mean};
  return build_figure(values, {"dictionary"});
}

void write_figure_csv(std::ostream& out, std::span<const FigureRow> rows) {
  out << "term,group,dimension,value,normalized_value\n";
  for (const auto& r : rows) {
    out << r.term << ',' << io::csv_field(r.group) << ',' << r.dimension << ','
        << io::fixed(r.value, 8) << ',' << io::fixed(r.normalized_value, 8) << '\n';
  }
}

std::vector<OosStatement> read_oos_fixture(std::istream& in) {
  const io::Table table = io::read_table(in, io::Format::Tsv);
  const char* context = "out-of-sample fixture";
  const auto c_id = table.require_column("id", context);
  const auto c_text = table.require_column("text", context);
  const auto c_expected = table.require_column("expected_dimensions", context);
  const auto c_source = table.require_column("source", context);
  std::vector<OosStatement> out;
  std::set<std::string> ids;
  for (const auto& row : table.rows) {
    OosStatement s;
    s.id = row.fields[c_id];
    if (!ids.insert(s.id).second) {
      throw ValidationError(fmt::format("line {}: duplicate id '{}'", row.line, s.id));
    }
    s.text = row.fields[c_text];
    s.source = row.fields[c_source];
    std::string_view rest = row.fields[c_expected];
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view token = rest.substr(0, comma);
      if (!token.empty()) {
        const auto d = parse_dimension(token);
        if (!d) {
          throw ValidationError(fmt::format("line {}: unknown dimension '{}'", row.line, token));
        }
        s.expected.push_back(*d);
      }
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<OosStatement> read_oos_fixture(const std::filesystem::path& path) {
  return with_path(path, [](std::istream& in) { return read_oos_fixture(in); });
}

}  // namespace popscope
