#include "popscope/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "popscope/error.hpp"
#include "popscope/parallel.hpp"
#include "popscope/rng.hpp"
#include "popscope/table_io.hpp"

namespace popscope {

// ---------------------------------------------------------------------------
// Splitting

std::vector<std::size_t> partition_sizes(std::size_t n, std::span<const double> ratios) {
  if (ratios.empty()) throw std::invalid_argument("no partition ratios given");
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0)) throw std::invalid_argument("partition ratios must be positive");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument(fmt::format("partition ratios sum to {}, not 1", sum));
  }
  std::vector<std::size_t> sizes(ratios.size());
  std::vector<double> remainder(ratios.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double exact = static_cast<double>(n) * ratios[i];
    sizes[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(sizes[i]);
    assigned += sizes[i];
  }
  std::vector<std::size_t> order(ratios.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < n; i = (i + 1) % order.size(), ++assigned) {
    ++sizes[order[i]];
  }
  return sizes;
}

namespace {

std::vector<std::vector<std::size_t>> assign_parts(std::size_t n, std::span<const double> ratios,
                                                   std::uint64_t seed,
                                                   std::span<const LabelVector> labels,
                                                   std::span<const Dimension> stratify_on) {
  const auto sizes = partition_sizes(n, ratios);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<std::vector<std::size_t>> parts(sizes.size());
  if (stratify_on.empty()) {
    std::size_t pos = 0;
    for (std::size_t p = 0; p < sizes.size(); ++p) {
      parts[p].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                      order.begin() + static_cast<std::ptrdiff_t>(pos + sizes[p]));
      pos += sizes[p];
    }
  } else {
    auto key = [&](std::size_t i) {
      unsigned k = 0;
      for (Dimension d : stratify_on) k = (k << 1) | (labels[i][index_of(d)] ? 1u : 0u);
      return k;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    // Walk the stratum-ordered list and give each item to the part furthest
    // behind its proportional share, so every stratum is spread evenly.
    std::vector<std::size_t> filled(sizes.size(), 0);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t best = sizes.size();
      long double best_deficit = 0;
      for (std::size_t p = 0; p < sizes.size(); ++p) {
        if (filled[p] >= sizes[p]) continue;
        const long double deficit =
            static_cast<long double>(sizes[p]) * static_cast<long double>(k + 1) -
            static_cast<long double>(filled[p]) * static_cast<long double>(n);
        if (best == sizes.size() || deficit > best_deficit) {
          best = p;
          best_deficit = deficit;
        }
      }
      parts[best].push_back(order[k]);
      ++filled[best];
    }
  }
  for (auto& part : parts) std::sort(part.begin(), part.end());
  return parts;
}

}  // namespace

SplitIndices split(std::span<const LabelVector> labels, const SplitSpec& spec) {
  if (labels.size() < 3) throw std::invalid_argument("split needs at least 3 items");
  auto parts = assign_parts(labels.size(), spec.ratios, spec.seed, labels, spec.stratify_on);
  return SplitIndices{std::move(parts[0]), std::move(parts[1]), std::move(parts[2])};
}

SplitIndices split(std::size_t n, const SplitSpec& spec) {
  if (!spec.stratify_on.empty()) {
    throw std::invalid_argument("stratified split needs labels");
  }
  if (n < 3) throw std::invalid_argument("split needs at least 3 items");
  auto parts = assign_parts(n, spec.ratios, spec.seed, {}, {});
  return SplitIndices{std::move(parts[0]), std::move(parts[1]), std::move(parts[2])};
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> holdout(
    std::span<const LabelVector> labels, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("holdout fraction must lie in (0, 1)");
  }
  const std::array<double, 2> ratios{1.0 - fraction, fraction};
  auto parts = assign_parts(labels.size(), ratios, seed, labels, kDimensions);
  return {std::move(parts[0]), std::move(parts[1])};
}

std::vector<Fold> kfold(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("kfold needs k >= 2");
  if (k > n) throw std::invalid_argument(fmt::format("kfold: k = {} exceeds {} items", k, n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<Fold> folds(k);
  std::vector<std::size_t> fold_of(n);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t len = n / k + (f < n % k ? 1 : 0);
    for (std::size_t i = pos; i < pos + len; ++i) fold_of[order[i]] = f;
    pos += len;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < k; ++f) {
      (fold_of[i] == f ? folds[f].test : folds[f].train).push_back(i);
    }
  }
  return folds;
}

// ---------------------------------------------------------------------------
// Metrics

Prf prf(std::size_t tp, std::size_t fp, std::size_t fn) {
  Prf out;
  const auto t = static_cast<double>(tp);
  if (tp + fp > 0) out.precision = t / static_cast<double>(tp + fp);
  if (tp + fn > 0) out.recall = t / static_cast<double>(tp + fn);
  // Harmonic mean of precision and recall, taken over the counts.
  if (tp > 0) out.f1 = 2.0 * t / static_cast<double>(2 * tp + fp + fn);
  return out;
}

MicroMacro micro_macro(const PerDimension<Counts>& counts) {
  Counts total;
  MicroMacro out;
  for (const auto& c : counts) {
    total += c;
    const Prf p = prf(c);
    out.macro.precision += p.precision;
    out.macro.recall += p.recall;
    out.macro.f1 += p.f1;
  }
  out.macro.precision /= kNumDimensions;
  out.macro.recall /= kNumDimensions;
  out.macro.f1 /= kNumDimensions;
  out.micro = prf(total);
  return out;
}

PerDimension<Counts> confusion(std::span<const LabelVector> predicted,
                               std::span<const LabelVector> gold) {
  if (predicted.size() != gold.size()) {
    throw std::invalid_argument("predicted and gold label lists differ in length");
  }
  PerDimension<Counts> counts{};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (std::size_t d = 0; d < kNumDimensions; ++d) {
      const bool p = predicted[i][d] != 0;
      const bool g = gold[i][d] != 0;
      auto& c = counts[d];
      if (p && g) ++c.tp;
      else if (p) ++c.fp;
      else if (g) ++c.fn;
      else ++c.tn;
    }
  }
  return counts;
}

MetricsReport metrics_from_counts(const PerDimension<Counts>& counts) {
  MetricsReport report;
  report.counts = counts;
  for (std::size_t d = 0; d < kNumDimensions; ++d) report.per_dimension[d] = prf(counts[d]);
  report.averages = micro_macro(counts);
  return report;
}

MetricsReport evaluate(std::span<const ProbVector> probs, std::span<const LabelVector> gold,
                       const ThresholdSet& thresholds) {
  if (probs.size() != gold.size()) {
    throw std::invalid_argument("probability and gold lists differ in length");
  }
  std::vector<LabelVector> predicted;
  predicted.reserve(probs.size());
  for (const auto& p : probs) predicted.push_back(binarize(p, thresholds));
  return metrics_from_counts(confusion(predicted, gold));
}

AlignedEval align_with_gold(std::span<const PredictionVector> predictions,
                            std::span<const GoldLabelRecord> gold) {
  std::unordered_map<std::string_view, const LabelVector*> by_id;
  for (const auto& g : gold) by_id.emplace(g.sentence_id, &g.labels);
  AlignedEval out;
  std::unordered_map<std::string_view, bool> covered;
  for (const auto& pv : predictions) {
    auto it = by_id.find(pv.sentence_id);
    if (it == by_id.end()) {
      ++out.unlabeled_predictions;
      continue;
    }
    covered.emplace(pv.sentence_id, true);
    out.ids.push_back(pv.sentence_id);
    out.probs.push_back(pv.p);
    out.gold.push_back(*it->second);
  }
  std::vector<std::string_view> missing;
  for (const auto& g : gold) {
    if (!covered.count(g.sentence_id)) missing.push_back(g.sentence_id);
  }
  if (!missing.empty()) {
    const std::size_t shown = std::min<std::size_t>(missing.size(), 10);
    throw ValidationError(fmt::format(
        "{} gold sentence(s) have no prediction: {}{}", missing.size(),
        fmt::join(missing.begin(), missing.begin() + static_cast<std::ptrdiff_t>(shown), ", "),
        missing.size() > shown ? ", ..." : ""));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Threshold search

std::vector<double> threshold_grid(double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.1)) {
    throw std::invalid_argument(
        fmt::format("grid step must lie in (0, 0.1], got {}", grid_step));
  }
  std::vector<double> grid;
  const double m = std::round(1.0 / grid_step);
  if (std::abs(m * grid_step - 1.0) < 1e-9) {
    const auto steps = static_cast<std::size_t>(m);
    for (std::size_t i = 1; i < steps; ++i) {
      grid.push_back(static_cast<double>(i) / static_cast<double>(steps));
    }
  } else {
    for (std::size_t i = 1;; ++i) {
      const double t = static_cast<double>(i) * grid_step;
      if (t > 1.0 - grid_step + 1e-12) break;
      grid.push_back(t);
    }
  }
  return grid;
}

ThresholdSearch search_threshold(std::span<const double> probs, std::span<const std::uint8_t> gold,
                                 double grid_step) {
  if (probs.size() != gold.size()) {
    throw std::invalid_argument("probability and gold lists differ in length");
  }
  if (probs.empty()) throw std::invalid_argument("threshold search needs at least one item");
  const auto grid = threshold_grid(grid_step);

  std::vector<std::pair<double, bool>> items(probs.size());
  std::size_t positives = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (gold[i] > 1) throw std::invalid_argument("gold labels must be 0 or 1");
    items[i] = {probs[i], gold[i] != 0};
    positives += gold[i];
  }
  if (positives == 0) return ThresholdSearch{grid.back(), 0.0, true};
  const std::size_t negatives = items.size() - positives;
  std::sort(items.begin(), items.end());

  ThresholdSearch best{grid.front(), -1.0, false};
  std::size_t next = 0;
  std::size_t pos_at_or_below = 0;
  std::size_t neg_at_or_below = 0;
  for (double t : grid) {
    while (next < items.size() && items[next].first <= t) {
      (items[next].second ? pos_at_or_below : neg_at_or_below) += 1;
      ++next;
    }
    const double f1 =
        prf(positives - pos_at_or_below, negatives - neg_at_or_below, pos_at_or_below).f1;
    if (f1 > best.f1) {
      best.threshold = t;
      best.f1 = f1;
    }
  }
  return best;
}

Calibration calibrate(std::span<const ProbVector> probs, std::span<const LabelVector> gold,
                      double grid_step) {
  if (probs.size() != gold.size()) {
    throw std::invalid_argument("probability and gold lists differ in length");
  }
  Calibration out;
  out.file.grid_step = grid_step;
  ProbVector f1{};
  std::vector<double> p(probs.size());
  std::vector<std::uint8_t> g(probs.size());
  for (Dimension d : kDimensions) {
    const std::size_t k = index_of(d);
    for (std::size_t i = 0; i < probs.size(); ++i) {
      p[i] = probs[i][k];
      g[i] = gold[i][k];
    }
    const auto result = search_threshold(p, g, grid_step);
    out.file.thresholds.t[k] = result.threshold;
    f1[k] = result.f1;
    if (result.no_positives) {
      out.warnings.push_back(fmt::format(
          "{}: no positive gold labels; threshold set to the top grid point {}", column_name(d),
          result.threshold));
    }
  }
  out.file.f1 = f1;
  return out;
}

// ---------------------------------------------------------------------------
// Cross-validation

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

namespace {

std::array<MeanStd, 3> summarize(std::span<const Prf> values) {
  std::vector<double> p, r, f;
  for (const auto& v : values) {
    p.push_back(v.precision);
    r.push_back(v.recall);
    f.push_back(v.f1);
  }
  return {mean_std(p), mean_std(r), mean_std(f)};
}

}  // namespace

CvReport evaluate_cv(std::span<const LabeledExample> dataset, std::size_t k,
                     const TrainConfig& config, double grid_step, unsigned jobs) {
  config.validate();
  threshold_grid(grid_step);
  std::vector<LabelVector> labels;
  labels.reserve(dataset.size());
  for (const auto& ex : dataset) labels.push_back(ex.gold);
  const auto folds = kfold(dataset.size(), k, config.seed);

  CvReport report;
  report.k = k;
  report.grid_step = grid_step;
  report.folds.resize(k);
  std::vector<std::vector<std::string>> fold_warnings(k);

  parallel_for(k, jobs, [&](std::size_t f) {
    const auto& fold = folds[f];
    std::vector<LabelVector> train_labels;
    for (std::size_t i : fold.train) train_labels.push_back(labels[i]);
    const auto [fit_pos, val_pos] =
        holdout(train_labels, 0.2, Rng::derive(config.seed, 2 * f + 1));
    if (fit_pos.empty() || val_pos.empty()) {
      throw std::invalid_argument(
          fmt::format("fold {} is too small to carve a validation slice", f + 1));
    }
    std::vector<LabeledExample> fit;
    fit.reserve(fit_pos.size());
    for (std::size_t i : fit_pos) fit.push_back(dataset[fold.train[i]]);

    TrainConfig fold_config = config;
    fold_config.seed = Rng::derive(config.seed, 2 * f);
    TrainResult trained = train_baseline(fit, fold_config);

    std::vector<ProbVector> val_probs;
    std::vector<LabelVector> val_gold;
    for (std::size_t i : val_pos) {
      const auto& ex = dataset[fold.train[i]];
      val_probs.push_back(predict_proba(trained.model, ex.features));
      val_gold.push_back(ex.gold);
    }
    Calibration cal = calibrate(val_probs, val_gold, grid_step);

    std::vector<ProbVector> test_probs;
    std::vector<LabelVector> test_gold;
    for (std::size_t i : fold.test) {
      test_probs.push_back(predict_proba(trained.model, dataset[i].features));
      test_gold.push_back(dataset[i].gold);
    }
    FoldResult& result = report.folds[f];
    result.fold = f + 1;
    result.n_train = fit.size();
    result.n_validation = val_pos.size();
    result.n_test = fold.test.size();
    result.thresholds = cal.file.thresholds;
    result.metrics = evaluate(test_probs, test_gold, cal.file.thresholds);
    for (auto& w : trained.warnings) fold_warnings[f].push_back(fmt::format("fold {}: {}", f + 1, w));
    for (auto& w : cal.warnings) fold_warnings[f].push_back(fmt::format("fold {}: {}", f + 1, w));
  });

  PerDimension<Counts> pooled{};
  for (Dimension d : kDimensions) {
    const std::size_t i = index_of(d);
    std::vector<Prf> values;
    for (const auto& fr : report.folds) values.push_back(fr.metrics.per_dimension[i]);
    report.per_dimension[i] = summarize(values);
  }
  std::vector<Prf> micro, macro;
  for (const auto& fr : report.folds) {
    micro.push_back(fr.metrics.averages.micro);
    macro.push_back(fr.metrics.averages.macro);
    for (std::size_t d = 0; d < kNumDimensions; ++d) pooled[d] += fr.metrics.counts[d];
  }
  report.micro = summarize(micro);
  report.macro = summarize(macro);
  report.pooled = metrics_from_counts(pooled);
  for (auto& ws : fold_warnings) {
    report.warnings.insert(report.warnings.end(), ws.begin(), ws.end());
  }
  return report;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

constexpr int kDigits = 6;

std::string counts_fields(const Counts& c) {
  return fmt::format("{},{},{},{}", c.tp, c.fp, c.fn, c.tn);
}

Counts sum_counts(const PerDimension<Counts>& counts) {
  Counts total;
  for (const auto& c : counts) total += c;
  return total;
}

nlohmann::ordered_json prf_json(const Prf& p) {
  nlohmann::ordered_json j;
  j["precision"] = p.precision;
  j["recall"] = p.recall;
  j["f1"] = p.f1;
  return j;
}

nlohmann::ordered_json counts_json(const Counts& c) {
  nlohmann::ordered_json j;
  j["tp"] = c.tp;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  j["tn"] = c.tn;
  return j;
}

nlohmann::ordered_json mean_std_json(const std::array<MeanStd, 3>& v) {
  nlohmann::ordered_json j;
  const char* names[3] = {"precision", "recall", "f1"};
  for (std::size_t i = 0; i < 3; ++i) {
    j[names[i]] = {{"mean", v[i].mean}, {"std", v[i].std}};
  }
  return j;
}

nlohmann::ordered_json metrics_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  auto& dims = j["dimensions"];
  for (Dimension d : kDimensions) {
    auto entry = prf_json(report.per_dimension[index_of(d)]);
    entry.update(counts_json(report.counts[index_of(d)]));
    dims[std::string(column_name(d))] = std::move(entry);
  }
  j["micro_avg"] = prf_json(report.averages.micro);
  j["macro_avg"] = prf_json(report.averages.macro);
  return j;
}

}  // namespace

void write_metrics_csv(std::ostream& out, const MetricsReport& report) {
  out << "dimension,precision,precision_std,recall,recall_std,f1,f1_std,tp,fp,fn,tn\n";
  auto row = [&](std::string_view label, const Prf& p, const std::string& counts) {
    out << io::csv_field(label) << ',' << io::fixed(p.precision, kDigits) << ",,"
        << io::fixed(p.recall, kDigits) << ",," << io::fixed(p.f1, kDigits) << ",," << counts
        << '\n';
  };
  for (Dimension d : kDimensions) {
    row(display_name(d), report.per_dimension[index_of(d)],
        counts_fields(report.counts[index_of(d)]));
  }
  row("micro avg", report.averages.micro, counts_fields(sum_counts(report.counts)));
  row("macro avg", report.averages.macro, ",,,");
}

void write_metrics_csv(std::ostream& out, const CvReport& report) {
  out << "dimension,precision,precision_std,recall,recall_std,f1,f1_std,tp,fp,fn,tn\n";
  auto row = [&](std::string_view label, const std::array<MeanStd, 3>& v,
                 const std::string& counts) {
    out << io::csv_field(label);
    for (const auto& ms : v) out << ',' << io::fixed(ms.mean, kDigits) << ',' << io::fixed(ms.std, kDigits);
    out << ',' << counts << '\n';
  };
  for (Dimension d : kDimensions) {
    row(display_name(d), report.per_dimension[index_of(d)],
        counts_fields(report.pooled.counts[index_of(d)]));
  }
  row("micro avg", report.micro, counts_fields(sum_counts(report.pooled.counts)));
  row("macro avg", report.macro, ",,,");
}

void write_metrics_json(std::ostream& out, const MetricsReport& report) {
  out << metrics_json(report).dump(2) << '\n';
}

void write_metrics_json(std::ostream& out, const CvReport& report) {
  nlohmann::ordered_json j;
  j["k"] = report.k;
  j["grid_step"] = report.grid_step;
  auto& dims = j["dimensions"];
  for (Dimension d : kDimensions) {
    dims[std::string(column_name(d))] = mean_std_json(report.per_dimension[index_of(d)]);
  }
  j["micro_avg"] = mean_std_json(report.micro);
  j["macro_avg"] = mean_std_json(report.macro);
  j["pooled"] = metrics_json(report.pooled);
  auto folds = nlohmann::ordered_json::array();
  for (const auto& fr : report.folds) {
    nlohmann::ordered_json f;
    f["fold"] = fr.fold;
    f["n_train"] = fr.n_train;
    f["n_validation"] = fr.n_validation;
    f["n_test"] = fr.n_test;
    auto& t = f["thresholds"];
    for (Dimension d : kDimensions) t[std::string(column_name(d))] = fr.thresholds.t[index_of(d)];
    f["metrics"] = metrics_json(fr.metrics);
    folds.push_back(std::move(f));
  }
  j["folds"] = std::move(folds);
  j["warnings"] = report.warnings;
  out << j.dump(2) << '\n';
}

}  // namespace popscope
