#include "popscope/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "popscope/rng.hpp"

namespace popscope {

SamplePlan stratified_sample(std::span<const StratumItem> items, std::size_t size,
                             std::uint64_t seed) {
  if (size == 0) throw std::invalid_argument("sample size must be positive");
  if (size > items.size()) {
    throw std::invalid_argument(
        fmt::format("sample size {} exceeds corpus size {}", size, items.size()));
  }
  std::map<std::pair<std::string, int>, std::vector<std::string>> cells;
  std::set<std::string> groups;
  std::unordered_set<std::string> ids;
  for (const auto& item : items) {
    if (item.dict_score != 0 && item.dict_score != 1) {
      throw std::invalid_argument(
          fmt::format("sentence '{}': dictionary score must be 0 or 1", item.sentence_id));
    }
    if (!ids.insert(item.sentence_id).second) {
      throw std::invalid_argument(fmt::format("duplicate sentence id '{}'", item.sentence_id));
    }
    groups.insert(item.group);
    cells[{item.group, item.dict_score}].push_back(item.sentence_id);
  }
  for (const auto& g : groups) {
    cells.try_emplace({g, 0});
    cells.try_emplace({g, 1});
  }

  const std::size_t per_cell = size / (groups.size() * 2);
  SamplePlan plan;
  plan.round = 0;
  plan.size = size;
  plan.seed = seed;

  std::vector<std::vector<std::string>*> pools;
  std::uint64_t stream = 0;
  for (auto& [key, members] : cells) {
    std::sort(members.begin(), members.end());
    Rng rng(Rng::derive(seed, stream++));
    rng.shuffle(std::span<std::string>(members));
    CellReport report;
    report.group = key.first;
    report.score = key.second;
    report.available = members.size();
    report.target = per_cell;
    report.selected = std::min(per_cell, members.size());
    plan.strata.push_back(report);
    pools.push_back(&members);
  }

  std::size_t taken = 0;
  for (const auto& c : plan.strata) taken += c.selected;
  while (taken < size) {
    for (std::size_t c = 0; c < plan.strata.size() && taken < size; ++c) {
      if (plan.strata[c].selected < plan.strata[c].available) {
        ++plan.strata[c].selected;
        ++taken;
      }
    }
  }
  for (std::size_t c = 0; c < plan.strata.size(); ++c) {
    const auto& members = *pools[c];
    plan.selection.insert(plan.selection.end(), members.begin(),
                          members.begin() + static_cast<std::ptrdiff_t>(plan.strata[c].selected));
  }
  return plan;
}

double ambiguity(const ProbVector& p, const ThresholdSet& thresholds) {
  double best = std::abs(p[0] - thresholds.t[0]);
  for (std::size_t d = 1; d < kNumDimensions; ++d) {
    best = std::min(best, std::abs(p[d] - thresholds.t[d]));
  }
  return best;
}

SamplePlan active_sample(std::span<const PredictionVector> predictions,
                         const ThresholdSet& thresholds, const std::set<std::string>& labeled,
                         const PerDimension<std::size_t>& gold_counts, std::size_t size,
                         std::uint64_t seed, double edge_fraction, int round) {
  if (!(edge_fraction >= 0.0 && edge_fraction <= 1.0)) {
    throw std::invalid_argument("edge_fraction must lie in [0, 1]");
  }
  thresholds.validate();
  std::vector<const PredictionVector*> pool;
  std::unordered_set<std::string_view> seen;
  for (const auto& pv : predictions) {
    if (labeled.count(pv.sentence_id)) continue;
    if (!seen.insert(pv.sentence_id).second) {
      throw std::invalid_argument(fmt::format("duplicate sentence id '{}'", pv.sentence_id));
    }
    pool.push_back(&pv);
  }
  if (pool.empty()) throw std::invalid_argument("active sampling pool is empty");

  const auto rare = static_cast<std::size_t>(
      std::min_element(gold_counts.begin(), gold_counts.end()) - gold_counts.begin());

  const std::size_t want = std::min(size, pool.size());
  const auto edge_budget = std::min(
      want, static_cast<std::size_t>(std::floor(static_cast<double>(size) * edge_fraction)));

  std::vector<std::pair<double, const PredictionVector*>> by_ambiguity;
  by_ambiguity.reserve(pool.size());
  for (const auto* pv : pool) by_ambiguity.emplace_back(ambiguity(pv->p, thresholds), pv);
  std::sort(by_ambiguity.begin(), by_ambiguity.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second->sentence_id < b.second->sentence_id;
  });

  SamplePlan plan;
  plan.round = round;
  plan.size = size;
  plan.seed = seed;
  std::unordered_set<std::string_view> chosen;
  for (std::size_t i = 0; i < edge_budget; ++i) {
    plan.selection.push_back(by_ambiguity[i].second->sentence_id);
    chosen.insert(by_ambiguity[i].second->sentence_id);
  }

  std::vector<const PredictionVector*> rest;
  for (const auto* pv : pool) {
    if (!chosen.count(pv->sentence_id)) rest.push_back(pv);
  }
  std::sort(rest.begin(), rest.end(), [rare](const auto* a, const auto* b) {
    if (a->p[rare] != b->p[rare]) return a->p[rare] > b->p[rare];
    return a->sentence_id < b->sentence_id;
  });
  const std::size_t fill = want - edge_budget;
  for (std::size_t i = 0; i < fill; ++i) plan.selection.push_back(rest[i]->sentence_id);

  ActiveReport report;
  report.edge_fraction = edge_fraction;
  report.pool_size = pool.size();
  report.edge_selected = edge_budget;
  report.rarity_selected = fill;
  report.rarity_dimension = kDimensions[rare];
  plan.active = report;
  return plan;
}

void write_sample_plan_json(std::ostream& out, const SamplePlan& plan) {
  nlohmann::ordered_json j;
  j["round"] = plan.round;
  j["size"] = plan.size;
  j["seed"] = plan.seed;
  if (!plan.strata.empty()) {
    auto strata = nlohmann::ordered_json::array();
    for (const auto& c : plan.strata) {
      nlohmann::ordered_json cell;
      cell["group"] = c.group;
      cell["dict_score"] = c.score;
      cell["available"] = c.available;
      cell["target"] = c.target;
      cell["selected"] = c.selected;
      cell["shortfall"] = c.shortfall();
      strata.push_back(std::move(cell));
    }
    j["strata"] = std::move(strata);
  }
  if (plan.active) {
    const auto& a = *plan.active;
    nlohmann::ordered_json active;
    active["edge_fraction"] = a.edge_fraction;
    active["pool_size"] = a.pool_size;
    active["edge_selected"] = a.edge_selected;
    active["rarity_dimension"] = std::string(column_name(a.rarity_dimension));
    active["rarity_selected"] = a.rarity_selected;
    j["active"] = std::move(active);
  }
  j["selection"] = plan.selection;
  out << j.dump(2) << '\n';
}

void BandSpec::validate() const {
  if (!(center > 0.0 && center < 1.0)) {
    throw std::invalid_argument(fmt::format("band center must lie in (0, 1), got {}", center));
  }
  if (!(half_width > 0.0)) {
    throw std::invalid_argument(
        fmt::format("band half-width must be positive, got {}", half_width));
  }
}

BandGroups extract_band(std::span<const PredictionVector> predictions, const BandSpec& spec) {
  spec.validate();
  constexpr double kSlack = 1e-9;
  const double lo = spec.center - spec.half_width;
  const double hi = spec.center + spec.half_width;
  const std::size_t d = index_of(spec.dimension);
  BandGroups groups;
  for (const auto& pv : predictions) {
    const double p = pv.p[d];
    if (p < lo - kSlack) {
      groups.below.push_back(pv.sentence_id);
    } else if (p > hi + kSlack) {
      groups.above.push_back(pv.sentence_id);
    } else {
      groups.edge.push_back(pv.sentence_id);
    }
  }
  return groups;
}

}  // namespace popscope
