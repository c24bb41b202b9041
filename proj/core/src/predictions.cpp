#include "popscope/predictions.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "popscope/error.hpp"
#include "popscope/table_io.hpp"

namespace popscope {

namespace {

std::string probability_column(Dimension d) { return fmt::format("p_{}", column_name(d)); }

}  // namespace

void write_predictions_tsv(std::ostream& out, std::span<const PredictionVector> predictions) {
  out << "sentence_id";
  for (Dimension d : kDimensions) out << '\t' << probability_column(d);
  out << '\n';
  for (const auto& pv : predictions) {
    out << io::tsv_field(pv.sentence_id);
    for (double p : pv.p) out << '\t' << io::fixed(p, 6);
    out << '\n';
  }
}

std::vector<PredictionVector> import_external_scores(std::istream& in) {
  const io::Table table = io::read_table(in, io::Format::Tsv);
  const char* context = "predictions TSV";
  const std::size_t c_sid = table.require_column("sentence_id", context);
  PerDimension<std::size_t> c_dim{};
  for (Dimension d : kDimensions) {
    c_dim[index_of(d)] = table.require_column(probability_column(d), context);
  }
  std::vector<PredictionVector> out;
  out.reserve(table.rows.size());
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& row : table.rows) {
    PredictionVector pv;
    pv.sentence_id = row.fields[c_sid];
    if (pv.sentence_id.empty()) {
      throw ValidationError(fmt::format("line {}: empty sentence_id", row.line));
    }
    if (auto [it, fresh] = seen.try_emplace(pv.sentence_id, row.line); !fresh) {
      throw ValidationError(fmt::format("line {}: duplicate sentence_id '{}' (first on line {})",
                                        row.line, pv.sentence_id, it->second));
    }
    for (Dimension d : kDimensions) {
      const std::string& field = row.fields[c_dim[index_of(d)]];
      const auto value = io::parse_double(field);
      if (!value || !std::isfinite(*value)) {
        throw ValidationError(fmt::format("line {}: {} is not a number: '{}'", row.line,
                                          probability_column(d), field));
      }
      if (*value < 0.0 || *value > 1.0) {
        throw ValidationError(fmt::format("line {}: {} = {} is outside [0, 1]", row.line,
                                          probability_column(d), field));
      }
      pv.p[index_of(d)] = *value;
    }
    out.push_back(std::move(pv));
  }
  return out;
}

std::vector<PredictionVector> import_external_scores(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  try {
    return import_external_scores(in);
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void ThresholdSet::validate() const {
  for (Dimension d : kDimensions) {
    const double v = t[index_of(d)];
    if (!(v > 0.0 && v < 1.0)) {
      throw std::invalid_argument(
          fmt::format("threshold for {} must lie in (0, 1), got {}", column_name(d), v));
    }
  }
}

void write_thresholds_json(std::ostream& out, const ThresholdFile& file) {
  nlohmann::ordered_json j;
  if (file.grid_step) j["grid_step"] = *file.grid_step;
  auto& t = j["thresholds"];
  for (Dimension d : kDimensions) t[std::string(column_name(d))] = file.thresholds.t[index_of(d)];
  if (file.f1) {
    auto& f = j["f1"];
    for (Dimension d : kDimensions) f[std::string(column_name(d))] = (*file.f1)[index_of(d)];
  }
  out << j.dump(2) << '\n';
}

ThresholdFile read_thresholds_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("thresholds JSON: {}", e.what()));
  }
  auto read_vector = [&](const char* key) {
    ProbVector v{};
    const auto& obj = j.at(key);
    for (Dimension d : kDimensions) {
      const auto& value = obj.at(std::string(column_name(d)));
      if (!value.is_number()) {
        throw ValidationError(fmt::format("thresholds JSON: {}.{} is not a number", key,
                                          column_name(d)));
      }
      v[index_of(d)] = value.get<double>();
    }
    return v;
  };
  ThresholdFile file;
  try {
    if (!j.is_object() || !j.contains("thresholds")) {
      throw ValidationError("thresholds JSON: missing \"thresholds\" object");
    }
    file.thresholds.t = read_vector("thresholds");
    if (j.contains("grid_step")) file.grid_step = j.at("grid_step").get<double>();
    if (j.contains("f1")) file.f1 = read_vector("f1");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("thresholds JSON: {}", e.what()));
  }
  try {
    file.thresholds.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(fmt::format("thresholds JSON: {}", e.what()));
  }
  return file;
}

ThresholdFile read_thresholds_json(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  try {
    return read_thresholds_json(in);
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

LabelVector binarize(const ProbVector& p, const ThresholdSet& thresholds) {
  LabelVector out{};
  for (std::size_t d = 0; d < kNumDimensions; ++d) out[d] = p[d] > thresholds.t[d] ? 1 : 0;
  return out;
}

std::vector<LabelVector> binarize(std::span<const PredictionVector> predictions,
                                  const ThresholdSet& thresholds) {
  std::vector<LabelVector> out;
  out.reserve(predictions.size());
  for (const auto& pv : predictions) out.push_back(binarize(pv.p, thresholds));
  return out;
}

}  // namespace popscope
