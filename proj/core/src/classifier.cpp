#include "popscope/classifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "popscope/error.hpp"
#include "popscope/parallel.hpp"
#include "popscope/table_io.hpp"

namespace popscope {

BaselineModel::BaselineModel(FeatureConfig features, std::uint64_t seed)
    : features_(features), seed_(seed) {
  features_.validate();
  weights_.assign(kNumDimensions * static_cast<std::size_t>(features_.hash_size()), 0.0);
}

PerDimension<double> BaselineModel::logits(const FeatureVector& x) const {
  PerDimension<double> z = bias_;
  const std::uint32_t size = hash_size();
  for (const auto& e : x.entries) {
    if (e.index >= size) {
      throw std::invalid_argument(fmt::format(
          "feature index {} outside the model's hash space of {} buckets", e.index, size));
    }
  }
  for (std::size_t d = 0; d < kNumDimensions; ++d) {
    const double* row = weights_.data() + d * size;
    double acc = z[d];
    for (const auto& e : x.entries) acc += row[e.index] * e.weight;
    z[d] = acc;
  }
  return z;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

ProbVector predict_proba(const BaselineModel& model, const FeatureVector& features) {
  ProbVector p = model.logits(features);
  for (double& v : p) v = sigmoid(v);
  return p;
}

std::vector<ProbVector> predict_texts(const BaselineModel& model, std::span<const std::string> texts,
                                      unsigned jobs) {
  std::vector<ProbVector> out(texts.size());
  parallel_for(texts.size(), jobs, [&](std::size_t i) {
    out[i] = predict_proba(model, featurize(texts[i], model.features()));
  });
  return out;
}

namespace {

double clamped_bce(double p, std::uint8_t y) {
  const double q = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
  return y ? -std::log(q) : -std::log1p(-q);
}

}  // namespace

namespace detail {

namespace {

template <class Deref, class Batch>
double accumulate_impl(const BaselineModel& model, const Batch& batch, Deref deref,
                       std::span<double> grad_weights, PerDimension<double>& grad_bias,
                       std::vector<std::uint32_t>* touched) {
  if (batch.empty()) throw std::invalid_argument("bce loss needs a non-empty batch");
  const double scale = 1.0 / (static_cast<double>(batch.size()) * kNumDimensions);
  const std::uint32_t size = model.hash_size();
  double loss = 0.0;
  for (const auto& item : batch) {
    const LabeledExample& ex = deref(item);
    const ProbVector p = predict_proba(model, ex.features);
    for (std::size_t d = 0; d < kNumDimensions; ++d) {
      loss += clamped_bce(p[d], ex.gold[d]);
      const double residual = (p[d] - static_cast<double>(ex.gold[d])) * scale;
      grad_bias[d] += residual;
      double* row = grad_weights.data() + d * size;
      for (const auto& e : ex.features.entries) row[e.index] += residual * e.weight;
    }
    if (touched) {
      for (const auto& e : ex.features.entries) touched->push_back(e.index);
    }
  }
  return loss * scale;
}

}  // namespace

double accumulate_bce_gradient(const BaselineModel& model, std::span<const LabeledExample> batch,
                               std::span<double> grad_weights, PerDimension<double>& grad_bias,
                               std::vector<std::uint32_t>* touched) {
  return accumulate_impl(
      model, batch, [](const LabeledExample& e) -> const LabeledExample& { return e; },
      grad_weights, grad_bias, touched);
}

double accumulate_bce_gradient(const BaselineModel& model,
                               std::span<const LabeledExample* const> batch,
                               std::span<double> grad_weights, PerDimension<double>& grad_bias,
                               std::vector<std::uint32_t>* touched) {
  return accumulate_impl(
      model, batch, [](const LabeledExample* e) -> const LabeledExample& { return *e; },
      grad_weights, grad_bias, touched);
}

}  // namespace detail

LossAndGradient bce_loss_and_grad(const BaselineModel& model, std::span<const LabeledExample> batch) {
  LossAndGradient out;
  out.gradient.weights.assign(model.weights().size(), 0.0);
  out.loss = detail::accumulate_bce_gradient(model, batch, out.gradient.weights,
                                             out.gradient.bias, nullptr);
  return out;
}

double bce_loss(const BaselineModel& model, std::span<const LabeledExample> batch) {
  if (batch.empty()) throw std::invalid_argument("bce loss needs a non-empty batch");
  double loss = 0.0;
  for (const auto& ex : batch) {
    const ProbVector p = predict_proba(model, ex.features);
    for (std::size_t d = 0; d < kNumDimensions; ++d) loss += clamped_bce(p[d], ex.gold[d]);
  }
  return loss / (static_cast<double>(batch.size()) * kNumDimensions);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr char kMagic[4] = {'P', 'S', 'B', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

template <class T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

void put_f64(std::ostream& out, double v) { put(out, std::bit_cast<std::uint64_t>(v)); }

template <class T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw ValidationError("model file truncated");
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(T{bytes[i]} << (8 * i));
  return value;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get<std::uint64_t>(in)); }

}  // namespace

void save_model(std::ostream& out, const BaselineModel& model) {
  const auto& f = model.features();
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kFormatVersion);
  put<std::uint32_t>(out, f.hash_bits);
  put<std::uint8_t>(out, f.lowercase);
  put<std::uint8_t>(out, f.word_unigrams);
  put<std::uint8_t>(out, f.word_bigrams);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(f.char_ngram_min));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(f.char_ngram_max));
  put<std::uint64_t>(out, model.seed());
  for (double b : model.bias()) put_f64(out, b);
  const std::uint32_t size = model.hash_size();
  const auto w = model.weights();
  for (std::size_t d = 0; d < kNumDimensions; ++d) {
    const auto row = w.subspan(d * size, size);
    std::uint32_t count = 0;
    for (double v : row) count += std::bit_cast<std::uint64_t>(v) != 0;
    put<std::uint32_t>(out, count);
    for (std::uint32_t i = 0; i < size; ++i) {
      if (std::bit_cast<std::uint64_t>(row[i]) == 0) continue;
      put<std::uint32_t>(out, i);
      put_f64(out, row[i]);
    }
  }
  if (!out) throw IoError("failed to write model");
}

BaselineModel load_model(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) {
    throw ValidationError("not a popscope model file (bad magic)");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kFormatVersion) {
    throw ValidationError(fmt::format("unsupported model format version {}", version));
  }
  FeatureConfig f;
  f.hash_bits = get<std::uint32_t>(in);
  f.lowercase = get<std::uint8_t>(in) != 0;
  f.word_unigrams = get<std::uint8_t>(in) != 0;
  f.word_bigrams = get<std::uint8_t>(in) != 0;
  f.char_ngram_min = get<std::uint8_t>(in);
  f.char_ngram_max = get<std::uint8_t>(in);
  try {
    f.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(fmt::format("model file: {}", e.what()));
  }
  const auto seed = get<std::uint64_t>(in);
  BaselineModel model(f, seed);
  for (double& b : model.bias()) b = get_f64(in);
  const std::uint32_t size = model.hash_size();
  for (Dimension d : kDimensions) {
    const auto count = get<std::uint32_t>(in);
    if (count > size) throw ValidationError("model file: weight count exceeds hash space");
    for (std::uint32_t k = 0; k < count; ++k) {
      const auto index = get<std::uint32_t>(in);
      if (index >= size) throw ValidationError("model file: weight index out of range");
      model.weight(d, index) = get_f64(in);
    }
  }
  for (double v : model.weights()) {
    if (!std::isfinite(v)) throw ValidationError("model file: non-finite weight");
  }
  for (double v : model.bias()) {
    if (!std::isfinite(v)) throw ValidationError("model file: non-finite bias");
  }
  return model;
}

void save_model(const std::filesystem::path& path, const BaselineModel& model) {
  std::ostringstream buf(std::ios::binary);
  save_model(buf, model);
  io::write_file_atomic(path, buf.str());
}

BaselineModel load_model(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  try {
    return load_model(in);
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace popscope
