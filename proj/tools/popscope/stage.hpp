#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "popscope/corpus.hpp"

namespace popscope::cli {

namespace fs = std::filesystem;

struct Context {
  std::ostream& out;
  std::ostream& err;
  unsigned jobs = 1;
  std::uint64_t seed = 1;
};

/// Tracks one subcommand's inputs and outputs and writes its manifest.
///
/// The manifest lists file names (not full paths) with SHA-256 digests, the
/// tool version, the subcommand and the seed, so identical runs in different
/// directories produce identical manifests.
class Stage {
 public:
  explicit Stage(std::string subcommand) : subcommand_(std::move(subcommand)) {}

  /// Fails with IoError if the file does not exist.
  const fs::path& input(const fs::path& path);
  void seed(std::uint64_t value) { seed_ = value; }
  void write(const fs::path& path, const std::string& content);

  /// Writes the manifest next to the first output as "<name>.manifest.json",
  /// or to `path` when given.
  void finish(std::optional<fs::path> path = std::nullopt);

 private:
  std::string subcommand_;
  std::optional<std::uint64_t> seed_;
  std::vector<fs::path> inputs_;
  std::vector<fs::path> outputs_;
};

using Action = std::function<void(Context&)>;

struct Registry {
  std::vector<std::pair<CLI::App*, Action>> commands;
  void add(CLI::App* sub, Action action) { commands.emplace_back(sub, std::move(action)); }
};

void add_corpus_commands(CLI::App& app, Registry& registry);
void add_sampling_commands(CLI::App& app, Registry& registry);
void add_model_commands(CLI::App& app, Registry& registry);
void add_aggregation_commands(CLI::App& app, Registry& registry);

/// Speeches file written by `ingest`; any malformed row is an error.
std::vector<SpeechRecord> load_speeches(Stage& stage, const fs::path& path);

void warn(Context& ctx, const std::string& message);

}  // namespace popscope::cli
