#include "stage.hpp"

#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "popscope/error.hpp"
#include "popscope/table_io.hpp"

#ifndef POPSCOPE_VERSION
#define POPSCOPE_VERSION "0.0.0"
#endif

namespace popscope::cli {

const fs::path& Stage::input(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw IoError(fmt::format("input file '{}' does not exist", path.string()));
  }
  inputs_.push_back(path);
  return inputs_.back();
}

void Stage::write(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  io::write_file_atomic(path, content);
  outputs_.push_back(path);
}

void Stage::finish(std::optional<fs::path> path) {
  if (!path) {
    if (outputs_.empty()) return;
    path = outputs_.front();
    *path += ".manifest.json";
  }
  nlohmann::ordered_json j;
  j["tool"] = "popscope";
  j["version"] = POPSCOPE_VERSION;
  j["subcommand"] = subcommand_;
  if (seed_) {
    j["seed"] = *seed_;
  } else {
    j["seed"] = nullptr;
  }
  auto files = [](const std::vector<fs::path>& paths) {
    auto list = nlohmann::ordered_json::array();
    for (const auto& p : paths) {
      nlohmann::ordered_json entry;
      entry["name"] = p.filename().string();
      entry["sha256"] = io::sha256_file(p);
      list.push_back(std::move(entry));
    }
    return list;
  };
  j["inputs"] = files(inputs_);
  j["outputs"] = files(outputs_);
  if (path->has_parent_path()) fs::create_directories(path->parent_path());
  io::write_file_atomic(*path, j.dump(2) + "\n");
}

std::vector<SpeechRecord> load_speeches(Stage& stage, const fs::path& path) {
  IngestResult result = ingest_speeches(stage.input(path));
  if (!result.report.malformed.empty()) {
    const auto& first = result.report.malformed.front();
    throw ValidationError(fmt::format("{}: {} malformed row(s); line {}: {}", path.string(),
                                      result.report.malformed.size(), first.line, first.message));
  }
  return std::move(result.speeches);
}

void warn(Context& ctx, const std::string& message) { ctx.err << "warning: " << message << '\n'; }

}  // namespace popscope::cli
