#include "cli.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "popscope/error.hpp"
#include "stage.hpp"

namespace popscope::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Populism measurement toolkit for parliamentary speech", "popscope"};
  app.set_version_flag("--version", POPSCOPE_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML-style config file; flags override it")
      ->envname("POPSCOPE_CONFIG");

  unsigned jobs = 1;
  std::uint64_t seed = 1;
  app.add_option("--jobs,-j", jobs, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--seed", seed, "Seed for every random choice")->capture_default_str();

  Registry registry;
  add_corpus_commands(app, registry);
  add_sampling_commands(app, registry);
  add_model_commands(app, registry);
  add_aggregation_commands(app, registry);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << POPSCOPE_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "popscope: " << e.what() << '\n';
    // A bad config file is an input problem rather than a usage problem.
    if (dynamic_cast<const CLI::FileError*>(&e) || dynamic_cast<const CLI::ConfigError*>(&e)) {
      return 1;
    }
    err << app.help();
    return 2;
  }

  Context ctx{out, err, jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs,
              seed};
  for (auto& [sub, action] : registry.commands) {
    if (!sub->parsed()) continue;
    try {
      action(ctx);
      return 0;
    } catch (const CLI::ParseError& e) {
      err << "popscope " << sub->get_name() << ": " << e.what() << '\n';
      return 2;
    } catch (const std::invalid_argument& e) {
      err << "popscope " << sub->get_name() << ": " << e.what() << '\n';
      return 1;
    } catch (const Error& e) {
      err << "popscope " << sub->get_name() << ": " << e.what() << '\n';
      return 1;
    } catch (const std::exception& e) {
      err << "popscope " << sub->get_name() << ": unexpected error: " << e.what() << '\n';
      return 1;
    }
  }
  err << app.help();
  return 2;
}

}  // namespace popscope::cli
