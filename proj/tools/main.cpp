#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "kimura/kimura.hpp"

namespace {

int dispatch(const kimura::ExperimentConfig& cfg) {
  const std::string label = cfg.effective_label();
  const auto path = [&](const std::string& suffix) {
    return (std::filesystem::path(cfg.outdir) / (label + suffix)).string();
  };
  switch (cfg.mode) {
    case kimura::RunMode::run: {
      kimura::run_experiment(cfg);
      std::cout << "wrote " << path("_record.csv") << "\n";
      std::cout << "wrote " << path("_map.csv") << "\n";
      break;
    }
    case kimura::RunMode::decay: {
      const kimura::SimulationResult result = kimura::run_experiment(cfg);
      const double rate =
          kimura::decay_rate_fit(result.record, kimura::MassGrid(cfg.n).h);
      std::cout << "wrote " << path("_record.csv") << "\n";
      std::cout << "wrote " << path("_map.csv") << "\n";
      std::cout << "wrote " << path("_decay.csv") << "\n";
      std::cout << "fitted decay rate: " << rate << "\n";
      break;
    }
    case kimura::RunMode::eoc_space:
    case kimura::RunMode::eoc_time: {
      const auto rows = cfg.mode == kimura::RunMode::eoc_space
                            ? kimura::eoc_space_study(cfg)
                            : kimura::eoc_time_study(cfg);
      std::cout << "wrote " << path("_table.csv") << " (" << rows.size() << " rows)\n";
      break;
    }
    case kimura::RunMode::jump_table: {
      const auto rows = kimura::jump_table(cfg);
      std::cout << "wrote " << path("_table.csv") << " (" << rows.size() << " rows)\n";
      break;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference solver for random genetic drift in map variables"};
  app.require_subcommand(1);

  const struct {
    const char* verb;
    const char* help;
    kimura::RunMode mode;
  } verbs[] = {
      {"run", "single simulation; writes a diagnostics record and the final map",
       kimura::RunMode::run},
      {"eoc-space", "grid-refinement convergence table", kimura::RunMode::eoc_space},
      {"eoc-time", "time-step-refinement convergence table", kimura::RunMode::eoc_time},
      {"jump-table", "jump locations for the built-in density/selection pairs",
       kimura::RunMode::jump_table},
      {"decay", "single simulation plus a fitted exponential decay rate",
       kimura::RunMode::decay},
  };
  std::string config_path;
  for (const auto& v : verbs) {
    CLI::App* sub = app.add_subcommand(v.verb, v.help);
    sub->add_option("--config", config_path, "path to a key=value config file")
        ->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    kimura::ExperimentConfig cfg;
    for (const auto& v : verbs) {
      if (app.got_subcommand(v.verb)) {
        cfg = kimura::parse_config_file(config_path, v.mode);
        break;
      }
    }
    return dispatch(cfg);
  } catch (const kimura::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
