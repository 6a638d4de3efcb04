#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "cemix/errors.hpp"
#include "cemix/experiment.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kDegenerate = 3, kStagnant = 4 };

void apply_thread_env() {
  if (const char* v = std::getenv("CEMIX_THREADS")) {
    const int n = std::atoi(v);
    if (n > 0) omp_set_num_threads(n);
  }
}

void emit(const std::vector<cemix::ResultRow>& rows, const std::string& output) {
  cemix::write_table(std::cout, rows);
  for (const auto& r : rows) std::cout << "config: " << r.config.dump() << '\n';
  if (!output.empty()) cemix::write_outputs(output, rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-entropy importance sampling with Gaussian mixtures"};
  app.require_subcommand(1);

  std::string config_path;
  std::string run_output;
  auto* run = app.add_subcommand("run", "Run one experiment from a JSON config");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("-o,--output", run_output, "CSV output (overrides output.path)");

  int table_id = 0;
  std::uint64_t seed = 1;
  std::string table_output;
  auto* table = app.add_subcommand("table", "Reproduce a preset table");
  table->add_option("id", table_id, "Table id")->required()->check(CLI::Range(1, 9));
  table->add_option("--seed", seed, "Seed");
  table->add_option("-o,--output", table_output, "CSV output");

  auto* models = app.add_subcommand("models", "List models and their parameters");

  CLI11_PARSE(app, argc, argv);
  apply_thread_env();

  try {
    if (run->parsed()) {
      const auto cfg = cemix::load_config(config_path);
      const auto row = cemix::run_experiment(cfg);
      emit({row}, run_output.empty() ? cfg.output : run_output);
    } else if (table->parsed()) {
      emit(cemix::reproduce_table(table_id, seed), table_output);
    } else if (models->parsed()) {
      for (const auto& m : cemix::list_models()) {
        std::cout << m.name << "\n  init:";
        for (const auto& i : m.init_methods) std::cout << ' ' << i;
        std::cout << "\n  parameters: " << m.defaults.dump() << '\n';
      }
    }
  } catch (const cemix::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const cemix::DegenerateUpdate& e) {
    std::cerr << "degenerate run: " << e.what() << '\n';
    return kDegenerate;
  } catch (const cemix::StagnantRarity& e) {
    std::cerr << "stagnant rarity: " << e.what() << '\n';
    return kStagnant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
