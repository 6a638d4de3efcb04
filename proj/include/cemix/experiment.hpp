#pragma once

// Experiment harness: JSON configs, the model factory, one-row runs and the
// preset tables.
//
// Config layout (every field optional except model.kind):
//
//   {
//     "model":    { "kind": "two_sided_tail", "a": 2, "b": -2.5, ... },
//     "init":     { "method": "perturbation" | "rarity_ce" | "approx",
//                   "components": m, "base": [...], "scale": 0.1,
//                   "tilts": [[...], ...], "rho": 0.05, "max_stages": 50,
//                   "adaptive_weights": false, "min_weight": 0.05 },
//     "ce":       { "pilot_size": 10000, "iterations": 5, "weight_floor": 1e-4 },
//     "sampling": { "n": 100000, "seed": 1, "baseline": true },
//     "output":   { "path": "", "table": "", "row": "", "label": "" }
//   }

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cemix/ce_engine.hpp"
#include "cemix/estimator.hpp"
#include "cemix/init.hpp"
#include "cemix/model.hpp"

namespace cemix {

enum class InitMethod { perturbation, rarity_ce, approx };

struct ExperimentConfig {
  nlohmann::json model;  // resolved: kind plus every parameter
  InitMethod init = InitMethod::approx;
  std::size_t components = 0;  // 0: the model's natural count
  std::vector<double> perturb_base;  // empty: origin
  double perturb_scale = 0.1;
  std::vector<std::vector<double>> start_tilts;  // explicit start, equal weights
  RarityConfig rarity;
  CeConfig ce;
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  bool baseline = true;
  std::string output;
  std::string table;
  std::string row;
  std::string label;  // K_or_ab column

  nlohmann::json to_json() const;
};

/// Parses and validates a config, filling in defaults. Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Model section with defaults filled in. Throws ConfigError.
nlohmann::json resolve_model(const nlohmann::json& j);
std::unique_ptr<Model> make_model(const nlohmann::json& resolved);

struct ResultRow {
  std::string table;
  std::string row;
  std::string label;
  EstimateReport ce;
  EstimateReport plain;  // n == 0 when no baseline was run
  double var_ratio = 0.0;
  MixtureParam theta_start;
  MixtureParam theta;
  std::size_t init_stages = 0;
  std::vector<std::vector<double>> init_deltas;
  bool collapse = false;
  bool concentration = false;
  bool low_positive = false;
  bool kept_previous = false;
  nlohmann::json config;

  std::string flags() const;
};

/// Final tilts closer than this are reported as a collapsed mixture.
inline constexpr double kCollapseSeparation = 0.1;

/// init, CE iterations, final IS and the plain baseline. Deterministic per
/// config; propagates DegenerateUpdate and StagnantRarity.
ResultRow run_experiment(const ExperimentConfig& cfg, Exec exec = Exec::parallel);

/// Every row of a preset table (1..9) with its published settings.
std::vector<ExperimentConfig> table_configs(int id, std::uint64_t seed);
std::vector<ResultRow> reproduce_table(int id, std::uint64_t seed, Exec exec = Exec::parallel);

struct ModelInfo {
  std::string name;
  nlohmann::json defaults;
  std::vector<std::string> init_methods;
};

std::vector<ModelInfo> list_models();

std::string format_sig(double v);
inline constexpr const char* kCsvHeader =
    "table,row,K_or_ab,estimate,std_error,rel_error,var_ratio,weights,tilts,flags";
std::string csv_line(const ResultRow& r);
void write_table(std::ostream& os, const std::vector<ResultRow>& rows);
/// CSV to `path`, one resolved config per row to `path`.jsonl.
void write_outputs(const std::string& path, const std::vector<ResultRow>& rows);

}  // namespace cemix
