#include "cemix/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "cemix/errors.hpp"
#include "cemix/models.hpp"

namespace cemix {

using nlohmann::json;

namespace {

// Reserved iteration index of the init phase for the perturbation draw, far
// above any stage count.
constexpr std::uint32_t kPerturbIteration = 0x0FFFFFFF;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "' in " + where);
  }
}

std::size_t get_count(const json& j, const char* key, std::size_t fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw ConfigError(std::string("'") + key + "' in " + where + " must be a positive integer");
  return v.get<std::size_t>();
}

Matrix matrix_from(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw ConfigError("ragged matrix in config");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

std::vector<std::vector<double>> rows_of(const Matrix& m) {
  std::vector<std::vector<double>> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i].assign(m.row(i).begin(), m.row(i).end());
  return out;
}

json two_sided_defaults() { return {{"kind", "two_sided_tail"}, {"a", 1.0}, {"b", -1.5}}; }

json asian_defaults() {
  return {{"kind", "asian_call"}, {"s0", 50.0},      {"r", 0.05},
          {"sigma", 0.3},         {"maturity", 1.0}, {"monitoring", 30},
          {"times", json::array()}, {"strike", 50.0}};
}

json rainbow_defaults() {
  return {{"kind", "rainbow"},
          {"s0", {50.0, 45.0}},
          {"sigma", {0.1, 0.15}},
          {"correlation", {{1.0, 0.2}, {0.2, 1.0}}},
          {"r", 0.03},
          {"maturity", 1.0},
          {"strike", 60.0}};
}

json rainbow4_defaults() {
  return {{"kind", "rainbow"},
          {"s0", {45.0, 50.0, 47.0, 50.0}},
          {"sigma", {0.1, 0.1, 0.2, 0.2}},
          {"correlation",
           {{1.0, 0.3, -0.2, 0.4}, {0.3, 1.0, -0.3, 0.1}, {-0.2, -0.3, 1.0, 0.5}, {0.4, 0.1, 0.5, 1.0}}},
          {"r", 0.02},
          {"maturity", 0.5},
          {"strike", 60.0}};
}

json pyramid_defaults() {
  return {{"kind", "pyramid"},
          {"s0", {50.0, 45.0}},
          {"sigma", {0.2, 0.25}},
          {"asset_strikes", {55.0, 50.0}},
          {"correlation", {{1.0, 0.3}, {0.3, 1.0}}},
          {"r", 0.03},
          {"maturity", 1.0},
          {"strike", 30.0}};
}

json pyramid4_defaults() {
  return {{"kind", "pyramid"},
          {"s0", {50.0, 45.0, 45.0, 30.0}},
          {"sigma", {0.15, 0.15, 0.2, 0.2}},
          {"asset_strikes", {55.0, 50.0, 50.0, 35.0}},
          {"correlation",
           {{1.0, 0.1, -0.2, 0.3}, {0.1, 1.0, -0.5, 0.4}, {-0.2, -0.5, 1.0, 0.2}, {0.3, 0.4, 0.2, 1.0}}},
          {"r", 0.03},
          {"maturity", 1.0},
          {"strike", 40.0}};
}

json cev_defaults() {
  const CevSpec s;
  return {{"kind", "cev_digital"}, {"s0", s.s0},         {"h0", s.h0},
          {"sigma1", s.sigma1},    {"sigma2", s.sigma2}, {"gamma1", s.gamma1},
          {"gamma2", s.gamma2},    {"rho", s.rho},       {"r", s.r},
          {"maturity", s.maturity}, {"strike", s.strike}, {"c1", s.c1},
          {"c2", s.c2},            {"steps", s.steps},   {"discount", s.discount}};
}

json defaults_for(const std::string& kind) {
  if (kind == "two_sided_tail") return two_sided_defaults();
  if (kind == "asian_call") return asian_defaults();
  if (kind == "rainbow") return rainbow_defaults();
  if (kind == "pyramid") return pyramid_defaults();
  if (kind == "cev_digital") return cev_defaults();
  throw ConfigError("unknown model kind '" + kind + "'");
}

std::unique_ptr<Model> build_model(const json& m) {
  const std::string kind = m.at("kind").get<std::string>();
  if (kind == "two_sided_tail")
    return std::make_unique<TwoSidedTail>(TwoSidedTailSpec{m.at("a").get<double>(), m.at("b").get<double>()});
  if (kind == "asian_call") {
    AsianSpec s;
    s.s0 = m.at("s0").get<double>();
    s.r = m.at("r").get<double>();
    s.sigma = m.at("sigma").get<double>();
    s.maturity = m.at("maturity").get<double>();
    s.monitoring = m.at("monitoring").get<std::size_t>();
    s.times = m.at("times").get<std::vector<double>>();
    s.strike = m.at("strike").get<double>();
    return std::make_unique<AsianCall>(std::move(s));
  }
  if (kind == "rainbow") {
    RainbowSpec s;
    s.s0 = m.at("s0").get<std::vector<double>>();
    s.sigma = m.at("sigma").get<std::vector<double>>();
    s.correlation = matrix_from(m.at("correlation").get<std::vector<std::vector<double>>>());
    s.r = m.at("r").get<double>();
    s.maturity = m.at("maturity").get<double>();
    s.strike = m.at("strike").get<double>();
    return std::make_unique<RainbowOption>(std::move(s));
  }
  if (kind == "pyramid") {
    PyramidSpec s;
    s.s0 = m.at("s0").get<std::vector<double>>();
    s.sigma = m.at("sigma").get<std::vector<double>>();
    s.asset_strikes = m.at("asset_strikes").get<std::vector<double>>();
    s.correlation = matrix_from(m.at("correlation").get<std::vector<std::vector<double>>>());
    s.r = m.at("r").get<double>();
    s.maturity = m.at("maturity").get<double>();
    s.strike = m.at("strike").get<double>();
    return std::make_unique<PyramidOption>(std::move(s));
  }
  CevSpec s;
  s.s0 = m.at("s0").get<double>();
  s.h0 = m.at("h0").get<double>();
  s.sigma1 = m.at("sigma1").get<double>();
  s.sigma2 = m.at("sigma2").get<double>();
  s.gamma1 = m.at("gamma1").get<double>();
  s.gamma2 = m.at("gamma2").get<double>();
  s.rho = m.at("rho").get<double>();
  s.r = m.at("r").get<double>();
  s.maturity = m.at("maturity").get<double>();
  s.strike = m.at("strike").get<double>();
  s.c1 = m.at("c1").get<double>();
  s.c2 = m.at("c2").get<double>();
  s.steps = m.at("steps").get<std::size_t>();
  s.discount = m.at("discount").get<bool>();
  return std::make_unique<CevDigital>(s);
}

const char* init_name(InitMethod m) {
  switch (m) {
    case InitMethod::perturbation: return "perturbation";
    case InitMethod::rarity_ce: return "rarity_ce";
    case InitMethod::approx: return "approx";
  }
  return "";
}

InitMethod init_from(const std::string& s) {
  if (s == "perturbation") return InitMethod::perturbation;
  if (s == "rarity_ce") return InitMethod::rarity_ce;
  if (s == "approx") return InitMethod::approx;
  throw ConfigError("unknown init method '" + s + "'");
}

MixtureParam start_from_tilts(const std::vector<std::vector<double>>& tilts) {
  return MixtureParam::uniform(matrix_from(tilts));
}

}  // namespace

json resolve_model(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError("model section needs a string 'kind'");
  json out = defaults_for(j.at("kind").get<std::string>());
  for (const auto& [key, value] : j.items()) {
    if (!out.contains(key)) throw ConfigError("unknown key '" + key + "' in model");
    if (out[key].is_number() && !value.is_number())
      throw ConfigError("model parameter '" + key + "' must be a number");
    out[key] = value;
  }
  return out;
}

std::unique_ptr<Model> make_model(const json& resolved) {
  try {
    return build_model(resolved);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid model: ") + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid model: ") + e.what());
  }
}

json ExperimentConfig::to_json() const {
  json init_j = {{"method", init_name(init)},
                 {"base", perturb_base},
                 {"scale", perturb_scale},
                 {"tilts", start_tilts},
                 {"rho", rarity.rho},
                 {"pilot_size", rarity.pilot_size},
                 {"max_stages", rarity.max_stages},
                 {"adaptive_weights", rarity.adaptive_weights},
                 {"min_weight", rarity.min_weight}};
  if (components) init_j["components"] = components;
  return {{"model", model},
          {"init", init_j},
          {"ce",
           {{"pilot_size", ce.pilot_size},
            {"iterations", ce.iterations},
            {"weight_floor", ce.weight_floor},
            {"degenerate_threshold", ce.degenerate_threshold}}},
          {"sampling", {{"n", n}, {"seed", seed}, {"baseline", baseline}}},
          {"output", {{"path", output}, {"table", table}, {"row", row}, {"label", label}}}};
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j, {"model", "init", "ce", "sampling", "output"}, "config");
  if (!j.contains("model")) throw ConfigError("config needs a model section");
  ExperimentConfig cfg;
  cfg.model = resolve_model(j.at("model"));
  const auto model = make_model(cfg.model);

  const json ce = j.value("ce", json::object());
  check_keys(ce, {"pilot_size", "iterations", "weight_floor", "degenerate_threshold"}, "ce");
  cfg.ce.pilot_size = get_count(ce, "pilot_size", cfg.ce.pilot_size, "ce");
  cfg.ce.iterations = get_count(ce, "iterations", cfg.ce.iterations, "ce");
  cfg.ce.weight_floor = get_or<double>(ce, "weight_floor", cfg.ce.weight_floor, "ce");
  cfg.ce.degenerate_threshold =
      get_or<std::size_t>(ce, "degenerate_threshold", cfg.ce.degenerate_threshold, "ce");
  if (!(cfg.ce.weight_floor >= 0.0 && cfg.ce.weight_floor < 1.0))
    throw ConfigError("weight_floor must lie in [0, 1)");

  const json in = j.value("init", json::object());
  check_keys(in,
             {"method", "components", "base", "scale", "tilts", "rho", "pilot_size", "max_stages",
              "adaptive_weights", "min_weight"},
             "init");
  cfg.init = init_from(get_or<std::string>(in, "method", "approx", "init"));
  cfg.components = in.contains("components") ? get_count(in, "components", 1, "init") : 0;
  cfg.perturb_base = get_or<std::vector<double>>(in, "base", {}, "init");
  cfg.perturb_scale = get_or<double>(in, "scale", cfg.perturb_scale, "init");
  cfg.start_tilts = get_or<std::vector<std::vector<double>>>(in, "tilts", {}, "init");
  cfg.rarity.rho = get_or<double>(in, "rho", cfg.rarity.rho, "init");
  cfg.rarity.pilot_size = get_count(in, "pilot_size", cfg.ce.pilot_size, "init");
  cfg.rarity.max_stages = get_count(in, "max_stages", cfg.rarity.max_stages, "init");
  cfg.rarity.adaptive_weights = get_or<bool>(in, "adaptive_weights", false, "init");
  cfg.rarity.min_weight = get_or<double>(in, "min_weight", cfg.rarity.min_weight, "init");

  const std::size_t d = model->dim();
  if (!cfg.perturb_base.empty() && cfg.perturb_base.size() != d)
    throw ConfigError("init.base must have the model dimension");
  if (!(cfg.perturb_scale >= 0.0)) throw ConfigError("init.scale must be nonnegative");
  for (const auto& t : cfg.start_tilts)
    if (t.size() != d) throw ConfigError("init.tilts rows must have the model dimension");

  switch (cfg.init) {
    case InitMethod::approx:
      if (!model->has_approx()) throw ConfigError(model->name() + " has no approximation init");
      if (cfg.components && cfg.components != model->natural_components())
        throw ConfigError("approx init fixes the component count");
      break;
    case InitMethod::rarity_ce: {
      if (!model->has_rarity()) throw ConfigError(model->name() + " has no rarity embedding");
      const std::size_t m = model->rarity_components();
      if (cfg.components && cfg.components != m)
        throw ConfigError("rarity init needs one component per rarity set");
      if (!cfg.start_tilts.empty() && cfg.start_tilts.size() != m)
        throw ConfigError("init.tilts must list one tilt per component");
      cfg.rarity.threshold_count(m);
      if (!(cfg.rarity.min_weight > 0.0 && cfg.rarity.min_weight * static_cast<double>(m) < 1.0))
        throw ConfigError("init.min_weight must lie in (0, 1/m)");
      break;
    }
    case InitMethod::perturbation:
      if (!cfg.start_tilts.empty() && cfg.components && cfg.start_tilts.size() != cfg.components)
        throw ConfigError("init.tilts must list one tilt per component");
      break;
  }

  const json s = j.value("sampling", json::object());
  check_keys(s, {"n", "seed", "baseline"}, "sampling");
  cfg.n = get_count(s, "n", cfg.n, "sampling");
  if (cfg.n < 2) throw ConfigError("sampling.n must be at least 2");
  cfg.seed = get_or<std::uint64_t>(s, "seed", cfg.seed, "sampling");
  cfg.baseline = get_or<bool>(s, "baseline", cfg.baseline, "sampling");

  const json o = j.value("output", json::object());
  check_keys(o, {"path", "table", "row", "label"}, "output");
  cfg.output = get_or<std::string>(o, "path", "", "output");
  cfg.table = get_or<std::string>(o, "table", "", "output");
  cfg.row = get_or<std::string>(o, "row", "", "output");
  cfg.label = get_or<std::string>(o, "label", "", "output");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

std::string ResultRow::flags() const {
  std::string out;
  auto add = [&out](const char* f) {
    if (!out.empty()) out += '|';
    out += f;
  };
  if (collapse) add("collapse");
  if (concentration) add("concentration");
  if (low_positive) add("low_positive");
  if (kept_previous) add("kept_previous");
  return out;
}

ResultRow run_experiment(const ExperimentConfig& cfg, Exec exec) {
  const auto model = make_model(cfg.model);
  const RngStream stream{cfg.seed};
  ResultRow row;
  row.table = cfg.table;
  row.row = cfg.row;
  row.label = cfg.label;
  row.config = cfg.to_json();

  auto perturbed_start = [&](std::size_t m) {
    if (!cfg.start_tilts.empty()) return start_from_tilts(cfg.start_tilts);
    const std::vector<double> base =
        cfg.perturb_base.empty() ? std::vector<double>(model->dim(), 0.0) : cfg.perturb_base;
    return init_perturbation(m, base, cfg.perturb_scale, stream.at(Phase::init, kPerturbIteration));
  };

  MixtureParam theta0;
  switch (cfg.init) {
    case InitMethod::approx:
      theta0 = init_approx(*model);
      break;
    case InitMethod::perturbation:
      theta0 = perturbed_start(cfg.components ? cfg.components : model->natural_components());
      break;
    case InitMethod::rarity_ce: {
      const RarityResult rr =
          init_rarity_ce(*model, cfg.rarity, perturbed_start(model->rarity_components()), stream, exec);
      theta0 = rr.theta;
      row.init_stages = rr.stages.size();
      for (const auto& st : rr.stages) row.init_deltas.push_back(st.delta);
      break;
    }
  }
  row.theta_start = theta0;

  const CeResult ce = run_ce(*model, theta0, cfg.ce, stream, exec);
  row.theta = ce.theta;
  row.low_positive = ce.any_low_positive();
  for (const auto& rec : ce.trace)
    row.kept_previous = row.kept_previous ||
                        std::any_of(rec.kept_previous.begin(), rec.kept_previous.end(), [](bool b) { return b; });

  row.ce = is_estimate(*model, row.theta, cfg.n, stream.at(Phase::final_is, 0), exec);
  if (cfg.baseline) {
    row.plain = plain_mc_estimate(*model, cfg.n, stream.at(Phase::baseline, 0), exec);
    row.var_ratio = variance_ratio(row.plain, row.ce);
  } else {
    row.var_ratio = std::numeric_limits<double>::quiet_NaN();
  }
  row.collapse = row.theta.components() > 1 && row.theta.min_tilt_separation() < kCollapseSeparation;
  row.concentration = row.ce.concentration_flag;
  return row;
}

namespace {

ExperimentConfig preset(json model, InitMethod init, std::size_t pilot, std::size_t iterations,
                        std::size_t n, std::uint64_t seed, std::string table, std::string row,
                        std::string label) {
  ExperimentConfig cfg;
  cfg.model = resolve_model(model);
  cfg.init = init;
  cfg.ce.pilot_size = pilot;
  cfg.ce.iterations = iterations;
  cfg.rarity.pilot_size = pilot;
  cfg.n = n;
  cfg.seed = seed;
  cfg.table = std::move(table);
  cfg.row = std::move(row);
  cfg.label = std::move(label);
  return cfg;
}

std::string ab_label(double a, double b) {
  std::ostringstream os;
  os << '{' << a << ' ' << b << '}';
  return os.str();
}

std::string k_label(double k) {
  std::ostringstream os;
  os << "K=" << k;
  return os.str();
}

}  // namespace

std::vector<ExperimentConfig> table_configs(int id, std::uint64_t seed) {
  std::vector<ExperimentConfig> out;
  const std::string t = std::to_string(id);
  const std::vector<std::pair<double, double>> ab{{1.0, -1.5}, {2.0, -2.5}, {2.0, -3.0}};
  switch (id) {
    case 1:
    case 2:
    case 3: {
      const InitMethod init = id == 1 ? InitMethod::perturbation
                              : id == 2 ? InitMethod::rarity_ce
                                        : InitMethod::approx;
      for (std::size_t i = 0; i < ab.size(); ++i) {
        json m = {{"kind", "two_sided_tail"}, {"a", ab[i].first}, {"b", ab[i].second}};
        auto cfg = preset(m, init, 20000, 5, 1000000, seed, t, std::to_string(i + 1),
                          ab_label(ab[i].first, ab[i].second));
        if (id == 2) cfg.start_tilts = {{0.0}, {-0.1}};
        if (id == 1) cfg.components = 2;
        out.push_back(std::move(cfg));
      }
      break;
    }
    case 4:
      for (double k : {50.0, 60.0, 70.0, 80.0, 90.0}) {
        json m = asian_defaults();
        m["strike"] = k;
        out.push_back(preset(m, InitMethod::approx, 10000, 5, 100000, seed, t,
                             std::to_string(out.size() + 1), k_label(k)));
      }
      break;
    case 5:
    case 6:
      for (double k : {50.0, 60.0, 70.0}) {
        json m = id == 5 ? rainbow_defaults() : rainbow4_defaults();
        m["strike"] = k;
        const std::size_t it = id == 5 ? 5 : 10;
        out.push_back(preset(m, InitMethod::rarity_ce, 10000, it, 100000, seed, t, "INI_CE", k_label(k)));
        out.push_back(preset(m, InitMethod::approx, 10000, it, 100000, seed, t, "INI_AP", k_label(k)));
      }
      break;
    case 7:
    case 8: {
      const std::vector<double> ks = id == 7 ? std::vector<double>{10, 20, 30, 40, 50}
                                             : std::vector<double>{20, 30, 40, 50, 60};
      for (double k : ks) {
        json m = id == 7 ? pyramid_defaults() : pyramid4_defaults();
        m["strike"] = k;
        out.push_back(preset(m, InitMethod::approx, 10000, 5, 100000, seed, t,
                             std::to_string(out.size() + 1), k_label(k)));
      }
      break;
    }
    case 9:
      for (double k : {50.0, 55.0, 60.0, 65.0, 70.0}) {
        json m = cev_defaults();
        m["strike"] = k;
        m["discount"] = false;
        out.push_back(preset(m, InitMethod::approx, 10000, 5, 100000, seed, t,
                             std::to_string(out.size() + 1), k_label(k)));
      }
      break;
    default:
      throw ConfigError("table id must lie in 1..9");
  }
  return out;
}

std::vector<ResultRow> reproduce_table(int id, std::uint64_t seed, Exec exec) {
  std::vector<ResultRow> rows;
  for (const auto& cfg : table_configs(id, seed)) rows.push_back(run_experiment(cfg, exec));
  return rows;
}

std::vector<ModelInfo> list_models() {
  return {
      {"two_sided_tail", two_sided_defaults(), {"perturbation", "rarity_ce", "approx"}},
      {"asian_call", asian_defaults(), {"perturbation", "approx"}},
      {"rainbow", rainbow_defaults(), {"perturbation", "rarity_ce", "approx"}},
      {"pyramid", pyramid_defaults(), {"perturbation", "approx"}},
      {"cev_digital", cev_defaults(), {"approx"}},
  };
}

std::string format_sig(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

std::string join_weights(const MixtureParam& theta) {
  std::string out;
  for (std::size_t j = 0; j < theta.components(); ++j) {
    if (j) out += ';';
    out += format_sig(theta.weights[j]);
  }
  return out;
}

std::string join_tilts(const MixtureParam& theta) {
  std::string out;
  for (std::size_t j = 0; j < theta.components(); ++j) {
    if (j) out += ';';
    const auto t = theta.tilt(j);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) out += ' ';
      out += format_sig(t[i]);
    }
  }
  return out;
}

}  // namespace

std::string csv_line(const ResultRow& r) {
  std::ostringstream os;
  os << r.table << ',' << r.row << ',' << r.label << ',' << format_sig(r.ce.estimate) << ','
     << format_sig(r.ce.std_error) << ',' << format_sig(r.ce.relative_error) << ','
     << format_sig(r.var_ratio) << ',' << join_weights(r.theta) << ',' << join_tilts(r.theta) << ','
     << r.flags();
  return os.str();
}

void write_table(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << std::left << std::setw(6) << "table" << std::setw(8) << "row" << std::setw(14) << "K_or_ab"
     << std::setw(14) << "estimate" << std::setw(14) << "std_error" << std::setw(12) << "rel_error"
     << std::setw(12) << "var_ratio" << std::setw(28) << "weights" << "flags\n";
  for (const auto& r : rows) {
    std::string w = join_weights(r.theta);
    if (w.size() > 26) w = w.substr(0, 23) + "...";
    os << std::setw(6) << r.table << std::setw(8) << r.row << std::setw(14) << r.label << std::setw(14)
       << format_sig(r.ce.estimate) << std::setw(14) << format_sig(r.ce.std_error) << std::setw(12)
       << format_sig(r.ce.relative_error) << std::setw(12) << format_sig(r.var_ratio) << std::setw(28)
       << w << r.flags() << '\n';
    if (r.theta.dim() <= 4) os << "      tilts: " << join_tilts(r.theta) << '\n';
  }
}

void write_outputs(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream csv(path);
  if (!csv) throw ConfigError("cannot write '" + path + "'");
  csv << kCsvHeader << '\n';
  for (const auto& r : rows) csv << csv_line(r) << '\n';
  std::ofstream side(path + ".jsonl");
  if (!side) throw ConfigError("cannot write '" + path + ".jsonl'");
  for (const auto& r : rows) {
    json line = {{"table", r.table}, {"row", r.row}, {"config", r.config},
                 {"init_stages", r.init_stages}, {"init_deltas", r.init_deltas},
                 {"start_weights", r.theta_start.weights}, {"start_tilts", rows_of(r.theta_start.tilts)}};
    side << line.dump() << '\n';
  }
}

}  // namespace cemix
