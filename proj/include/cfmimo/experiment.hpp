/*
 * Copyright 2026 The cfmimo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CFMIMO_EXPERIMENT_HPP
#define CFMIMO_EXPERIMENT_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "cfmimo/scenario.hpp"
#include "cfmimo/strategies.hpp"
#include "cfmimo/version.hpp"

namespace cfmimo {

/// One result line. Raw rows carry a single trial; aggregate rows carry the
/// per-group means with standard errors, recomputable from the raw rows.
struct ResultRow {
  std::string row_type;  // "raw" | "aggregate"
  std::string strategy;
  int D = 0;
  int K = 0;
  std::uint64_t seed = 0;  // raw rows: the throw seed
  int n = 1;               // aggregate rows: trials averaged
  int dropped_trials = 0;
  double min_rate = std::numeric_limits<double>::quiet_NaN();
  double max_rate = std::numeric_limits<double>::quiet_NaN();
  double quotient = std::numeric_limits<double>::quiet_NaN();
  double mean_rate = std::numeric_limits<double>::quiet_NaN();
  double t_star = std::numeric_limits<double>::quiet_NaN();
  double se_min_rate = std::numeric_limits<double>::quiet_NaN();
  double se_max_rate = std::numeric_limits<double>::quiet_NaN();
  double se_quotient = std::numeric_limits<double>::quiet_NaN();
  double se_mean_rate = std::numeric_limits<double>::quiet_NaN();
  double se_t_star = std::numeric_limits<double>::quiet_NaN();

  bool is_dropped() const { return row_type == "raw" && dropped_trials > 0; }
};

struct ResultTable {
  Json config_echo;
  std::string version;
  std::vector<ResultRow> rows;
  std::vector<ResultRow> aggregates;
};

namespace detail {

struct Welford {
  // Plain two-pass statistics over a small vector; ordered sums keep the
  // aggregation exactly recomputable.
  static double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
  }
  static double stderr_of_mean(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / (static_cast<double>(n) * static_cast<double>(n - 1)));
  }
};

}  // namespace detail

/// Groups raw rows by (strategy, D, K) and appends one aggregate row per
/// group: means and standard errors over the non-dropped trials, dropped
/// count carried alongside.
inline std::vector<ResultRow> aggregate_rows(const std::vector<ResultRow>& raw) {
  std::map<std::tuple<std::string, int, int>, std::vector<const ResultRow*>> groups;
  for (const auto& row : raw) {
    groups[{row.strategy, row.D, row.K}].push_back(&row);
  }
  std::vector<ResultRow> aggregates;
  for (const auto& [key, members] : groups) {
    ResultRow agg;
    agg.row_type = "aggregate";
    agg.strategy = std::get<0>(key);
    agg.D = std::get<1>(key);
    agg.K = std::get<2>(key);
    std::vector<double> min_rate, max_rate, quotient, mean_rate, t_star;
    for (const ResultRow* row : members) {
      if (row->is_dropped()) {
        ++agg.dropped_trials;
        continue;
      }
      min_rate.push_back(row->min_rate);
      max_rate.push_back(row->max_rate);
      quotient.push_back(row->quotient);
      mean_rate.push_back(row->mean_rate);
      t_star.push_back(row->t_star);
    }
    agg.n = static_cast<int>(min_rate.size());
    if (agg.n > 0) {
      agg.min_rate = detail::Welford::mean(min_rate);
      agg.max_rate = detail::Welford::mean(max_rate);
      agg.quotient = detail::Welford::mean(quotient);
      agg.mean_rate = detail::Welford::mean(mean_rate);
      agg.t_star = detail::Welford::mean(t_star);
      agg.se_min_rate = detail::Welford::stderr_of_mean(min_rate);
      agg.se_max_rate = detail::Welford::stderr_of_mean(max_rate);
      agg.se_quotient = detail::Welford::stderr_of_mean(quotient);
      agg.se_mean_rate = detail::Welford::stderr_of_mean(mean_rate);
      agg.se_t_star = detail::Welford::stderr_of_mean(t_star);
    }
    aggregates.push_back(std::move(agg));
  }
  return aggregates;
}

/// Runs the configured scenario: n_throws independent large-scale throws,
/// each with deployment, clustering, association, shadowing, per-strategy
/// statistics estimation over n_fading channel draws and the max-min power
/// solve. Fully deterministic in (config, master_seed); per-throw sub-seeds
/// are derived by counter-based splitting and do not depend on D or on the
/// strategy, so runs with common seeds share their random throws.
inline ResultTable run_experiment(const ScenarioConfig& cfg) {
  cfg.validate();
  ResultTable table;
  table.config_echo = config_to_json(cfg);
  table.version = version_string();

  const PilotBook book = build_pilot_book(cfg.tau_p);
  const LargeScaleParams params = cfg.large_scale_params();
  const double sigma2 = cfg.sigma2_W();
  const double prefactor = cfg.rate_prefactor();

  for (int t = 0; t < cfg.n_throws; ++t) {
    std::uint64_t throw_seed =
        rng::derive(cfg.master_seed, rng::stream::kThrow, static_cast<std::uint64_t>(cfg.K),
                    static_cast<std::uint64_t>(t));
    NetworkGeometry geom = generate_deployment(throw_seed, cfg.M, cfg.K, cfg.L_m);
    geom.num_cpus = cfg.D;
    ApClusters clusters = cluster_aps(geom, cfg.D, throw_seed);
    LargeScaleState ls = make_large_scale_state(geom, params, throw_seed);
    ClusterPartition partition = associate_users(ls.beta, clusters);

    TrialConfig trial;
    trial.partition = std::move(partition);
    trial.beta = ls.beta;
    trial.book = book;
    trial.p_ap = cfg.P_ap_W;
    trial.p_ms = cfg.P_ms_W;
    trial.sigma2 = sigma2;
    trial.n_draws = cfg.n_fading;
    trial.bisect_tol = cfg.bisect_tol;
    trial.seed = rng::derive(throw_seed, rng::stream::kTrial);

    for (const std::string& strategy : cfg.strategies) {
      ResultRow row;
      row.row_type = "raw";
      row.strategy = strategy;
      row.D = cfg.D;
      row.K = cfg.K;
      row.seed = throw_seed;
      try {
        RateReport rep = run_strategy(strategy, trial);
        row.min_rate = prefactor * rep.min_rate;
        row.max_rate = prefactor * rep.max_rate;
        row.quotient = rep.quotient;
        row.mean_rate = prefactor * rep.mean_rate;
        row.t_star = rep.t_star;
        row.dropped_trials = 0;
      } catch (const Error&) {
        // Degenerate throw for this strategy (singular precoders dominate the
        // Monte-Carlo, or an overloaded cluster); excluded from averages.
        row.dropped_trials = 1;
      }
      table.rows.push_back(std::move(row));
    }
  }
  table.aggregates = aggregate_rows(table.rows);
  return table;
}

/// Grid sweep over loads, CPU counts and strategies; all cells share the
/// master seed so cells with equal K reuse identical throws.
inline ResultTable run_sweep(const ScenarioConfig& base, const std::vector<int>& loads,
                             const std::vector<int>& cpu_counts,
                             const std::vector<std::string>& strategies) {
  ResultTable table;
  table.config_echo = config_to_json(base);
  table.version = version_string();
  for (int k : loads) {
    for (int d : cpu_counts) {
      ScenarioConfig cfg = base;
      cfg.K = k;
      cfg.D = d;
      cfg.strategies = strategies;
      ResultTable part = run_experiment(cfg);
      table.rows.insert(table.rows.end(), part.rows.begin(), part.rows.end());
    }
  }
  table.aggregates = aggregate_rows(table.rows);
  return table;
}

namespace detail {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void append_row_csv(std::string& out, const ResultRow& r) {
  const bool agg = r.row_type == "aggregate";
  out += r.row_type;
  out += ',' + r.strategy;
  out += ',' + std::to_string(r.D);
  out += ',' + std::to_string(r.K);
  out += ',';
  if (!agg) out += std::to_string(r.seed);
  out += ',' + std::to_string(r.n);
  out += ',' + format_double(r.min_rate);
  out += ',' + format_double(r.max_rate);
  out += ',' + format_double(r.quotient);
  out += ',' + format_double(r.mean_rate);
  out += ',' + format_double(r.t_star);
  out += ',' + std::to_string(r.dropped_trials);
  out += ',' + (agg ? format_double(r.se_min_rate) : std::string());
  out += ',' + (agg ? format_double(r.se_max_rate) : std::string());
  out += ',' + (agg ? format_double(r.se_quotient) : std::string());
  out += ',' + (agg ? format_double(r.se_mean_rate) : std::string());
  out += ',' + (agg ? format_double(r.se_t_star) : std::string());
  out += '\n';
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "row_type,strategy,D,K,seed,n,min_rate,max_rate,quotient,mean_rate,t_star,dropped_trials,"
    "se_min_rate,se_max_rate,se_quotient,se_mean_rate,se_t_star";

/// CSV serialization: '#'-prefixed preamble with version and config echo,
/// then the fixed header, raw rows, aggregate rows. RFC-4180 style fields,
/// '.' decimal separator, UTF-8.
inline std::string to_csv(const ResultTable& table) {
  std::string out;
  out += "# cfmimo " + table.version + "\n";
  std::vector<std::string> keys;
  for (auto it = table.config_echo.begin(); it != table.config_echo.end(); ++it) {
    keys.push_back(it.key());
  }
  std::sort(keys.begin(), keys.end());
  for (const auto& key : keys) {
    out += "# " + key + " = " + table.config_echo.at(key).dump() + "\n";
  }
  out += kCsvHeader;
  out += '\n';
  for (const auto& row : table.rows) detail::append_row_csv(out, row);
  for (const auto& row : table.aggregates) detail::append_row_csv(out, row);
  return out;
}

namespace detail {

inline Json row_to_json(const ResultRow& r) {
  Json j{{"row_type", r.row_type}, {"strategy", r.strategy}, {"D", r.D}, {"K", r.K},
         {"n", r.n},               {"dropped_trials", r.dropped_trials}};
  if (r.row_type == "raw") j["seed"] = r.seed;
  auto put = [&](const char* key, double v) {
    if (!std::isnan(v)) j[key] = v;
  };
  put("min_rate", r.min_rate);
  put("max_rate", r.max_rate);
  put("quotient", r.quotient);
  put("mean_rate", r.mean_rate);
  put("t_star", r.t_star);
  if (r.row_type == "aggregate" && r.n > 0) {
    put("se_min_rate", r.se_min_rate);
    put("se_max_rate", r.se_max_rate);
    put("se_quotient", r.se_quotient);
    put("se_mean_rate", r.se_mean_rate);
    put("se_t_star", r.se_t_star);
  }
  return j;
}

inline ResultRow row_from_json(const Json& j) {
  ResultRow r;
  r.row_type = j.at("row_type").get<std::string>();
  r.strategy = j.at("strategy").get<std::string>();
  r.D = j.at("D").get<int>();
  r.K = j.at("K").get<int>();
  r.n = j.at("n").get<int>();
  r.dropped_trials = j.at("dropped_trials").get<int>();
  if (j.contains("seed")) r.seed = j.at("seed").get<std::uint64_t>();
  auto get = [&](const char* key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  get("min_rate", r.min_rate);
  get("max_rate", r.max_rate);
  get("quotient", r.quotient);
  get("mean_rate", r.mean_rate);
  get("t_star", r.t_star);
  get("se_min_rate", r.se_min_rate);
  get("se_max_rate", r.se_max_rate);
  get("se_quotient", r.se_quotient);
  get("se_mean_rate", r.se_mean_rate);
  get("se_t_star", r.se_t_star);
  return r;
}

}  // namespace detail

inline Json to_json(const ResultTable& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) rows.push_back(detail::row_to_json(row));
  Json aggregates = Json::array();
  for (const auto& row : table.aggregates) aggregates.push_back(detail::row_to_json(row));
  return Json{{"version", table.version},
              {"config", table.config_echo},
              {"rows", rows},
              {"aggregates", aggregates}};
}

inline ResultTable table_from_json(const Json& j) {
  ResultTable table;
  table.version = j.at("version").get<std::string>();
  table.config_echo = j.at("config");
  for (const auto& row : j.at("rows")) table.rows.push_back(detail::row_from_json(row));
  for (const auto& row : j.at("aggregates")) {
    table.aggregates.push_back(detail::row_from_json(row));
  }
  return table;
}

enum class OutputFormat { kCsv, kJson };

inline void emit_results(const ResultTable& table, const std::string& path, OutputFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("emit_results: cannot open '" + path + "' for writing");
  if (format == OutputFormat::kCsv) {
    out << to_csv(table);
  } else {
    out << to_json(table).dump(2) << '\n';
  }
  if (!out) throw Error("emit_results: write failure on '" + path + "'");
}

}  // namespace cfmimo

#endif  // CFMIMO_EXPERIMENT_HPP
