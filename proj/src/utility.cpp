#include "pseudodp/utility.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pseudodp/errors.hpp"
#include "pseudodp/parallel.hpp"
#include "pseudodp/stats.hpp"

namespace pseudodp {

void StatSpec::validate() const {
  if (kind == Kind::Quantile && !(p > 0.0 && p < 1.0)) {
    throw ConfigError("quantile level must lie in (0, 1)");
  }
  if (resamples == 0) throw ConfigError("bootstrap count B must be >= 1");
}

std::string StatSpec::label() const {
  if (kind == Kind::Mean) return "mean";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "q%g", p * 100.0);
  return buf;
}

double statistic_value(std::span<const double> values, const StatSpec& spec) {
  if (values.empty()) throw DataError("statistic of an empty database");
  if (spec.kind == StatSpec::Kind::Mean) return mean(values);
  return quantile_type7(std::vector<double>(values.begin(), values.end()), spec.p);
}

std::vector<double> statistic_distribution(std::span<const double> database,
                                           const StatSpec& spec, std::uint64_t seed) {
  if (database.empty()) throw DataError("statistic of an empty database");
  spec.validate();
  const std::size_t n = database.size();
  std::vector<double> out(spec.resamples);
  std::vector<double> resample(n);
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t b = 0; b < spec.resamples; ++b) {
    for (std::size_t i = 0; i < n; ++i) resample[i] = database[pick(rng)];
    out[b] = statistic_value(resample, spec);
  }
  return out;
}

std::vector<double> barycenter(const std::vector<std::vector<double>>& distributions) {
  if (distributions.empty()) throw NumericError("barycenter of zero distributions");
  const std::size_t b = distributions.front().size();
  for (const auto& d : distributions) {
    if (d.size() != b) throw NumericError("barycenter inputs must have equal length");
  }
  // Incremental mean keeps the barycenter of m identical vectors exactly
  // equal to the sorted vector (zero increments stay zero).
  std::vector<double> out(b, 0.0);
  std::vector<double> sorted;
  double count = 0.0;
  for (const auto& d : distributions) {
    sorted = d;
    std::sort(sorted.begin(), sorted.end());
    count += 1.0;
    for (std::size_t i = 0; i < b; ++i) out[i] += (sorted[i] - out[i]) / count;
  }
  return out;
}

SweepResult risk_utility_sweep(const Dataset& data, const ModelBackend& model,
                               std::vector<SweepCell> grid, const PipelineConfig& pipeline,
                               const std::vector<StatSpec>& stats) {
  if (grid.empty()) throw ConfigError("grid must be non-empty");
  for (const auto& spec : stats) spec.validate();

  SweepResult result;
  {
    std::vector<SweepCell> unique;
    for (const auto& cell : grid) {
      bool seen = false;
      for (const auto& u : unique) {
        if (u.c == cell.c && u.g == cell.g) {
          seen = true;
          break;
        }
      }
      if (seen) {
        ++result.duplicates_dropped;
      } else {
        unique.push_back(cell);
      }
    }
    grid = std::move(unique);
  }

  result.rows.resize(grid.size());
  parallel_for(grid.size(), pipeline.workers, [&](std::size_t cell_index) {
    SweepRow& row = result.rows[cell_index];
    row.c = grid[cell_index].c;
    row.g = grid[cell_index].g;
    try {
      PipelineConfig cell_config = pipeline;
      cell_config.weights.c = row.c;
      cell_config.weights.g = row.g;
      // Grid cells share the pipeline seed, so every cell's stage-1 fit sees
      // the same draws and the Delta column is comparable across cells.
      cell_config.workers = 1;
      SyntheticRelease release = run_alpha_weighted(data, model, cell_config);
      row.delta_local = release.lipschitz.delta_local;
      row.epsilon_total = release.lipschitz.epsilon_total;

      for (std::size_t stat_index = 0; stat_index < stats.size(); ++stat_index) {
        const StatSpec& spec = stats[stat_index];
        SweepStat out;
        out.stat = spec.label();
        out.real_value = statistic_value(data.response, spec);
        std::vector<std::vector<double>> dists(release.databases.size());
        for (std::size_t db = 0; db < release.databases.size(); ++db) {
          dists[db] = statistic_distribution(
              release.databases[db], spec,
              derive_seed(pipeline.seed, {stream::kResample, cell_index, stat_index, db}));
        }
        out.barycenter_distribution = barycenter(dists);
        out.synthetic_value = median(out.barycenter_distribution);
        out.abs_error = std::abs(out.synthetic_value - out.real_value);
        row.stats.push_back(std::move(out));
      }
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
  });
  return result;
}

namespace {

// Frozen CE-like generator, version 1. Ten categorical predictors shaped
// like a household survey plus a right-skewed income response built from a
// lognormal mixture. Levels are single letters so lexicographic level order
// equals generation order.
struct CeVariable {
  const char* name;
  std::vector<double> level_probs;
  std::vector<double> level_effects;  // additive on the log-income scale
};

const std::vector<CeVariable>& ce_variables() {
  static const std::vector<CeVariable> vars = {
      {"gender", {0.52, 0.48}, {0.0, 0.08}},
      {"age", {0.12, 0.22, 0.24, 0.22, 0.20}, {-0.35, 0.10, 0.25, 0.15, -0.20}},
      {"education",
       {0.04, 0.08, 0.24, 0.10, 0.08, 0.22, 0.16, 0.08},
       {-0.55, -0.35, -0.15, -0.05, 0.05, 0.20, 0.45, 0.70}},
      {"region", {0.18, 0.22, 0.37, 0.23}, {0.05, -0.02, -0.08, 0.10}},
      {"urban", {0.93, 0.07}, {0.10, -0.15}},
      {"marital", {0.52, 0.10, 0.15, 0.05, 0.18}, {0.35, -0.10, -0.05, -0.15, -0.25}},
      {"urban_type", {0.88, 0.07, 0.05}, {0.06, -0.05, -0.12}},
      {"cbsa", {0.30, 0.60, 0.10}, {0.12, 0.02, -0.18}},
      {"family_size",
       {0.28, 0.33, 0.15, 0.13, 0.06, 0.03, 0.01, 0.005, 0.003, 0.001, 0.001},
       {-0.18, 0.10, 0.14, 0.22, 0.18, 0.10, 0.02, -0.05, -0.10, -0.15, -0.20}},
      {"earner", {0.78, 0.22}, {0.28, -0.40}},
  };
  return vars;
}

// Generator constants, version 2. Log-income is a lognormal mixture over
// four narrow earning strata plus a sparse stratum of extreme isolated
// incomes reaching into the millions, mirroring the clustered shape and
// long top-coded tail of household income data.
constexpr double kCeStratumProbs[] = {0.10, 0.20, 0.22, 0.20, 0.14, 0.132, 0.008};
constexpr double kCeStratumLogMeans[] = {9.60, 10.30, 10.90, 11.40, 11.85, 12.30, 14.60};
constexpr double kCeStratumLogSds[] = {0.16, 0.13, 0.13, 0.13, 0.13, 0.13, 0.30};
constexpr double kCeCovariateScale = 0.15;
constexpr const char* kCeResponseName = "income";

struct CeRecord {
  std::vector<std::size_t> levels;
  double income = 0.0;
};

CeRecord draw_ce_record(Rng& rng) {
  const auto& vars = ce_variables();
  CeRecord rec;
  rec.levels.resize(vars.size());
  double log_income = 10.55;  // re-centered by the stratum mean below
  for (std::size_t v = 0; v < vars.size(); ++v) {
    rec.levels[v] = categorical_draw(rng, vars[v].level_probs);
    log_income += vars[v].level_effects[rec.levels[v]];
  }
  std::normal_distribution<double> noise(0.0, 1.0);
  // ordinary strata are truncated like top-coded survey income, keeping
  // them compactly supported below the extreme stratum
  auto truncated_noise = [&](double limit) {
    double z = noise(rng);
    while (std::abs(z) > limit) z = noise(rng);
    return z;
  };
  std::span<const double> probs(kCeStratumProbs, std::size(kCeStratumProbs));
  const std::size_t stratum = categorical_draw(rng, probs);
  const bool extreme = stratum + 1 == std::size(kCeStratumProbs);
  log_income = kCeStratumLogMeans[stratum] + kCeCovariateScale * (log_income - 10.55) +
               kCeStratumLogSds[stratum] * (extreme ? noise(rng) : truncated_noise(2.2));
  rec.income = std::exp(log_income);
  return rec;
}

}  // namespace

Dataset simulate_ce_like(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("simulate_ce_like needs n >= 1");
  const auto& vars = ce_variables();
  std::size_t r = 1;  // intercept
  for (const auto& v : vars) r += v.level_probs.size() - 1;

  Dataset data;
  data.n_predictors = r;
  data.response.resize(n);
  data.design.assign(n * r, 0.0);

  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    CeRecord rec = draw_ce_record(rng);
    data.response[i] = rec.income;
    double* row = data.design.data() + i * r;
    row[0] = 1.0;
    std::size_t col = 1;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      const std::size_t levels = vars[v].level_probs.size();
      if (rec.levels[v] > 0) row[col + rec.levels[v] - 1] = 1.0;  // first level dropped
      col += levels - 1;
    }
  }
  return data;
}

CeLikeTable simulate_ce_like_table(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("simulate_ce_like needs n >= 1");
  const auto& vars = ce_variables();
  CeLikeTable table;
  for (const auto& v : vars) table.header.emplace_back(v.name);
  table.header.emplace_back(kCeResponseName);

  Rng rng(seed);
  table.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CeRecord rec = draw_ce_record(rng);
    std::vector<std::string> row;
    row.reserve(vars.size() + 1);
    for (std::size_t v = 0; v < vars.size(); ++v) {
      row.push_back(std::string(1, static_cast<char>('a' + rec.levels[v])));
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", rec.income);
    row.emplace_back(buf);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace pseudodp
