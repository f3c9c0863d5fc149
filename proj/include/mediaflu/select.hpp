#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mediaflu/fit.hpp"
#include "mediaflu/observe.hpp"

namespace mediaflu {

struct ModelScore {
  MediaKind kind = MediaKind::None;
  Variant variant = Variant::Seeiir;
  double rss = 0.0;
  std::size_t n = 0;
  std::size_t k = 0;
  double aicc = 0.0;
  double weight = 0.0;

  // "f1", "fm", ... with a "seir/" prefix for the SEIR variant.
  std::string model_id() const;
};

// Least-squares AICc with k fitted parameters plus one variance parameter.
// Throws SampleTooSmall when n <= k + 2 (the correction is then undefined)
// and DegenerateFit when rss == 0.
double aicc(double rss, std::size_t n, std::size_t k);

// exp((min - a_i) / 2) for each value; the best model gets 1. Non-finite
// entries get 0. Throws UndefinedStatistic if no value is finite.
std::vector<double> relative_likelihoods(std::span<const double> aic);
std::vector<double> akaike_weights(std::span<const double> aic);

// aicc per fit then akaike_weights. Throws ComparisonMismatch when the fits
// were made on different windows (differing n or variant).
std::vector<ModelScore> season_probabilities(std::span<const FitResult> fits);

struct AverageOptions {
  std::size_t resamples = 10000;
  std::uint64_t seed = 42;
  double level = 0.95;
};

struct ModelAverage {
  double mean = 0.0;
  std::optional<double> ci_lo;  // empty with fewer than 2 seasons
  std::optional<double> ci_hi;
};

struct AverageResult {
  std::vector<ModelAverage> models;
  std::vector<std::string> seasons_used;
  std::vector<std::string> seasons_excluded;
};

// weights[s][m] is the weight of model m in season s. Seasons named in
// exclusions are dropped before averaging. Throws EmptyInput when no season
// remains.
AverageResult average_probability(
    const std::vector<std::vector<double>>& weights,
    std::span<const std::string> season_labels,
    std::span<const std::string> exclusions, const AverageOptions& opts = {});

// Percentile bootstrap of column means: resample rows with replacement.
// Returns (lo, hi) per column. Resample b draws from Rng(seed, b), so the
// OpenMP version matches the serial one exactly.
struct BootstrapInterval {
  double lo = 0.0;
  double hi = 0.0;
};
std::vector<BootstrapInterval> bootstrap_mean_ci(
    const std::vector<std::vector<double>>& rows, const AverageOptions& opts);
std::vector<BootstrapInterval> bootstrap_mean_ci_serial(
    const std::vector<std::vector<double>>& rows, const AverageOptions& opts);

// Seasons whose fitted media parameters are all zero, i.e. no non-zero media
// function was found. Input is one fit set per season.
std::vector<std::string> zero_media_seasons(
    std::span<const std::string> season_labels,
    const std::vector<std::vector<FitResult>>& fits, double tol = 1e-9);

// Fits every model on one window and scores them.
struct SeasonFit {
  std::string season;
  FitWindow window;
  std::vector<double> data;
  std::vector<FitResult> fits;
  std::vector<ModelScore> scores;
};

struct SeasonTask {
  const WeeklySeries* series = nullptr;
  int start_offset = kDefaultWindowOffset;
  int length = kDefaultWindowLength;
};

struct SeasonOutcome {
  std::optional<SeasonFit> fit;
  std::string diagnostic;  // set when the task was skipped
  ErrorKind error = ErrorKind::TruncatedWindow;
};

// Each task fits all models on its window. Only TruncatedWindow,
// SampleTooSmall, InfeasibleInit and FitFailure skip a task; anything else
// propagates. Tasks run in parallel; outcomes keep task order.
std::vector<SeasonOutcome> fit_seasons(std::span<const SeasonTask> tasks,
                                       std::span<const MediaKind> models,
                                       Variant variant,
                                       const MultiStartOptions& opts);
std::vector<SeasonOutcome> fit_seasons_serial(
    std::span<const SeasonTask> tasks, std::span<const MediaKind> models,
    Variant variant, const MultiStartOptions& opts);

SeasonFit fit_season(const WeeklySeries& series, int start_offset, int length,
                     std::span<const MediaKind> models, Variant variant,
                     const MultiStartOptions& opts,
                     bool parallel_starts = false);

struct LeadTimeOptions {
  int window_length = kDefaultWindowLength;
  MultiStartOptions fit;
  std::vector<std::string> exclusions;
};

struct LeadTimeRow {
  int lead_weeks = 0;
  std::vector<double> mean_weight;  // per model, in the order given
  std::vector<std::string> seasons_used;
  std::vector<std::string> omitted;  // "season: reason"
};

// Window begins lead weeks before the peak, i.e. start_offset = -lead.
std::vector<LeadTimeRow> lead_time_analysis(
    std::span<const WeeklySeries> seasons, int lead_min, int lead_max,
    std::span<const MediaKind> models, Variant variant,
    const LeadTimeOptions& opts = {});

}  // namespace mediaflu
