#include "mediaflu/select.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <set>

#include "mediaflu/metrics.hpp"
#include "mediaflu/rng.hpp"

namespace mediaflu {

std::string ModelScore::model_id() const {
  std::string id(media_id(kind));
  if (variant == Variant::Seir) id = "seir/" + id;
  return id;
}

double aicc(double rss, std::size_t n, std::size_t k) {
  if (n <= k + 2) {
    throw Error(ErrorKind::SampleTooSmall,
                "AICc needs n > k + 2 (n = " + std::to_string(n) +
                    ", k = " + std::to_string(k) + ")");
  }
  if (rss == 0.0) throw Error(ErrorKind::DegenerateFit, "rss is exactly zero");
  if (!(rss > 0.0) || !std::isfinite(rss))
    throw Error(ErrorKind::ParameterDomain, "rss must be positive and finite");
  const double nd = static_cast<double>(n);
  const double kk = static_cast<double>(k + 1);
  const double aic = nd * std::log(rss / nd) + 2.0 * kk;
  return aic + 2.0 * kk * (kk + 1.0) / (nd - kk - 1.0);
}

std::vector<double> relative_likelihoods(std::span<const double> aic) {
  double best = std::numeric_limits<double>::infinity();
  for (double a : aic)
    if (std::isfinite(a)) best = std::min(best, a);
  if (!std::isfinite(best))
    throw Error(ErrorKind::UndefinedStatistic, "no finite AIC value");
  std::vector<double> rel(aic.size(), 0.0);
  for (std::size_t i = 0; i < aic.size(); ++i)
    if (std::isfinite(aic[i])) rel[i] = std::exp((best - aic[i]) / 2.0);
  return rel;
}

std::vector<double> akaike_weights(std::span<const double> aic) {
  std::vector<double> w = relative_likelihoods(aic);
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

std::vector<ModelScore> season_probabilities(std::span<const FitResult> fits) {
  if (fits.empty()) throw Error(ErrorKind::EmptyInput, "no fits to compare");
  std::vector<ModelScore> scores;
  std::vector<double> a;
  for (const FitResult& f : fits) {
    if (f.n != fits.front().n || f.variant != fits.front().variant) {
      throw Error(ErrorKind::ComparisonMismatch,
                  "fits were made on different windows or variants");
    }
    ModelScore s;
    s.kind = f.kind;
    s.variant = f.variant;
    s.rss = f.rss;
    s.n = f.n;
    s.k = f.k;
    s.aicc = aicc(f.rss, f.n, f.k);
    a.push_back(s.aicc);
    scores.push_back(s);
  }
  const std::vector<double> w = akaike_weights(a);
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i].weight = w[i];
  return scores;
}

namespace {

std::vector<double> resample_means(
    const std::vector<std::vector<double>>& rows, std::size_t b,
    std::uint64_t seed) {
  const std::size_t n = rows.size();
  const std::size_t m = rows.front().size();
  Rng rng(seed, b);
  std::vector<double> mean(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[rng.below(n)];
    for (std::size_t j = 0; j < m; ++j) mean[j] += row[j];
  }
  for (double& v : mean) v /= static_cast<double>(n);
  return mean;
}

std::vector<BootstrapInterval> percentile_intervals(
    std::vector<std::vector<double>>& by_column, double level) {
  const double tail = (1.0 - level) / 2.0;
  std::vector<BootstrapInterval> out;
  for (auto& col : by_column) {
    std::sort(col.begin(), col.end());
    BootstrapInterval ci{quantile_sorted(col, tail),
                         quantile_sorted(col, 1.0 - tail)};
    ci.lo = std::clamp(ci.lo, 0.0, 1.0);
    ci.hi = std::clamp(ci.hi, 0.0, 1.0);
    out.push_back(ci);
  }
  return out;
}

void check_rows(const std::vector<std::vector<double>>& rows,
                const AverageOptions& opts) {
  if (rows.empty()) throw Error(ErrorKind::EmptyInput, "no rows to resample");
  for (const auto& r : rows)
    if (r.size() != rows.front().size())
      throw Error(ErrorKind::LengthMismatch, "ragged weight matrix");
  if (opts.resamples == 0)
    throw Error(ErrorKind::ParameterDomain, "resamples must be >= 1");
  if (!(opts.level > 0.0 && opts.level < 1.0))
    throw Error(ErrorKind::ParameterDomain, "level must lie in (0, 1)");
}

}  // namespace

std::vector<BootstrapInterval> bootstrap_mean_ci(
    const std::vector<std::vector<double>>& rows, const AverageOptions& opts) {
  check_rows(rows, opts);
  const std::size_t m = rows.front().size();
  const long nb = static_cast<long>(opts.resamples);
  std::vector<std::vector<double>> by_column(m, std::vector<double>(nb));
#pragma omp parallel for schedule(static)
  for (long b = 0; b < nb; ++b) {
    const auto mean = resample_means(rows, static_cast<std::size_t>(b), opts.seed);
    for (std::size_t j = 0; j < m; ++j) by_column[j][b] = mean[j];
  }
  return percentile_intervals(by_column, opts.level);
}

std::vector<BootstrapInterval> bootstrap_mean_ci_serial(
    const std::vector<std::vector<double>>& rows, const AverageOptions& opts) {
  check_rows(rows, opts);
  const std::size_t m = rows.front().size();
  std::vector<std::vector<double>> by_column(m);
  for (std::size_t b = 0; b < opts.resamples; ++b) {
    const auto mean = resample_means(rows, b, opts.seed);
    for (std::size_t j = 0; j < m; ++j) by_column[j].push_back(mean[j]);
  }
  return percentile_intervals(by_column, opts.level);
}

AverageResult average_probability(
    const std::vector<std::vector<double>>& weights,
    std::span<const std::string> season_labels,
    std::span<const std::string> exclusions, const AverageOptions& opts) {
  if (weights.size() != season_labels.size())
    throw Error(ErrorKind::LengthMismatch, "one label per season required");
  const std::set<std::string> excluded(exclusions.begin(), exclusions.end());

  AverageResult out;
  std::vector<std::vector<double>> rows;
  for (std::size_t s = 0; s < weights.size(); ++s) {
    if (excluded.count(season_labels[s])) {
      out.seasons_excluded.push_back(season_labels[s]);
      continue;
    }
    if (!rows.empty() && weights[s].size() != rows.front().size())
      throw Error(ErrorKind::LengthMismatch, "ragged weight matrix");
    rows.push_back(weights[s]);
    out.seasons_used.push_back(season_labels[s]);
  }
  if (rows.empty())
    throw Error(ErrorKind::EmptyInput, "no seasons left after exclusions");

  const std::size_t m = rows.front().size();
  out.models.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (const auto& r : rows) sum += r[j];
    out.models[j].mean = sum / static_cast<double>(rows.size());
  }
  if (rows.size() >= 2) {
    const auto ci = bootstrap_mean_ci(rows, opts);
    for (std::size_t j = 0; j < m; ++j) {
      out.models[j].ci_lo = ci[j].lo;
      out.models[j].ci_hi = ci[j].hi;
    }
  }
  return out;
}

std::vector<std::string> zero_media_seasons(
    std::span<const std::string> season_labels,
    const std::vector<std::vector<FitResult>>& fits, double tol) {
  if (fits.size() != season_labels.size())
    throw Error(ErrorKind::LengthMismatch, "one fit set per season required");
  std::vector<std::string> out;
  for (std::size_t s = 0; s < fits.size(); ++s) {
    bool any_media = false, all_zero = true;
    for (const FitResult& f : fits[s]) {
      if (f.kind == MediaKind::None) continue;
      any_media = true;
      if (std::abs(f.params.media.param()) > tol) all_zero = false;
    }
    if (any_media && all_zero) out.push_back(season_labels[s]);
  }
  return out;
}

SeasonFit fit_season(const WeeklySeries& series, int start_offset, int length,
                     std::span<const MediaKind> models, Variant variant,
                     const MultiStartOptions& opts, bool parallel_starts) {
  if (models.empty()) throw Error(ErrorKind::EmptyInput, "no models to fit");
  SeasonFit sf;
  sf.season = series.season;
  sf.window = make_window(series, start_offset, length);
  sf.data = window_values(series, sf.window);
  for (MediaKind kind : models) {
    sf.fits.push_back(parallel_starts
                          ? multi_start_fit(sf.data, variant, kind, opts)
                          : multi_start_fit_serial(sf.data, variant, kind, opts));
  }
  sf.scores = season_probabilities(sf.fits);
  return sf;
}

namespace {

SeasonOutcome run_task(const SeasonTask& t, std::span<const MediaKind> models,
                       Variant variant, const MultiStartOptions& opts,
                       bool parallel_starts) {
  SeasonOutcome out;
  try {
    out.fit = fit_season(*t.series, t.start_offset, t.length, models, variant,
                         opts, parallel_starts);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::TruncatedWindow:
      case ErrorKind::SampleTooSmall:
      case ErrorKind::InfeasibleInit:
      case ErrorKind::FitFailure:
      case ErrorKind::DegenerateFit:
        out.error = e.kind();
        out.diagnostic = e.what();
        break;
      default:
        throw;
    }
  }
  return out;
}

}  // namespace

std::vector<SeasonOutcome> fit_seasons(std::span<const SeasonTask> tasks,
                                       std::span<const MediaKind> models,
                                       Variant variant,
                                       const MultiStartOptions& opts) {
  std::vector<SeasonOutcome> out(tasks.size());
  const long n = static_cast<long>(tasks.size());
  // A lone task gets the threads for its starts instead.
  if (n == 1) {
    out[0] = run_task(tasks[0], models, variant, opts, true);
    return out;
  }
  // Exceptions may not cross the parallel region; the first one (by task
  // index) is rethrown afterwards.
  std::vector<std::exception_ptr> errors(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = run_task(tasks[i], models, variant, opts, false);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<SeasonOutcome> fit_seasons_serial(
    std::span<const SeasonTask> tasks, std::span<const MediaKind> models,
    Variant variant, const MultiStartOptions& opts) {
  std::vector<SeasonOutcome> out;
  for (const SeasonTask& t : tasks)
    out.push_back(run_task(t, models, variant, opts, false));
  return out;
}

std::vector<LeadTimeRow> lead_time_analysis(
    std::span<const WeeklySeries> seasons, int lead_min, int lead_max,
    std::span<const MediaKind> models, Variant variant,
    const LeadTimeOptions& opts) {
  if (lead_min < 0 || lead_max < lead_min)
    throw Error(ErrorKind::ParameterDomain, "lead range must satisfy 0 <= min <= max");
  if (models.empty()) throw Error(ErrorKind::EmptyInput, "no models to fit");
  const std::set<std::string> excluded(opts.exclusions.begin(),
                                       opts.exclusions.end());
  std::vector<const WeeklySeries*> used;
  for (const auto& s : seasons)
    if (!excluded.count(s.season)) used.push_back(&s);

  std::vector<SeasonTask> tasks;
  for (int lead = lead_min; lead <= lead_max; ++lead)
    for (const WeeklySeries* s : used)
      tasks.push_back({s, -lead, opts.window_length});
  const auto outcomes = fit_seasons(tasks, models, variant, opts.fit);

  std::vector<LeadTimeRow> rows;
  std::size_t t = 0;
  for (int lead = lead_min; lead <= lead_max; ++lead) {
    LeadTimeRow row;
    row.lead_weeks = lead;
    row.mean_weight.assign(models.size(), 0.0);
    for (const WeeklySeries* s : used) {
      const SeasonOutcome& o = outcomes[t++];
      if (!o.fit) {
        row.omitted.push_back(s->season + ": " + o.diagnostic);
        continue;
      }
      row.seasons_used.push_back(s->season);
      for (std::size_t m = 0; m < models.size(); ++m)
        row.mean_weight[m] += o.fit->scores[m].weight;
    }
    if (!row.seasons_used.empty()) {
      for (double& w : row.mean_weight)
        w /= static_cast<double>(row.seasons_used.size());
    } else {
      row.mean_weight.assign(models.size(),
                             std::numeric_limits<double>::quiet_NaN());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mediaflu
