#include "mediaflu/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mediaflu/error.hpp"
#include "mediaflu/model.hpp"
#include "mediaflu/special.hpp"

namespace mediaflu {

namespace {

void check_pair(std::span<const double> model, std::span<const double> obs) {
  if (model.size() != obs.size()) {
    throw Error(ErrorKind::LengthMismatch,
                "model has " + std::to_string(model.size()) +
                    " weeks, observations " + std::to_string(obs.size()));
  }
  if (model.empty()) throw Error(ErrorKind::EmptyInput, "empty series");
}

}  // namespace

double rms_error(std::span<const double> model, std::span<const double> obs) {
  check_pair(model, obs);
  double ss = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    const double d = model[i] - obs[i];
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(model.size()));
}

long peak_timing_error(std::span<const double> model,
                       std::span<const double> obs) {
  check_pair(model, obs);
  return static_cast<long>(peak_of(model).index) -
         static_cast<long>(peak_of(obs).index);
}

double final_size_error(std::span<const double> model,
                        std::span<const double> obs) {
  check_pair(model, obs);
  return std::accumulate(model.begin(), model.end(), 0.0) -
         std::accumulate(obs.begin(), obs.end(), 0.0);
}

ErrorSummary error_summary(std::span<const double> model,
                           std::span<const double> obs) {
  return {rms_error(model, obs), peak_timing_error(model, obs),
          final_size_error(model, obs)};
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorKind::EmptyInput, "empty sample");
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

MoodResult moods_median_test(std::span<const double> a,
                             std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  if (n < 4)
    throw Error(ErrorKind::SampleTooSmall, "Mood's test needs >= 4 values");
  if (a.empty() || b.empty())
    throw Error(ErrorKind::EmptyInput, "Mood's test needs two samples");

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  if (pooled.front() == pooled.back())
    throw Error(ErrorKind::UndefinedStatistic, "all values are equal");

  MoodResult r;
  r.pooled_median = quantile_sorted(pooled, 0.5);
  for (double v : a) (v > r.pooled_median ? r.above_a : r.below_a)++;
  for (double v : b) (v > r.pooled_median ? r.above_b : r.below_b)++;

  const double obs[2][2] = {{double(r.above_a), double(r.below_a)},
                            {double(r.above_b), double(r.below_b)}};
  const double row[2] = {double(a.size()), double(b.size())};
  const double col[2] = {double(r.above_a + r.above_b),
                         double(r.below_a + r.below_b)};
  const double total = static_cast<double>(n);
  double x2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double e = row[i] * col[j] / total;
      if (e > 0.0) x2 += (obs[i][j] - e) * (obs[i][j] - e) / e;
    }
  }
  r.statistic = x2;
  r.p_value = special::chi_square_upper(x2, 1.0);
  return r;
}

BoxplotSummary boxplot_summary(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptyInput, "empty sample");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  BoxplotSummary b;
  b.q1 = quantile_sorted(s, 0.25);
  b.median = quantile_sorted(s, 0.5);
  b.q3 = quantile_sorted(s, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;
  bool any_inside = false;
  for (double v : s) {
    if (v < lo_fence || v > hi_fence) {
      b.outliers.push_back(v);
      continue;
    }
    if (!any_inside) b.whisker_lo = v;
    b.whisker_hi = v;
    any_inside = true;
  }
  if (!any_inside) {
    b.whisker_lo = b.q1;
    b.whisker_hi = b.q3;
  }
  return b;
}

}  // namespace mediaflu
