#pragma once

#include <span>
#include <vector>

namespace mediaflu {

struct ErrorSummary {
  double rms = 0.0;
  long peak_timing_error = 0;    // weeks, model minus observed
  double final_size_error = 0.0;  // percentage points, model minus observed
};

// All three throw Error(LengthMismatch) on unequal lengths and
// Error(EmptyInput) on empty series.
double rms_error(std::span<const double> model, std::span<const double> obs);
long peak_timing_error(std::span<const double> model,
                       std::span<const double> obs);
double final_size_error(std::span<const double> model,
                        std::span<const double> obs);
ErrorSummary error_summary(std::span<const double> model,
                           std::span<const double> obs);

struct MoodResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double pooled_median = 0.0;
  // Counts strictly above the pooled median, then not above, per sample.
  long above_a = 0, below_a = 0, above_b = 0, below_b = 0;
};

// Chi-square on the 2x2 above/not-above table, 1 dof, no continuity
// correction. Throws SampleTooSmall for fewer than 4 values in total and
// UndefinedStatistic when all values are equal.
MoodResult moods_median_test(std::span<const double> a,
                             std::span<const double> b);

// Type-7 quantile of already sorted data (linear interpolation between order
// statistics). q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

struct BoxplotSummary {
  double q1 = 0.0, median = 0.0, q3 = 0.0;
  double whisker_lo = 0.0, whisker_hi = 0.0;
  std::vector<double> outliers;  // ascending
};

// Tukey summary. Throws EmptyInput on an empty sample.
BoxplotSummary boxplot_summary(std::span<const double> values);

}  // namespace mediaflu
