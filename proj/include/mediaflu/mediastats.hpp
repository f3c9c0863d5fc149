#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mediaflu {

// Weekly ILI percentage (x) against retweet proportion (y) for one season.
struct PairedSeries {
  std::string season;
  std::vector<std::string> week_labels;
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const noexcept { return x.size(); }
  // Throws LengthMismatch / SampleTooSmall / ParameterDomain.
  void validate() const;
};

// Which column is the response in the regressions. Correlation does not
// depend on it.
enum class RegressionDirection { RetweetsOnIli, IliOnRetweets };

struct Correlation {
  double r = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

// Two-sided p from t = r sqrt((n-2)/(1-r^2)) on n-2 dof. Throws
// SampleTooSmall for n < 3 and UndefinedStatistic for zero variance.
Correlation pearson(std::span<const double> x, std::span<const double> y);

struct RegressionFit {
  int degree = 1;
  std::vector<double> coefficients;  // intercept first
  double rss = 0.0;
  std::size_t n = 0;
  // Empty when the fit is exact (rss at rounding level) or n <= k + 2; see
  // lin_vs_quad for how those cases are compared.
  std::optional<double> aicc;
  bool exact = false;
  std::vector<double> fitted;
  std::vector<double> residuals;  // observed minus fitted, input order
};

// Polynomial least squares with intercept by column-pivoted Householder QR.
// Throws SampleTooSmall when n < degree + 2 and RankDeficient when the
// design has fewer than degree + 1 independent columns.
RegressionFit ols_fit(std::span<const double> x, std::span<const double> y,
                      int degree);

std::vector<double> residual_series(const RegressionFit& fit);

struct LinQuad {
  double p_lin = 0.0;
  double p_quad = 0.0;
  RegressionFit lin;
  RegressionFit quad;
};

// Akaike weights of the degree-1 and degree-2 fits. When both fits are exact
// the likelihood terms are equal and only the penalty terms are compared.
// Throws SampleTooSmall for n < 5.
LinQuad lin_vs_quad(std::span<const double> x, std::span<const double> y);

struct SeverityPoint {
  std::string season;
  double total_ili = 0.0;
  double p_quad = 0.0;
};

struct SeverityTrend {
  std::vector<SeverityPoint> points;
  double intercept = 0.0;
  double slope = 0.0;
};

// Total ILI (sum of the ILI column) against p_quad across seasons, with a
// straight-line trend. Throws SampleTooSmall for fewer than 2 seasons;
// a zero slope is returned when all totals coincide.
SeverityTrend quad_weight_vs_severity(std::span<const PairedSeries> seasons,
                                      RegressionDirection dir =
                                          RegressionDirection::RetweetsOnIli);

}  // namespace mediaflu
