#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "mediaflu/error.hpp"
#include "mediaflu/mediastats.hpp"
#include "mediaflu/metrics.hpp"
#include "mediaflu/rng.hpp"
#include "mediaflu/special.hpp"

using namespace mediaflu;

namespace {

// Normal equations in long double on raw powers of x.
std::vector<double> normal_equations(const std::vector<double>& x,
                                     const std::vector<double>& y, int degree) {
  const int p = degree + 1;
  std::vector<std::vector<long double>> a(p, std::vector<long double>(p + 1, 0));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (int r = 0; r < p; ++r) {
      for (int c = 0; c < p; ++c) a[r][c] += std::pow((long double)x[i], r + c);
      a[r][p] += std::pow((long double)x[i], r) * y[i];
    }
  for (int c = 0; c < p; ++c) {
    for (int r = c + 1; r < p; ++r) {
      const long double f = a[r][c] / a[c][c];
      for (int k = c; k <= p; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> beta(p);
  for (int r = p - 1; r >= 0; --r) {
    long double s = a[r][p];
    for (int c = r + 1; c < p; ++c) s -= a[r][c] * beta[c];
    beta[r] = static_cast<double>(s / a[r][r]);
  }
  return beta;
}

}  // namespace

TEST_SUITE("special") {
  TEST_CASE("incomplete beta and gamma against Boost") {
    for (double a : {0.5, 1.0, 3.5, 12.0})
      for (double b : {0.5, 2.0, 7.0})
        for (double x : {0.0, 0.01, 0.3, 0.77, 0.999, 1.0})
          CHECK(special::regularized_beta(a, b, x) ==
                doctest::Approx(boost::math::ibeta(a, b, x)).epsilon(1e-10));
    for (double a : {0.5, 1.0, 4.0, 30.0})
      for (double x : {0.0, 0.2, 3.0, 25.0, 80.0})
        CHECK(special::regularized_gamma_q(a, x) ==
              doctest::Approx(boost::math::gamma_q(a, x)).epsilon(1e-10));
  }

  TEST_CASE("tail probabilities against Boost") {
    for (double dof : {1.0, 3.0, 14.0, 60.0})
      for (double t : {0.0, 0.4, 2.1, 7.0}) {
        const boost::math::students_t dist(dof);
        CHECK(special::student_t_two_sided(t, dof) ==
              doctest::Approx(2 * boost::math::cdf(boost::math::complement(dist, t)))
                  .epsilon(1e-9));
      }
    for (double dof : {1.0, 2.0, 5.0})
      for (double x : {0.5, 3.84, 8.0, 40.0}) {
        const boost::math::chi_squared dist(dof);
        CHECK(special::chi_square_upper(x, dof) ==
              doctest::Approx(boost::math::cdf(boost::math::complement(dist, x)))
                  .epsilon(1e-9));
      }
    CHECK(special::chi_square_upper(0.0, 1) == 1.0);
  }
}

TEST_SUITE("metrics") {
  TEST_CASE("error metrics") {
    const std::vector<double> m = {1, 3, 5, 4}, o = {1, 4, 3, 2};
    CHECK(rms_error(m, o) == doctest::Approx(std::sqrt((0 + 1 + 4 + 4) / 4.0)));
    CHECK(peak_timing_error(m, o) == 1);
    CHECK(peak_timing_error(o, m) == -1);
    CHECK(final_size_error(m, o) == doctest::Approx(3.0));
    const ErrorSummary e = error_summary(m, o);
    CHECK(e.rms == rms_error(m, o));
    const std::vector<double> shorter = {1, 2};
    CHECK_THROWS_AS(rms_error(m, shorter), Error);
    CHECK_THROWS_AS(final_size_error(std::vector<double>{}, std::vector<double>{}), Error);
  }

  TEST_CASE("Mood's median test") {
    const std::vector<double> a = {1, 1, 1, 1}, b = {2, 2, 2, 2};
    const MoodResult r = moods_median_test(a, b);
    CHECK(r.pooled_median == 1.5);
    CHECK(r.statistic == doctest::Approx(8.0));
    CHECK(r.p_value == doctest::Approx(std::erfc(2.0)));
    CHECK(r.above_b == 4);
    CHECK(r.below_a == 4);

    // Unequal sizes with ties at the median: values at it count as not above.
    const std::vector<double> c = {1, 2, 3, 4, 5}, d = {3, 6, 7};
    const MoodResult t = moods_median_test(c, d);
    CHECK(t.pooled_median == 3.5);
    CHECK(t.above_a == 2);
    CHECK(t.below_a == 3);
    CHECK(t.above_b == 2);
    CHECK(t.below_b == 1);
    const double n = 8, obs[2][2] = {{2, 3}, {2, 1}};
    double chi = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double e = (obs[i][0] + obs[i][1]) * (obs[0][j] + obs[1][j]) / n;
        chi += (obs[i][j] - e) * (obs[i][j] - e) / e;
      }
    CHECK(t.statistic == doctest::Approx(chi));

    CHECK_THROWS_AS(moods_median_test(std::vector<double>{1}, std::vector<double>{2, 3}),
                    Error);
    CHECK_THROWS_AS(moods_median_test(a, a), Error);
  }

  TEST_CASE("type-7 quantiles and boxplots") {
    const std::vector<double> v = {1, 2, 3, 4};
    CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
    CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
    CHECK(quantile_sorted(v, 1.0) == 4);
    const std::vector<double> w = {1, 2, 3, 4, 5, 6, 7, 8, 100};
    const BoxplotSummary b = boxplot_summary(w);
    CHECK(b.median == 5);
    CHECK(b.q1 == 3);
    CHECK(b.q3 == 7);
    CHECK(b.whisker_lo == 1);
    CHECK(b.whisker_hi == 8);
    CHECK(b.outliers == std::vector<double>{100});
    CHECK_THROWS_AS(boxplot_summary(std::vector<double>{}), Error);
  }
}

TEST_SUITE("mediastats") {
  TEST_CASE("Pearson against Boost") {
    const std::vector<double> x = {1, 2, 3}, y = {1, 2, 4};
    const Correlation c = pearson(x, y);
    CHECK(c.r == doctest::Approx(0.9819805060619657));
    const double t = c.r * std::sqrt(1 / (1 - c.r * c.r));
    const boost::math::students_t dist(1);
    CHECK(c.p_value ==
          doctest::Approx(2 * boost::math::cdf(boost::math::complement(dist, t))));

    Rng rng(9);
    std::vector<double> a(25), b(25);
    for (int i = 0; i < 25; ++i) {
      a[i] = rng.uniform();
      b[i] = 0.3 * a[i] + rng.normal() * 0.2;
    }
    const Correlation d = pearson(a, b);
    const double td = d.r * std::sqrt(23 / (1 - d.r * d.r));
    const boost::math::students_t dist23(23);
    CHECK(d.p_value ==
          doctest::Approx(2 * boost::math::cdf(boost::math::complement(dist23, std::abs(td))))
              .epsilon(1e-9));
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 1, 1}, y), Error);
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
  }

  TEST_CASE("OLS against the normal equations") {
    Rng rng(11);
    std::vector<double> x(30), y(30);
    for (int i = 0; i < 30; ++i) {
      x[i] = 1 + 4 * rng.uniform();
      y[i] = 0.1 - 0.03 * x[i] + 0.01 * x[i] * x[i] + 0.01 * rng.normal();
    }
    for (int degree : {1, 2}) {
      const RegressionFit f = ols_fit(x, y, degree);
      const auto beta = normal_equations(x, y, degree);
      for (int j = 0; j <= degree; ++j)
        CHECK(f.coefficients[j] == doctest::Approx(beta[j]).epsilon(1e-8));
      double rss = 0;
      for (double r : f.residuals) rss += r * r;
      CHECK(f.rss == doctest::Approx(rss));
      CHECK(f.aicc.has_value());
      CHECK_FALSE(f.exact);
      CHECK(residual_series(f) == f.residuals);
      CHECK(f.fitted[3] + f.residuals[3] == doctest::Approx(y[3]));
    }
  }

  TEST_CASE("OLS edge cases") {
    const std::vector<double> x = {1, 2, 3, 4, 5}, y = {3, 5, 7, 9, 11};
    const RegressionFit f = ols_fit(x, y, 1);
    CHECK(f.exact);
    CHECK_FALSE(f.aicc.has_value());
    CHECK(f.coefficients[1] == doctest::Approx(2.0));
    CHECK_THROWS_AS(ols_fit(std::vector<double>{1, 2}, std::vector<double>{1, 2}, 1), Error);
    try {
      ols_fit(std::vector<double>{2, 2, 2, 2, 2}, y, 1);
      FAIL("expected rank deficiency");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RankDeficient);
    }
    // Two distinct x values cannot carry a quadratic.
    CHECK_THROWS_AS(ols_fit(std::vector<double>{1, 1, 2, 2, 2}, y, 2), Error);
  }

  TEST_CASE("linear versus quadratic") {
    const std::vector<double> x = {1, 2, 3, 4, 5, 6};
    std::vector<double> lin(6), quad(6);
    for (int i = 0; i < 6; ++i) {
      lin[i] = 1 + 2 * x[i];
      quad[i] = 1 + x[i] * x[i];
    }
    // Both exact: only the penalties differ, so the simpler model wins.
    const LinQuad l = lin_vs_quad(x, lin);
    CHECK(l.p_lin > 0.5);
    CHECK(l.p_lin + l.p_quad == doctest::Approx(1.0));
    const LinQuad q = lin_vs_quad(x, quad);
    CHECK(q.p_quad == doctest::Approx(1.0));
    CHECK_THROWS_AS(lin_vs_quad(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 3, 5}),
                    Error);
  }

  TEST_CASE("quadratic weight against season severity") {
    std::vector<PairedSeries> seasons;
    for (int s = 0; s < 3; ++s) {
      PairedSeries p;
      p.season = "s" + std::to_string(s);
      Rng rng(40 + s);
      for (int i = 0; i < 12; ++i) {
        const double xi = 1 + (s + 1) * std::sin(0.25 * i);
        p.week_labels.push_back(std::to_string(i));
        p.x.push_back(xi);
        p.y.push_back(0.05 + 0.01 * xi + 0.004 * s * xi * xi + 0.002 * rng.normal());
      }
      seasons.push_back(p);
    }
    const SeverityTrend t = quad_weight_vs_severity(seasons);
    REQUIRE(t.points.size() == 3);
    double total = 0;
    for (double v : seasons[1].x) total += v;
    CHECK(t.points[1].total_ili == doctest::Approx(total));
    CHECK(t.points[1].p_quad == doctest::Approx(lin_vs_quad(seasons[1].x, seasons[1].y).p_quad));
    // Oracle slope: ordinary least squares through the three points.
    const auto beta = normal_equations({t.points[0].total_ili, t.points[1].total_ili,
                                        t.points[2].total_ili},
                                       {t.points[0].p_quad, t.points[1].p_quad,
                                        t.points[2].p_quad},
                                       1);
    CHECK(t.slope == doctest::Approx(beta[1]).epsilon(1e-9));
    CHECK(t.intercept == doctest::Approx(beta[0]).epsilon(1e-9));
    CHECK_THROWS_AS(quad_weight_vs_severity(std::span<const PairedSeries>(seasons.data(), 1)),
                    Error);
  }

  TEST_CASE("paired series validation") {
    PairedSeries p;
    p.x = {1, 2, 3};
    p.y = {0.1, 0.2};
    p.week_labels = {"1", "2", "3"};
    CHECK_THROWS_AS(p.validate(), Error);
  }
}
