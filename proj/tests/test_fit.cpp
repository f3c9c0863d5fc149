#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "mediaflu/fit.hpp"
#include "mediaflu/observe.hpp"
#include "mediaflu/optim.hpp"
#include "mediaflu/rng.hpp"

using namespace mediaflu;

namespace {

WeeklySeries series_of(std::vector<double> v) {
  WeeklySeries s;
  s.season = "test";
  for (std::size_t i = 0; i < v.size(); ++i) {
    s.week_index.push_back(static_cast<long>(i + 1));
    s.week_labels.push_back(std::to_string(i + 1));
  }
  s.values = std::move(v);
  return s;
}

std::vector<double> noisy(std::vector<double> d, std::uint64_t seed, double cv) {
  Rng rng(seed);
  for (std::size_t i = 1; i < d.size(); ++i) d[i] *= 1.0 + cv * rng.normal();
  return d;
}

}  // namespace

TEST_SUITE("observe") {
  TEST_CASE("initial state is the quasi-equilibrium split") {
    const EpiParams p = EpiParams::from_periods(1.5, 2.0, 4.0);
    const auto x = initial_state(1.0, p, Variant::Seeiir);
    CHECK(x.infectious() == doctest::Approx(0.01));
    CHECK(x.exposed() == doctest::Approx(0.005));  // gamma/sigma = 0.5
    CHECK(x[1] == x[2]);
    CHECK(x[3] == x[4]);
    CHECK(x.recovered() == 0.0);
    CHECK(x.sum() == doctest::Approx(1.0));
    const auto y = initial_state(1.0, p, Variant::Seir);
    CHECK(y.exposed() == doctest::Approx(0.005));
    CHECK_THROWS_AS(initial_state(0.0, p, Variant::Seir), Error);
    const EpiParams slow_latent = EpiParams::from_periods(1.5, 30.0, 1.0);
    try {
      initial_state(5.0, slow_latent, Variant::Seeiir);
      FAIL("expected InfeasibleInit");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InfeasibleInit);
    }
  }

  TEST_CASE("weekly incidence differences the cumulative onsets") {
    const EpiParams p = EpiParams::from_periods(1.5, 2.0, 2.0);
    const Trajectory tr = integrate(p, initial_state(0.1, p, Variant::Seeiir), 70.0);
    const auto w = weekly_incidence(tr, 10);
    double sum = 0.0;
    for (double v : w) sum += v;
    CHECK(sum == doctest::Approx(100.0 * tr.cumulative_onsets_at(70.0)));
    CHECK(w[3] == doctest::Approx(100.0 * (tr.cumulative_onsets_at(28.0) -
                                          tr.cumulative_onsets_at(21.0))));
    CHECK(weekly_incidence(tr, 10, 2.0)[4] == doctest::Approx(2.0 * w[4]));
    CHECK_THROWS_AS(weekly_incidence(tr, 11), Error);
  }

  TEST_CASE("window placement relative to the peak") {
    std::vector<double> v(30, 1.0);
    v[12] = 5.0;
    const auto s = series_of(v);
    const FitWindow w = make_window(s);
    CHECK(w.begin() == 8);
    CHECK(w.end() == 24);
    CHECK(window_values(s, w).size() == 16);
    try {
      make_window(s, -14, 16);
      FAIL("expected truncation");
    } catch (const TruncatedWindowError& e) {
      CHECK(e.feasible_begin() == 0);
      CHECK(e.feasible_end() == 14);
    }
    CHECK_THROWS_AS(make_window(s, -4, 25), TruncatedWindowError);
    CHECK_THROWS_AS(make_window(s, 1, 5), Error);
  }

  TEST_CASE("windows may not straddle a week gap") {
    std::vector<double> v(30, 1.0);
    v[12] = 5.0;
    auto s = series_of(v);
    for (std::size_t i = 15; i < s.size(); ++i) s.week_index[i] += 3;
    s.has_gaps = true;
    CHECK_THROWS_AS(make_window(s), Error);
    CHECK_NOTHROW(make_window(s, -4, 7));
  }
}

TEST_SUITE("fit") {
  TEST_CASE("objective vanishes at the generating parameters") {
    const std::vector<double> theta = {1.6, 2.0, 2.5, 0.7};
    const auto d = synthetic_window(theta, MediaKind::Linear, Variant::Seeiir, 0.4, 16);
    CHECK(d[0] == 0.4);
    CHECK(rss_objective(theta, d, Variant::Seeiir, MediaKind::Linear) == 0.0);
    CHECK(residual_count(16) == 15);
    CHECK(rss_objective(std::vector<double>{1.6, 2.0, 2.5, 0.2}, d, Variant::Seeiir,
                        MediaKind::Linear) > 0.0);
  }

  TEST_CASE("infeasible starts are penalised, short windows rejected") {
    const std::vector<double> d = {30.0, 31.0, 32.0, 33.0, 34.0, 35.0};
    ObjectiveStats st;
    const std::vector<double> theta = {1.5, 1.0, 5.0};
    // 1/sigma = 3, 1/gamma = 1: E = 3 I = 0.9 leaves no susceptibles.
    CHECK(rss_objective(std::vector<double>{1.5, 3.0, 1.0}, d, Variant::Seir,
                        MediaKind::None, &st) == kPenalty);
    CHECK(st.penalties == 1);
    CHECK(rss_objective(theta, d, Variant::Seir, MediaKind::None, &st) < kPenalty);
    CHECK(st.evaluations == 2);
    const std::vector<double> four = {1.0, 2.0, 3.0, 4.0};
    CHECK_THROWS_AS(rss_objective(theta, four, Variant::Seir, MediaKind::None), Error);
  }

  TEST_CASE("bounds per kind") {
    CHECK(fitted_parameter_count(MediaKind::None) == 3);
    CHECK(fitted_parameter_count(MediaKind::InverseLinear) == 4);
    const BoxBounds b = BoxBounds::for_kind(MediaKind::Linear);
    CHECK(b.lo == std::vector<double>{1, 1, 1, 0});
    CHECK(b.hi == std::vector<double>{2, 3, 5, 1});
    CHECK(BoxBounds::for_kind(MediaKind::Exponential).hi[kP] == kDefaultPMax);
    CHECK(b.contains(std::vector<double>{1.5, 2, 2, 0.5}));
    CHECK_FALSE(b.contains(std::vector<double>{2.5, 2, 2, 0.5}));
    const auto th = theta_from_params(params_from_theta(std::vector<double>{1.4, 2, 3, 0.3},
                                                        MediaKind::Linear));
    CHECK(th[kR0] == doctest::Approx(1.4));
    CHECK(th[kInvGamma] == doctest::Approx(3.0));
    CHECK(th[kP] == doctest::Approx(0.3));
  }

  TEST_CASE("latin hypercube has one point per stratum") {
    const BoxBounds b = BoxBounds::for_kind(MediaKind::Exponential);
    const auto pts = latin_hypercube(b, 20, 42);
    REQUIRE(pts.size() == 20);
    for (std::size_t d = 0; d < b.size(); ++d) {
      std::set<int> strata;
      for (const auto& p : pts) {
        const double u = (p[d] - b.lo[d]) / (b.hi[d] - b.lo[d]);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        strata.insert(static_cast<int>(u * 20));
      }
      CHECK(strata.size() == 20);
    }
    CHECK(latin_hypercube(b, 20, 42) == pts);
    CHECK(latin_hypercube(b, 20, 43) != pts);
  }

  TEST_CASE("finite differences switch to one side at a bound") {
    const Objective f = [](std::span<const double> x) { return x[0] * x[0] + 3 * x[1]; };
    const std::vector<double> x = {1.0, 0.0}, h = {1e-5, 1e-5};
    const std::vector<double> lo = {0.0, 0.0}, hi = {2.0, 2.0};
    const auto g = finite_diff_gradient(f, x, h, lo, hi);
    CHECK(g.g[0] == doctest::Approx(2.0));
    CHECK(g.g[1] == doctest::Approx(3.0));
    CHECK_FALSE(g.one_sided[0]);
    CHECK(g.one_sided[1]);
    CHECK(g.any_one_sided);
  }

  TEST_CASE("projected L-BFGS on a bounded Rosenbrock") {
    const Objective f = [](std::span<const double> x) {
      return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
    };
    const std::vector<double> lo = {-2, -2}, hi = {2, 2};
    const BoxResult r = minimize_box(f, std::vector<double>{-1.2, 1.0}, lo, hi);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-3));
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1]);

    // Optimum outside the box: lands on the active bound.
    const std::vector<double> hi2 = {0.5, 2};
    const BoxResult b = minimize_box(f, std::vector<double>{-1.2, 1.0}, lo, hi2);
    CHECK(b.x[0] == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(b.x[1] == doctest::Approx(0.25).epsilon(1e-3));
    CHECK_THROWS_AS(minimize_box(f, std::vector<double>{3.0, 0.0}, lo, hi), Error);
  }

  TEST_CASE("noise-free windows are recovered") {
    const std::vector<double> theta = {1.8, 1.5, 2.2, 25.0};
    const auto d = synthetic_window(theta, MediaKind::Exponential, Variant::Seeiir, 0.3, 16);
    MultiStartOptions o;
    o.n_starts = 8;
    const FitResult r = multi_start_fit(d, Variant::Seeiir, MediaKind::Exponential, o);
    CHECK(r.n == 15);
    CHECK(r.k == 4);
    CHECK(r.starts_tried == 8);
    CHECK(r.rss < 1e-8);
    CHECK(r.theta[kR0] == doctest::Approx(1.8).epsilon(1e-2));
    CHECK(r.params.r0() == doctest::Approx(r.theta[kR0]));
  }

  TEST_CASE("single start stays inside the box") {
    const auto d = noisy(synthetic_window(std::vector<double>{1.5, 2.0, 3.0},
                                          MediaKind::None, Variant::Seir, 0.2, 16),
                         5, 0.02);
    const FitResult r = bounded_fit(d, Variant::Seir, MediaKind::None,
                                    std::vector<double>{1.9, 1.1, 4.5});
    CHECK(BoxBounds::for_kind(MediaKind::None).contains(r.theta));
    CHECK(r.rss <= rss_objective(std::vector<double>{1.9, 1.1, 4.5}, d, Variant::Seir,
                                 MediaKind::None));
    CHECK_THROWS_AS(bounded_fit(d, Variant::Seir, MediaKind::None,
                                std::vector<double>{2.1, 2, 2}),
                    Error);
  }

  TEST_CASE("parallel multi-start equals the serial reference bit for bit") {
    const auto d = noisy(synthetic_window(std::vector<double>{1.9, 1.5, 2.0, 40.0},
                                          MediaKind::InverseLinear, Variant::Seeiir, 0.3, 16),
                         77, 0.01);
    MultiStartOptions o;
    o.n_starts = 6;
    for (MediaKind k : {MediaKind::None, MediaKind::InverseLinear}) {
      const FitResult a = multi_start_fit(d, Variant::Seeiir, k, o);
      const FitResult b = multi_start_fit_serial(d, Variant::Seeiir, k, o);
      CHECK(a.rss == b.rss);
      CHECK(a.theta == b.theta);
      CHECK(a.evaluations == b.evaluations);
      CHECK(a.status == b.status);
    }
  }
}

TEST_SUITE("fit") {
  TEST_CASE("reporting scale is recovered when fitted") {
    const std::vector<double> theta = {1.7, 1.5, 2.5};
    auto d = model_weekly(theta, MediaKind::None, Variant::Seeiir, 0.8, 16, kDefaultDt, 2.5);
    d[0] = 0.8;
    CHECK(rss_objective(theta, d, Variant::Seeiir, MediaKind::None, nullptr, kDefaultDt,
                        2.5) < 1e-20);
    MultiStartOptions o;
    o.n_starts = 8;
    o.fit.fit_scale = true;
    CHECK(search_bounds(MediaKind::None, o.fit).size() == 4);
    const FitResult r = multi_start_fit(d, Variant::Seeiir, MediaKind::None, o);
    CHECK(r.k == 4);
    CHECK(r.theta.size() == 3);
    CHECK(r.scale == doctest::Approx(2.5).epsilon(1e-3));
    CHECK(r.rss < 1e-8);

    // Off by default: the plain fit cannot absorb the factor.
    o.fit.fit_scale = false;
    const FitResult plain = multi_start_fit(d, Variant::Seeiir, MediaKind::None, o);
    CHECK(plain.scale == 1.0);
    CHECK(plain.rss > r.rss);
  }
}
