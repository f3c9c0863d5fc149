#include "mediaflu/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mediaflu/rng.hpp"

namespace mediaflu {

WeeklySeries generate_season(const SyntheticSeason& spec, SeriesKind kind) {
  std::vector<double> w = model_weekly(spec.theta, spec.kind, spec.variant,
                                       spec.seed_pct, spec.weeks);
  w[0] = spec.seed_pct;
  if (spec.ramp_weeks > 0) {
    const double growth = std::max(1.2, w[2] / w[1]);
    std::vector<double> ramp(spec.ramp_weeks);
    double v = w[0];
    for (std::size_t j = spec.ramp_weeks; j-- > 0;) {
      v /= growth;
      ramp[j] = v;
    }
    w.insert(w.begin(), ramp.begin(), ramp.end());
  }
  Rng rng(spec.seed);
  WeeklySeries s;
  s.season = spec.season;
  s.kind = kind;
  for (std::size_t i = 0; i < w.size(); ++i) {
    // The week the model starts from is the conditioning value of the fits
    // and is kept exact when there is a ramp in front of it.
    const double e = rng.normal();
    const bool exact = spec.ramp_weeks > 0 && i == spec.ramp_weeks;
    const double noisy = exact ? w[i] : w[i] * (1.0 + spec.noise_cv * e);
    s.values.push_back(spec.baseline + spec.scale * std::max(noisy, 0.0));
    s.week_index.push_back(spec.first_week + static_cast<long>(i));
    s.week_labels.push_back(std::to_string(s.week_index.back()));
  }
  return s;
}

namespace {

std::size_t model_peak(std::span<const double> theta, MediaKind kind,
                       Variant variant, double x0, std::size_t n) {
  std::vector<double> w = model_weekly(theta, kind, variant, x0, n);
  w[0] = x0;
  return peak_of(w).index;
}

// Smallest start (log-bisection) whose curve peaks at or before week target.
double peak_boundary(std::span<const double> theta, MediaKind kind,
                     Variant variant, std::size_t target, std::size_t n) {
  double lo = std::log(1e-4), hi = std::log(20.0);
  if (model_peak(theta, kind, variant, std::exp(hi), n) > target ||
      model_peak(theta, kind, variant, std::exp(lo), n) <= target)
    throw Error(ErrorKind::ParameterDomain, "no start reaches that peak week");
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (model_peak(theta, kind, variant, std::exp(mid), n) <= target)
      hi = mid;
    else
      lo = mid;
  }
  return std::exp(hi);
}

}  // namespace

double seed_for_peak(std::span<const double> theta, MediaKind kind,
                     Variant variant, std::size_t peak_week) {
  if (peak_week == 0)
    throw Error(ErrorKind::ParameterDomain, "peak week must be >= 1");
  const std::size_t n = peak_week + 12;
  // Centre of the band of starts that peak exactly at peak_week.
  const double a = peak_boundary(theta, kind, variant, peak_week, n);
  const double b = peak_boundary(theta, kind, variant, peak_week - 1, n);
  const double x0 = std::sqrt(a * b);
  if (model_peak(theta, kind, variant, x0, n) != peak_week)
    throw Error(ErrorKind::ParameterDomain, "peak week skipped by every start");
  return x0;
}

DataTable to_table(std::span<const WeeklySeries> seasons, SeriesKind kind,
                   std::string source) {
  DataTable t;
  t.kind = kind;
  t.source = std::move(source);
  for (const WeeklySeries& s : seasons)
    for (std::size_t i = 0; i < s.size(); ++i)
      t.rows.push_back({s.season, s.week_labels[i], s.week_index[i], s.values[i]});
  return t;
}

WeeklySeries synthetic_retweets(const WeeklySeries& ili, double a, double b,
                                double c, double noise_sd, std::uint64_t seed) {
  Rng rng(seed);
  WeeklySeries r = ili;
  r.kind = SeriesKind::RetweetProportion;
  for (double& v : r.values) {
    const double y = a + b * v + c * v * v + noise_sd * rng.normal();
    v = std::clamp(y, 0.0, 1.0);
  }
  return r;
}

namespace {

std::string season_label(int start_year) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%d/%02d", start_year, (start_year + 1) % 100);
  return buf;
}

double between(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform();
}

constexpr std::size_t kRampWeeks = 6;

// Draws until the season peaks where the default window expects it, noise
// included.
WeeklySeries draw_season(SyntheticSeason& spec, Rng& rng, bool keep_theta) {
  const auto peak_week = static_cast<std::size_t>(-kDefaultWindowOffset);
  for (;;) {
    if (!keep_theta) {
      spec.theta = {between(rng, 1.5, 1.95), between(rng, 1.2, 2.5),
                    between(rng, 1.6, 3.5)};
      if (spec.kind != MediaKind::None)
        spec.theta.push_back(between(rng, 0.75, 1.0));
    }
    try {
      spec.seed_pct = seed_for_peak(spec.theta, spec.kind, spec.variant, peak_week);
      WeeklySeries s = generate_season(spec, SeriesKind::LabConfirmedPct);
      if (peak_of(s.values).index == kRampWeeks + peak_week) return s;
    } catch (const Error&) {
    }
    if (keep_theta) ++spec.seed;  // only the noise can change
  }
}

}  // namespace

Corpus make_corpus(std::uint64_t seed, double lab_noise_cv) {
  Corpus c;
  Rng rng(seed);
  std::vector<WeeklySeries> lab;
  for (int year = 1998; year <= 2014; ++year) {
    SyntheticSeason spec;
    spec.season = season_label(year);
    spec.seed = seed * 1000 + static_cast<std::uint64_t>(year);
    spec.weeks = 24;
    spec.ramp_weeks = kRampWeeks;
    spec.noise_cv = lab_noise_cv;
    const bool pandemic = year == 2009;
    if (pandemic) {
      // Fast and without a media response.
      c.pandemic_season = spec.season;
      spec.kind = MediaKind::None;
      spec.theta = {1.95, 1.2, 1.6};
    } else {
      spec.kind = MediaKind::Linear;
    }
    lab.push_back(draw_season(spec, rng, pandemic));
    c.lab_specs.push_back(spec);
  }
  c.lab = to_table(lab, SeriesKind::LabConfirmedPct, "synthetic");

  // ILI seasons 2009/10..2014/15 and their retweet proportions. The
  // quadratic term grows with season size; 2011/12 is left uncorrelated.
  struct Engagement {
    int year;
    double r0, a, b, c, sd;
  };
  const Engagement eng[] = {
      {2009, 1.9, 0.08, 0.020, 0.0040, 0.004},
      {2010, 1.6, 0.08, 0.030, 0.0, 0.004},
      {2011, 1.3, 0.10, 0.0, 0.0, 0.010},
      {2012, 1.75, 0.08, 0.022, 0.0020, 0.004},
      {2013, 1.55, 0.08, 0.030, 0.0, 0.004},
      {2014, 1.7, 0.08, 0.026, 0.0006, 0.004},
  };
  std::vector<WeeklySeries> ili, rt;
  for (const Engagement& e : eng) {
    SyntheticSeason spec;
    spec.season = season_label(e.year);
    spec.kind = MediaKind::Linear;
    spec.theta = {e.r0, 1.5, 2.5, 0.8};
    spec.seed_pct = 0.01;
    spec.weeks = 33;
    spec.noise_cv = 0.03;
    spec.seed = seed * 2000 + static_cast<std::uint64_t>(e.year);
    spec.baseline = 1.0;
    spec.scale = 0.5;
    spec.first_week = 40;
    ili.push_back(generate_season(spec, SeriesKind::IliPct));
    rt.push_back(synthetic_retweets(ili.back(), e.a, e.b, e.c, e.sd,
                                    spec.seed + 7));
  }
  c.ili = to_table(ili, SeriesKind::IliPct, "synthetic");
  c.retweets = to_table(rt, SeriesKind::RetweetProportion, "synthetic");
  return c;
}

}  // namespace mediaflu
