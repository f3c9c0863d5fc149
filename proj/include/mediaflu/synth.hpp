#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mediaflu/fit.hpp"
#include "mediaflu/ingest.hpp"

namespace mediaflu {

// One synthetic season: model weekly incidence from a small seed, scaled and
// shifted onto the reporting scale, with multiplicative Gaussian noise.
//
// With ramp_weeks > 0 the model curve starts at seed_pct under the same
// initial-state convention the fits use, and ramp_weeks of geometric growth
// are prepended. The default fit window then starts exactly where the model
// curve does, provided seed_pct puts the peak kDefaultWindowOffset weeks in
// (see seed_for_peak).
struct SyntheticSeason {
  std::string season;
  MediaKind kind = MediaKind::Linear;
  Variant variant = Variant::Seeiir;
  std::vector<double> theta;  // (R0, 1/sigma, 1/gamma[, p])
  double seed_pct = 0.05;     // prevalence in percent where the model starts
  std::size_t weeks = 30;     // model weeks, ramp excluded
  std::size_t ramp_weeks = 0;
  double noise_cv = 0.01;
  std::uint64_t seed = 1;
  double scale = 1.0;     // reported = baseline + scale * incidence
  double baseline = 0.0;
  long first_week = 1;
};

WeeklySeries generate_season(const SyntheticSeason& spec,
                             SeriesKind kind = SeriesKind::LabConfirmedPct);

// Starting prevalence (percent) whose model curve peaks at week peak_week,
// found by bisection on log scale. Throws Error(ParameterDomain) when no
// start in [1e-4, 20] percent does so.
double seed_for_peak(std::span<const double> theta, MediaKind kind,
                     Variant variant, std::size_t peak_week);

DataTable to_table(std::span<const WeeklySeries> seasons, SeriesKind kind,
                   std::string source);

// Engagement series for an ILI season: y = a + b x + c x^2 + noise.
WeeklySeries synthetic_retweets(const WeeklySeries& ili, double a, double b,
                                double c, double noise_sd, std::uint64_t seed);

struct Corpus {
  std::vector<SyntheticSeason> lab_specs;  // includes the pandemic analog
  std::string pandemic_season;
  DataTable lab;
  DataTable ili;
  DataTable retweets;
};

// Deterministic bundled corpus: 17 lab-confirmed seasons 1998/99..2014/15
// (16 generated by the linear media model plus a no-media pandemic analog in
// 2009/10) and ILI / retweet pairs for 2009/10..2014/15.
Corpus make_corpus(std::uint64_t seed = 2015, double lab_noise_cv = 0.01);

}  // namespace mediaflu
