#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mediaflu/error.hpp"
#include "mediaflu/model.hpp"
#include "mediaflu/optim.hpp"

namespace mediaflu {

// Fitted coordinates are theta = (R0, 1/sigma, 1/gamma[, p]) with periods in
// days; rates are derived from them internally.
enum ThetaIndex : std::size_t { kR0 = 0, kInvSigma = 1, kInvGamma = 2, kP = 3 };

inline constexpr double kDefaultPMax = 100.0;
inline constexpr double kPenalty = 1e12;

// 3 for f = 1, 4 for every media kind.
std::size_t fitted_parameter_count(MediaKind kind);

struct BoxBounds {
  std::vector<double> lo;
  std::vector<double> hi;

  // R0 in [1, 2], 1/sigma in [1, 3], 1/gamma in [1, 5], p in [0, 1] for
  // Linear and [0, p_max] for the other kinds.
  static BoxBounds for_kind(MediaKind kind, double p_max = kDefaultPMax);

  std::size_t size() const noexcept { return lo.size(); }
  bool contains(std::span<const double> theta) const;
};

EpiParams params_from_theta(std::span<const double> theta, MediaKind kind);
std::vector<double> theta_from_params(const EpiParams& p);

// Model weekly incidence for weeks 0..n_weeks-1 started from
// initial_state(first_obs_pct / scale) and reported as scale times the
// incidence. Throws on infeasible start or blowup.
std::vector<double> model_weekly(std::span<const double> theta,
                                 MediaKind kind, Variant variant,
                                 double first_obs_pct, std::size_t n_weeks,
                                 double dt = kDefaultDt, double scale = 1.0);

// Observations that enter the residual sum for a window of the given length.
// Week 0 seeds the initial state, so it is not itself a residual.
std::size_t residual_count(std::size_t window_length);

struct ObjectiveStats {
  long evaluations = 0;
  long penalties = 0;
};

// Sum of squared residuals between model_weekly and data over weeks
// 1..size-1. Infeasible starts and integration failures return kPenalty.
// Throws Error(ParameterDomain) if data[0] is not in (0, 100) and
// Error(SampleTooSmall) if the window is shorter than k + 2.
double rss_objective(std::span<const double> theta,
                     std::span<const double> data, Variant variant,
                     MediaKind kind, ObjectiveStats* stats = nullptr,
                     double dt = kDefaultDt, double scale = 1.0);

// Noise-free window generated so that rss_objective(theta, window) == 0.
std::vector<double> synthetic_window(std::span<const double> theta,
                                     MediaKind kind, Variant variant,
                                     double first_obs_pct, std::size_t length,
                                     double dt = kDefaultDt);

struct FitResult {
  MediaKind kind = MediaKind::None;
  Variant variant = Variant::Seeiir;
  EpiParams params;
  std::vector<double> theta;
  double rss = 0.0;
  std::size_t n = 0;  // residuals
  std::size_t k = 0;  // fitted parameters
  double scale = 1.0;  // reporting scale; 1 unless FitOptions::fit_scale
  bool converged = false;
  int starts_tried = 1;
  int iterations = 0;
  long evaluations = 0;
  long penalties = 0;
  std::string status;
  std::vector<double> trace;  // objective after each accepted iteration
};

struct FitOptions {
  BoxOptions box;
  double p_max = kDefaultPMax;
  double dt = kDefaultDt;
  // Fit a reporting scale (observed = scale * incidence) as one more
  // coordinate. Off for replication runs, where scale is 1.
  bool fit_scale = false;
  double scale_lo = 0.1;
  double scale_hi = 10.0;
};

// for_kind plus the scale coordinate when opts.fit_scale is set.
BoxBounds search_bounds(MediaKind kind, const FitOptions& opts);

// Projected L-BFGS from theta0, run in box-normalized coordinates. theta0
// spans search_bounds, so it ends with the scale when that is fitted.
FitResult bounded_fit(std::span<const double> data, Variant variant,
                      MediaKind kind, std::span<const double> theta0,
                      const FitOptions& opts = {});

// n points of a Latin hypercube in the box, one stratum per point and axis.
std::vector<std::vector<double>> latin_hypercube(const BoxBounds& bounds,
                                                 std::size_t n,
                                                 std::uint64_t seed);

struct MultiStartOptions {
  int n_starts = 20;
  std::uint64_t seed = 42;
  FitOptions fit;
};

class FitFailure : public Error {
 public:
  FitFailure(std::vector<std::string> per_start, const std::string& what)
      : Error(ErrorKind::FitFailure, what), per_start_(std::move(per_start)) {}
  const std::vector<std::string>& per_start() const { return per_start_; }

 private:
  std::vector<std::string> per_start_;
};

// Runs bounded_fit from every Latin-hypercube start and keeps the lowest rss
// (ties go to the lowest start index). Starts run in parallel under OpenMP;
// the result is bit-identical to multi_start_fit_serial.
FitResult multi_start_fit(std::span<const double> data, Variant variant,
                          MediaKind kind, const MultiStartOptions& opts = {});

// Single-threaded reference for multi_start_fit.
FitResult multi_start_fit_serial(std::span<const double> data, Variant variant,
                                 MediaKind kind,
                                 const MultiStartOptions& opts = {});

}  // namespace mediaflu
