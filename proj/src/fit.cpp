#include "mediaflu/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "mediaflu/observe.hpp"
#include "mediaflu/rng.hpp"

namespace mediaflu {

std::size_t fitted_parameter_count(MediaKind kind) {
  return kind == MediaKind::None ? 3 : 4;
}

BoxBounds BoxBounds::for_kind(MediaKind kind, double p_max) {
  BoxBounds b{{1.0, 1.0, 1.0}, {2.0, 3.0, 5.0}};
  if (kind != MediaKind::None) {
    b.lo.push_back(0.0);
    b.hi.push_back(kind == MediaKind::Linear ? 1.0 : p_max);
  }
  return b;
}

BoxBounds search_bounds(MediaKind kind, const FitOptions& opts) {
  BoxBounds b = BoxBounds::for_kind(kind, opts.p_max);
  if (opts.fit_scale) {
    if (!(opts.scale_lo > 0.0 && opts.scale_lo < opts.scale_hi))
      throw Error(ErrorKind::ParameterDomain, "scale bounds must satisfy 0 < lo < hi");
    b.lo.push_back(opts.scale_lo);
    b.hi.push_back(opts.scale_hi);
  }
  return b;
}

bool BoxBounds::contains(std::span<const double> theta) const {
  if (theta.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (!(theta[i] >= lo[i] && theta[i] <= hi[i])) return false;
  return true;
}

EpiParams params_from_theta(std::span<const double> theta, MediaKind kind) {
  if (theta.size() != fitted_parameter_count(kind)) {
    throw Error(ErrorKind::LengthMismatch,
                "theta has " + std::to_string(theta.size()) +
                    " entries for media kind " + std::string(media_id(kind)));
  }
  const MediaFunction media =
      kind == MediaKind::None ? MediaFunction{} : MediaFunction{kind, theta[kP]};
  return EpiParams::from_periods(theta[kR0], theta[kInvSigma], theta[kInvGamma],
                                 media);
}

std::vector<double> theta_from_params(const EpiParams& p) {
  std::vector<double> t{p.r0(), 1.0 / p.sigma, 1.0 / p.gamma};
  if (p.media.kind() != MediaKind::None) t.push_back(p.media.param());
  return t;
}

std::vector<double> model_weekly(std::span<const double> theta, MediaKind kind,
                                 Variant variant, double first_obs_pct,
                                 std::size_t n_weeks, double dt, double scale) {
  const EpiParams p = params_from_theta(theta, kind);
  const CompartmentState init = initial_state(first_obs_pct / scale, p, variant);
  const Trajectory traj =
      integrate(p, init, 7.0 * static_cast<double>(n_weeks), dt);
  return weekly_incidence(traj, n_weeks, scale);
}

std::size_t residual_count(std::size_t window_length) {
  return window_length == 0 ? 0 : window_length - 1;
}

double rss_objective(std::span<const double> theta,
                     std::span<const double> data, Variant variant,
                     MediaKind kind, ObjectiveStats* stats, double dt,
                     double scale) {
  const std::size_t k = fitted_parameter_count(kind);
  if (data.size() < k + 2) {
    throw Error(ErrorKind::SampleTooSmall,
                "window of " + std::to_string(data.size()) +
                    " weeks is shorter than k + 2 = " + std::to_string(k + 2));
  }
  if (!(data[0] > 0.0 && data[0] < 100.0)) {
    throw Error(ErrorKind::ParameterDomain,
                "first window value must lie in (0, 100)");
  }
  if (stats) ++stats->evaluations;
  if (!(data[0] / scale < 100.0)) {
    // The rescaled start would exceed the whole population.
    if (stats) ++stats->penalties;
    return kPenalty;
  }
  std::vector<double> model;
  try {
    model = model_weekly(theta, kind, variant, data[0], data.size(), dt, scale);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::IntegrationBlowup &&
        e.kind() != ErrorKind::InfeasibleInit)
      throw;
    if (stats) ++stats->penalties;
    return kPenalty;
  }
  double rss = 0.0;
  for (std::size_t w = 1; w < data.size(); ++w) {
    const double r = model[w] - data[w];
    rss += r * r;
  }
  if (!std::isfinite(rss)) {
    if (stats) ++stats->penalties;
    return kPenalty;
  }
  return rss;
}

std::vector<double> synthetic_window(std::span<const double> theta,
                                     MediaKind kind, Variant variant,
                                     double first_obs_pct, std::size_t length,
                                     double dt) {
  std::vector<double> w =
      model_weekly(theta, kind, variant, first_obs_pct, length, dt);
  w[0] = first_obs_pct;
  return w;
}

FitResult bounded_fit(std::span<const double> data, Variant variant,
                      MediaKind kind, std::span<const double> theta0,
                      const FitOptions& opts) {
  const BoxBounds bounds = search_bounds(kind, opts);
  if (!bounds.contains(theta0))
    throw Error(ErrorKind::ParameterDomain, "start point outside the box");
  const std::size_t k = bounds.size();
  const std::size_t core = fitted_parameter_count(kind);
  if (data.size() < k + 2) {
    throw Error(ErrorKind::SampleTooSmall,
                "window of " + std::to_string(data.size()) +
                    " weeks is shorter than k + 2 = " + std::to_string(k + 2));
  }

  ObjectiveStats stats;
  // Optimize over u in [0, 1]^k, theta = lo + u (hi - lo).
  auto to_theta = [&](std::span<const double> u) {
    std::vector<double> t(k);
    for (std::size_t i = 0; i < k; ++i) {
      t[i] = std::clamp(bounds.lo[i] + u[i] * (bounds.hi[i] - bounds.lo[i]),
                        bounds.lo[i], bounds.hi[i]);
    }
    return t;
  };
  const Objective objective = [&](std::span<const double> u) {
    const std::vector<double> t = to_theta(u);
    const double scale = opts.fit_scale ? t.back() : 1.0;
    return rss_objective(std::span(t).first(core), data, variant, kind, &stats,
                         opts.dt, scale);
  };

  std::vector<double> u0(k), ulo(k, 0.0), uhi(k, 1.0);
  for (std::size_t i = 0; i < k; ++i)
    u0[i] = (theta0[i] - bounds.lo[i]) / (bounds.hi[i] - bounds.lo[i]);

  const BoxResult box = minimize_box(objective, u0, ulo, uhi, opts.box);

  FitResult r;
  r.kind = kind;
  r.variant = variant;
  r.theta = to_theta(box.x);
  if (opts.fit_scale) {
    r.scale = r.theta.back();
    r.theta.pop_back();
  }
  r.params = params_from_theta(r.theta, kind);
  r.rss = box.f;
  r.n = residual_count(data.size());
  r.k = k;
  r.converged = box.converged;
  r.iterations = box.iterations;
  r.evaluations = stats.evaluations;
  r.penalties = stats.penalties;
  r.status = to_string(box.status);
  r.trace = box.trace;
  return r;
}

std::vector<std::vector<double>> latin_hypercube(const BoxBounds& bounds,
                                                 std::size_t n,
                                                 std::uint64_t seed) {
  const std::size_t k = bounds.size();
  Rng rng(seed);
  std::vector<std::vector<double>> pts(n, std::vector<double>(k));
  std::vector<std::size_t> perm(n);
  for (std::size_t d = 0; d < k; ++d) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i)
      std::swap(perm[i - 1], perm[rng.below(i)]);
    for (std::size_t i = 0; i < n; ++i) {
      const double u =
          (static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(n);
      pts[i][d] = bounds.lo[d] + u * (bounds.hi[d] - bounds.lo[d]);
    }
  }
  return pts;
}

namespace {

struct StartOutcome {
  std::optional<FitResult> fit;
  std::string diagnostic;
};

StartOutcome run_start(std::span<const double> data, Variant variant,
                       MediaKind kind, const std::vector<double>& start,
                       const FitOptions& opts) {
  StartOutcome out;
  try {
    out.fit = bounded_fit(data, variant, kind, start, opts);
    if (!(out.fit->rss < kPenalty)) {
      out.diagnostic = "start stuck in the penalty region";
      out.fit.reset();
    } else {
      out.diagnostic = out.fit->status;
    }
  } catch (const Error& e) {
    out.diagnostic = std::string(to_string(e.kind())) + ": " + e.what();
  }
  return out;
}

FitResult merge(std::vector<StartOutcome>& outcomes, MediaKind kind) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].fit) continue;
    if (!best || outcomes[i].fit->rss < outcomes[*best].fit->rss) best = i;
  }
  if (!best) {
    std::vector<std::string> diags;
    for (auto& o : outcomes) diags.push_back(o.diagnostic);
    throw FitFailure(std::move(diags), "all " +
                                           std::to_string(outcomes.size()) +
                                           " starts failed for model " +
                                           std::string(media_id(kind)));
  }
  FitResult r = std::move(*outcomes[*best].fit);
  r.starts_tried = static_cast<int>(outcomes.size());
  long evals = 0, pens = 0;
  for (auto& o : outcomes) {
    if (!o.fit) continue;
    evals += o.fit->evaluations;
    pens += o.fit->penalties;
  }
  r.evaluations = evals;
  r.penalties = pens;
  return r;
}

void check_starts(const MultiStartOptions& opts) {
  if (opts.n_starts < 1)
    throw Error(ErrorKind::ParameterDomain, "n_starts must be >= 1");
}

}  // namespace

FitResult multi_start_fit(std::span<const double> data, Variant variant,
                          MediaKind kind, const MultiStartOptions& opts) {
  check_starts(opts);
  const auto starts =
      latin_hypercube(search_bounds(kind, opts.fit),
                      static_cast<std::size_t>(opts.n_starts), opts.seed);
  std::vector<StartOutcome> outcomes(starts.size());
  const long n = static_cast<long>(starts.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i)
    outcomes[i] = run_start(data, variant, kind, starts[i], opts.fit);
  return merge(outcomes, kind);
}

FitResult multi_start_fit_serial(std::span<const double> data, Variant variant,
                                 MediaKind kind,
                                 const MultiStartOptions& opts) {
  check_starts(opts);
  const auto starts =
      latin_hypercube(search_bounds(kind, opts.fit),
                      static_cast<std::size_t>(opts.n_starts), opts.seed);
  std::vector<StartOutcome> outcomes;
  outcomes.reserve(starts.size());
  for (const auto& s : starts)
    outcomes.push_back(run_start(data, variant, kind, s, opts.fit));
  return merge(outcomes, kind);
}

}  // namespace mediaflu
