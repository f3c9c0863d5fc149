#include "mediaflu/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mediaflu/error.hpp"

namespace mediaflu {

std::string_view variant_id(Variant v) {
  return v == Variant::Seeiir ? "seeiir" : "seir";
}

std::optional<Variant> parse_variant(std::string_view id) {
  if (id == "seeiir") return Variant::Seeiir;
  if (id == "seir") return Variant::Seir;
  return std::nullopt;
}

std::size_t compartment_count(Variant v) {
  return v == Variant::Seeiir ? 6 : 4;
}

EpiParams EpiParams::from_periods(double r0, double inv_sigma,
                                  double inv_gamma, MediaFunction media) {
  EpiParams p;
  p.gamma = 1.0 / inv_gamma;
  p.sigma = 1.0 / inv_sigma;
  p.beta = r0 * p.gamma;
  p.media = media;
  p.validate();
  return p;
}

void EpiParams::validate() const {
  if (!(std::isfinite(beta) && beta >= 0.0))
    throw Error(ErrorKind::ParameterDomain, "beta must be finite and >= 0");
  if (!(std::isfinite(sigma) && sigma > 0.0))
    throw Error(ErrorKind::ParameterDomain, "sigma must be finite and > 0");
  if (!(std::isfinite(gamma) && gamma > 0.0))
    throw Error(ErrorKind::ParameterDomain, "gamma must be finite and > 0");
}

bool EpiParams::within_fit_ranges(double tol) const {
  const double r = r0();
  const double ig = 1.0 / gamma;
  const double is = 1.0 / sigma;
  return r >= 1.0 - tol && r <= 2.0 + tol && ig >= 1.0 - tol &&
         ig <= 5.0 + tol && is >= 1.0 - tol && is <= 3.0 + tol;
}

// ---------------------------------------------------------------------------

namespace {

using Vec = std::array<double, 7>;  // compartments + cumulative onsets

// Writes dx for the first n compartments and the onset flow into dx[n].
void kernel(Variant v, const EpiParams& p, const double* x, double* dx) {
  if (v == Variant::Seeiir) {
    const double i_total = x[3] + x[4];
    const double force = p.beta * p.media(std::clamp(i_total, 0.0, 1.0)) *
                         x[0] * i_total;
    const double e1_out = 2.0 * p.sigma * x[1];
    const double e2_out = 2.0 * p.sigma * x[2];
    const double i1_out = 2.0 * p.gamma * x[3];
    const double i2_out = 2.0 * p.gamma * x[4];
    dx[0] = -force;
    dx[1] = force - e1_out;
    dx[2] = e1_out - e2_out;
    dx[3] = e2_out - i1_out;
    dx[4] = i1_out - i2_out;
    dx[5] = i2_out;
    dx[6] = e2_out;
  } else {
    const double i_total = x[2];
    const double force = p.beta * p.media(std::clamp(i_total, 0.0, 1.0)) *
                         x[0] * i_total;
    const double e_out = p.sigma * x[1];
    const double i_out = p.gamma * x[2];
    dx[0] = -force;
    dx[1] = force - e_out;
    dx[2] = e_out - i_out;
    dx[3] = i_out;
    dx[4] = e_out;
  }
}

void require_variant(const CompartmentState& x, Variant expected) {
  if (x.variant() != expected) {
    throw Error(ErrorKind::ModelVariant,
                "state variant " + std::string(variant_id(x.variant())) +
                    " passed to " + std::string(variant_id(expected)) +
                    " right-hand side");
  }
}

}  // namespace

double CompartmentState::exposed() const noexcept {
  return variant_ == Variant::Seeiir ? x_[1] + x_[2] : x_[1];
}

double CompartmentState::infectious() const noexcept {
  return variant_ == Variant::Seeiir ? x_[3] + x_[4] : x_[2];
}

double CompartmentState::sum() const noexcept {
  const auto v = values();
  return std::accumulate(v.begin(), v.end(), 0.0);
}

CompartmentState CompartmentState::seeiir(double s, double e1, double e2,
                                          double i1, double i2, double r) {
  const std::array<double, 6> x{s, e1, e2, i1, i2, r};
  return from_values(Variant::Seeiir, x);
}

CompartmentState CompartmentState::seir(double s, double e, double i,
                                        double r) {
  const std::array<double, 4> x{s, e, i, r};
  return from_values(Variant::Seir, x);
}

CompartmentState CompartmentState::from_values(Variant v,
                                               std::span<const double> x) {
  const std::size_t n = compartment_count(v);
  if (x.size() != n) {
    throw Error(ErrorKind::ModelVariant,
                "expected " + std::to_string(n) + " compartments, got " +
                    std::to_string(x.size()));
  }
  std::array<double, 6> out{};
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || x[i] < kNegativeFloor || x[i] > 1.0 + 1e-12) {
      throw Error(ErrorKind::ParameterDomain,
                  "compartment " + std::to_string(i) + " = " +
                      std::to_string(x[i]) + " is not a proportion");
    }
    out[i] = std::max(x[i], 0.0);
    total += out[i];
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw Error(ErrorKind::ParameterDomain,
                "compartments sum to " + std::to_string(total) + ", not 1");
  }
  return CompartmentState(v, out);
}

double Derivative::sum() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += d[i];
  return s;
}

Derivative rhs_seeiir(const EpiParams& p, const CompartmentState& x) {
  require_variant(x, Variant::Seeiir);
  Vec dx{};
  kernel(Variant::Seeiir, p, x.values().data(), dx.data());
  Derivative out{Variant::Seeiir, {}};
  std::copy_n(dx.begin(), 6, out.d.begin());
  return out;
}

Derivative rhs_seir(const EpiParams& p, const CompartmentState& x) {
  require_variant(x, Variant::Seir);
  Vec dx{};
  kernel(Variant::Seir, p, x.values().data(), dx.data());
  Derivative out{Variant::Seir, {}};
  std::copy_n(dx.begin(), 4, out.d.begin());
  return out;
}

Derivative rhs(const EpiParams& p, const CompartmentState& x) {
  return x.variant() == Variant::Seeiir ? rhs_seeiir(p, x) : rhs_seir(p, x);
}

double onset_flow(const EpiParams& p, const CompartmentState& x) {
  return x.variant() == Variant::Seeiir ? 2.0 * p.sigma * x[2]
                                        : p.sigma * x[1];
}

// ---------------------------------------------------------------------------

class Integrator {
 public:
  Integrator(const EpiParams& p, Variant v) : p_(p), v_(v) {
    n_ = compartment_count(v);
  }

  // One RK4 step of size h over compartments and the onset accumulator.
  void step(Vec& y, double h) const {
    Vec k1{}, k2{}, k3{}, k4{}, tmp{};
    kernel(v_, p_, y.data(), k1.data());
    for (std::size_t i = 0; i <= n_; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    kernel(v_, p_, tmp.data(), k2.data());
    for (std::size_t i = 0; i <= n_; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    kernel(v_, p_, tmp.data(), k3.data());
    for (std::size_t i = 0; i <= n_; ++i) tmp[i] = y[i] + h * k3[i];
    kernel(v_, p_, tmp.data(), k4.data());
    for (std::size_t i = 0; i <= n_; ++i)
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

  // Clamps tiny negatives, renormalizes drift, and rejects blowups.
  void tidy(Vec& y, std::size_t step_index) const {
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!std::isfinite(y[i])) {
        throw IntegrationError(step_index, "non-finite state at step " +
                                               std::to_string(step_index));
      }
      if (y[i] < CompartmentState::kNegativeFloor) {
        throw IntegrationError(
            step_index, "compartment " + std::to_string(i) + " went to " +
                            std::to_string(y[i]) + " at step " +
                            std::to_string(step_index));
      }
      if (y[i] < 0.0) y[i] = 0.0;
      total += y[i];
    }
    if (!std::isfinite(y[n_])) {
      throw IntegrationError(step_index, "non-finite onset accumulator at step " +
                                             std::to_string(step_index));
    }
    if (std::abs(total - 1.0) > 1e-12)
      for (std::size_t i = 0; i < n_; ++i) y[i] /= total;
  }

  CompartmentState state(const Vec& y) const {
    std::array<double, 6> x{};
    std::copy_n(y.begin(), n_, x.begin());
    return CompartmentState(v_, x);
  }

  std::size_t size() const { return n_; }

 private:
  const EpiParams& p_;
  Variant v_;
  std::size_t n_;
};

Trajectory integrate(const EpiParams& p, const CompartmentState& init,
                     double t_end, double dt) {
  p.validate();
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw Error(ErrorKind::ParameterDomain, "dt must be positive");
  if (!(t_end >= dt) || !std::isfinite(t_end))
    throw Error(ErrorKind::ParameterDomain, "t_end must be >= dt");

  const Integrator rk(p, init.variant());
  const auto steps =
      static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));

  Trajectory traj;
  traj.variant = init.variant();
  traj.t0 = 0.0;
  traj.dt = dt;
  traj.t_end = t_end;
  traj.states.reserve(steps + 1);
  traj.cumulative_onsets.reserve(steps + 1);

  Vec y{};
  std::copy(init.values().begin(), init.values().end(), y.begin());
  traj.states.push_back(init);
  traj.cumulative_onsets.push_back(0.0);

  for (std::size_t k = 1; k <= steps; ++k) {
    const double h = std::min(dt, t_end - static_cast<double>(k - 1) * dt);
    rk.step(y, h);
    rk.tidy(y, k);
    // Roundoff can nudge the accumulator down by an ulp.
    y[rk.size()] = std::max(y[rk.size()], traj.cumulative_onsets.back());
    traj.states.push_back(rk.state(y));
    traj.cumulative_onsets.push_back(y[rk.size()]);
  }
  return traj;
}

double Trajectory::time_at(std::size_t k) const noexcept {
  return std::min(t0 + static_cast<double>(k) * dt, t_end);
}

double Trajectory::cumulative_onsets_at(double t) const {
  if (t < t0 - 1e-9 || t > t_end + 1e-9) {
    throw Error(ErrorKind::Coverage, "time " + std::to_string(t) +
                                         " outside trajectory [" +
                                         std::to_string(t0) + ", " +
                                         std::to_string(t_end) + "]");
  }
  const std::size_t last = cumulative_onsets.size() - 1;
  const double pos = (t - t0) / dt;
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) < 1e-7) {
    return cumulative_onsets[std::min(static_cast<std::size_t>(nearest), last)];
  }
  auto k = std::min(static_cast<std::size_t>(std::floor(pos)), last - 1);
  const double ta = time_at(k);
  const double tb = time_at(k + 1);
  const double w = (t - ta) / (tb - ta);
  return (1.0 - w) * cumulative_onsets[k] + w * cumulative_onsets[k + 1];
}

std::vector<double> Trajectory::prevalence() const {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.infectious());
  return out;
}

FinalSize final_size(const Trajectory& traj) {
  if (traj.states.empty())
    throw Error(ErrorKind::EmptyInput, "empty trajectory");
  const auto& last = traj.states.back();
  return {last.recovered(), last.infectious() < 1e-6};
}

Peak peak_of(std::span<const double> series) {
  if (series.empty()) throw Error(ErrorKind::EmptyInput, "empty series");
  Peak best{0, series[0]};
  for (std::size_t i = 1; i < series.size(); ++i)
    if (series[i] > best.value) best = {i, series[i]};
  return best;
}

}  // namespace mediaflu
