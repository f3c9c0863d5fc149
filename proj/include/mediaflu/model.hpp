#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mediaflu/media.hpp"

namespace mediaflu {

// SEEIIR stages exposed and infectious periods into two compartments each
// (Erlang-2 sojourn times); SEIR uses one of each.
enum class Variant { Seeiir, Seir };

std::string_view variant_id(Variant v);
std::optional<Variant> parse_variant(std::string_view id);
std::size_t compartment_count(Variant v);

struct EpiParams {
  double beta = 0.0;   // per day
  double sigma = 1.0;  // per day, 1/sigma is the mean latent period
  double gamma = 1.0;  // per day, 1/gamma is the mean infectious period
  MediaFunction media;

  // Builds rates from R0 = beta/gamma and the mean periods in days.
  static EpiParams from_periods(double r0, double inv_sigma, double inv_gamma,
                                MediaFunction media = {});

  double r0() const noexcept { return beta / gamma; }

  // Throws Error(ParameterDomain) unless beta >= 0 and sigma, gamma > 0.
  void validate() const;

  // Fit-context ranges: R0 in [1, 2], 1/gamma in [1, 5], 1/sigma in [1, 3].
  bool within_fit_ranges(double tol = 1e-12) const;
};

// Population proportions. Layout is {s, e1, e2, i1, i2, r} for SEEIIR and
// {s, e, i, r} for SEIR.
class CompartmentState {
 public:
  static constexpr double kSumTolerance = 1e-9;
  static constexpr double kNegativeFloor = -1e-12;

  static CompartmentState seeiir(double s, double e1, double e2, double i1,
                                 double i2, double r);
  static CompartmentState seir(double s, double e, double i, double r);

  // Validates the sum-to-one invariant and clamps components in
  // [kNegativeFloor, 0) to zero. Throws Error(ParameterDomain) otherwise.
  static CompartmentState from_values(Variant v, std::span<const double> x);

  Variant variant() const noexcept { return variant_; }
  std::size_t size() const noexcept { return compartment_count(variant_); }
  double operator[](std::size_t i) const { return x_[i]; }
  std::span<const double> values() const { return {x_.data(), size()}; }

  double susceptible() const noexcept { return x_[0]; }
  double exposed() const noexcept;
  double infectious() const noexcept;
  double recovered() const noexcept { return x_[size() - 1]; }
  double sum() const noexcept;

 private:
  friend class Integrator;
  CompartmentState(Variant v, const std::array<double, 6>& x)
      : variant_(v), x_(x) {}

  Variant variant_ = Variant::Seeiir;
  std::array<double, 6> x_{};
};

struct Derivative {
  Variant variant = Variant::Seeiir;
  std::array<double, 6> d{};

  std::size_t size() const noexcept { return compartment_count(variant); }
  double operator[](std::size_t i) const { return d[i]; }
  double sum() const noexcept;
};

// Right-hand sides. Each throws Error(ModelVariant) when handed a state of
// the other variant.
Derivative rhs_seeiir(const EpiParams& p, const CompartmentState& x);
Derivative rhs_seir(const EpiParams& p, const CompartmentState& x);
Derivative rhs(const EpiParams& p, const CompartmentState& x);

// Rate of flow into the first infectious compartment (2 sigma E2 or sigma E).
double onset_flow(const EpiParams& p, const CompartmentState& x);

struct Trajectory {
  Variant variant = Variant::Seeiir;
  double t0 = 0.0;
  double dt = 0.0;
  double t_end = 0.0;
  std::vector<CompartmentState> states;
  // Cumulative flow into the first infectious compartment since t0.
  std::vector<double> cumulative_onsets;

  double time_at(std::size_t k) const noexcept;
  // Linear interpolation between grid points; exact on the grid.
  double cumulative_onsets_at(double t) const;
  std::vector<double> prevalence() const;  // I1 + I2 (or I) per step
};

inline constexpr double kDefaultDt = 0.1;

// Classic fixed-step RK4 from t = 0 to t_end; the final step is shortened
// when t_end is not a multiple of dt. Throws IntegrationError on a
// non-finite state or a component below CompartmentState::kNegativeFloor.
Trajectory integrate(const EpiParams& p, const CompartmentState& init,
                     double t_end, double dt = kDefaultDt);

struct FinalSize {
  double value = 0.0;
  bool converged = true;  // false when I(t_end) >= 1e-6
};

FinalSize final_size(const Trajectory& traj);

struct Peak {
  std::size_t index = 0;
  double value = 0.0;
};

// Earliest maximum. Throws Error(EmptyInput) on an empty series.
Peak peak_of(std::span<const double> series);

}  // namespace mediaflu
