#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace mediaflu {

// Transmission modifiers f(I). I is the infectious proportion of the
// population, so every kind satisfies f(0) = 1 and stays in [0, 1].
enum class MediaKind {
  None,              // f = 1
  Linear,            // f = 1 - p I,        p in [0, 1]
  Exponential,       // f = exp(-p I),      p >= 0
  InverseQuadratic,  // f = 1 / (1 + p I^2), p >= 0
  InverseLinear,     // f = 1 / (1 + p I),  p >= 0
};

inline constexpr std::array<MediaKind, 5> kAllMediaKinds = {
    MediaKind::None, MediaKind::Linear, MediaKind::Exponential,
    MediaKind::InverseQuadratic, MediaKind::InverseLinear};

// Short identifiers used on the command line and in reports:
// none, fm, f1, f2, f3.
std::string_view media_id(MediaKind kind);
std::optional<MediaKind> parse_media_id(std::string_view id);

// Largest admissible parameter for a kind (1 for Linear, +inf otherwise).
double media_param_max(MediaKind kind);

class MediaFunction {
 public:
  MediaFunction() = default;

  // Throws Error(ParameterDomain) when param is outside the kind's domain.
  MediaFunction(MediaKind kind, double param);

  static MediaFunction none() { return {}; }
  static MediaFunction linear(double p) { return {MediaKind::Linear, p}; }
  static MediaFunction exponential(double p) {
    return {MediaKind::Exponential, p};
  }
  static MediaFunction inverse_quadratic(double p) {
    return {MediaKind::InverseQuadratic, p};
  }
  static MediaFunction inverse_linear(double p) {
    return {MediaKind::InverseLinear, p};
  }

  MediaKind kind() const noexcept { return kind_; }
  double param() const noexcept { return param_; }

  // Evaluates f at i_total in [0, 1]; result clamped to [0, 1].
  double operator()(double i_total) const noexcept;

  friend bool operator==(const MediaFunction&, const MediaFunction&) = default;

 private:
  MediaKind kind_ = MediaKind::None;
  double param_ = 0.0;
};

// Checked evaluation: rejects i_total outside [0, 1].
double media_eval(const MediaFunction& f, double i_total);

}  // namespace mediaflu
