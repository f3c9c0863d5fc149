#include "mediaflu/media.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mediaflu/error.hpp"

namespace mediaflu {

std::string_view media_id(MediaKind kind) {
  switch (kind) {
    case MediaKind::None: return "none";
    case MediaKind::Linear: return "fm";
    case MediaKind::Exponential: return "f1";
    case MediaKind::InverseQuadratic: return "f2";
    case MediaKind::InverseLinear: return "f3";
  }
  return "?";
}

std::optional<MediaKind> parse_media_id(std::string_view id) {
  for (MediaKind k : kAllMediaKinds)
    if (media_id(k) == id) return k;
  return std::nullopt;
}

double media_param_max(MediaKind kind) {
  return kind == MediaKind::Linear ? 1.0
                                   : std::numeric_limits<double>::infinity();
}

MediaFunction::MediaFunction(MediaKind kind, double param)
    : kind_(kind), param_(param) {
  if (!std::isfinite(param) || param < 0.0 || param > media_param_max(kind)) {
    throw Error(ErrorKind::ParameterDomain,
                "media parameter " + std::to_string(param) +
                    " outside the domain of " + std::string(media_id(kind)));
  }
  if (kind == MediaKind::None) param_ = 0.0;
}

double MediaFunction::operator()(double i) const noexcept {
  double f = 1.0;
  switch (kind_) {
    case MediaKind::None: return 1.0;
    case MediaKind::Linear: f = 1.0 - param_ * i; break;
    case MediaKind::Exponential: f = std::exp(-param_ * i); break;
    case MediaKind::InverseQuadratic: f = 1.0 / (1.0 + param_ * i * i); break;
    case MediaKind::InverseLinear: f = 1.0 / (1.0 + param_ * i); break;
  }
  return std::clamp(f, 0.0, 1.0);
}

double media_eval(const MediaFunction& f, double i_total) {
  if (!(i_total >= 0.0 && i_total <= 1.0)) {
    throw Error(ErrorKind::ParameterDomain,
                "infectious proportion " + std::to_string(i_total) +
                    " outside [0, 1]");
  }
  return f(i_total);
}

}  // namespace mediaflu
