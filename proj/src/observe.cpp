#include "mediaflu/observe.hpp"

#include <algorithm>
#include <cmath>

namespace mediaflu {

std::string_view series_kind_id(SeriesKind k) {
  switch (k) {
    case SeriesKind::LabConfirmedPct: return "lab_confirmed_pct";
    case SeriesKind::IliPct: return "ili_pct";
    case SeriesKind::RetweetProportion: return "retweet_proportion";
  }
  return "?";
}

void WeeklySeries::validate() const {
  if (week_labels.size() != values.size() ||
      week_index.size() != values.size()) {
    throw Error(ErrorKind::LengthMismatch,
                "season " + season + ": labels and values differ in length");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) {
      throw Error(ErrorKind::ParameterDomain,
                  "season " + season + ": value at week " + week_labels[i] +
                      " is not a finite non-negative number");
    }
  }
}

std::vector<double> weekly_incidence(const Trajectory& traj,
                                     std::size_t n_weeks, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw Error(ErrorKind::ParameterDomain, "scale must be positive");
  const double needed = traj.t0 + 7.0 * static_cast<double>(n_weeks);
  if (traj.states.empty() || traj.t_end < needed - 1e-9) {
    throw Error(ErrorKind::Coverage,
                "trajectory ends at day " + std::to_string(traj.t_end) +
                    " but " + std::to_string(n_weeks) + " weeks need day " +
                    std::to_string(needed));
  }
  std::vector<double> out(n_weeks);
  double prev = traj.cumulative_onsets_at(traj.t0);
  for (std::size_t w = 0; w < n_weeks; ++w) {
    const double next =
        traj.cumulative_onsets_at(traj.t0 + 7.0 * static_cast<double>(w + 1));
    out[w] = scale * 100.0 * (next - prev);
    prev = next;
  }
  return out;
}

FitWindow window_at_peak(std::size_t series_size, std::size_t peak_index,
                         int start_offset, int length) {
  if (start_offset > 0)
    throw Error(ErrorKind::ParameterDomain, "window offset must be <= 0");
  if (length < 2)
    throw Error(ErrorKind::ParameterDomain, "window length must be >= 2");
  FitWindow w{peak_index, start_offset, length};
  const long n = static_cast<long>(series_size);
  if (w.begin() < 0 || w.end() > n) {
    const auto fb = static_cast<std::size_t>(std::clamp(w.begin(), 0L, n));
    const auto fe = static_cast<std::size_t>(std::clamp(w.end(), 0L, n));
    throw TruncatedWindowError(
        w, fb, fe,
        "window [" + std::to_string(w.begin()) + ", " +
            std::to_string(w.end()) + ") exceeds series of " +
            std::to_string(n) + " weeks; feasible [" + std::to_string(fb) +
            ", " + std::to_string(fe) + ")");
  }
  return w;
}

FitWindow make_window(const WeeklySeries& series, int start_offset,
                      int length) {
  const Peak peak = peak_of(series.values);
  const FitWindow w =
      window_at_peak(series.size(), peak.index, start_offset, length);
  if (series.has_gaps && series.week_index.size() == series.size()) {
    for (long i = w.begin() + 1; i < w.end(); ++i) {
      if (series.week_index[i] != series.week_index[i - 1] + 1) {
        throw Error(ErrorKind::TruncatedWindow,
                    "window crosses a gap before week " +
                        series.week_labels[i] + " of season " + series.season);
      }
    }
  }
  return w;
}

std::vector<double> window_values(const WeeklySeries& series,
                                  const FitWindow& w) {
  if (w.begin() < 0 || w.end() > static_cast<long>(series.size()))
    throw Error(ErrorKind::TruncatedWindow, "window outside series");
  return {series.values.begin() + w.begin(), series.values.begin() + w.end()};
}

CompartmentState initial_state(double first_obs_pct, const EpiParams& params,
                               Variant variant) {
  if (!(first_obs_pct > 0.0 && first_obs_pct < 100.0)) {
    throw Error(ErrorKind::ParameterDomain,
                "first observation must lie in (0, 100), got " +
                    std::to_string(first_obs_pct));
  }
  params.validate();
  const double i_total = first_obs_pct / 100.0;
  const double e_total = params.gamma / params.sigma * i_total;
  const double s = 1.0 - e_total - i_total;
  if (!(s > 0.0)) {
    throw Error(ErrorKind::InfeasibleInit,
                "initial susceptible proportion " + std::to_string(s) +
                    " is not positive");
  }
  if (variant == Variant::Seeiir) {
    return CompartmentState::seeiir(s, e_total / 2, e_total / 2, i_total / 2,
                                    i_total / 2, 0.0);
  }
  return CompartmentState::seir(s, e_total, i_total, 0.0);
}

}  // namespace mediaflu
