#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mediaflu/error.hpp"
#include "mediaflu/model.hpp"

namespace mediaflu {

enum class SeriesKind { LabConfirmedPct, IliPct, RetweetProportion };

std::string_view series_kind_id(SeriesKind k);

// One season of weekly observations, ordered by week index.
struct WeeklySeries {
  std::string season;
  std::vector<std::string> week_labels;
  std::vector<long> week_index;  // numeric ordering key for each label
  std::vector<double> values;
  SeriesKind kind = SeriesKind::LabConfirmedPct;
  bool has_gaps = false;  // set when week_index is not consecutive

  std::size_t size() const noexcept { return values.size(); }
  // Throws Error(LengthMismatch / ParameterDomain) on a broken invariant.
  void validate() const;
};

inline constexpr int kDefaultWindowOffset = -4;
inline constexpr int kDefaultWindowLength = 16;

// Half-open index range [begin(), end()) positioned relative to the peak.
struct FitWindow {
  std::size_t peak_index = 0;
  int start_offset = kDefaultWindowOffset;
  int length = kDefaultWindowLength;

  long begin() const noexcept {
    return static_cast<long>(peak_index) + start_offset;
  }
  long end() const noexcept { return begin() + length; }
};

class TruncatedWindowError : public Error {
 public:
  // feasible_begin/end describe the part of the window inside the series.
  TruncatedWindowError(FitWindow requested, std::size_t feasible_begin,
                       std::size_t feasible_end, const std::string& what)
      : Error(ErrorKind::TruncatedWindow, what),
        requested_(requested),
        feasible_begin_(feasible_begin),
        feasible_end_(feasible_end) {}

  FitWindow requested() const noexcept { return requested_; }
  std::size_t feasible_begin() const noexcept { return feasible_begin_; }
  std::size_t feasible_end() const noexcept { return feasible_end_; }

 private:
  FitWindow requested_;
  std::size_t feasible_begin_;
  std::size_t feasible_end_;
};

// New onsets per week as a percentage: scale * 100 * (C(7(w+1)) - C(7w)).
std::vector<double> weekly_incidence(const Trajectory& traj,
                                     std::size_t n_weeks, double scale = 1.0);

FitWindow make_window(const WeeklySeries& series,
                      int start_offset = kDefaultWindowOffset,
                      int length = kDefaultWindowLength);

// Same as make_window but with the peak supplied by the caller.
FitWindow window_at_peak(std::size_t series_size, std::size_t peak_index,
                         int start_offset, int length);

std::vector<double> window_values(const WeeklySeries& series,
                                  const FitWindow& w);

// Quasi-equilibrium start: I = pct/100 split evenly over the infectious
// compartments, E = (gamma/sigma) I split evenly, R = 0, S the remainder.
// Throws Error(InfeasibleInit) if S <= 0.
CompartmentState initial_state(double first_obs_pct, const EpiParams& params,
                               Variant variant);

}  // namespace mediaflu
