#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mediaflu/fit.hpp"
#include "mediaflu/mediastats.hpp"
#include "mediaflu/observe.hpp"

namespace mediaflu::cli {

// Bad flag values found after CLI11 has parsed the command line. Exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string data;
  std::string retweets;
  std::string variant = "seeiir";
  std::string models = "none,fm,f1,f2,f3";
  int window_offset = kDefaultWindowOffset;
  int window_length = kDefaultWindowLength;
  int starts = 20;
  std::uint64_t seed = 42;
  std::vector<std::string> exclude;
  std::vector<std::string> seasons;  // empty: every season in the file
  bool fit_scale = false;
  std::string out = ".";

  // select
  std::size_t resamples = 10000;
  bool exclude_zero_media = false;

  // correlate
  std::string direction = "retweets-on-ili";

  // leadtime
  std::string leads = "1:8";

  // simulate
  double r0 = 1.5;
  double inv_sigma = 2.0;
  double inv_gamma = 2.0;
  std::string media = "fm";
  double p = 0.05;
  double days = 200.0;
  double dt = kDefaultDt;
  double i0_pct = 0.01;

  // synth
  std::uint64_t corpus_seed = 2015;
  double noise = -1.0;  // negative: corpus default
};

// Each command writes its artifacts under config.out and returns the exit
// code. Library errors propagate to main for mapping.
int cmd_simulate(const RunConfig& c);
int cmd_fit(const RunConfig& c);
int cmd_select(const RunConfig& c);
int cmd_correlate(const RunConfig& c);
int cmd_leadtime(const RunConfig& c);
int cmd_report(const RunConfig& c);
int cmd_synth(const RunConfig& c);

}  // namespace mediaflu::cli
