// Acceptance suite. Prints one PASS/FAIL line per criterion; with arguments
// only the listed criteria run. Exit status is 1 if any of them failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "mediaflu/fit.hpp"
#include "mediaflu/media.hpp"
#include "mediaflu/mediastats.hpp"
#include "mediaflu/metrics.hpp"
#include "mediaflu/model.hpp"
#include "mediaflu/observe.hpp"
#include "mediaflu/rng.hpp"
#include "mediaflu/select.hpp"

#ifndef MEDIAFLU_DATA_DIR
#define MEDIAFLU_DATA_DIR "data"
#endif

using namespace mediaflu;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform();
}

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("mediaflu_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// 1. Conservation over 1000 random parameter sets and starting states.
Outcome conservation() {
  Rng rng(101);
  double worst_sum = 0.0, worst_s = 0.0, worst_r = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Variant v = trial % 2 ? Variant::Seir : Variant::Seeiir;
    const MediaKind k = kAllMediaKinds[trial % 5];
    const double p = k == MediaKind::Linear ? rng.uniform() : uniform(rng, 0.0, 100.0);
    const EpiParams par = EpiParams::from_periods(
        uniform(rng, 0.5, 4.0), uniform(rng, 0.5, 5.0), uniform(rng, 0.5, 7.0),
        MediaFunction(k, k == MediaKind::None ? 0.0 : p));
    std::vector<double> x(compartment_count(v));
    x[0] = uniform(rng, 0.5, 1.0);
    double rest = 1.0 - x[0];
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
      x[i] = rest * uniform(rng, 0.0, 0.5);
      rest -= x[i];
    }
    x.back() = rest;
    const Trajectory tr = integrate(par, CompartmentState::from_values(v, x), 200.0, 0.1);
    for (std::size_t i = 0; i < tr.states.size(); ++i) {
      worst_sum = std::max(worst_sum, std::abs(tr.states[i].sum() - 1.0));
      if (i > 0) {
        worst_s = std::max(worst_s, tr.states[i].susceptible() -
                                        tr.states[i - 1].susceptible());
        worst_r = std::max(worst_r, tr.states[i - 1].recovered() -
                                        tr.states[i].recovered());
      }
    }
  }
  const bool ok = worst_sum <= 1e-9 && worst_s <= 0.0 && worst_r <= 0.0;
  return {ok, "max |sum-1| " + fmt("%.3g", worst_sum) + ", max S rise " +
                  fmt("%.3g", worst_s) + ", max R drop " + fmt("%.3g", worst_r)};
}

// 2. Media functions start at 1 and never increase; Linear rejects p outside [0, 1].
Outcome media_functions() {
  Rng rng(202);
  int bad = 0;
  for (MediaKind k : {MediaKind::Linear, MediaKind::Exponential,
                      MediaKind::InverseQuadratic, MediaKind::InverseLinear}) {
    for (int t = 0; t < 100; ++t) {
      const double p = k == MediaKind::Linear ? rng.uniform() : uniform(rng, 0.0, 100.0);
      const MediaFunction f(k, p);
      if (f(0.0) != 1.0) ++bad;
      double prev = f(0.0);
      for (int i = 1; i < 1000; ++i) {
        const double v = f(i / 999.0);
        if (v > prev) ++bad;
        prev = v;
      }
    }
  }
  int rejected = 0;
  for (double p : {-1e-9, -0.5, 1.0 + 1e-9, 2.0}) {
    try {
      MediaFunction f(MediaKind::Linear, p);
    } catch (const Error& e) {
      rejected += e.kind() == ErrorKind::ParameterDomain;
    }
  }
  return {bad == 0 && rejected == 4,
          std::to_string(bad) + " violations over 4x100 functions, " +
              std::to_string(rejected) + "/4 out-of-range p rejected"};
}

// 3. Media lowers the epidemic without moving its peak by more than a week.
Outcome media_effect() {
  const EpiParams with = EpiParams::from_periods(1.5, 2.0, 2.0, MediaFunction::linear(0.05));
  const EpiParams without = EpiParams::from_periods(1.5, 2.0, 2.0);
  auto run = [](const EpiParams& p) {
    return integrate(p, initial_state(0.01, p, Variant::Seeiir), 400.0);
  };
  const Trajectory a = run(with), b = run(without);
  const auto pa = a.prevalence(), pb = b.prevalence();
  const Peak ka = peak_of(pa), kb = peak_of(pb);
  const double fa = final_size(a).value, fb = final_size(b).value;
  const double weeks = std::abs(a.time_at(ka.index) - b.time_at(kb.index)) / 7.0;
  const bool ok = fa < fb && ka.value < kb.value && weeks <= 1.0;
  return {ok, "final size " + fmt("%.6f", fa) + " < " + fmt("%.6f", fb) +
                  ", peak I " + fmt("%.6f", ka.value) + " < " + fmt("%.6f", kb.value) +
                  ", peak shift " + fmt("%.3f", weeks) + " weeks"};
}

// 4. No-media final size against the root of 1 - z = exp(-R0 z).
Outcome final_size_oracle() {
  double worst = 0.0;
  std::string detail;
  for (double r0 : {1.2, 1.5, 1.8}) {
    double lo = 1e-9, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (1.0 - mid - std::exp(-r0 * mid) > 0.0 ? lo : hi) = mid;
    }
    const EpiParams p = EpiParams::from_periods(r0, 2.0, 2.0);
    const Trajectory tr = integrate(p, initial_state(1e-4, p, Variant::Seeiir), 4000.0);
    const double z = final_size(tr).value;
    worst = std::max(worst, std::abs(z - lo));
    detail += (detail.empty() ? "" : ", ") + fmt("R0=%.1f", r0) + ": " +
              fmt("%.5f", z) + " vs " + fmt("%.5f", lo);
  }
  return {worst <= 5e-3, detail + " (max err " + fmt("%.2g", worst) + ")"};
}

// 5. Weights from AIC pairs rebuilt out of published weight pairs.
Outcome akaike_exact() {
  double worst = 0.0;
  for (auto [w1, w2] : {std::pair{0.4454, 0.5546}, std::pair{0.7769, 0.2231},
                        std::pair{0.5811, 0.4189}}) {
    // Equal-weight convention: AIC_i = -2 ln w_i up to a common constant.
    const double aic[] = {-2.0 * std::log(w1), -2.0 * std::log(w2)};
    const auto w = akaike_weights(aic);
    worst = std::max({worst, std::abs(w[0] - w1), std::abs(w[1] - w2)});
  }
  const double eq[] = {123.4, 123.4};
  const auto w = akaike_weights(eq);
  const bool halves = w[0] == 0.5 && w[1] == 0.5;
  return {worst <= 1e-4 && halves,
          "max deviation " + fmt("%.2g", worst) + (halves ? ", equal AICs give 0.5/0.5"
                                                           : ", equal AICs NOT 0.5/0.5")};
}

// 6. Recovery of the generating media kind from noisy synthetic windows.
Outcome recovery() {
  struct Case {
    MediaKind kind;
    double p;
  };
  const Case cases[] = {{MediaKind::None, 0.0},
                        {MediaKind::Linear, 0.9},
                        {MediaKind::Exponential, 30.0},
                        {MediaKind::InverseQuadratic, 80.0},
                        {MediaKind::InverseLinear, 40.0}};
  const std::vector<MediaKind> models(kAllMediaKinds.begin(), kAllMediaKinds.end());
  MultiStartOptions opts;
  opts.n_starts = 20;
  opts.seed = 42;
  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    std::vector<double> theta = {1.9, 1.5, 2.0};
    if (c.kind != MediaKind::None) theta.push_back(c.p);
    const auto clean = synthetic_window(theta, c.kind, Variant::Seeiir, 0.3, 16);
    int selected = 0, rss_ok = 0;
    double min_w = 1.0;
    for (int rep = 0; rep < 10; ++rep) {
      Rng rng(1000 + rep);
      auto d = clean;
      for (std::size_t i = 1; i < d.size(); ++i) d[i] *= 1.0 + 0.01 * rng.normal();
      std::vector<FitResult> fits;
      for (MediaKind m : models) fits.push_back(multi_start_fit(d, Variant::Seeiir, m, opts));
      const auto scores = season_probabilities(fits);
      const std::size_t gi = static_cast<std::size_t>(c.kind);
      const double true_rss = rss_objective(theta, d, Variant::Seeiir, c.kind);
      rss_ok += fits[gi].rss <= 1.1 * true_rss;
      selected += scores[gi].weight > 0.8;
      min_w = std::min(min_w, scores[gi].weight);
    }
    const bool kind_ok = rss_ok == 10 && selected >= 8;
    ok &= kind_ok;
    detail += std::string(detail.empty() ? "" : "; ") + std::string(media_id(c.kind)) +
              ": weight>0.8 in " + std::to_string(selected) + "/10, rss<=1.1x in " +
              std::to_string(rss_ok) + "/10" + (kind_ok ? "" : " [fail]");
  }
  return {ok, detail};
}

// 7. Central differences of the objective at h and h/2.
Outcome gradient_consistency() {
  Rng rng(707);
  const std::vector<double> gen = {1.7, 1.8, 2.5, 20.0};
  auto data = synthetic_window(gen, MediaKind::Exponential, Variant::Seeiir, 0.3, 16);
  for (std::size_t i = 1; i < data.size(); ++i) data[i] *= 1.0 + 0.01 * rng.normal();
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const MediaKind k = t % 2 ? MediaKind::Exponential : MediaKind::Linear;
    const BoxBounds b = BoxBounds::for_kind(k);
    std::vector<double> x(b.size()), h(b.size()), h2(b.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double w = b.hi[i] - b.lo[i];
      x[i] = uniform(rng, b.lo[i] + 0.1 * w, b.hi[i] - 0.1 * w);
      h[i] = 1e-4 * w;
      h2[i] = 0.5 * h[i];
    }
    const Objective f = [&](std::span<const double> th) {
      return rss_objective(th, data, Variant::Seeiir, k);
    };
    const auto g1 = finite_diff_gradient(f, x, h).g;
    const auto g2 = finite_diff_gradient(f, x, h2).g;
    double norm = 0.0;
    for (double v : g2) norm = std::max(norm, std::abs(v));
    for (std::size_t i = 0; i < x.size(); ++i) {
      // Components far below the gradient's scale are compared against it.
      const double denom = std::max(std::abs(g2[i]), 1e-6 * norm);
      worst = std::max(worst, std::abs(g1[i] - g2[i]) / denom);
    }
  }
  return {worst <= 0.01, "max relative difference " + fmt("%.3g", worst)};
}

// 8. Regression suite.
Outcome regression() {
  Rng rng(808);
  std::string detail;
  bool ok = true;

  std::vector<double> x(20), up(20), down(20);
  for (int i = 0; i < 20; ++i) {
    x[i] = 0.3 * i + 1.0;
    up[i] = 2.0 + 0.5 * x[i];
    down[i] = 7.0 - 3.0 * x[i];
  }
  const double r_up = pearson(x, up).r, r_down = pearson(x, down).r;
  const bool exact = std::abs(r_up - 1.0) <= 1e-12 && std::abs(r_down + 1.0) <= 1e-12;
  ok &= exact;
  detail += "r=" + fmt("%.15f", r_up) + "/" + fmt("%.15f", r_down);

  int nested = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 6 + rng.below(30);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = uniform(rng, 0.0, 10.0);
      ys[i] = uniform(rng, -5.0, 5.0) + 0.3 * xs[i];
    }
    const double rl = ols_fit(xs, ys, 1).rss, rq = ols_fit(xs, ys, 2).rss;
    nested += rq <= rl * (1.0 + 1e-12);
  }
  ok &= nested == 100;
  detail += ", rss(quad)<=rss(lin) in " + std::to_string(nested) + "/100";

  // Seeded weekly engagement against ILI, 16 weeks, 10 replicates per degree.
  for (int degree : {1, 2}) {
    int hits = 0;
    for (int rep = 0; rep < 10; ++rep) {
      Rng r(8000 + 100 * degree + rep);
      std::vector<double> xs(16), ys(16);
      for (int i = 0; i < 16; ++i) {
        xs[i] = 1.0 + 5.0 * std::exp(-0.5 * std::pow((i - 7.0) / 3.0, 2));
        const double mean = degree == 1 ? 0.05 + 0.03 * xs[i]
                                        : 0.10 - 0.02 * xs[i] + 0.008 * xs[i] * xs[i];
        ys[i] = mean + 0.005 * r.normal();
      }
      const LinQuad lq = lin_vs_quad(xs, ys);
      hits += (degree == 1 ? lq.p_lin : lq.p_quad) > 0.7;
    }
    ok &= hits >= 8;
    detail += std::string(", degree ") + std::to_string(degree) + " selected in " +
              std::to_string(hits) + "/10";
  }
  return {ok, detail};
}

// 9. Metrics identities and Mood's test against a hand-built 2x2 table.
Outcome metrics_suite() {
  const std::vector<double> s = {0.1, 0.4, 1.2, 2.5, 1.9, 0.8, 0.3};
  const ErrorSummary e = error_summary(s, s);
  bool ok = e.rms == 0.0 && e.peak_timing_error == 0 && e.final_size_error == 0.0;

  const MoodResult same = moods_median_test(s, s);
  ok &= same.p_value == 1.0;

  const std::vector<double> a = {1, 2, 3, 4}, b = {5, 6, 7, 8};
  const MoodResult sep = moods_median_test(a, b);
  // Oracle: pooled median 4.5; table {{0, 4}, {4, 0}}.
  const double obs[2][2] = {{0, 4}, {4, 0}};
  double chi = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double row = obs[i][0] + obs[i][1], col = obs[0][j] + obs[1][j];
      const double expct = row * col / 8.0;
      chi += (obs[i][j] - expct) * (obs[i][j] - expct) / expct;
    }
  const double p = std::erfc(std::sqrt(chi / 2.0));
  ok &= std::abs(sep.statistic - chi) <= 1e-12 && std::abs(sep.p_value - p) <= 1e-12;
  return {ok, "identical: rms " + fmt("%g", e.rms) + ", Mood p " + fmt("%g", same.p_value) +
                  "; separated: chi2 " + fmt("%.6f", sep.statistic) + " (oracle " +
                  fmt("%.6f", chi) + "), p " + fmt("%.6g", sep.p_value) + " (oracle " +
                  fmt("%.6g", p) + ")"};
}

// 10. Two identical cmd_fit runs give byte-identical JSON.
Outcome determinism() {
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  cli::RunConfig c;
  c.data = std::string(MEDIAFLU_DATA_DIR) + "/synthetic_lab.csv";
  c.seasons = {"2003/04", "2012/13"};
  c.out = a.string();
  int rc = cli::cmd_fit(c);
  c.out = b.string();
  rc |= cli::cmd_fit(c);
  const std::string ja = slurp(a / "fit.json"), jb = slurp(b / "fit.json");
  const bool ok = rc == 0 && !ja.empty() && ja == jb;
  return {ok, std::to_string(ja.size()) + " bytes, " + (ja == jb ? "identical" : "DIFFERENT")};
}

// 11. fm ranks first on the bundled corpus without the pandemic analog.
Outcome bundled_ordering() {
  const fs::path out = scratch_dir("select");
  cli::RunConfig c;
  c.data = std::string(MEDIAFLU_DATA_DIR) + "/synthetic_lab.csv";
  c.exclude = {"2009/10"};
  c.out = out.string();
  if (cli::cmd_select(c) != 0) return {false, "cmd_select failed"};
  const auto j = nlohmann::json::parse(slurp(out / "select.json"));
  std::string first, detail;
  for (const auto& m : j["models"]) {
    if (m["rank"] == 1) first = m["model"];
    detail += (detail.empty() ? "" : ", ") + m["model"].get<std::string>() + " " +
              fmt("%.3f", m["mean_weight"].get<double>());
  }
  return {first == "fm", "seasons " + std::to_string(j["seasons_used"].size()) +
                             ", top " + first + " (" + detail + ")"};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
  double limit_s;  // 0: no runtime bound
};

const std::vector<Criterion> kCriteria = {
    {"conservation", conservation, 30},
    {"media functions", media_functions, 5},
    {"media lowers the epidemic", media_effect, 5},
    {"final-size oracle", final_size_oracle, 10},
    {"Akaike weights", akaike_exact, 0},
    {"synthetic recovery", recovery, 300},
    {"gradient consistency", gradient_consistency, 0},
    {"regression suite", regression, 0},
    {"metrics suite", metrics_suite, 0},
    {"determinism", determinism, 0},
    {"bundled corpus ordering", bundled_ordering, 0},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i) which.push_back(i);

  int failed = 0;
  for (int n : which) {
    if (n < 1 || n > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "no criterion %d\n", n);
      return 2;
    }
    const Criterion& cr = kCriteria[n - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.limit_s > 0 && secs > cr.limit_s) {
      o.pass = false;
      o.detail += fmt(", over the %.0fs runtime limit", cr.limit_s);
    }
    std::printf("criterion %2d %-26s %s  %s [%.1fs]\n", n, cr.name,
                o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
