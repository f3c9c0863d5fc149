// mediaflu command-line entry point.
//
// Exit codes: 0 success, 2 usage, 3 data or window infeasibility,
// 4 numerical failure.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "commands.hpp"
#include "mediaflu/error.hpp"

using mediaflu::ErrorKind;
namespace cli = mediaflu::cli;

namespace {

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::IntegrationBlowup:
    case ErrorKind::DegenerateFit:
    case ErrorKind::UndefinedStatistic:
    case ErrorKind::RankDeficient:
    case ErrorKind::FitFailure:
      return 4;
    default:
      return 3;
  }
}

void apply_thread_cap() {
  const char* env = std::getenv("MEDIAFLU_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) {
    std::cerr << "warning: ignoring MEDIAFLU_THREADS=" << env << "\n";
    return;
  }
  omp_set_num_threads(static_cast<int>(n));
}

void add_fit_flags(CLI::App* sub, cli::RunConfig& c) {
  sub->add_option("--data", c.data, "Surveillance CSV (season,week,value)")->required();
  sub->add_option("--variant", c.variant, "seeiir or seir")->capture_default_str();
  sub->add_option("--models", c.models, "Comma-separated media models")->capture_default_str();
  sub->add_option("--window-offset", c.window_offset, "Window start relative to the peak")
      ->capture_default_str();
  sub->add_option("--window-length", c.window_length, "Window length in weeks")
      ->capture_default_str();
  sub->add_option("--starts", c.starts, "Latin-hypercube starts per fit")->capture_default_str();
  sub->add_option("--seed", c.seed, "Seed for starts and bootstrap")->capture_default_str();
  sub->add_option("--season", c.seasons, "Restrict to these seasons")->delimiter(',');
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_flag("--fit-scale", c.fit_scale,
                "Also fit a reporting scale (observed = scale x incidence)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Media-aware influenza transmission models: simulate, fit, select"};
  app.require_subcommand(1);
  cli::RunConfig c;

  auto* sim = app.add_subcommand("simulate", "Integrate one parameter set with and without media");
  sim->add_option("--R0", c.r0, "Basic reproduction number")->required();
  sim->add_option("--inv-sigma", c.inv_sigma, "Mean latent period (days)")->required();
  sim->add_option("--inv-gamma", c.inv_gamma, "Mean infectious period (days)")->required();
  sim->add_option("--media", c.media, "none, fm, f1, f2 or f3")->capture_default_str();
  sim->add_option("--p", c.p, "Media parameter")->capture_default_str();
  sim->add_option("--days", c.days, "Simulated days")->capture_default_str();
  sim->add_option("--dt", c.dt, "RK4 step (days)")->capture_default_str();
  sim->add_option("--i0", c.i0_pct, "Initial prevalence (percent)")->capture_default_str();
  sim->add_option("--variant", c.variant, "seeiir or seir")->capture_default_str();
  sim->add_option("--out", c.out, "Output directory")->capture_default_str();

  auto* fit = app.add_subcommand("fit", "Fit every model to each season");
  add_fit_flags(fit, c);

  auto* sel = app.add_subcommand("select", "Season-averaged model probabilities");
  add_fit_flags(sel, c);
  sel->add_option("--exclude", c.exclude, "Seasons left out of the average")->delimiter(',');
  sel->add_option("--resamples", c.resamples, "Bootstrap resamples")->capture_default_str();
  sel->add_flag("--exclude-zero-media", c.exclude_zero_media,
                "Also leave out seasons where every media fit has p = 0");

  auto* cor = app.add_subcommand("correlate", "Retweet proportion against ILI per season");
  cor->add_option("--data", c.data, "ILI CSV")->required();
  cor->add_option("--retweets", c.retweets, "Retweet proportion CSV")->required();
  cor->add_option("--direction", c.direction, "retweets-on-ili or ili-on-retweets")
      ->capture_default_str();
  cor->add_option("--season", c.seasons, "Restrict to these seasons")->delimiter(',');
  cor->add_option("--out", c.out, "Output directory")->capture_default_str();

  auto* lead = app.add_subcommand("leadtime", "Model probabilities by weeks before peak");
  add_fit_flags(lead, c);
  lead->add_option("--leads", c.leads, "Lead range MIN:MAX in weeks")->capture_default_str();
  lead->add_option("--exclude", c.exclude, "Seasons left out")->delimiter(',');

  auto* rep = app.add_subcommand("report", "Error metrics, boxplots and Mood's median tests");
  add_fit_flags(rep, c);
  rep->add_option("--exclude", c.exclude, "Seasons left out")->delimiter(',');

  auto* syn = app.add_subcommand("synth", "Write the synthetic sample corpus");
  syn->add_option("--seed", c.corpus_seed, "Corpus seed")->capture_default_str();
  syn->add_option("--noise", c.noise, "Multiplicative noise for the lab seasons");
  syn->add_option("--out", c.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  apply_thread_cap();
  try {
    if (*sim) return cli::cmd_simulate(c);
    if (*fit) return cli::cmd_fit(c);
    if (*sel) return cli::cmd_select(c);
    if (*cor) return cli::cmd_correlate(c);
    if (*lead) return cli::cmd_leadtime(c);
    if (*rep) return cli::cmd_report(c);
    if (*syn) return cli::cmd_synth(c);
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const mediaflu::Error& e) {
    std::cerr << "error (" << mediaflu::to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
