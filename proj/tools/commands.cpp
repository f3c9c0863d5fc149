#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>

#include <json.hpp>

#include "mediaflu/ingest.hpp"
#include "mediaflu/metrics.hpp"
#include "mediaflu/select.hpp"
#include "mediaflu/svg.hpp"
#include "mediaflu/synth.hpp"

namespace mediaflu::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchemaVersion = "1";

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string file_stub(const std::string& season) {
  std::string s;
  for (char ch : season)
    s += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '-';
  return s;
}

const char* model_color(MediaKind k) {
  switch (k) {
    case MediaKind::None: return "#000000";
    case MediaKind::Linear: return "#d62728";
    case MediaKind::Exponential: return "#1f77b4";
    case MediaKind::InverseQuadratic: return "#2ca02c";
    case MediaKind::InverseLinear: return "#9467bd";
  }
  return "#777777";
}

void write_json(const fs::path& p, const Json& j) {
  write_text_file(p, j.dump(2) + "\n");
}

fs::path out_dir(const RunConfig& c) {
  const fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw Error(ErrorKind::Io, "cannot create output directory " + c.out);
  return dir;
}

Variant variant_flag(const RunConfig& c) {
  const auto v = parse_variant(c.variant);
  if (!v) throw UsageError("--variant must be seeiir or seir, got " + c.variant);
  return *v;
}

std::vector<MediaKind> models_flag(const RunConfig& c) {
  std::set<MediaKind> chosen;
  std::size_t pos = 0;
  while (pos <= c.models.size()) {
    const auto comma = c.models.find(',', pos);
    const std::string id = c.models.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    pos = comma == std::string::npos ? c.models.size() + 1 : comma + 1;
    if (id.empty()) continue;
    const auto k = parse_media_id(id);
    if (!k) throw UsageError("unknown model '" + id + "' in --models");
    chosen.insert(*k);
  }
  if (chosen.empty()) throw UsageError("--models is empty");
  // Canonical order keeps reports comparable across invocations.
  std::vector<MediaKind> out;
  for (MediaKind k : kAllMediaKinds)
    if (chosen.count(k)) out.push_back(k);
  return out;
}

MultiStartOptions fit_flags(const RunConfig& c) {
  if (c.starts < 1) throw UsageError("--starts must be >= 1");
  if (c.window_offset > 0) throw UsageError("--window-offset must be <= 0");
  MultiStartOptions o;
  o.n_starts = c.starts;
  o.seed = c.seed;
  o.fit.fit_scale = c.fit_scale;
  return o;
}

void check_window_length(const RunConfig& c, std::span<const MediaKind> models) {
  std::size_t k = 0;
  for (MediaKind m : models) k = std::max(k, fitted_parameter_count(m));
  if (c.fit_scale) ++k;
  // AICc needs more residuals than k + 2; week 0 is not a residual.
  if (c.window_length < static_cast<int>(k) + 4)
    throw UsageError("--window-length must be >= " + std::to_string(k + 4));
}

std::vector<WeeklySeries> load_seasons(const std::string& path, SeriesKind kind,
                                       const std::vector<std::string>& only) {
  if (path.empty()) throw UsageError("--data is required");
  auto seasons = split_seasons(parse_csv(path, kind));
  if (!only.empty()) {
    const std::set<std::string> keep(only.begin(), only.end());
    std::erase_if(seasons, [&](const WeeklySeries& s) { return !keep.count(s.season); });
    for (const auto& name : only) {
      if (std::none_of(seasons.begin(), seasons.end(),
                       [&](const WeeklySeries& s) { return s.season == name; }))
        throw Error(ErrorKind::EmptyInput, "season " + name + " not found in " + path);
    }
  }
  if (seasons.empty()) throw Error(ErrorKind::EmptyInput, "no seasons in " + path);
  std::sort(seasons.begin(), seasons.end(),
            [](const WeeklySeries& a, const WeeklySeries& b) { return a.season < b.season; });
  for (const auto& s : seasons)
    if (s.has_gaps)
      std::cerr << "warning: season " << s.season << " has gaps in its week indices\n";
  return seasons;
}

std::vector<SeasonOutcome> fit_all(const RunConfig& c,
                                   const std::vector<WeeklySeries>& seasons,
                                   std::span<const MediaKind> models,
                                   Variant variant) {
  std::vector<SeasonTask> tasks;
  for (const auto& s : seasons)
    tasks.push_back({&s, c.window_offset, c.window_length});
  auto out = fit_seasons(tasks, models, variant, fit_flags(c));
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!out[i].fit)
      std::cerr << "warning: skipped season " << seasons[i].season << ": "
                << out[i].diagnostic << "\n";
  return out;
}

// Exit code when no season could be fitted: 4 if an optimizer failure was
// among the causes, 3 for data or window problems.
int nothing_fitted(const std::vector<SeasonOutcome>& out) {
  bool numerical = false;
  for (const auto& o : out)
    numerical |= o.error == ErrorKind::FitFailure || o.error == ErrorKind::DegenerateFit;
  std::cerr << "error: no season could be fitted\n";
  return numerical ? 4 : 3;
}

std::vector<double> model_curve(const FitResult& f, std::span<const double> data) {
  std::vector<double> m =
      model_weekly(f.theta, f.kind, f.variant, data[0], data.size(), kDefaultDt, f.scale);
  m[0] = data[0];
  return m;
}

Json fit_json(const FitResult& f, const ModelScore& s) {
  Json j;
  j["model"] = s.model_id();
  j["R0"] = f.theta[kR0];
  j["inv_sigma_days"] = f.theta[kInvSigma];
  j["inv_gamma_days"] = f.theta[kInvGamma];
  j["p"] = f.kind == MediaKind::None ? Json(nullptr) : Json(f.theta[kP]);
  j["scale"] = f.scale;
  j["rss"] = f.rss;
  j["aicc"] = s.aicc;
  j["weight"] = s.weight;
  j["n"] = f.n;
  j["k"] = f.k;
  j["converged"] = f.converged;
  j["status"] = f.status;
  j["iterations"] = f.iterations;
  j["evaluations"] = f.evaluations;
  j["penalties"] = f.penalties;
  return j;
}

Json window_json(const WeeklySeries& s, const FitWindow& w) {
  Json j;
  j["peak_week"] = s.week_labels[w.peak_index];
  j["first_week"] = s.week_labels[static_cast<std::size_t>(w.begin())];
  j["last_week"] = s.week_labels[static_cast<std::size_t>(w.end() - 1)];
  j["length"] = w.length;
  return j;
}

Json config_json(const RunConfig& c, const char* command) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["variant"] = c.variant;
  j["window_offset"] = c.window_offset;
  j["window_length"] = c.window_length;
  j["starts"] = c.starts;
  j["seed"] = c.seed;
  j["fit_scale"] = c.fit_scale;
  return j;
}

void write_fit_artifacts(const fs::path& dir, const WeeklySeries& s,
                         const SeasonFit& sf) {
  const std::string stub = file_stub(s.season);
  std::vector<std::vector<double>> curves;
  for (const auto& f : sf.fits) curves.push_back(model_curve(f, sf.data));

  std::string csv = "week,observed";
  for (const auto& sc : sf.scores) csv += "," + sc.model_id();
  csv += "\n";
  std::vector<double> xs;
  for (std::size_t i = 0; i < sf.data.size(); ++i) {
    const std::size_t row = static_cast<std::size_t>(sf.window.begin()) + i;
    csv += s.week_labels[row] + "," + fmt(sf.data[i]);
    for (const auto& m : curves) csv += "," + fmt(m[i]);
    csv += "\n";
    xs.push_back(static_cast<double>(s.week_index[row]));
  }
  write_text_file(dir / ("fit_" + stub + ".csv"), csv);

  SvgChart chart("Model fits, season " + s.season, "week", "weekly incidence (%)");
  chart.add_points("observed", xs, sf.data, "#444444", SvgChart::Marker::Cross);
  for (std::size_t m = 0; m < curves.size(); ++m) {
    chart.add_line(sf.scores[m].model_id(), xs, curves[m],
                   model_color(sf.fits[m].kind), sf.fits[m].kind == MediaKind::None);
  }
  write_text_file(dir / ("fit_" + stub + ".svg"), chart.render());
}

std::pair<int, int> parse_leads(const std::string& s) {
  const auto colon = s.find(':');
  auto to_int = [&](std::string_view v, int& out) {
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    return r.ec == std::errc() && r.ptr == v.data() + v.size();
  };
  int a = 0, b = 0;
  const std::string_view sv(s);
  const bool ok = colon == std::string::npos
                      ? to_int(sv, a) && (b = a, true)
                      : to_int(sv.substr(0, colon), a) && to_int(sv.substr(colon + 1), b);
  if (!ok || a < 0 || b < a) throw UsageError("--leads must be MIN:MAX with 0 <= MIN <= MAX");
  return {a, b};
}

}  // namespace

int cmd_simulate(const RunConfig& c) {
  const auto kind = parse_media_id(c.media);
  if (!kind) throw UsageError("unknown --media '" + c.media + "'");
  const Variant variant = variant_flag(c);
  if (!(c.days > 0.0) || !(c.dt > 0.0)) throw UsageError("--days and --dt must be > 0");
  if (!(c.i0_pct > 0.0 && c.i0_pct < 100.0)) throw UsageError("--i0 must lie in (0, 100)");
  if (!(c.r0 >= 0.0) || !(c.inv_sigma > 0.0) || !(c.inv_gamma > 0.0))
    throw UsageError("--R0 must be >= 0 and the periods > 0");
  EpiParams with, without;
  try {
    with = EpiParams::from_periods(c.r0, c.inv_sigma, c.inv_gamma,
                                   MediaFunction(*kind, *kind == MediaKind::None ? 0.0 : c.p));
    without = EpiParams::from_periods(c.r0, c.inv_sigma, c.inv_gamma);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const fs::path dir = out_dir(c);

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "simulate";
  report["variant"] = c.variant;
  report["R0"] = c.r0;
  report["inv_sigma_days"] = c.inv_sigma;
  report["inv_gamma_days"] = c.inv_gamma;
  report["media"] = c.media;
  report["p"] = *kind == MediaKind::None ? Json(nullptr) : Json(c.p);
  report["days"] = c.days;
  report["dt"] = c.dt;
  report["i0_pct"] = c.i0_pct;

  SvgChart chart("Prevalence with and without media", "day", "infectious proportion");
  const std::pair<const char*, const EpiParams*> runs[] = {{"media", &with},
                                                           {"no_media", &without}};
  for (const auto& [name, params] : runs) {
    const Trajectory traj =
        integrate(*params, initial_state(c.i0_pct, *params, variant), c.days, c.dt);
    std::string csv = "t,S,E,I,R\n";
    std::vector<double> days, prev;
    const auto n_days = static_cast<long>(std::floor(c.days + 1e-9));
    for (long d = 0; d <= n_days; ++d) {
      // Linear interpolation between grid points; exact when dt divides 1.
      const double pos = std::min(static_cast<double>(d) / c.dt,
                                  static_cast<double>(traj.states.size() - 1));
      const auto lo = static_cast<std::size_t>(std::floor(pos + 1e-9));
      const std::size_t hi = std::min(lo + 1, traj.states.size() - 1);
      const double w = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
      const auto& a = traj.states[lo];
      const auto& b = traj.states[hi];
      auto mix = [&](double x, double y) { return x + w * (y - x); };
      const double s = mix(a.susceptible(), b.susceptible());
      const double e = mix(a.exposed(), b.exposed());
      const double i = mix(a.infectious(), b.infectious());
      const double r = mix(a.recovered(), b.recovered());
      csv += std::to_string(d) + "," + fmt(s) + "," + fmt(e) + "," + fmt(i) + "," + fmt(r) + "\n";
      days.push_back(static_cast<double>(d));
      prev.push_back(i);
    }
    write_text_file(dir / (std::string("simulate_") + name + ".csv"), csv);
    const auto prevalence = traj.prevalence();
    const Peak pk = peak_of(prevalence);
    const FinalSize fsz = final_size(traj);
    Json j;
    j["final_size"] = fsz.value;
    j["final_size_converged"] = fsz.converged;
    j["peak_prevalence"] = pk.value;
    j["peak_day"] = traj.time_at(pk.index);
    report[name] = j;
    chart.add_line(name == std::string("media") ? "media (" + c.media + ")" : "no media",
                   days, prev, name == std::string("media") ? "#d62728" : "#000000",
                   name != std::string("media"));
  }
  write_text_file(dir / "simulate.svg", chart.render());
  write_json(dir / "simulate.json", report);
  return 0;
}

int cmd_fit(const RunConfig& c) {
  const Variant variant = variant_flag(c);
  const auto models = models_flag(c);
  check_window_length(c, models);
  fit_flags(c);
  const auto seasons = load_seasons(c.data, SeriesKind::LabConfirmedPct, c.seasons);
  const fs::path dir = out_dir(c);
  const auto outcomes = fit_all(c, seasons, models, variant);

  Json report = config_json(c, "fit");
  report["data"] = fs::path(c.data).filename().string();
  Json js = Json::array(), skipped = Json::array();
  bool any = false;
  for (std::size_t i = 0; i < seasons.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o.fit) {
      skipped.push_back({{"season", seasons[i].season}, {"reason", o.diagnostic}});
      continue;
    }
    any = true;
    Json s;
    s["season"] = seasons[i].season;
    s["window"] = window_json(seasons[i], o.fit->window);
    Json ms = Json::array();
    for (std::size_t m = 0; m < o.fit->fits.size(); ++m)
      ms.push_back(fit_json(o.fit->fits[m], o.fit->scores[m]));
    s["models"] = ms;
    js.push_back(s);
    write_fit_artifacts(dir, seasons[i], *o.fit);
  }
  report["seasons"] = js;
  report["skipped"] = skipped;
  write_json(dir / "fit.json", report);
  return any ? 0 : nothing_fitted(outcomes);
}

int cmd_select(const RunConfig& c) {
  const Variant variant = variant_flag(c);
  const auto models = models_flag(c);
  check_window_length(c, models);
  fit_flags(c);
  if (c.resamples < 1) throw UsageError("--resamples must be >= 1");
  const auto seasons = load_seasons(c.data, SeriesKind::LabConfirmedPct, c.seasons);
  const fs::path dir = out_dir(c);
  const auto outcomes = fit_all(c, seasons, models, variant);

  std::vector<std::string> labels;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<FitResult>> fits;
  Json per_season = Json::array(), skipped = Json::array();
  std::string wcsv = "season";
  for (MediaKind m : models) wcsv += "," + std::string(media_id(m));
  wcsv += "\n";
  for (std::size_t i = 0; i < seasons.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o.fit) {
      skipped.push_back({{"season", seasons[i].season}, {"reason", o.diagnostic}});
      continue;
    }
    labels.push_back(seasons[i].season);
    fits.push_back(o.fit->fits);
    std::vector<double> w;
    Json s;
    s["season"] = seasons[i].season;
    Json ms = Json::array();
    wcsv += seasons[i].season;
    for (std::size_t m = 0; m < models.size(); ++m) {
      w.push_back(o.fit->scores[m].weight);
      ms.push_back(fit_json(o.fit->fits[m], o.fit->scores[m]));
      wcsv += "," + fmt(w.back());
    }
    wcsv += "\n";
    s["models"] = ms;
    per_season.push_back(s);
    weights.push_back(std::move(w));
  }
  if (labels.empty()) return nothing_fitted(outcomes);

  std::vector<std::string> exclusions = c.exclude;
  std::vector<std::string> zero_media;
  if (c.exclude_zero_media) {
    zero_media = zero_media_seasons(labels, fits);
    exclusions.insert(exclusions.end(), zero_media.begin(), zero_media.end());
  }
  AverageOptions ao;
  ao.resamples = c.resamples;
  ao.seed = c.seed;
  const AverageResult avg = average_probability(weights, labels, exclusions, ao);
  if (avg.seasons_used.size() < 2)
    std::cerr << "warning: fewer than 2 seasons averaged; confidence intervals omitted\n";

  Json report = config_json(c, "select");
  report["data"] = fs::path(c.data).filename().string();
  report["resamples"] = c.resamples;
  report["seasons_used"] = avg.seasons_used;
  report["seasons_excluded"] = avg.seasons_excluded;
  report["zero_media_seasons"] = zero_media;
  std::string csv = "model,mean_weight,ci_lo,ci_hi,rank\n";
  std::vector<std::size_t> order(models.size());
  for (std::size_t m = 0; m < order.size(); ++m) order[m] = m;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return avg.models[a].mean > avg.models[b].mean;
  });
  std::vector<int> rank(models.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<int>(r + 1);
  Json ms = Json::array();
  for (std::size_t m = 0; m < models.size(); ++m) {
    const auto& a = avg.models[m];
    Json j;
    j["model"] = std::string(media_id(models[m]));
    j["mean_weight"] = a.mean;
    j["ci_lo"] = a.ci_lo ? Json(*a.ci_lo) : Json(nullptr);
    j["ci_hi"] = a.ci_hi ? Json(*a.ci_hi) : Json(nullptr);
    j["rank"] = rank[m];
    ms.push_back(j);
    csv += std::string(media_id(models[m])) + "," + fmt(a.mean) + "," +
           (a.ci_lo ? fmt(*a.ci_lo) : "") + "," + (a.ci_hi ? fmt(*a.ci_hi) : "") +
           "," + std::to_string(rank[m]) + "\n";
  }
  report["models"] = ms;
  report["per_season"] = per_season;
  report["skipped"] = skipped;
  write_json(dir / "select.json", report);
  write_text_file(dir / "select.csv", csv);
  write_text_file(dir / "season_weights.csv", wcsv);
  return 0;
}

int cmd_correlate(const RunConfig& c) {
  if (c.retweets.empty()) throw UsageError("--retweets is required");
  RegressionDirection dir_flag;
  if (c.direction == "retweets-on-ili")
    dir_flag = RegressionDirection::RetweetsOnIli;
  else if (c.direction == "ili-on-retweets")
    dir_flag = RegressionDirection::IliOnRetweets;
  else
    throw UsageError("--direction must be retweets-on-ili or ili-on-retweets");
  const auto ili = load_seasons(c.data, SeriesKind::IliPct, c.seasons);
  const auto rt_all = split_seasons(parse_csv(c.retweets, SeriesKind::RetweetProportion));
  std::map<std::string, const WeeklySeries*> rt;
  for (const auto& s : rt_all) rt[s.season] = &s;
  const fs::path dir = out_dir(c);
  const bool ili_x = dir_flag == RegressionDirection::RetweetsOnIli;

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "correlate";
  report["direction"] = c.direction;
  report["significance_level"] = 0.01;
  Json rows = Json::array(), skipped = Json::array();
  std::string csv = "season,n,r,p_value,p_lin,p_quad,total_ili,trend_line\n";
  std::string table = "season,p_lin,p_quad\n";
  std::vector<PairedSeries> paired;
  SvgChart scatter("Retweet proportion against ILI", ili_x ? "ILI (%)" : "retweet proportion",
                   ili_x ? "retweet proportion" : "ILI (%)");
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::size_t color = 0;
  for (const auto& s : ili) {
    const auto it = rt.find(s.season);
    if (it == rt.end()) {
      std::cerr << "warning: no retweet series for season " << s.season << "\n";
      skipped.push_back({{"season", s.season}, {"reason", "no retweet series"}});
      continue;
    }
    PairedSeries ps;
    try {
      ps = join_engagement(s, *it->second);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientOverlap) throw;
      std::cerr << "warning: skipped season " << s.season << ": " << e.what() << "\n";
      skipped.push_back({{"season", s.season}, {"reason", e.what()}});
      continue;
    }
    const auto& x = ili_x ? ps.x : ps.y;
    const auto& y = ili_x ? ps.y : ps.x;
    Json row;
    row["season"] = s.season;
    row["n"] = ps.size();
    double total = 0.0;
    for (double v : ps.x) total += v;
    row["total_ili"] = total;
    Correlation corr;
    try {
      corr = pearson(x, y);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UndefinedStatistic) throw;
      std::cerr << "warning: skipped season " << s.season << ": " << e.what() << "\n";
      skipped.push_back({{"season", s.season}, {"reason", e.what()}});
      continue;
    }
    const bool trend = corr.p_value < 0.01;
    row["r"] = corr.r;
    row["p_value"] = corr.p_value;
    row["trend_line"] = trend;
    std::string p_lin, p_quad;
    if (ps.size() >= 5) {
      const LinQuad lq = lin_vs_quad(x, y);
      row["p_lin"] = lq.p_lin;
      row["p_quad"] = lq.p_quad;
      row["linear"] = {{"coefficients", lq.lin.coefficients}, {"rss", lq.lin.rss},
                       {"aicc", lq.lin.aicc ? Json(*lq.lin.aicc) : Json(nullptr)}};
      row["quadratic"] = {{"coefficients", lq.quad.coefficients}, {"rss", lq.quad.rss},
                          {"aicc", lq.quad.aicc ? Json(*lq.quad.aicc) : Json(nullptr)}};
      p_lin = fmt(lq.p_lin);
      p_quad = fmt(lq.p_quad);
      std::string rcsv = "week,x,y,residual_linear,residual_quadratic\n";
      const auto rl = residual_series(lq.lin);
      const auto rq = residual_series(lq.quad);
      for (std::size_t i = 0; i < ps.size(); ++i)
        rcsv += ps.week_labels[i] + "," + fmt(x[i]) + "," + fmt(y[i]) + "," + fmt(rl[i]) +
                "," + fmt(rq[i]) + "\n";
      const std::string stub = file_stub(s.season);
      write_text_file(dir / ("residuals_" + stub + ".csv"), rcsv);
      SvgChart rchart("Residuals, season " + s.season, ili_x ? "ILI (%)" : "retweet proportion",
                      "residual");
      rchart.add_points("linear", x, rl, "#1f77b4", SvgChart::Marker::Dot);
      rchart.add_points("quadratic", x, rq, "#d62728", SvgChart::Marker::Cross);
      write_text_file(dir / ("residuals_" + stub + ".svg"), rchart.render());
      paired.push_back(ps);
      table += s.season + "," + p_lin + "," + p_quad + "\n";
    }
    csv += s.season + "," + std::to_string(ps.size()) + "," + fmt(corr.r) + "," +
           fmt(corr.p_value) + "," + p_lin + "," + p_quad + "," + fmt(total) + "," +
           (trend ? "yes" : "no") + "\n";
    const char* col = palette[color++ % 10];
    scatter.add_points(s.season, x, y, col);
    if (trend) {
      const RegressionFit line = ols_fit(x, y, 1);
      const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
      scatter.add_line("", {*lo, *hi},
                       {line.coefficients[0] + line.coefficients[1] * *lo,
                        line.coefficients[0] + line.coefficients[1] * *hi},
                       col);
    }
    rows.push_back(row);
  }
  if (rows.empty()) {
    std::cerr << "error: no season had enough overlapping weeks\n";
    return 3;
  }
  report["seasons"] = rows;
  report["skipped"] = skipped;
  if (paired.size() >= 2) {
    const SeverityTrend t = quad_weight_vs_severity(paired, dir_flag);
    Json pts = Json::array();
    for (const auto& p : t.points)
      pts.push_back({{"season", p.season}, {"total_ili", p.total_ili}, {"p_quad", p.p_quad}});
    report["severity"] = {{"points", pts}, {"intercept", t.intercept}, {"slope", t.slope}};
  }
  write_json(dir / "correlate.json", report);
  write_text_file(dir / "correlate.csv", csv);
  write_text_file(dir / "lin_quad_weights.csv", table);
  write_text_file(dir / "correlate.svg", scatter.render());
  return 0;
}

int cmd_leadtime(const RunConfig& c) {
  const Variant variant = variant_flag(c);
  const auto models = models_flag(c);
  check_window_length(c, models);
  const auto [lead_min, lead_max] = parse_leads(c.leads);
  LeadTimeOptions lo;
  lo.window_length = c.window_length;
  lo.fit = fit_flags(c);
  lo.exclusions = c.exclude;
  const auto seasons = load_seasons(c.data, SeriesKind::LabConfirmedPct, c.seasons);
  const fs::path dir = out_dir(c);
  const auto rows = lead_time_analysis(seasons, lead_min, lead_max, models, variant, lo);

  Json report = config_json(c, "leadtime");
  report.erase("window_offset");
  report["data"] = fs::path(c.data).filename().string();
  report["exclusions"] = c.exclude;
  std::string csv = "lead_weeks,model,mean_weight,seasons_used\n";
  Json jr = Json::array();
  std::vector<std::vector<double>> curve(models.size());
  std::vector<double> xs;
  bool any = false;
  for (const auto& r : rows) {
    Json j;
    j["lead_weeks"] = r.lead_weeks;
    Json w;
    for (std::size_t m = 0; m < models.size(); ++m) {
      w[std::string(media_id(models[m]))] = num(r.mean_weight[m]);
      csv += std::to_string(r.lead_weeks) + "," + std::string(media_id(models[m])) + "," +
             fmt(r.mean_weight[m]) + "," + std::to_string(r.seasons_used.size()) + "\n";
      curve[m].push_back(r.mean_weight[m]);
    }
    xs.push_back(r.lead_weeks);
    j["mean_weight"] = w;
    j["seasons_used"] = r.seasons_used;
    j["omitted"] = r.omitted;
    for (const auto& o : r.omitted)
      std::cerr << "warning: lead " << r.lead_weeks << ": omitted " << o << "\n";
    any |= !r.seasons_used.empty();
    jr.push_back(j);
  }
  report["rows"] = jr;
  write_json(dir / "leadtime.json", report);
  write_text_file(dir / "leadtime.csv", csv);
  SvgChart chart("Average model probability by lead time", "weeks before peak",
                 "average Akaike weight");
  for (std::size_t m = 0; m < models.size(); ++m)
    chart.add_line(std::string(media_id(models[m])), xs, curve[m], model_color(models[m]),
                   models[m] == MediaKind::None);
  write_text_file(dir / "leadtime.svg", chart.render());
  if (!any) {
    std::cerr << "error: no season was long enough for any lead time\n";
    return 3;
  }
  return 0;
}

int cmd_report(const RunConfig& c) {
  const Variant variant = variant_flag(c);
  const auto models = models_flag(c);
  check_window_length(c, models);
  fit_flags(c);
  const auto seasons = load_seasons(c.data, SeriesKind::LabConfirmedPct, c.seasons);
  const fs::path dir = out_dir(c);
  const std::set<std::string> excluded(c.exclude.begin(), c.exclude.end());
  std::vector<WeeklySeries> used;
  for (const auto& s : seasons)
    if (!excluded.count(s.season)) used.push_back(s);
  if (used.empty()) throw Error(ErrorKind::EmptyInput, "every season is excluded");
  const auto outcomes = fit_all(c, used, models, variant);

  // Metrics use the weeks that enter the residual sum (week 0 seeds the
  // model and matches the data by construction).
  const char* metric_names[] = {"rms", "peak_timing_error", "final_size_error"};
  std::vector<std::array<std::vector<double>, 3>> values(models.size());
  std::string csv = "season,model,rms,peak_timing_error,final_size_error\n";
  bool any = false;
  for (std::size_t i = 0; i < used.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o.fit) continue;
    any = true;
    const std::span<const double> obs = std::span<const double>(o.fit->data).subspan(1);
    for (std::size_t m = 0; m < models.size(); ++m) {
      const auto curve = model_curve(o.fit->fits[m], o.fit->data);
      const ErrorSummary e = error_summary(std::span<const double>(curve).subspan(1), obs);
      values[m][0].push_back(e.rms);
      values[m][1].push_back(static_cast<double>(e.peak_timing_error));
      values[m][2].push_back(e.final_size_error);
      csv += used[i].season + "," + std::string(media_id(models[m])) + "," + fmt(e.rms) +
             "," + std::to_string(e.peak_timing_error) + "," + fmt(e.final_size_error) + "\n";
    }
  }
  if (!any) return nothing_fitted(outcomes);

  Json report = config_json(c, "report");
  report["data"] = fs::path(c.data).filename().string();
  report["exclusions"] = c.exclude;
  Json metrics;
  for (int k = 0; k < 3; ++k) {
    Json per_model, tests = Json::array();
    std::vector<std::string> labels;
    std::vector<BoxplotSummary> boxes;
    for (std::size_t m = 0; m < models.size(); ++m) {
      const BoxplotSummary b = boxplot_summary(values[m][k]);
      per_model[std::string(media_id(models[m]))] = {
          {"q1", b.q1}, {"median", b.median}, {"q3", b.q3}, {"whisker_lo", b.whisker_lo},
          {"whisker_hi", b.whisker_hi}, {"outliers", b.outliers}};
      labels.emplace_back(media_id(models[m]));
      boxes.push_back(b);
    }
    // Mood's median test of each media model against the no-media model.
    const auto none_at = std::find(models.begin(), models.end(), MediaKind::None);
    if (none_at != models.end()) {
      const auto& base = values[none_at - models.begin()][k];
      for (std::size_t m = 0; m < models.size(); ++m) {
        if (models[m] == MediaKind::None) continue;
        Json t;
        t["model"] = std::string(media_id(models[m]));
        t["against"] = "none";
        try {
          const MoodResult r = moods_median_test(base, values[m][k]);
          t["statistic"] = r.statistic;
          t["p_value"] = r.p_value;
          t["pooled_median"] = r.pooled_median;
        } catch (const Error& e) {
          t["statistic"] = nullptr;
          t["p_value"] = nullptr;
          t["note"] = e.what();
        }
        tests.push_back(t);
      }
    }
    metrics[metric_names[k]] = {{"boxplot", per_model}, {"moods_median_test", tests}};
    SvgChart chart(std::string("Error metric: ") + metric_names[k], "model", metric_names[k]);
    chart.add_boxes(labels, boxes, "#1f77b4");
    write_text_file(dir / (std::string("report_") + metric_names[k] + ".svg"), chart.render());
  }
  report["metrics"] = metrics;
  write_json(dir / "report.json", report);
  write_text_file(dir / "metrics.csv", csv);
  return 0;
}

int cmd_synth(const RunConfig& c) {
  const fs::path dir = out_dir(c);
  const Corpus corpus =
      c.noise >= 0.0 ? make_corpus(c.corpus_seed, c.noise) : make_corpus(c.corpus_seed);
  write_text_file(dir / "synthetic_lab.csv", serialize_csv(corpus.lab));
  write_text_file(dir / "synthetic_ili.csv", serialize_csv(corpus.ili));
  write_text_file(dir / "synthetic_retweets.csv", serialize_csv(corpus.retweets));
  std::string p = "season,model,R0,inv_sigma_days,inv_gamma_days,p,start_pct,noise_cv\n";
  for (const auto& s : corpus.lab_specs) {
    p += s.season + "," + std::string(media_id(s.kind)) + "," + fmt(s.theta[0]) + "," +
         fmt(s.theta[1]) + "," + fmt(s.theta[2]) + "," +
         (s.theta.size() > 3 ? fmt(s.theta[3]) : "") + "," + fmt(s.seed_pct) + "," +
         fmt(s.noise_cv) + "\n";
  }
  write_text_file(dir / "synthetic_lab_params.csv", p);
  std::cout << "pandemic analog season: " << corpus.pandemic_season << "\n";
  return 0;
}

}  // namespace mediaflu::cli
