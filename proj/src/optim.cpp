#include "mediaflu/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "mediaflu/error.hpp"

namespace mediaflu {

const char* to_string(BoxStatus s) {
  switch (s) {
    case BoxStatus::ProjectedGradient: return "projected-gradient";
    case BoxStatus::RelativeReduction: return "relative-reduction";
    case BoxStatus::IterationLimit: return "iteration-limit";
    case BoxStatus::LineSearchFailed: return "line-search-failed";
  }
  return "?";
}

FiniteDiffGradient finite_diff_gradient(const Objective& f,
                                        std::span<const double> x,
                                        std::span<const double> h,
                                        std::span<const double> lo,
                                        std::span<const double> hi,
                                        const double* f_x) {
  const std::size_t n = x.size();
  if (h.size() != n || (!lo.empty() && lo.size() != n) ||
      (!hi.empty() && hi.size() != n)) {
    throw Error(ErrorKind::LengthMismatch, "gradient: dimension mismatch");
  }
  FiniteDiffGradient out;
  out.g.assign(n, 0.0);
  out.one_sided.assign(n, 0);

  std::vector<double> xp(x.begin(), x.end());
  double fx = f_x ? *f_x : std::numeric_limits<double>::quiet_NaN();
  auto base = [&] {
    if (std::isnan(fx)) {
      fx = f(x);
      ++out.evaluations;
    }
    return fx;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const double hi_room = hi.empty() ? h[i] : hi[i] - x[i];
    const double lo_room = lo.empty() ? h[i] : x[i] - lo[i];
    const double xi = x[i];
    if (lo_room >= h[i] && hi_room >= h[i]) {
      xp[i] = xi + h[i];
      const double fp = f(xp);
      xp[i] = xi - h[i];
      const double fm = f(xp);
      out.g[i] = (fp - fm) / (2.0 * h[i]);
      out.evaluations += 2;
    } else if (hi_room >= h[i]) {
      xp[i] = xi + h[i];
      out.g[i] = (f(xp) - base()) / h[i];
      ++out.evaluations;
      out.one_sided[i] = 1;
    } else {
      xp[i] = xi - h[i];
      out.g[i] = (base() - f(xp)) / h[i];
      ++out.evaluations;
      out.one_sided[i] = 1;
    }
    xp[i] = xi;
    out.any_one_sided = out.any_one_sided || out.one_sided[i];
  }
  return out;
}

namespace {

struct CurvaturePair {
  std::vector<double> s;
  std::vector<double> y;
};

double masked_dot(const std::vector<double>& a, const std::vector<double>& b,
                  const std::vector<char>& free) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (free[i]) acc += a[i] * b[i];
  return acc;
}

// Two-loop recursion restricted to the free variables; returns -H g.
std::vector<double> lbfgs_direction(const std::vector<double>& g,
                                    const std::deque<CurvaturePair>& mem,
                                    const std::vector<char>& free) {
  const std::size_t n = g.size();
  std::vector<double> q(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) q[i] = free[i] ? g[i] : 0.0;

  std::vector<double> alpha(mem.size(), 0.0), rho(mem.size(), 0.0);
  double scale = 1.0;
  bool have_scale = false;
  for (std::size_t j = mem.size(); j-- > 0;) {
    const double sy = masked_dot(mem[j].s, mem[j].y, free);
    if (!(sy > 0.0)) continue;
    rho[j] = 1.0 / sy;
    alpha[j] = rho[j] * masked_dot(mem[j].s, q, free);
    for (std::size_t i = 0; i < n; ++i)
      if (free[i]) q[i] -= alpha[j] * mem[j].y[i];
    if (!have_scale) {
      const double yy = masked_dot(mem[j].y, mem[j].y, free);
      if (yy > 0.0) {
        scale = sy / yy;
        have_scale = true;
      }
    }
  }
  for (auto& v : q) v *= scale;
  for (std::size_t j = 0; j < mem.size(); ++j) {
    if (rho[j] == 0.0) continue;
    const double beta = rho[j] * masked_dot(mem[j].y, q, free);
    for (std::size_t i = 0; i < n; ++i)
      if (free[i]) q[i] += (alpha[j] - beta) * mem[j].s[i];
  }
  for (auto& v : q) v = -v;
  return q;
}

}  // namespace

BoxResult minimize_box(const Objective& f, std::span<const double> x0,
                       std::span<const double> lo, std::span<const double> hi,
                       const BoxOptions& opts) {
  const std::size_t n = x0.size();
  if (lo.size() != n || hi.size() != n)
    throw Error(ErrorKind::LengthMismatch, "minimize_box: bounds dimension");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lo[i] < hi[i]))
      throw Error(ErrorKind::ParameterDomain, "minimize_box: lo >= hi");
    if (!(x0[i] >= lo[i] && x0[i] <= hi[i]))
      throw Error(ErrorKind::ParameterDomain, "minimize_box: start outside box");
  }

  std::vector<double> h = opts.fd_step;
  if (h.empty()) {
    h.resize(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = 1e-5 * (hi[i] - lo[i]);
  }

  BoxResult res;
  std::vector<double> x(x0.begin(), x0.end());
  double fx = f(x);
  res.evaluations = 1;

  auto gradient = [&](const std::vector<double>& at, double f_at) {
    auto fd = finite_diff_gradient(f, at, h, lo, hi, &f_at);
    res.evaluations += fd.evaluations;
    return std::move(fd.g);
  };
  auto project = [&](std::vector<double>& v) {
    for (std::size_t i = 0; i < n; ++i) v[i] = std::clamp(v[i], lo[i], hi[i]);
  };
  auto pg_norm = [&](const std::vector<double>& at,
                     const std::vector<double>& g) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double step = std::clamp(at[i] - g[i], lo[i], hi[i]) - at[i];
      m = std::max(m, std::abs(step));
    }
    return m;
  };

  std::vector<double> g = gradient(x, fx);
  std::deque<CurvaturePair> mem;

  res.status = BoxStatus::IterationLimit;
  for (int it = 0; it < opts.max_iterations; ++it) {
    res.projected_gradient = pg_norm(x, g);
    if (res.projected_gradient < opts.pgtol * (1.0 + std::abs(fx))) {
      res.status = BoxStatus::ProjectedGradient;
      break;
    }

    // Variables pinned at a bound with the gradient pushing outward.
    std::vector<char> free(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      if ((x[i] <= lo[i] && g[i] > 0.0) || (x[i] >= hi[i] && g[i] < 0.0))
        free[i] = 0;
    }

    bool accepted = false;
    std::vector<double> xn(n);
    double fn = fx;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      const bool steepest = mem.empty() || attempt == 1;
      std::vector<double> d(n, 0.0);
      if (!steepest) d = lbfgs_direction(g, mem, free);
      double slope = 0.0;
      for (std::size_t i = 0; i < n; ++i) slope += g[i] * d[i];
      if (steepest || !(slope < 0.0)) {
        for (std::size_t i = 0; i < n; ++i) d[i] = free[i] ? -g[i] : 0.0;
      }
      double dmax = 0.0;
      for (double v : d) dmax = std::max(dmax, std::abs(v));
      if (dmax == 0.0) break;

      // Cap the first step of a steepest-descent move to a quarter of the
      // widest box side.
      double width = 0.0;
      for (std::size_t i = 0; i < n; ++i) width = std::max(width, hi[i] - lo[i]);
      double alpha = steepest ? std::min(1.0, 0.25 * width / dmax) : 1.0;

      for (int bt = 0; bt < opts.max_backtracks; ++bt, alpha *= 0.5) {
        for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + alpha * d[i];
        project(xn);
        double decrease = 0.0;
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
          decrease += g[i] * (xn[i] - x[i]);
          moved = moved || xn[i] != x[i];
        }
        if (!moved) break;
        fn = f(xn);
        ++res.evaluations;
        if (std::isfinite(fn) && fn <= fx + opts.armijo * decrease &&
            fn <= fx) {
          accepted = true;
          break;
        }
      }
      if (!accepted) mem.clear();
    }

    if (!accepted) {
      res.status = BoxStatus::LineSearchFailed;
      break;
    }

    std::vector<double> gn = gradient(xn, fn);
    CurvaturePair pair{std::vector<double>(n), std::vector<double>(n)};
    double sy = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pair.s[i] = xn[i] - x[i];
      pair.y[i] = gn[i] - g[i];
      sy += pair.s[i] * pair.y[i];
      yy += pair.y[i] * pair.y[i];
    }
    if (sy > std::numeric_limits<double>::epsilon() * yy) {
      mem.push_back(std::move(pair));
      if (static_cast<int>(mem.size()) > opts.memory) mem.pop_front();
    }

    const double reduction = fx - fn;
    x = std::move(xn);
    xn.assign(n, 0.0);
    g = std::move(gn);
    fx = fn;
    res.iterations = it + 1;
    res.trace.push_back(fx);

    if (reduction <= opts.ftol * std::max(std::abs(fx), std::abs(fx + reduction))) {
      res.projected_gradient = pg_norm(x, g);
      res.status = BoxStatus::RelativeReduction;
      break;
    }
  }
  if (res.status == BoxStatus::IterationLimit) res.projected_gradient = pg_norm(x, g);

  res.converged = res.status == BoxStatus::ProjectedGradient ||
                  res.status == BoxStatus::RelativeReduction;
  res.x = std::move(x);
  res.f = fx;
  return res;
}

}  // namespace mediaflu
