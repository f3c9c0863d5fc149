#include "mediaflu/mediastats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "mediaflu/error.hpp"
#include "mediaflu/select.hpp"
#include "mediaflu/special.hpp"

namespace mediaflu {

void PairedSeries::validate() const {
  if (x.size() != y.size() || week_labels.size() != x.size())
    throw Error(ErrorKind::LengthMismatch, "paired series lengths differ");
  if (x.size() < 3)
    throw Error(ErrorKind::SampleTooSmall, "paired series needs >= 3 weeks");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw Error(ErrorKind::ParameterDomain, "non-finite paired value");
}

namespace {

void check_xy(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorKind::LengthMismatch, "x and y lengths differ");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw Error(ErrorKind::ParameterDomain, "non-finite value");
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a;
  return s / static_cast<double>(v.size());
}

}  // namespace

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  check_xy(x, y);
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorKind::SampleTooSmall, "pearson needs n >= 3");
  const double mx = mean_of(x), my = mean_of(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw Error(ErrorKind::UndefinedStatistic, "zero variance, correlation undefined");
  Correlation c;
  c.n = n;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double dof = static_cast<double>(n - 2);
  const double one_minus = 1.0 - c.r * c.r;
  if (one_minus <= 0.0) {
    c.p_value = 0.0;
  } else {
    // I_{dof/(dof+t^2)}(dof/2, 1/2) with dof/(dof+t^2) = 1 - r^2.
    c.p_value = special::regularized_beta(0.5 * dof, 0.5, one_minus);
  }
  return c;
}

RegressionFit ols_fit(std::span<const double> x, std::span<const double> y,
                      int degree) {
  check_xy(x, y);
  if (degree < 1 || degree > 2)
    throw Error(ErrorKind::ParameterDomain, "degree must be 1 or 2");
  const std::size_t n = x.size();
  const std::size_t p = static_cast<std::size_t>(degree) + 1;
  if (n < p + 1) {
    throw Error(ErrorKind::SampleTooSmall,
                "degree " + std::to_string(degree) + " fit needs n >= " +
                    std::to_string(p + 1));
  }

  // Centre and scale x so the quadratic column stays well conditioned; the
  // coefficients are mapped back afterwards.
  const double mx = mean_of(x);
  double sx = 0.0;
  for (double v : x) sx = std::max(sx, std::abs(v - mx));
  if (sx == 0.0) sx = 1.0;

  Eigen::MatrixXd a(n, p);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = (x[i] - mx) / sx;
    a(i, 0) = 1.0;
    a(i, 1) = z;
    if (degree == 2) a(i, 2) = z * z;
    b(i) = y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(p)) {
    throw Error(ErrorKind::RankDeficient,
                "design matrix has rank " + std::to_string(qr.rank()) +
                    " < " + std::to_string(p));
  }
  const Eigen::VectorXd c = qr.solve(b);

  RegressionFit f;
  f.degree = degree;
  f.n = n;
  // y = c0 + c1 z + c2 z^2 with z = (x - mx) / sx.
  if (degree == 1) {
    f.coefficients = {c(0) - c(1) * mx / sx, c(1) / sx};
  } else {
    const double s2 = sx * sx;
    f.coefficients = {c(0) - c(1) * mx / sx + c(2) * mx * mx / s2,
                      c(1) / sx - 2.0 * c(2) * mx / s2, c(2) / s2};
  }
  const Eigen::VectorXd fitted = a * c;
  double ymax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    f.fitted.push_back(fitted(i));
    f.residuals.push_back(y[i] - fitted(i));
    f.rss += f.residuals.back() * f.residuals.back();
    ymax = std::max(ymax, std::abs(y[i]));
  }
  const double floor = 1e-12 * std::max(ymax, 1e-300);
  f.exact = f.rss <= static_cast<double>(n) * floor * floor;
  if (!f.exact && n > p + 2) f.aicc = aicc(f.rss, n, p);
  return f;
}

std::vector<double> residual_series(const RegressionFit& fit) {
  return fit.residuals;
}

namespace {

// AICc without the likelihood term.
double penalty_only(std::size_t n, std::size_t k) {
  if (n <= k + 2) return std::numeric_limits<double>::infinity();
  const double kk = static_cast<double>(k + 1);
  return 2.0 * kk + 2.0 * kk * (kk + 1.0) / (static_cast<double>(n) - kk - 1.0);
}

}  // namespace

LinQuad lin_vs_quad(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 5)
    throw Error(ErrorKind::SampleTooSmall, "lin_vs_quad needs n >= 5");
  LinQuad r;
  r.lin = ols_fit(x, y, 1);
  r.quad = ols_fit(x, y, 2);
  const double inf = std::numeric_limits<double>::infinity();
  double a[2];
  if (r.lin.exact && r.quad.exact) {
    a[0] = penalty_only(r.lin.n, 2);
    a[1] = penalty_only(r.quad.n, 3);
  } else if (r.quad.exact) {
    a[0] = inf;
    a[1] = 0.0;
  } else {
    a[0] = r.lin.aicc.value_or(inf);
    a[1] = r.quad.aicc.value_or(inf);
  }
  const auto w = akaike_weights(a);
  r.p_lin = w[0];
  r.p_quad = w[1];
  return r;
}

SeverityTrend quad_weight_vs_severity(std::span<const PairedSeries> seasons,
                                      RegressionDirection dir) {
  if (seasons.size() < 2)
    throw Error(ErrorKind::SampleTooSmall, "severity trend needs >= 2 seasons");
  SeverityTrend t;
  for (const PairedSeries& s : seasons) {
    s.validate();
    const bool ili_x = dir == RegressionDirection::RetweetsOnIli;
    const LinQuad lq = ili_x ? lin_vs_quad(s.x, s.y) : lin_vs_quad(s.y, s.x);
    double total = 0.0;
    for (double v : s.x) total += v;
    t.points.push_back({s.season, total, lq.p_quad});
  }
  std::vector<double> tx, ty;
  for (const auto& p : t.points) {
    tx.push_back(p.total_ili);
    ty.push_back(p.p_quad);
  }
  const double mx = mean_of(tx), my = mean_of(ty);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < tx.size(); ++i) {
    sxx += (tx[i] - mx) * (tx[i] - mx);
    sxy += (tx[i] - mx) * (ty[i] - my);
  }
  t.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  t.intercept = my - t.slope * mx;
  return t;
}

}  // namespace mediaflu
