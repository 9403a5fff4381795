/*
 * weyl_counting.hpp: global counting functions assembled from fibers.
 *
 * The Dirichlet Laplacian of cusp j is the orthogonal sum over cross-section
 * modes l of the half-line operators L_{j,l}, so
 *
 *     N(lambda, cusp j) = sum_l N(lambda, L_{j,l}),
 *
 * and only modes with mu_l < lambda / min_j a_j^{4 delta_j} can contribute
 * (beyond that V >= lambda).  The full manifold count is bracketed between
 * Dirichlet and Neumann decouplings; the Neumann condition becomes a Robin
 * condition on each fiber.  The compact core enters only through its Weyl term.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cuspweyl/cross_section.hpp"
#include "cuspweyl/errors.hpp"
#include "cuspweyl/fiber_schrodinger.hpp"
#include "cuspweyl/manifold_model.hpp"

namespace cuspweyl {

struct CountResult {
  double lambda = 0.0;
  long count_low = 0;   // Dirichlet side (equal to count_high for a single count)
  long count_high = 0;  // Neumann/Robin side
  double leading = 0.0; // |M| omega_n / (2 pi)^n lambda^{n/2}
  double residual_low = 0.0;
  double residual_high = 0.0;
};

struct FitReport {
  double slope = std::numeric_limits<double>::quiet_NaN();
  bool log_correction = false;
  double constant = std::numeric_limits<double>::quiet_NaN();
  double rss = std::numeric_limits<double>::quiet_NaN();
  bool slope_defined = false;  // false when every residual is at rounding level
  std::size_t samples = 0;
  // Both candidate models, for reporting.
  double slope_power = std::numeric_limits<double>::quiet_NaN();
  double rss_power = std::numeric_limits<double>::quiet_NaN();
  double slope_log = std::numeric_limits<double>::quiet_NaN();
  double rss_log = std::numeric_limits<double>::quiet_NaN();
};

struct FiberMode {
  std::size_t index = 0;
  double mu = 0.0;
};

inline double weyl_leading(double volume, int n, double lambda) {
  return volume * weyl_constant(n) * std::pow(lambda, n / 2.0);
}

// ---------------------------------------------------------------------------
// Fibers and phase integrals
// ---------------------------------------------------------------------------

inline double fiber_threshold(const ManifoldModel& model, double lambda) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : model.cusps) m = std::min(m, std::pow(c.a, 4.0 * c.delta));
  return lambda / m;
}

/// Modes l of cusp j with mu_l < lambda / min_j a_j^{4 delta_j}, ascending in mu.
inline std::vector<FiberMode> admissible_fibers(const ManifoldModel& model, std::size_t j, double lambda) {
  if (j >= model.cusps.size()) throw precondition_error("admissible_fibers: cusp index out of range");
  const double cutoff = fiber_threshold(model, lambda);
  std::vector<FiberMode> out;
  if (!(cutoff > 0.0)) return out;
  const auto spec = mu_spectrum(model.cusps[j].cross_section, 1.0, cutoff);
  out.reserve(spec.values.size());
  for (std::size_t l = 0; l < spec.values.size(); ++l) out.push_back({l, spec.values[l]});
  return out;
}

/// w(lambda) = int_alpha^inf [lambda - V(t)]_+^{1/2} dt.
///
/// The allowed region is an interval [t_l, T]; each half is integrated after
/// t = endpoint -/+ u^2 whenever the endpoint is a root of V - lambda, which
/// turns the square-root edge into an analytic integrand.
inline double phase_integral(const FiberPotential& f, double lambda) {
  if (f.mu == 0.0) {
    if (lambda > f.essential_infimum())
      throw precondition_error("phase_integral: unbounded support (mu = 0 channel)");
    return 0.0;
  }
  const auto tp = turning_point(f, lambda);
  if (!tp) return 0.0;
  const double right = *tp;
  const double tmin = f.minimizer();
  if (!(f.value(tmin) < lambda)) return 0.0;

  double left = f.alpha;
  bool left_root = false;
  if (f.value(f.alpha) >= lambda) {
    left = detail::bisect_first(f.alpha, tmin, [&](double t) { return f.value(t) < lambda; });
    left_root = true;
  }
  if (!(right > left)) return 0.0;

  using quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  constexpr unsigned depth = 15;
  constexpr double rel = 1e-12;
  auto root = [&](double t) { return std::sqrt(std::max(lambda - f.value(t), 0.0)); };
  const double mid = left + 0.5 * (right - left);

  double w = 0.0;
  if (left_root) {
    w += quad::integrate([&](double u) { return 2.0 * u * root(left + u * u); }, 0.0, std::sqrt(mid - left),
                         depth, rel);
  } else {
    w += quad::integrate(root, left, mid, depth, rel);
  }
  w += quad::integrate([&](double u) { return 2.0 * u * root(right - u * u); }, 0.0, std::sqrt(right - mid),
                       depth, rel);
  return w;
}

/// Theta_j(lambda) = (1/pi) sum_l w_{j,l}(lambda) over admissible fibers.
inline double theta_sum(const ManifoldModel& model, std::size_t j, double lambda) {
  const auto& cusp = model.cusps.at(j);
  double s = 0.0;
  for (const auto& mode : admissible_fibers(model, j, lambda)) {
    if (mode.mu == 0.0) continue;  // continuous channel carries no phase volume here
    s += phase_integral(FiberPotential::for_cusp(cusp, model.n, mode.mu), lambda);
  }
  return s / std::numbers::pi;
}

// ---------------------------------------------------------------------------
// R_j and its integral representation
// ---------------------------------------------------------------------------

/// R(mu) = sum_l [mu - mu_l]_+^{1/2}.
inline double rj_sum(const TorusCrossSection& X, double tau, double mu) {
  if (!(mu > 0.0)) return 0.0;
  double s = 0.0;
  for (double v : mu_spectrum(X, tau, mu).values) s += std::sqrt(mu - v);
  return s;
}

/// Half of int_0^mu (mu - s)^{-1/2} N(s) ds with N(s) = cross_count(X, tau, s).
/// N is a step function, so the integral is summed exactly over its level sets.
inline double rj_half_integral(const TorusCrossSection& X, double tau, double mu) {
  if (!(mu > 0.0)) return 0.0;
  auto jumps = mu_spectrum(X, tau, mu).values;
  jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
  double s = 0.0;
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    const double a = jumps[k];
    const double b = k + 1 < jumps.size() ? jumps[k + 1] : mu;
    const double level = static_cast<double>(cross_count(X, tau, 0.5 * (a + b)));
    s += level * (std::sqrt(mu - a) - std::sqrt(mu - b));
  }
  return s;
}

inline double identity_residual(const TorusCrossSection& X, double tau, double mu) {
  return std::abs(rj_sum(X, tau, mu) - rj_half_integral(X, tau, mu));
}

// ---------------------------------------------------------------------------
// Counting
// ---------------------------------------------------------------------------

/// Exact number of eigenvalues below lambda of the cusp-j operator with a
/// Dirichlet (or Neumann-like, via Robin fibers) condition at y = a_j^2.
inline CountResult cusp_count(const ManifoldModel& model, std::size_t j, double lambda, Boundary kind,
                              const PruferSettings& s = {}) {
  const auto& cusp = model.cusps.at(j);
  const auto bc = kind == Boundary::dirichlet ? BoundaryCondition::dirichlet()
                                              : BoundaryCondition::robin(default_robin_beta(cusp, model.n));
  long count = 0;
  for (const auto& mode : admissible_fibers(model, j, lambda))
    count += fiber_count(FiberPotential::for_cusp(cusp, model.n, mode.mu), lambda, bc, s);

  CountResult r;
  r.lambda = lambda;
  r.count_low = r.count_high = count;
  r.leading = weyl_leading(cusp_volume(cusp, model.n), model.n, lambda);
  r.residual_low = r.residual_high = static_cast<double>(count) - r.leading;
  return r;
}

/// Dirichlet-Neumann bracket of N(lambda) for the whole manifold.
inline CountResult total_count_bracket(const ManifoldModel& model, double lambda, const PruferSettings& s = {}) {
  long low = 0, high = 0;
  if (model.core.volume > 0.0) {
    const double core = weyl_leading(model.core.volume, model.n, lambda);
    const double band = model.core.remainder_coeff * std::pow(lambda, (model.n - 1) / 2.0);
    low = static_cast<long>(std::max(0.0, std::floor(core - band)));
    high = static_cast<long>(std::max(0.0, std::ceil(core + band)));
  }
  for (std::size_t j = 0; j < model.cusps.size(); ++j) {
    low += cusp_count(model, j, lambda, Boundary::dirichlet, s).count_low;
    high += cusp_count(model, j, lambda, Boundary::robin, s).count_high;
  }
  CountResult r;
  r.lambda = lambda;
  r.count_low = low;
  r.count_high = high;
  r.leading = weyl_leading(total_volume(model), model.n, lambda);
  r.residual_low = static_cast<double>(low) - r.leading;
  r.residual_high = static_cast<double>(high) - r.leading;
  return r;
}

// ---------------------------------------------------------------------------
// Remainder regime
// ---------------------------------------------------------------------------

/// r(lambda): lambda^{(n-1)/2} ln(lambda) if delta >= 1/(n-1), else lambda^{1/(2 delta)}.
inline double remainder_model(int n, double delta, double lambda) {
  if (delta * (n - 1) >= 1.0) return std::pow(lambda, (n - 1) / 2.0) * std::log(lambda);
  return std::pow(lambda, 1.0 / (2.0 * delta));
}

inline std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (points < 1 || !(lo > 0.0) || !(hi >= lo)) throw precondition_error("geometric_grid: bad range");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] = points == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
  return g;
}

inline std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 1 || !(hi >= lo)) throw precondition_error("linear_grid: bad range");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  return g;
}

/// Regresses log|residual| on log(lambda), with and without a ln(lambda) factor:
///   power:  |res| ~ C lambda^s
///   log:    |res| ~ C lambda^s ln(lambda)
/// and keeps the model with the smaller residual sum of squares.
inline FitReport fit_remainder(std::span<const double> lambdas, std::span<const double> residuals) {
  if (lambdas.size() != residuals.size()) throw precondition_error("fit_remainder: size mismatch");
  if (lambdas.size() < 8) throw precondition_error("fit_remainder: need at least 8 samples");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 1.0)) throw precondition_error("fit_remainder: lambda must exceed 1");
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) throw precondition_error("fit_remainder: grid must increase");
  }
  if (lambdas.back() < 10.0 * lambdas.front()) throw precondition_error("fit_remainder: grid spans under a decade");

  FitReport rep;
  std::vector<double> x, y, ll;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double r = std::abs(residuals[i]);
    // Rounding level of a count of size ~lambda.
    if (r <= 1e-9 * std::max(1.0, lambdas[i])) continue;
    x.push_back(std::log(lambdas[i]));
    y.push_back(std::log(r));
    ll.push_back(std::log(std::log(lambdas[i])));
  }
  rep.samples = x.size();
  if (x.size() < 3) return rep;

  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd yp(m), yl(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = x[static_cast<std::size_t>(i)];
    yp(i) = y[static_cast<std::size_t>(i)];
    yl(i) = y[static_cast<std::size_t>(i)] - ll[static_cast<std::size_t>(i)];
  }
  const auto qr = A.colPivHouseholderQr();
  const Eigen::VectorXd cp = qr.solve(yp);
  const Eigen::VectorXd cl = qr.solve(yl);
  rep.slope_power = cp(1);
  rep.rss_power = (A * cp - yp).squaredNorm();
  rep.slope_log = cl(1);
  rep.rss_log = (A * cl - yl).squaredNorm();

  rep.slope_defined = true;
  rep.log_correction = rep.rss_log < rep.rss_power;
  const Eigen::VectorXd& c = rep.log_correction ? cl : cp;
  rep.slope = c(1);
  rep.constant = std::exp(c(0));
  rep.rss = rep.log_correction ? rep.rss_log : rep.rss_power;
  return rep;
}

/// Fits the Dirichlet residual N(lambda) - |M| omega_n/(2 pi)^n lambda^{n/2} of a cusps-only model.
inline FitReport remainder_fit(const ManifoldModel& model, std::span<const double> grid,
                               const PruferSettings& s = {}) {
  if (model.core.volume != 0.0) throw precondition_error("remainder_fit: requires core.volume = 0");
  std::vector<double> res;
  res.reserve(grid.size());
  const double vol = total_volume(model);
  for (double lambda : grid) {
    long count = 0;
    for (std::size_t j = 0; j < model.cusps.size(); ++j)
      count += cusp_count(model, j, lambda, Boundary::dirichlet, s).count_low;
    res.push_back(static_cast<double>(count) - weyl_leading(vol, model.n, lambda));
  }
  return fit_remainder(grid, res);
}

}  // namespace cuspweyl
