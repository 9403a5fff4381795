/*
 * fiber_schrodinger.hpp: half-line Schrodinger operators L = -d^2/dt^2 + V(t)
 * on ]alpha, +inf[ obtained by separating variables in one cusp.
 *
 * With mu the cross-section eigenvalue of the fiber:
 *
 *   delta = 1:      V(t) = mu e^{2t} + (n-1)^2/4,                     alpha = 2 ln a
 *   1/n < delta < 1: V(t) = mu [(1-delta) t]^{2 delta/(1-delta)}
 *                          + (n-1) delta [(n-3) delta + 2] / (4 (1-delta)^2 t^2),
 *                                                                    alpha = a^{2(1-delta)}/(1-delta)
 *
 * Eigenvalues are counted by Sturm oscillation: the number of eigenvalues
 * strictly below lambda equals the number of zeros on ]alpha, +inf[ of the
 * solution of (L - lambda) u = 0 that satisfies the boundary condition at
 * alpha.  Zeros are tracked with a scaled Prufer angle,
 *
 *   u = rho S^{-1/2} sin(theta),  u' = rho S^{1/2} cos(theta),
 *   theta' = S cos^2 + (g/S) sin^2 + (S'/S) sin cos,   g = lambda - V,
 *   S = (g^2 + 1)^{1/4},
 *
 * so that theta advances smoothly at rate ~ sqrt(g) in the allowed region.
 * Once V > lambda for all later t, the set {u u' >= 0} is forward invariant
 * (since (u u')' = u'^2 + (V - lambda) u^2 >= 0) and no further zero can
 * occur; integration stops as soon as the trajectory enters it.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "cuspweyl/errors.hpp"
#include "cuspweyl/manifold_model.hpp"

namespace cuspweyl {

struct FiberPotential {
  int n = 2;
  double delta = 1.0;
  double mu = 0.0;
  double alpha = 0.0;

  static FiberPotential for_cusp(const CuspEnd& cusp, int n, double mu) {
    FiberPotential f;
    f.n = n;
    f.delta = cusp.delta;
    f.mu = mu;
    if (cusp.delta == 1.0) {
      f.alpha = 2.0 * std::log(cusp.a);
    } else {
      f.alpha = std::pow(cusp.a, 2.0 * (1.0 - cusp.delta)) / (1.0 - cusp.delta);
    }
    return f;
  }

  bool exponential_branch() const { return delta == 1.0; }

  /// 2 delta / (1 - delta) for the power branch.
  double power() const { return 2.0 * delta / (1.0 - delta); }

  /// The mu-independent part: (n-1)^2/4 for delta = 1, the t^{-2} coefficient otherwise.
  double constant_term() const {
    if (exponential_branch()) return (n - 1.0) * (n - 1.0) / 4.0;
    const double om = 1.0 - delta;
    return (n - 1.0) * delta * ((n - 3.0) * delta + 2.0) / (4.0 * om * om);
  }

  double value(double t) const {
    if (exponential_branch()) return mu * std::exp(2.0 * t) + constant_term();
    const double s = (1.0 - delta) * t;
    return mu * std::pow(s, power()) + constant_term() / (t * t);
  }

  double slope(double t) const {
    if (exponential_branch()) return 2.0 * mu * std::exp(2.0 * t);
    const double p = power();
    const double om = 1.0 - delta;
    return mu * p * om * std::pow(om * t, p - 1.0) - 2.0 * constant_term() / (t * t * t);
  }

  /// lim V(t) as t -> inf when mu = 0; the bottom of the continuous spectrum of that channel.
  double essential_infimum() const { return exponential_branch() ? constant_term() : 0.0; }

  /// Point of [alpha, inf[ where V is minimal; +inf when V decreases forever (mu = 0, delta < 1).
  double minimizer() const {
    if (exponential_branch()) return alpha;
    const double K = constant_term();
    if (K <= 0.0) return alpha;
    if (mu == 0.0) return std::numeric_limits<double>::infinity();
    const double p = power();
    const double om = 1.0 - delta;
    const double tstar = std::pow(2.0 * K / (p * mu * std::pow(om, p)), 1.0 / (p + 2.0));
    return std::max(alpha, tstar);
  }

  /// inf of V over [alpha, inf[.
  double minimum() const {
    const double t = minimizer();
    return std::isinf(t) ? 0.0 : value(t);
  }
};

/// V(t), with the domain checked.
inline double potential_eval(const FiberPotential& f, double t) {
  if (t < f.alpha) throw domain_error("potential_eval: t below alpha");
  if (!f.exponential_branch() && !(t > 0.0)) throw domain_error("potential_eval: t must be positive");
  return f.value(t);
}

enum class Boundary { dirichlet, robin };

/// Dirichlet u(alpha) = 0, or Robin u'(alpha) + beta u(alpha) = 0.
struct BoundaryCondition {
  Boundary kind = Boundary::dirichlet;
  double beta = 0.0;

  static BoundaryCondition dirichlet() { return {Boundary::dirichlet, 0.0}; }
  static BoundaryCondition robin(double beta) { return {Boundary::robin, beta}; }
};

/// Robin coefficient carried by the Neumann condition d_y(U f) = 0 at y = a^2 after
/// the unitary change of functions: (n delta - 1)/2 when delta = 1, and
/// (n-1) delta a^{2(delta-1)} / 2 otherwise.
inline double default_robin_beta(const CuspEnd& cusp, int n) {
  if (cusp.delta == 1.0) return (n * cusp.delta - 1.0) / 2.0;
  return (n - 1.0) * cusp.delta * std::pow(cusp.a, 2.0 * (cusp.delta - 1.0)) / 2.0;
}

struct PruferSettings {
  double rel_tol = 1e-10;   // eigenvalue resolution; also the tie band for strict counting
  double angle_tol = 1e-9;  // stop only once theta mod pi <= pi/2 - angle_tol
  double t_margin = 5.0;    // hard cap on integration length past the turning point
  double ode_tol = 1e-12;   // local error per step on theta
};

namespace detail {

/// Smallest t in [lo, hi] with pred(t), pred monotone false -> true; resolved to one ulp.
template <class Pred>
double bisect_first(double lo, double hi, Pred pred) {
  for (;;) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) return hi;
    if (pred(mid)) hi = mid; else lo = mid;
  }
}

}  // namespace detail

/// Right turning point: least t >= alpha such that V >= lambda on [t, inf[.
/// Empty when V > lambda on all of [alpha, inf[.  Throws continuous_spectrum_error
/// when V < lambda on an unbounded set (mu = 0 above the essential infimum).
inline std::optional<double> turning_point(const FiberPotential& f, double lambda) {
  if (f.mu < 0.0) throw domain_error("turning_point: mu must be nonnegative");
  if (f.mu == 0.0) {
    const double inf = f.essential_infimum();
    if (lambda > inf)
      throw continuous_spectrum_error("turning_point: potential never exceeds lambda (mu = 0 channel)");
    if (f.exponential_branch() && lambda == inf) return f.alpha;
    return std::nullopt;
  }
  const double t0 = f.minimizer();
  const double v0 = f.value(t0);
  if (v0 > lambda) return std::nullopt;
  if (v0 == lambda) return t0;
  if (f.exponential_branch()) {
    const double t = 0.5 * std::log((lambda - f.constant_term()) / f.mu);
    return std::max(t, t0);
  }
  double hi = t0 + 1.0;
  while (f.value(hi) < lambda) hi = t0 + 2.0 * (hi - t0);
  return detail::bisect_first(t0, hi, [&](double t) { return f.value(t) >= lambda; });
}

namespace detail {

struct PruferOutcome {
  double theta = 0.0;
  double t_end = 0.0;
  bool stabilized = false;
};

inline PruferOutcome prufer_integrate(const FiberPotential& f, double lambda, const BoundaryCondition& bc,
                                      const PruferSettings& s) {
  namespace odeint = boost::numeric::odeint;
  const auto tp = turning_point(f, lambda);
  const double t_safe = tp ? *tp : f.alpha;
  const double q_safe = std::max(f.value(t_safe) - lambda, 0.0);
  const double t_cap = t_safe + std::max(s.t_margin, 3.0 / std::sqrt(q_safe + 1.0));

  auto scale = [&](double t) {
    const double g = lambda - f.value(t);
    return std::sqrt(std::sqrt(g * g + 1.0));
  };
  auto rhs = [&](const double& th, double& dth, double t) {
    const double g = lambda - f.value(t);
    const double gp = -f.slope(t);
    const double g2 = g * g + 1.0;
    const double S = std::sqrt(std::sqrt(g2));
    const double sn = std::sin(th);
    const double cs = std::cos(th);
    dth = S * cs * cs + (g / S) * sn * sn + (g * gp / (2.0 * g2)) * sn * cs;
  };

  PruferOutcome out;
  double theta = 0.0;
  if (bc.kind == Boundary::robin) theta = std::atan2(scale(f.alpha), -bc.beta);

  const double half = 0.5 * std::numbers::pi - s.angle_tol;
  auto settled = [&](double t, double th) {
    if (t < t_safe) return false;
    const double phase = th - std::numbers::pi * std::floor(th / std::numbers::pi);
    return phase <= half;
  };

  using stepper_t = odeint::runge_kutta_dopri5<double, double, double, double, odeint::vector_space_algebra>;
  auto stepper = odeint::make_controlled(s.ode_tol, s.ode_tol, stepper_t());

  double t = f.alpha;
  double dt = 1e-3 / (1.0 + scale(t));
  constexpr double max_step = 0.25;
  while (!settled(t, theta)) {
    if (t >= t_cap) {
      out.theta = theta;
      out.t_end = t;
      return out;
    }
    dt = std::min({dt, max_step, t_cap - t});
    if (stepper.try_step(rhs, theta, t, dt) == odeint::fail) {
      if (dt < 1e-14 * (1.0 + std::abs(t))) throw error("prufer: step size underflow");
    }
  }
  out.theta = theta;
  out.t_end = t;
  out.stabilized = true;
  return out;
}

/// Number of eigenvalues below lambda without the tie band.
inline long raw_count(const FiberPotential& f, double lambda, const BoundaryCondition& bc,
                      const PruferSettings& s) {
  if (bc.kind == Boundary::dirichlet && lambda <= f.minimum()) return 0;
  const auto run = prufer_integrate(f, lambda, bc, s);
  return std::max(0L, static_cast<long>(std::floor(run.theta / std::numbers::pi)));
}

inline void require_discrete(const FiberPotential& f, double lambda, const char* who) {
  if (f.mu < 0.0) throw domain_error(std::string(who) + ": mu must be nonnegative");
  if (f.mu == 0.0 && lambda > f.essential_infimum())
    throw continuous_spectrum_error(std::string(who) + ": lambda lies in the continuous spectrum of the mu = 0 channel");
}

inline double tie_band(double lambda, const PruferSettings& s) { return s.rel_tol * std::max(1.0, std::abs(lambda)); }

}  // namespace detail

/// Number of eigenvalues strictly below lambda.  Eigenvalues within rel_tol of
/// lambda count as equal to it and are excluded.
inline long fiber_count(const FiberPotential& f, double lambda, const BoundaryCondition& bc,
                        const PruferSettings& s = {}) {
  detail::require_discrete(f, lambda, "fiber_count");
  return detail::raw_count(f, lambda - detail::tie_band(lambda, s), bc, s);
}

/// Every eigenvalue below lambda_max, ascending, each resolved to rel_tol by bisection
/// on the oscillation count.  Eigenvalues of a half-line problem are simple.
inline std::vector<double> fiber_eigenvalues(const FiberPotential& f, double lambda_max,
                                             const BoundaryCondition& bc, const PruferSettings& s = {}) {
  detail::require_discrete(f, lambda_max, "fiber_eigenvalues");
  const double hi = lambda_max - detail::tie_band(lambda_max, s);
  const long n_hi = detail::raw_count(f, hi, bc, s);
  std::vector<double> out;
  if (n_hi == 0) return out;

  const double beta = bc.kind == Boundary::robin ? std::max(bc.beta, 0.0) : 0.0;
  double lo = f.minimum() - beta * beta - 1.0;
  long n_lo = detail::raw_count(f, lo, bc, s);
  while (n_lo > 0) {
    lo -= 2.0 * (std::abs(lo) + 1.0);
    n_lo = detail::raw_count(f, lo, bc, s);
  }

  out.reserve(static_cast<std::size_t>(n_hi));
  // Depth-first isolation keeps the output ordered.
  auto isolate = [&](auto&& self, double a, long na, double b, long nb) -> void {
    if (na == nb) return;
    if (b - a <= detail::tie_band(b, s)) {
      for (long k = na; k < nb; ++k) out.push_back(0.5 * (a + b));
      return;
    }
    const double m = a + 0.5 * (b - a);
    const long nm = detail::raw_count(f, m, bc, s);
    self(self, a, na, m, nm);
    self(self, m, nm, b, nb);
  };
  isolate(isolate, lo, n_lo, hi, n_hi);
  return out;
}

}  // namespace cuspweyl
