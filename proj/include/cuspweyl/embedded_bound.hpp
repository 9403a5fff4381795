/*
 * embedded_bound.hpp: upper bound on embedded eigenvalues of the free Laplacian.
 *
 * Eigenfunctions of -Delta with eigenvalue above the bottom of the essential
 * spectrum have zero mean on every cross-section.  On that subspace the
 * weakened field tau A, tau = lambda^{-rho}, raises the quadratic form by at
 * most a Poincare-type amount, which gives
 *
 *   N_ess(lambda) <= N((1 + C_A lambda^{-rho}) lambda + C_A, -Delta_{tau A}) + 1.
 *
 * The right side is evaluated with the Dirichlet-Neumann bracket (upper end).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>

#include "cuspweyl/cross_section.hpp"
#include "cuspweyl/errors.hpp"
#include "cuspweyl/fiber_schrodinger.hpp"
#include "cuspweyl/manifold_model.hpp"
#include "cuspweyl/weyl_counting.hpp"

namespace cuspweyl {

struct BoundReport {
  double lambda = 0.0;
  double rho = 0.0;
  double tau = 0.0;
  double c_a = 0.0;
  double shifted_lambda = 0.0;
  long bound = 0;
  std::optional<long> n_ess;  // exact left side, when the model is separable
  double leading = 0.0;
  double r0 = 0.0;
};

/// rho = 1/2 if delta >= 2/n, (n delta - 1)/2 otherwise.
inline double rho_exponent(int n, double delta) {
  if (!(delta * n > 1.0) || !(delta <= 1.0)) throw precondition_error("rho_exponent: delta outside (1/n, 1]");
  if (delta * n >= 2.0) return 0.5;
  return (n * delta - 1.0) / 2.0;
}

/// r_0(lambda): lambda^{(n-1)/2} ln(lambda) if delta >= 2/n, else lambda^{(n - (n delta - 1))/2}.
inline double r0_model(int n, double delta, double lambda) {
  if (delta * n >= 2.0) return std::pow(lambda, (n - 1) / 2.0) * std::log(lambda);
  return std::pow(lambda, (n - (n * delta - 1.0)) / 2.0);
}

/// C_A assembled from the Poincare argument with rho = tau in
/// |i du + tau u A|^2 <= (1 + tau)|du|^2 + (1 + 1/tau) tau^2 |u A|^2:
///   cusp j:  1 + 2 sup|A_j|^2 / mu_1(j, 0)   (zero-mean functions on X_j)
///   core:    1 + 2 sup_{M_0}|A|^2            (only when core.volume > 0)
/// The core has no field data of its own; sup_{M_0}|A|^2 is taken as the
/// largest cusp value, i.e. A is extended into the core without growing.
inline double poincare_constant(const ManifoldModel& model) {
  double c = 1.0;
  double sup_field = 0.0;
  for (const auto& cusp : model.cusps) {
    const double a2 = perturb_c2(cusp.cross_section);  // sum omega_k^2 = sup |A_j|^2 on a flat torus
    sup_field = std::max(sup_field, a2);
    c = std::max(c, 1.0 + 2.0 * a2 / first_nonzero_free_eigenvalue(cusp.cross_section));
  }
  if (model.core.volume > 0.0) c = std::max(c, 1.0 + 2.0 * sup_field);
  return c;
}

/// Number of L^2 eigenvalues of the field-free cusp ensemble below lambda: the
/// Dirichlet counts of every fiber with mu > 0.  The mu = 0 channel only carries
/// continuous spectrum.
inline long n_ess_exact(const ManifoldModel& model, double lambda, const PruferSettings& s = {}) {
  if (!model.field_free()) throw precondition_error("n_ess_exact: requires A = 0");
  if (model.core.volume != 0.0) throw precondition_error("n_ess_exact: requires core.volume = 0");
  long total = 0;
  for (std::size_t j = 0; j < model.cusps.size(); ++j) {
    const auto& cusp = model.cusps[j];
    for (const auto& mode : admissible_fibers(model, j, lambda)) {
      if (mode.mu == 0.0) continue;
      total += fiber_count(FiberPotential::for_cusp(cusp, model.n, mode.mu), lambda, BoundaryCondition::dirichlet(), s);
    }
  }
  return total;
}

/// Bound on N_ess(lambda, -Delta) through the lambda^{-rho}-scaled magnetic
/// operator.  When the core is empty, n_ess is filled with the exact count of
/// the field-free model of the same geometry.
inline BoundReport embedded_upper_bound(const ManifoldModel& model, double lambda, const PruferSettings& s = {},
                                        bool with_n_ess = true) {
  require_valid(model, FieldMode::magnetic);
  if (!(lambda >= 1.0)) throw precondition_error("embedded_upper_bound: lambda must be >= 1 so that tau <= 1");

  BoundReport r;
  r.lambda = lambda;
  const double delta = model.delta();
  r.rho = rho_exponent(model.n, delta);
  r.tau = std::pow(lambda, -r.rho);
  r.c_a = poincare_constant(model);
  r.shifted_lambda = (1.0 + r.c_a / std::pow(lambda, r.rho)) * lambda + r.c_a;

  const auto scaled = with_scaled_field(model, r.tau);
  r.bound = total_count_bracket(scaled, r.shifted_lambda, s).count_high + 1;
  if (with_n_ess && model.core.volume == 0.0) r.n_ess = n_ess_exact(without_field(model), lambda, s);
  r.leading = weyl_leading(total_volume(model), model.n, lambda);
  r.r0 = r0_model(model.n, delta, lambda);
  return r;
}

}  // namespace cuspweyl
