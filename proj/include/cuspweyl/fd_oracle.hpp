/*
 * fd_oracle.hpp: independent check of the Prufer counts.
 *
 * Three-point finite differences for -u'' + V u on [alpha, T(lambda_max) + 8]
 * with a Dirichlet wall at the right end.  The Robin row uses a ghost node,
 * u_{-1} = u_1 + 2 h beta u_0, and is symmetrised by the half-weight of the
 * boundary node.  Eigenvalues of the tridiagonal matrix come from LAPACK's
 * Sturm-sequence bisection (dstebz), so nothing here shares code with the
 * oscillation counter it checks.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <lapacke.h>

#include "cuspweyl/errors.hpp"
#include "cuspweyl/fiber_schrodinger.hpp"

namespace cuspweyl {

inline std::vector<double> fd_oracle(const FiberPotential& f, double lambda_max, const BoundaryCondition& bc,
                                     int grid) {
  if (grid < 1000) throw precondition_error("fd_oracle: grid must be >= 1000");
  if (f.mu == 0.0 && lambda_max > f.essential_infimum())
    throw continuous_spectrum_error("fd_oracle: lambda_max in the continuous spectrum");

  const auto tp = turning_point(f, lambda_max);
  double t_ref = tp ? *tp : f.minimizer();
  if (std::isinf(t_ref)) t_ref = f.alpha;
  const double right = t_ref + 8.0;

  const bool robin = bc.kind == Boundary::robin;
  const auto N = static_cast<lapack_int>(grid);
  // Robin: nodes t_0 = alpha .. t_{N-1}; Dirichlet: interior nodes t_1 .. t_N.
  const double h = robin ? (right - f.alpha) / N : (right - f.alpha) / (N + 1);
  const double inv_h2 = 1.0 / (h * h);

  std::vector<double> d(static_cast<std::size_t>(N)), e(static_cast<std::size_t>(N > 1 ? N - 1 : 1));
  for (lapack_int i = 0; i < N; ++i) {
    const double t = robin ? f.alpha + i * h : f.alpha + (i + 1) * h;
    d[static_cast<std::size_t>(i)] = 2.0 * inv_h2 + f.value(t);
    if (i + 1 < N) e[static_cast<std::size_t>(i)] = -inv_h2;
  }
  if (robin) {
    d[0] -= 2.0 * bc.beta / h;
    e[0] = -std::sqrt(2.0) * inv_h2;
  }

  double lower = d[0];
  for (double x : d) lower = std::min(lower, x);
  lower -= 4.0 * inv_h2;

  std::vector<double> w(static_cast<std::size_t>(N));
  std::vector<lapack_int> iblock(static_cast<std::size_t>(N)), isplit(static_cast<std::size_t>(N));
  lapack_int m = 0, nsplit = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dstebz('V', 'E', N, lower, lambda_max, 0, 0, abstol, d.data(), e.data(), &m,
                                         &nsplit, w.data(), iblock.data(), isplit.data());
  if (info != 0) throw error("fd_oracle: dstebz failed with info " + std::to_string(info));

  std::vector<double> out;
  for (lapack_int i = 0; i < m; ++i)
    if (w[static_cast<std::size_t>(i)] < lambda_max) out.push_back(w[static_cast<std::size_t>(i)]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cuspweyl
