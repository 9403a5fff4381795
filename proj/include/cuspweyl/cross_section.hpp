/*
 * cross_section.hpp: spectrum of the magnetic Laplacian on a flat torus.
 *
 * For X = R^d / (L_1 Z x ... x L_d Z) and A = tau * sum_k omega_k dx_k the
 * operator (i d + A)^*(i d + A) is diagonalised by plane waves; its spectrum
 * is the shifted lattice
 *
 *     { sum_k (2 pi m_k / L_k + tau omega_k)^2 : m in Z^d }.
 *
 * Each coordinate is evaluated as (2 pi / L_k)^2 (m_k + f_k)^2 where f_k is
 * the holonomy tau omega_k L_k / 2 pi reduced to [-1/2, 1/2].  Reducing the
 * flux first makes the computed multiset depend only on the holonomy modulo
 * 2 pi, which is the gauge invariance of the operator.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "cuspweyl/errors.hpp"
#include "cuspweyl/manifold_model.hpp"

namespace cuspweyl {

inline constexpr std::size_t default_element_budget = 10'000'000;

struct CrossSpectrum {
  double tau = 1.0;
  double cutoff = 0.0;
  std::vector<double> values;  // every eigenvalue < cutoff, with multiplicity, sorted
};

namespace detail {

class ShiftedLattice {
 public:
  ShiftedLattice(const TorusCrossSection& X, double tau) {
    const std::size_t d = X.dimension();
    if (X.magnetic.size() != d) throw precondition_error("cross-section: magnetic/lengths size mismatch");
    step_.resize(d);
    shift_.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
      if (!(X.lengths[k] > 0.0)) throw precondition_error("cross-section: lengths must be positive");
      step_[k] = two_pi / X.lengths[k];
      const double s = tau * X.magnetic[k] * (X.lengths[k] / two_pi);
      shift_[k] = s - std::round(s);
    }
  }

  std::size_t dimension() const { return step_.size(); }

  double term(std::size_t k, std::int64_t m) const {
    const double x = step_[k] * (static_cast<double>(m) + shift_[k]);
    return x * x;
  }

  /// Integer range [lo, hi] of m with partial + term(k, m) < bound (empty if lo > hi).
  /// Floating-point evaluation is monotone in |m + f|, so the admissible set is an interval.
  void range(std::size_t k, double partial, double bound, std::int64_t& lo, std::int64_t& hi) const {
    const double room = std::max(bound - partial, 0.0);
    const double rho = std::sqrt(room) / step_[k];
    const double f = shift_[k];
    lo = static_cast<std::int64_t>(std::ceil(-f - rho));
    hi = static_cast<std::int64_t>(std::floor(-f + rho));
    auto ok = [&](std::int64_t m) { return partial + term(k, m) < bound; };
    while (ok(hi + 1)) ++hi;
    while (hi >= lo && !ok(hi)) --hi;
    while (ok(lo - 1)) --lo;
    while (lo <= hi && !ok(lo)) ++lo;
  }

  template <class Leaf>
  void walk(std::size_t k, double partial, double bound, Leaf& leaf) const {
    std::int64_t lo = 0, hi = -1;
    range(k, partial, bound, lo, hi);
    if (k + 1 == dimension()) {
      leaf(partial, k, lo, hi);
      return;
    }
    for (std::int64_t m = lo; m <= hi; ++m) walk(k + 1, partial + term(k, m), bound, leaf);
  }

 private:
  std::vector<double> step_;
  std::vector<double> shift_;
};

}  // namespace detail

/// All eigenvalues below `cutoff`, sorted, with multiplicity.
inline CrossSpectrum mu_spectrum(const TorusCrossSection& X, double tau, double cutoff,
                                 std::size_t budget = default_element_budget) {
  if (!(cutoff > 0.0)) throw precondition_error("mu_spectrum: cutoff must be positive");
  detail::ShiftedLattice lattice(X, tau);
  const int d = static_cast<int>(lattice.dimension());

  // Weyl estimate of the output size, to fail before allocating.
  const double expected = weyl_constant(d) * X.volume() * std::pow(cutoff, d / 2.0);
  if (expected > 2.0 * static_cast<double>(budget))
    throw resource_error("mu_spectrum: cutoff " + std::to_string(cutoff) + " exceeds the element budget");

  CrossSpectrum out;
  out.tau = tau;
  out.cutoff = cutoff;
  auto leaf = [&](double partial, std::size_t k, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t m = lo; m <= hi; ++m) {
      if (out.values.size() >= budget)
        throw resource_error("mu_spectrum: enumeration exceeds the element budget");
      out.values.push_back(partial + lattice.term(k, m));
    }
  };
  lattice.walk(0, 0.0, cutoff, leaf);
  std::sort(out.values.begin(), out.values.end());
  return out;
}

/// Number of eigenvalues strictly below mu.
inline std::size_t cross_count(const TorusCrossSection& X, double tau, double mu) {
  if (!(mu > 0.0)) return 0;
  detail::ShiftedLattice lattice(X, tau);
  std::size_t count = 0;
  auto leaf = [&](double, std::size_t, std::int64_t lo, std::int64_t hi) {
    if (hi >= lo) count += static_cast<std::size_t>(hi - lo + 1);
  };
  lattice.walk(0, 0.0, mu, leaf);
  return count;
}

/// Sharp-Weyl check on the torus: sup over a geometric grid in [1, mu_max] of
/// |N(mu) - omega_d/(2 pi)^d |X| mu^{d/2}| / max(1, mu^{(d-1)/2}), d = dim X.
inline double hormander_residual(const TorusCrossSection& X, double tau, double mu_max, int grid) {
  if (!(mu_max > 1.0)) throw precondition_error("hormander_residual: mu_max must exceed 1");
  if (grid < 2) throw precondition_error("hormander_residual: grid must have at least 2 points");
  const int d = static_cast<int>(X.dimension());
  const double c = weyl_constant(d) * X.volume();
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double mu = std::pow(mu_max, static_cast<double>(i) / (grid - 1));
    const double N = static_cast<double>(cross_count(X, tau, mu));
    const double r = std::abs(N - c * std::pow(mu, d / 2.0)) / std::max(1.0, std::pow(mu, (d - 1) / 2.0));
    worst = std::max(worst, r);
  }
  return worst;
}

/// Second-order coefficient of the ground state, mu_0(tau) = c2 tau^2 + O(tau^3).
/// For constant forms on a flat torus the first-order correction vanishes and
/// c2 = |A|^2 = sum_k omega_k^2.
inline double perturb_c2(const TorusCrossSection& X) {
  double s = 0.0;
  for (double w : X.magnetic) s += w * w;
  return s;
}

/// Scale below which mu_0(tau) = c2 tau^2 holds exactly: pi / (2 L_max |omega|_max).
/// Not the threshold of the general perturbation argument, only of this closed form.
inline double first_level_crossing_tau(const TorusCrossSection& X) {
  double L = 0.0, w = 0.0;
  for (double x : X.lengths) L = std::max(L, x);
  for (double x : X.magnetic) w = std::max(w, std::abs(x));
  if (w == 0.0) return std::numeric_limits<double>::infinity();
  return std::numbers::pi / (2.0 * L * w);
}

/// mu_1(X, 0): first nonzero eigenvalue of the field-free torus, (2 pi / L_max)^2.
inline double first_nonzero_free_eigenvalue(const TorusCrossSection& X) {
  double L = 0.0;
  for (double x : X.lengths) L = std::max(L, x);
  if (!(L > 0.0)) throw precondition_error("degenerate torus");
  return (two_pi / L) * (two_pi / L);
}

}  // namespace cuspweyl
