/*
 * manifold_model.hpp: geometric data of a finite-area manifold with cusps.
 *
 * A model is a compact core (represented only through its volume, as a Weyl
 * surrogate) plus J >= 1 cuspidal ends X_j x ]a_j^2, +inf[ carrying the metric
 *
 *     ds^2 = y^{-2 delta_j} (h_j + dy^2),      1/n < delta_j <= 1,
 *
 * where (X_j, h_j) is a flat torus R^{n-1} / (L_1 Z x ... x L_{n-1} Z) and the
 * magnetic potential restricted to the cusp is the constant one-form
 * A_j = sum_k omega_k dx_k.  For constant forms dA_j = 0, so the field is
 * nontrivial exactly when some holonomy omega_k L_k is not in 2 pi Z.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cuspweyl/errors.hpp"

namespace cuspweyl {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Tolerance used when deciding whether omega_k L_k lies in 2 pi Z.
inline constexpr double default_flux_tolerance = 1e-12;

struct TorusCrossSection {
  std::vector<double> lengths;   // L_1 .. L_{n-1}
  std::vector<double> magnetic;  // omega_1 .. omega_{n-1}

  std::size_t dimension() const { return lengths.size(); }

  double volume() const {
    double v = 1.0;
    for (double L : lengths) v *= L;
    return v;
  }

  /// Holonomy of A along the k-th generating loop, in units of 2 pi.
  double flux(std::size_t k) const { return magnetic[k] * (lengths[k] / two_pi); }

  bool flux_nontrivial(double tol = default_flux_tolerance) const {
    for (std::size_t k = 0; k < magnetic.size() && k < lengths.size(); ++k) {
      const double holonomy = magnetic[k] * lengths[k];
      const double nearest = two_pi * std::round(holonomy / two_pi);
      if (std::abs(holonomy - nearest) > tol) return true;
    }
    return false;
  }

  bool field_free() const {
    return std::all_of(magnetic.begin(), magnetic.end(), [](double w) { return w == 0.0; });
  }
};

struct CuspEnd {
  TorusCrossSection cross_section;
  double a = 1.0;      // the cusp is X x ]a^2, +inf[
  double delta = 1.0;  // metric exponent
};

/// Weyl surrogate for the compact part; volume == 0 means "cusps only".
struct CompactCoreSurrogate {
  double volume = 0.0;
  double remainder_coeff = 0.0;
};

struct ManifoldModel {
  int n = 2;
  CompactCoreSurrogate core;
  std::vector<CuspEnd> cusps;

  /// min_j delta_j; the exponent that governs the remainder regime.
  double delta() const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& c : cusps) d = std::min(d, c.delta);
    return d;
  }

  bool field_free() const {
    return std::all_of(cusps.begin(), cusps.end(),
                       [](const CuspEnd& c) { return c.cross_section.field_free(); });
  }
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class FieldMode {
  automatic,  // magnetic iff some omega is nonzero
  magnetic,   // require a nontrivial flux on every cusp
  free,       // flux is not checked
};

struct Violation {
  std::string kind;                 // stable tag, e.g. "integer flux"
  std::optional<std::size_t> cusp;  // offending cusp, if any
  std::string message;
};

inline std::vector<Violation> validate_model(const ManifoldModel& model,
                                             FieldMode mode = FieldMode::automatic,
                                             double flux_tol = default_flux_tolerance) {
  std::vector<Violation> out;
  const int n = model.n;
  if (n < 2) {
    out.push_back({"dimension", std::nullopt, "dimension must be >= 2, got " + std::to_string(n)});
  }
  if (!(model.core.volume >= 0.0) || !std::isfinite(model.core.volume)) {
    out.push_back({"core volume", std::nullopt, "core volume must be finite and >= 0"});
  }
  if (!(model.core.remainder_coeff >= 0.0) || !std::isfinite(model.core.remainder_coeff)) {
    out.push_back({"core remainder", std::nullopt, "core remainder_coeff must be finite and >= 0"});
  }
  if (model.cusps.empty()) {
    out.push_back({"no cusps", std::nullopt, "at least one cusp end is required"});
  }

  const bool magnetic = mode == FieldMode::magnetic ||
                        (mode == FieldMode::automatic && !model.field_free());

  for (std::size_t j = 0; j < model.cusps.size(); ++j) {
    const CuspEnd& c = model.cusps[j];
    const auto& X = c.cross_section;
    const auto expected = static_cast<std::size_t>(std::max(n - 1, 0));
    if (X.lengths.size() != expected) {
      out.push_back({"cross-section dimension", j,
                     "expected " + std::to_string(expected) + " torus lengths, got " +
                         std::to_string(X.lengths.size())});
    }
    if (X.magnetic.size() != X.lengths.size()) {
      out.push_back({"magnetic dimension", j, "magnetic and lengths must have equal size"});
    }
    for (double L : X.lengths) {
      if (!(L > 0.0) || !std::isfinite(L)) {
        out.push_back({"nonpositive length", j, "torus lengths must be finite and > 0"});
        break;
      }
    }
    for (double w : X.magnetic) {
      if (!std::isfinite(w)) {
        out.push_back({"non-finite field", j, "magnetic coefficients must be finite"});
        break;
      }
    }
    if (!(c.a > 0.0) || !std::isfinite(c.a)) {
      out.push_back({"nonpositive a", j, "a must be finite and > 0"});
    }
    if (n >= 2) {
      if (!(c.delta * n > 1.0)) {
        out.push_back({"delta <= 1/n", j,
                       "delta = " + std::to_string(c.delta) + " must exceed 1/n"});
      } else if (!(c.delta <= 1.0)) {
        out.push_back({"delta > 1", j, "delta must be <= 1"});
      }
    }
    if (magnetic && X.magnetic.size() == X.lengths.size() && !X.flux_nontrivial(flux_tol)) {
      out.push_back({"integer flux", j,
                     "every holonomy omega_k L_k lies in 2 pi Z; the field gauges away"});
    }
  }
  return out;
}

inline void require_valid(const ManifoldModel& model, FieldMode mode = FieldMode::automatic) {
  const auto v = validate_model(model, mode);
  if (!v.empty()) throw precondition_error("invalid model: " + v.front().kind + ": " + v.front().message);
}

// ---------------------------------------------------------------------------
// Volumes and thresholds
// ---------------------------------------------------------------------------

/// |M_j| = |X_j| / ((delta n - 1) a^{2(delta n - 1)}).
inline double cusp_volume(const CuspEnd& cusp, int n) {
  const double e = cusp.delta * n - 1.0;
  if (!(e > 0.0)) throw precondition_error("cusp_volume: delta * n must exceed 1");
  if (!(cusp.a > 0.0)) throw precondition_error("cusp_volume: a must be positive");
  return cusp.cross_section.volume() / (e * std::pow(cusp.a, 2.0 * e));
}

inline double total_volume(const ManifoldModel& model) {
  double v = model.core.volume;
  for (const auto& c : model.cusps) v += cusp_volume(c, model.n);
  return v;
}

/// Bottom of the essential spectrum of the field-free Laplacian.
inline double spectral_floor(const ManifoldModel& model) {
  if (model.delta() < 1.0) return 0.0;
  const double m = model.n - 1.0;
  return m * m / 4.0;
}

/// omega_d, volume of the Euclidean unit ball in R^d.
inline double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(1.0 + d / 2.0);
}

/// omega_d / (2 pi)^d, the Weyl constant in dimension d.
inline double weyl_constant(int d) { return unit_ball_volume(d) / std::pow(two_pi, d); }

/// Copy of the model with every magnetic coefficient multiplied by tau.
inline ManifoldModel with_scaled_field(ManifoldModel model, double tau) {
  for (auto& c : model.cusps)
    for (auto& w : c.cross_section.magnetic) w *= tau;
  return model;
}

inline ManifoldModel without_field(ManifoldModel model) { return with_scaled_field(std::move(model), 0.0); }

}  // namespace cuspweyl
