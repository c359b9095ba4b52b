#pragma once

/**
 * @file laplace.hpp
 * @brief Exponentially weighted quadrature, decay-rate fitting, and kernel algebra.
 *
 * Kernels are functions g on [0, a] standing for the Laplace-side object
 * 1 + int_0^a g(alpha) e^{-alpha z} dalpha. Products of such objects multiply as
 * g_f + g_h + g_f * g_h, and the inverse is found from a Volterra equation. Everything is
 * truncated at the common grid length a.
 *
 * Decay claims of the form f = O~(e^{-c kappa}) are checked by fitting the slope of
 * log|f| against kappa over a window, dropping points at the numerical floor.
 */

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "afn/atransport.hpp"
#include "afn/convolution.hpp"
#include "afn/core_types.hpp"
#include "afn/mfun.hpp"

namespace afn {

namespace detail {

/// psi(z) = int_0^1 e^{-zu} du, phi(z) = int_0^1 u e^{-zu} du, both stable for z >= 0.
struct CellWeights {
  double psi;
  double phi;
};

inline CellWeights cell_weights(double z) {
  if (z < 0.5) {
    double psi = 0.0, phi = 0.0, term = 1.0;  // term = (-z)^k / k!
    for (int k = 0; k < 30; ++k) {
      psi += term / (k + 1);
      phi += term / (k + 2);
      term *= -z / (k + 1);
    }
    return {psi, phi};
  }
  const double e = std::exp(-z);
  return {-std::expm1(-z) / z, (1.0 - e * (1.0 + z)) / (z * z)};
}

}  // namespace detail

/**
 * int_0^a f(alpha) e^{-2 alpha kappa} dalpha for the piecewise-linear interpolant of f,
 * integrated exactly cell by cell. With `origin` the samples sit at origin + i*h instead.
 */
inline double exp_weighted_integral(const AFunction& f, double kappa, double origin = 0.0) {
  if (!(kappa > 0.0)) throw InputError("exp_weighted_integral: kappa must be positive");
  const double h = f.step();
  const auto w = detail::cell_weights(2.0 * kappa * h);
  const double w1 = h * w.phi;
  const double w0 = h * w.psi - w1;
  const auto s = f.samples();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double decay = std::exp(-2.0 * kappa * (origin + static_cast<double>(i) * h));
    total += decay * (s[i] * w0 + s[i + 1] * w1);
  }
  return total;
}

/// r(kappa) = |m(-kappa^2) + kappa + int_0^a A e^{-2 alpha kappa}| with A = a_from_q(p, a).
inline ResidualCurve representation_residual(const Potential& p, double a, std::span<const double> kappas) {
  const auto fwd = a_from_q(p, a);
  std::vector<ResidualPoint> pts;
  pts.reserve(kappas.size());
  for (double k : kappas) {
    const double m = evaluate_m(p, k);
    pts.push_back({k, std::abs(m + k + exp_weighted_integral(fwd.a, k))});
  }
  return ResidualCurve(std::move(pts));
}

inline constexpr double kDefaultFloor = 1e-8;

/// Least-squares slope of log r against kappa over [lo, hi], ignoring points with r <= floor.
inline double log_slope(const ResidualCurve& curve, double lo, double hi, double floor = kDefaultFloor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const auto& pt : curve.points()) {
    if (pt.kappa < lo || pt.kappa > hi || !(pt.residual > floor)) continue;
    const double y = std::log(pt.residual);
    sx += pt.kappa;
    sy += y;
    sxx += pt.kappa * pt.kappa;
    sxy += pt.kappa * y;
    ++n;
  }
  if (n < 5)
    throw InputError("log_slope: only " + std::to_string(n) + " points in [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "] lie above the floor " + std::to_string(floor) + " (need 5)");
  const double dn = static_cast<double>(n);
  const double den = dn * sxx - sx * sx;
  return (dn * sxy - sx * sy) / den;
}

/// Solve g + k + k*g = 0 for k by forward substitution on the trapezoid grid.
inline AFunction volterra_inverse(const AFunction& g) {
  const double h = g.step();
  const auto gs = g.samples();
  const double diag = 1.0 + 0.5 * h * gs[0];
  if (std::abs(diag) < 1e-12) throw NumericalError("volterra_inverse: singular step, 1 + h g(0)/2 vanishes");
  std::vector<double> k(gs.size(), 0.0);
  k[0] = -gs[0];
  for (std::size_t i = 1; i < gs.size(); ++i) {
    double s = 0.5 * k[0] * gs[i];
    for (std::size_t j = 1; j < i; ++j) s += k[j] * gs[i - j];
    k[i] = (-gs[i] - h * s) / diag;
  }
  return AFunction(std::move(k), h);
}

/// Kernel of the product: f + h + f*h on the common grid.
inline AFunction transform_product(const AFunction& f, const AFunction& g) {
  if (f.size() != g.size() || std::abs(f.step() - g.step()) > 1e-12 * f.step())
    throw InputError("transform_product: kernels must share one grid");
  auto out = trapezoid_convolution(f.samples(), g.samples(), f.step());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += f[i] + g[i];
  return AFunction(std::move(out), f.step());
}

}  // namespace afn
