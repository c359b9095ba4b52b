#pragma once

// Principal m-function m(-kappa^2, x) = u'(x)/u(x) of -u'' + q u = -kappa^2 u, where u
// satisfies the far-end condition (or decays, on the half-line). The linear system
// (u, u') is integrated from the far end towards x; in that direction the wanted
// solution dominates, so a plain fixed-step march is stable.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "afn/core_types.hpp"

namespace afn {

namespace detail {

inline constexpr double kRescaleThreshold = 1e100;

struct UState {
  double u;
  double du;
};

/// Seed (u, u') at the far end of the grid.
inline UState far_end_seed(const Potential& p, double kappa) {
  if (p.is_finite_interval()) {
    const auto& bc = p.finite().bc;
    if (bc.is_dirichlet()) return {0.0, -1.0};
    return {1.0, -bc.h()};
  }
  const double s2 = kappa * kappa + p.samples().back();
  return {1.0, -std::sqrt(s2)};
}

inline void check_margin(const Potential& p, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InputError("kappa must be positive and finite");
  const double need = -std::min(p.min_value(), 0.0) * 1.05 + 0.01;
  if (kappa * kappa < need)
    throw InputError("kappa = " + std::to_string(kappa) + " violates the spectral margin: kappa^2 must be >= " +
                     std::to_string(need));
}

}  // namespace detail

/**
 * m(-kappa^2, x) for x a grid node with x < L.
 *
 * Classical RK4 with step h_grid, q read as its piecewise-linear interpolant. The pair
 * (u, u') is rescaled whenever it exceeds 1e100 in magnitude; the ratio is unaffected.
 * `seed_scale` multiplies the far-end seed and exists only to exhibit that invariance.
 */
inline double evaluate_m(const Potential& p, double kappa, double x = 0.0, double seed_scale = 1.0) {
  detail::check_margin(p, kappa);
  const auto k0 = detail::grid_index(x, p.step());
  if (!k0 || *k0 + 1 >= p.size()) throw InputError("evaluate_m: x must be a grid node below the far end");

  const auto q = p.samples();
  const double h = p.step();
  const double k2 = kappa * kappa;
  auto st = detail::far_end_seed(p, kappa);
  st.u *= seed_scale;
  st.du *= seed_scale;

  // y' = (u', (q + kappa^2) u), integrated with dx = -h.
  for (std::size_t i = p.size() - 1; i > *k0; --i) {
    const double w_hi = q[i] + k2;
    const double w_mid = 0.5 * (q[i] + q[i - 1]) + k2;
    const double w_lo = q[i - 1] + k2;
    const double a1 = st.du, b1 = w_hi * st.u;
    const double u2 = st.u - 0.5 * h * a1, v2 = st.du - 0.5 * h * b1;
    const double a2 = v2, b2 = w_mid * u2;
    const double u3 = st.u - 0.5 * h * a2, v3 = st.du - 0.5 * h * b2;
    const double a3 = v3, b3 = w_mid * u3;
    const double u4 = st.u - h * a3, v4 = st.du - h * b3;
    const double a4 = v4, b4 = w_lo * u4;
    st.u -= h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    st.du -= h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);

    if (!std::isfinite(st.u) || !std::isfinite(st.du))
      throw NumericalError("evaluate_m: non-finite state at x = " + std::to_string(static_cast<double>(i - 1) * h) +
                           ", kappa = " + std::to_string(kappa));
    const double mag = std::max(std::abs(st.u), std::abs(st.du));
    if (mag > detail::kRescaleThreshold) {
      st.u /= mag;
      st.du /= mag;
    }
  }
  if (std::abs(st.u) <= 1e-12 * std::abs(st.du) || st.u == 0.0)
    throw PoleError("evaluate_m: u vanishes at x = " + std::to_string(x) + " for kappa = " + std::to_string(kappa));
  return st.du / st.u;
}

/// evaluate_m over an increasing kappa sweep; the first failure is rethrown with its kappa.
inline std::vector<double> m_curve(const Potential& p, std::span<const double> kappas, double x = 0.0) {
  for (std::size_t i = 1; i < kappas.size(); ++i)
    if (!(kappas[i] > kappas[i - 1])) throw InputError("m_curve: kappas must be strictly increasing");
  std::vector<double> out;
  out.reserve(kappas.size());
  for (double k : kappas) {
    try {
      out.push_back(evaluate_m(p, k, x));
    } catch (const PoleError& e) {
      throw PoleError("at kappa = " + std::to_string(k) + ": " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError("at kappa = " + std::to_string(k) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("at kappa = " + std::to_string(k) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace afn
