#pragma once

// Large-kappa asymptotics of m(-kappa^2):
//   m = -kappa - sum_j beta_j kappa^{-j-1} + ...,
// with the beta_j generated from the Taylor jet of q by a polynomial recursion.

#include <cmath>
#include <span>
#include <vector>

#include "afn/core_types.hpp"
#include "afn/laplace.hpp"
#include "afn/mfun.hpp"

namespace afn {

namespace poly {

inline std::vector<double> derivative(std::span<const double> p) {
  if (p.size() <= 1) return {0.0};
  std::vector<double> out(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = static_cast<double>(i) * p[i];
  return out;
}

inline std::vector<double> multiply(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline void axpy(double s, std::span<const double> x, std::vector<double>& y) {
  if (y.size() < x.size()) y.resize(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

}  // namespace poly

/**
 * beta_0..beta_n from the jet q(x) = sum_k q_poly[k] x^k:
 *
 *   beta_0 = q/2,   beta_{j+1} = beta_j'/2 - (1/2) sum_{l=0}^{j-1} beta_l beta_{j-1-l}.
 *
 * This is the coefficient-matching of the Riccati equation m' = q + kappa^2 - m^2 against
 * the expansion above; A^{(j)}(0) = 2^{j+1} beta_j(0) links it to the Taylor data of A.
 */
inline BetaCoeffs beta_recursion(std::span<const double> q_poly, int n) {
  if (q_poly.empty()) throw InputError("beta_recursion: empty jet");
  if (n < 0) throw InputError("beta_recursion: n must be non-negative");
  const int degree = static_cast<int>(q_poly.size()) - 1;
  if (n > degree + 1)
    throw InputError("beta_recursion: n = " + std::to_string(n) + " needs a jet of degree >= " +
                     std::to_string(n - 1));

  BetaCoeffs out;
  std::vector<double> b0(q_poly.begin(), q_poly.end());
  for (double& c : b0) c *= 0.5;
  out.polys.push_back(std::move(b0));
  for (int j = 0; j < n; ++j) {
    std::vector<double> next;
    poly::axpy(0.5, poly::derivative(out.polys[j]), next);
    for (int l = 0; l <= j - 1; ++l) poly::axpy(-0.5, poly::multiply(out.polys[l], out.polys[j - 1 - l]), next);
    out.polys.push_back(std::move(next));
  }
  for (const auto& p : out.polys) out.at_zero.push_back(p.front());
  return out;
}

/// r(kappa) = |m + kappa + int q e^{-2 x kappa} dx|, q integrated as its piecewise-linear interpolant.
inline ResidualCurve atkinson_residual(const Potential& p, std::span<const double> kappas) {
  const AFunction q_kernel(std::vector<double>(p.samples().begin(), p.samples().end()), p.step());
  std::vector<ResidualPoint> pts;
  pts.reserve(kappas.size());
  for (double k : kappas) pts.push_back({k, std::abs(evaluate_m(p, k) + k + exp_weighted_integral(q_kernel, k))});
  return ResidualCurve(std::move(pts));
}

/// Coefficient of kappa^{s-1} in -(m + kappa) for q ~ c x^{-s}: c 2^{s-1} Gamma(1 - s).
inline double power_law_coefficient(double c, double exponent) {
  if (!(exponent > 0.0 && exponent < 1.0)) throw InputError("power_law_coefficient: exponent must lie in (0, 1)");
  return c * std::pow(2.0, exponent - 1.0) * std::tgamma(1.0 - exponent);
}

/// Samples of c x^{-s} on [0, length] with the singular first node replaced by its cell average.
inline Potential power_law_potential(double c, double exponent, double step, double length) {
  if (!(exponent > 0.0 && exponent < 1.0)) throw InputError("power_law_potential: exponent must lie in (0, 1)");
  const auto n = static_cast<std::size_t>(std::llround(length / step));
  std::vector<double> q(n + 1);
  q[0] = c * std::pow(step, -exponent) / (1.0 - exponent);
  for (std::size_t i = 1; i <= n; ++i) q[i] = c * std::pow(static_cast<double>(i) * step, -exponent);
  return Potential(std::move(q), step, HalfLine{static_cast<double>(n) * step});
}

}  // namespace afn
