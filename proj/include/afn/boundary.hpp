#pragma once

// Finite-interval fingerprints in the m-function: the kappa e^{-2 kappa b j} and
// e^{-2 kappa b j} terms that a boundary at b adds to the large-kappa expansion,
// and the limit that reads off the difference of two boundary parameters.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "afn/core_types.hpp"
#include "afn/laplace.hpp"
#include "afn/mfun.hpp"

namespace afn {

/// Trapezoid integral of q over the whole grid.
inline double potential_integral(const Potential& p) {
  const auto q = p.samples();
  double s = 0.0;
  for (std::size_t i = 1; i < q.size(); ++i) s += 0.5 * p.step() * (q[i - 1] + q[i]);
  return s;
}

/// Coefficients (A_j, B_j), j = 1..n_terms, of -(A_j kappa + B_j) e^{-2 kappa b j} in m.
inline BoundaryExpansion expansion_coefficients(const Potential& p, int n_terms) {
  if (!p.is_finite_interval()) throw InputError("expansion_coefficients: needs a finite interval");
  if (n_terms < 1) throw InputError("expansion_coefficients: n_terms must be >= 1");
  const auto& fi = p.finite();
  const double integral = potential_integral(p);
  BoundaryExpansion out{fi.b, {}};
  for (int j = 1; j <= n_terms; ++j) {
    if (fi.bc.is_dirichlet()) {
      out.terms.push_back({j, 2.0, -2.0 * j * integral});
    } else {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;  // (-1)^j
      out.terms.push_back({j, 2.0 * sign, -2.0 * sign * j * (2.0 * fi.bc.h() + integral)});
    }
  }
  return out;
}

/// Laplace-side contribution sum_j (A_j kappa + B_j) e^{-2 kappa b j}.
inline double boundary_terms_value(const BoundaryExpansion& e, double kappa) {
  double s = 0.0;
  for (const auto& t : e.terms) s += (t.A * kappa + t.B) * std::exp(-2.0 * kappa * e.b * t.j);
  return s;
}

/// A kernel piece with samples at origin + i*step.
struct KernelPiece {
  double origin;
  AFunction f;
};

/**
 * |m + kappa + sum_pieces int A e^{-2 alpha kappa} + boundary terms| per kappa.
 * Pieces let a kernel jump (e.g. at alpha = b) without smearing the jump over a cell.
 * With `expansion` empty no boundary terms are added.
 */
inline ResidualCurve boundary_residual(const Potential& p, std::span<const KernelPiece> pieces,
                                       const BoundaryExpansion* expansion, std::span<const double> kappas) {
  std::vector<ResidualPoint> pts;
  pts.reserve(kappas.size());
  for (double k : kappas) {
    double r = evaluate_m(p, k) + k;
    for (const auto& piece : pieces) r += exp_weighted_integral(piece.f, k, piece.origin);
    if (expansion) r += boundary_terms_value(*expansion, k);
    pts.push_back({k, std::abs(r)});
  }
  return ResidualCurve(std::move(pts));
}

inline constexpr double kMNoise = 1e-12;

struct HLimitResult {
  double limit;
  std::vector<double> kappas;  ///< every kappa of the sweep
  std::vector<double> scaled;  ///< -e^{2 b kappa} (m_1 - m_2)
  std::size_t usable;          ///< leading entries below the noise ceiling
};

/**
 * Signed limit of -e^{2 b kappa}(m_1 - m_2), which tends to 4 (h_1 - h_2).
 *
 * The approach is O(1/kappa), so the last three kappas whose noise estimate
 * e^{2 b kappa} * 1e-12 stays below 1e-2 are extrapolated to 1/kappa = 0 with a
 * quadratic through those points.
 */
inline HLimitResult h_difference_limit_detail(const Potential& p1, const Potential& p2,
                                              std::span<const double> kappas) {
  if (!p1.is_finite_interval() || !p2.is_finite_interval())
    throw InputError("h_difference_limit: both potentials need a finite interval");
  const auto& f1 = p1.finite();
  const auto& f2 = p2.finite();
  if (std::abs(f1.b - f2.b) > 1e-12 * f1.b) throw InputError("h_difference_limit: unequal b");
  if (f1.bc.is_dirichlet() || f2.bc.is_dirichlet())
    throw InputError("h_difference_limit: both boundary parameters must be finite");
  if (p1.size() != p2.size() || std::abs(p1.step() - p2.step()) > 1e-15 ||
      !std::equal(p1.samples().begin(), p1.samples().end(), p2.samples().begin()))
    throw InputError("h_difference_limit: potentials must have identical samples");
  for (std::size_t i = 1; i < kappas.size(); ++i)
    if (!(kappas[i] > kappas[i - 1])) throw InputError("h_difference_limit: kappas must increase");

  const double b = f1.b;
  HLimitResult out{0.0, {}, {}, 0};
  for (double k : kappas) {
    out.kappas.push_back(k);
    out.scaled.push_back(-std::exp(2.0 * b * k) * (evaluate_m(p1, k) - evaluate_m(p2, k)));
    if (std::exp(2.0 * b * k) * kMNoise <= 1e-2) out.usable = out.kappas.size();
  }
  if (out.usable == 0) throw InputError("h_difference_limit: no kappa below the noise ceiling");
  if (out.usable < 3) {
    out.limit = out.scaled[out.usable - 1];
    return out;
  }
  // Lagrange extrapolation in t = 1/kappa to t = 0.
  const std::size_t i0 = out.usable - 3;
  double t[3], v[3];
  for (int i = 0; i < 3; ++i) {
    t[i] = 1.0 / out.kappas[i0 + i];
    v[i] = out.scaled[i0 + i];
  }
  double lim = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != i) w *= t[j] / (t[j] - t[i]);
    lim += w * v[i];
  }
  out.limit = lim;
  return out;
}

inline double h_difference_limit(const Potential& p1, const Potential& p2, std::span<const double> kappas) {
  return h_difference_limit_detail(p1, p2, kappas).limit;
}

}  // namespace afn
