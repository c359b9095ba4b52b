#pragma once

/**
 * @file atransport.hpp
 * @brief Forward map q -> A and reconstruction A -> q through the A-equation.
 *
 * In characteristic coordinates gamma = alpha + x the A-equation reads
 *
 *     d/dx C(gamma, x) = B(gamma - x, x),   B(., x) = A(., x) * A(., x)   (convolution),
 *
 * with C(gamma, gamma) = q(gamma). Both marches discretize this identity with a Heun
 * predictor-corrector in x and a trapezoid rule for the convolution, O(h^2) overall.
 *
 *  - a_from_q starts on the diagonal and marches each characteristic down to x = 0.
 *  - q_from_a starts from A(., 0) and marches up, reading q off the shrinking diagonal.
 *
 * Neither march ever touches q (or A) beyond gamma = a, which is what makes A on [0, a]
 * a function of q on [0, a] and vice versa.
 */

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "afn/convolution.hpp"
#include "afn/core_types.hpp"

namespace afn {

/// B(alpha) = int_0^alpha A(beta) A(alpha - beta) dbeta on the same grid.
inline AFunction convolution_term(const AFunction& row) {
  return AFunction(trapezoid_self_convolution(row.samples(), row.step()), row.step());
}

struct ForwardResult {
  AField field;
  AFunction a;
};

namespace detail {

inline void check_row(std::span<const double> row, std::size_t level, std::size_t first_gamma, double h) {
  for (std::size_t k = 0; k < row.size(); ++k)
    if (!std::isfinite(row[k]))
      throw NumericalError("non-finite A-field value at gamma = " +
                           std::to_string(static_cast<double>(first_gamma + k) * h) +
                           ", x = " + std::to_string(static_cast<double>(level) * h));
}

}  // namespace detail

/// Fill the triangle 0 <= x <= gamma <= a from the diagonal data q(gamma).
inline ForwardResult a_from_q(const Potential& p, double a) {
  const auto mm = detail::grid_index(a, p.step());
  if (!mm || *mm == 0) throw InputError("a_from_q: a must be a positive grid multiple");
  if (*mm + 1 > p.size()) throw InputError("a_from_q: a exceeds the potential length");
  const std::size_t m = *mm;
  const double h = p.step();
  const auto q = p.samples();

  AField field(m, h);
  field(m, m) = q[m];
  std::vector<double> prev{q[m]};  // A(alpha_k, x_{j+1}), k = 0..m-j-1
  std::vector<double> pred, corr;

  for (std::size_t jj = m; jj-- > 0;) {
    const std::size_t n = m - jj + 1;
    const auto b_prev = trapezoid_self_convolution(prev, h);

    pred.assign(n, 0.0);
    pred[0] = q[jj];
    for (std::size_t k = 1; k < n; ++k) pred[k] = prev[k - 1] - h * b_prev[k - 1];
    const auto b_pred = trapezoid_self_convolution(pred, h);

    corr.assign(n, 0.0);
    corr[0] = q[jj];
    for (std::size_t k = 1; k < n; ++k) corr[k] = prev[k - 1] - 0.5 * h * (b_prev[k - 1] + b_pred[k]);
    detail::check_row(corr, jj, jj, h);

    for (std::size_t k = 0; k < n; ++k) field(jj + k, jj) = corr[k];
    std::swap(prev, corr);
  }
  AFunction a0(std::move(prev), h);
  return {std::move(field), std::move(a0)};
}

/// Evolve A(., 0) forward in x; row j of the result holds A(., x_j) on [0, a - x_j].
inline AField reconstruct_field(const AFunction& a0) {
  if (a0.size() < 2) throw InputError("q_from_a: A-function needs at least two samples");
  const std::size_t m = a0.size() - 1;
  const double h = a0.step();
  double amax = 0.0;
  for (double v : a0.samples()) amax = std::max(amax, std::abs(v));
  const double guard = 1e6 * (1.0 + amax);

  AField field(m, h);
  std::vector<double> cur(a0.samples().begin(), a0.samples().end());
  for (std::size_t k = 0; k <= m; ++k) field(k, 0) = cur[k];
  std::vector<double> pred, next;

  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t n = cur.size() - 1;
    const auto b_cur = trapezoid_self_convolution(cur, h);

    pred.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) pred[k] = cur[k + 1] + h * b_cur[k + 1];
    const auto b_pred = trapezoid_self_convolution(pred, h);

    next.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      next[k] = cur[k + 1] + 0.5 * h * (b_cur[k + 1] + b_pred[k]);
      if (!std::isfinite(next[k]) || std::abs(next[k]) > guard)
        throw NumericalError("q_from_a: march blew up at gamma = " +
                             std::to_string(static_cast<double>(j + 1 + k) * h) +
                             ", x = " + std::to_string(static_cast<double>(j + 1) * h) +
                             " (A data may not come from a potential on this interval)");
    }
    for (std::size_t k = 0; k < n; ++k) field(j + 1 + k, j + 1) = next[k];
    std::swap(cur, next);
  }
  return field;
}

/// q(x_j) = C(gamma_j, x_j) on [0, a], returned as a half-line potential with cutoff a.
inline Potential q_from_a(const AFunction& a0) {
  const auto field = reconstruct_field(a0);
  std::vector<double> q(field.order() + 1);
  for (std::size_t j = 0; j < q.size(); ++j) q[j] = field(j, j);
  return Potential(std::move(q), a0.step(), HalfLine{a0.length()});
}

}  // namespace afn
