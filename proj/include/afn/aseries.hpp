#pragma once

/**
 * @file aseries.hpp
 * @brief Low-order terms of the coupling-constant expansion A = sum_n A_n.
 *
 * A_n is homogeneous of degree n in q and is an integral of q(x_1)...q(x_n) over a
 * polytope R_n(alpha) in (x_1..x_n, l_1..l_{n-2}):
 *
 *   A_1(alpha) = q(alpha)
 *   A_2(alpha) = -int_{max(x1,x2) <= alpha <= x1+x2} q(x1) q(x2)
 *   A_3(alpha) = 1/2 int q(x1) q(x2) q(x3) |{l1 : (x, l1) in R_3(alpha)}| dx
 *
 * where for n = 3 the admissible l1 form an interval whose length is computed exactly;
 * the remaining x-integrals use the trapezoid rule on the potential's own nodes.
 * Terms with n >= 4 are not evaluated; their total is bounded by
 *   sum_{n>=4} Q(alpha)^n alpha^{n-2} / (n-2)!.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "afn/core_types.hpp"

namespace afn {

/// Nodes alpha_k = k * stride * h for k = 0..K, K * stride * h <= alpha_max.
struct SeriesGrid {
  std::size_t stride = 1;
  double alpha_max = 0.0;
};

namespace detail {

/// Length of {l1 in [|x1-x2|, x1+x2] : 2a - x1 - x3 - l1 in [|x2-x3|, x2+x3]}.
inline double r3_fiber_length(double x1, double x2, double x3, double alpha) {
  const double base = 2.0 * alpha - x1 - x3;
  const double lo = std::max(std::abs(x1 - x2), base - x2 - x3);
  const double hi = std::min(x1 + x2, base - std::abs(x2 - x3));
  return std::max(0.0, hi - lo);
}

inline double trap_weight(std::size_t i, std::size_t n) { return (i == 0 || i == n) ? 0.5 : 1.0; }

inline std::size_t series_node_count(const Potential& p, const SeriesGrid& g) {
  if (g.stride == 0) throw InputError("series grid stride must be positive");
  if (!(g.alpha_max >= 0.0) || g.alpha_max > p.length() * (1.0 + 1e-12))
    throw InputError("series grid alpha_max must lie in [0, L]");
  const double hs = static_cast<double>(g.stride) * p.step();
  return static_cast<std::size_t>(std::floor(g.alpha_max / hs + 1e-9));
}

inline double a2_at(std::span<const double> q, std::span<const double> prefix, std::size_t ma, double h) {
  // -int_0^alpha q(x1) [P(alpha) - P(alpha - x1)] dx1, P the running integral of q.
  double s = 0.0;
  for (std::size_t i = 0; i <= ma; ++i) s += trap_weight(i, ma) * q[i] * (prefix[ma] - prefix[ma - i]);
  return -h * s;
}

inline double a3_at(std::span<const double> q, std::size_t ma, double h) {
  const double alpha = static_cast<double>(ma) * h;
  double s = 0.0;
  for (std::size_t i = 0; i <= ma; ++i) {
    const double wi = trap_weight(i, ma) * q[i];
    if (wi == 0.0) continue;
    const double x1 = static_cast<double>(i) * h;
    for (std::size_t j = 0; j <= ma; ++j) {
      const double wij = wi * trap_weight(j, ma) * q[j];
      if (wij == 0.0) continue;
      const double x2 = static_cast<double>(j) * h;
      double inner = 0.0;
      for (std::size_t k = 0; k <= ma; ++k)
        inner += trap_weight(k, ma) * q[k] * r3_fiber_length(x1, x2, static_cast<double>(k) * h, alpha);
      s += wij * inner;
    }
  }
  return 0.5 * h * h * h * s;
}

/// sum_{m>=2} t^m / m!, summed directly (no cancellation for small t).
inline double exp_tail2(double t) {
  double term = 0.5 * t * t, s = 0.0;
  for (int m = 2; m < 400 && term != 0.0; ++m) {
    s += term;
    if (std::abs(term) < 1e-17 * std::abs(s)) break;
    term *= t / (m + 1);
  }
  return s;
}

inline double interp_prefix(std::span<const double> prefix, double step, double x) {
  const double s = x / step;
  const auto i = static_cast<std::size_t>(std::floor(s));
  if (i + 1 >= prefix.size()) return prefix.back();
  const double t = s - static_cast<double>(i);
  return prefix[i] + t * (prefix[i + 1] - prefix[i]);
}

}  // namespace detail

/// A_n sampled on the series grid, n in {1, 2, 3}.
inline AFunction series_term(const Potential& p, int n, const SeriesGrid& grid) {
  if (n < 1 || n > 3)
    throw Unsupported("series_term: only n = 1, 2, 3 are implemented (R_n(alpha) has dimension 2n-2)");
  const std::size_t kmax = detail::series_node_count(p, grid);
  const auto q = p.samples();
  const double h = p.step();
  std::vector<double> prefix(q.size(), 0.0);
  for (std::size_t i = 1; i < q.size(); ++i) prefix[i] = prefix[i - 1] + 0.5 * h * (q[i - 1] + q[i]);

  std::vector<double> out(kmax + 1, 0.0);
  for (std::size_t k = 0; k <= kmax; ++k) {
    const std::size_t ma = k * grid.stride;
    switch (n) {
      case 1: out[k] = q[ma]; break;
      case 2: out[k] = detail::a2_at(q, prefix, ma, h); break;
      default: out[k] = detail::a3_at(q, ma, h); break;
    }
  }
  return AFunction(std::move(out), static_cast<double>(grid.stride) * h);
}

struct SeriesSum {
  AFunction sum;                ///< A_1 + A_2 + A_3
  std::vector<double> tail;     ///< bound on |sum_{n>=4} A_n| per node
};

inline SeriesSum series_sum(const Potential& p, const SeriesGrid& grid) {
  const auto a1 = series_term(p, 1, grid);
  const auto a2 = series_term(p, 2, grid);
  const auto a3 = series_term(p, 3, grid);
  const auto prefix = p.l1_prefix();
  std::vector<double> s(a1.size()), tail(a1.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = a1[k] + a2[k] + a3[k];
    const double alpha = static_cast<double>(k) * a1.step();
    const double qa = prefix[k * grid.stride];
    tail[k] = qa * qa * detail::exp_tail2(qa * alpha);
  }
  return {AFunction(std::move(s), a1.step()), std::move(tail)};
}

/**
 * Q(alpha)^n alpha^{n-2} / (n-2)!, or with a second potential on the same grid
 * (Q + Q~)^{n-1} ||q - q~||_{L1(0, alpha)} alpha^{n-2} / (n-2)!.
 */
inline double series_bounds(const Potential& p, const Potential* p2, int n, double alpha) {
  if (n < 2) throw InputError("series_bounds: n must be >= 2");
  if (!(alpha >= 0.0) || alpha > p.length() * (1.0 + 1e-12)) throw InputError("series_bounds: alpha out of range");
  const double poly = std::pow(alpha, n - 2) / std::tgamma(n - 1);
  const double qa = detail::interp_prefix(p.l1_prefix(), p.step(), alpha);
  if (!p2) return std::pow(qa, n) * poly;
  if (p2->size() != p.size() || std::abs(p2->step() - p.step()) > 1e-15)
    throw InputError("series_bounds: potentials must share one grid");
  const double qb = detail::interp_prefix(p2->l1_prefix(), p.step(), alpha);
  std::vector<double> diff(p.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = p[i] - (*p2)[i];
  const double dl1 = detail::interp_prefix(abs_prefix_integral(diff, p.step()), p.step(), alpha);
  return std::pow(qa + qb, n - 1) * dl1 * poly;
}

}  // namespace afn
