#pragma once

/**
 * @file core_types.hpp
 * @brief Sampled potentials, A-functions and the characteristic-coordinate field.
 *
 * Everything lives on one uniform grid x_i = i*h. A potential q is given by its
 * point values at the nodes; between nodes it is read as the piecewise-linear
 * interpolant. The A-function A(alpha) shares the same step, and the field
 * C(gamma, x) = A(gamma - x, x) is stored as a lower triangle over aligned
 * (gamma_i, x_j) nodes.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace afn {

/// Bad arguments or malformed data (CLI exit code 2).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested feature outside the implemented range (e.g. series terms n > 3).
class Unsupported : public InputError {
 public:
  using InputError::InputError;
};

/// A march or integrator produced a non-finite or runaway value (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// u(x) vanished, so m has a pole: the spectral-margin precondition did not hold.
class PoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

namespace detail {

inline bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// Index k with k*step == value, if value is within 1e-9 relative of a node.
inline std::optional<std::size_t> grid_index(double value, double step) {
  if (!(value >= 0.0) || !(step > 0.0)) return std::nullopt;
  const double k = std::round(value / step);
  if (std::abs(k * step - value) > 1e-9 * std::max(1.0, std::abs(value))) return std::nullopt;
  return static_cast<std::size_t>(k);
}

}  // namespace detail

/// Far-end condition u'(b) + h u(b) = 0; Dirichlet stands for h = infinity.
class BoundaryCondition {
 public:
  static BoundaryCondition finite(double h) {
    if (!std::isfinite(h)) throw InputError("boundary parameter h must be finite; use dirichlet()");
    return BoundaryCondition(h);
  }
  static BoundaryCondition dirichlet() { return BoundaryCondition(std::nullopt); }

  bool is_dirichlet() const { return !h_.has_value(); }
  /// Only meaningful when !is_dirichlet().
  double h() const { return h_.value(); }

  friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;

 private:
  explicit BoundaryCondition(std::optional<double> h) : h_(h) {}
  std::optional<double> h_;
};

struct FiniteInterval {
  double b;
  BoundaryCondition bc;
  friend bool operator==(const FiniteInterval&, const FiniteInterval&) = default;
};

struct HalfLine {
  double cutoff;
  friend bool operator==(const HalfLine&, const HalfLine&) = default;
};

using Interval = std::variant<FiniteInterval, HalfLine>;

inline double interval_length(const Interval& iv) {
  return std::visit(
      [](const auto& v) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, FiniteInterval>)
          return v.b;
        else
          return v.cutoff;
      },
      iv);
}

/// Trapezoid prefix integral of |v| on a uniform grid: out[i] = int_0^{x_i} |v|.
inline std::vector<double> abs_prefix_integral(std::span<const double> v, double step) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = 1; i < v.size(); ++i)
    out[i] = out[i - 1] + 0.5 * step * (std::abs(v[i - 1]) + std::abs(v[i]));
  return out;
}

/// Point samples of q at x_i = i*step on [0, L], plus the far-end description.
class Potential {
 public:
  Potential(std::vector<double> samples, double step, Interval interval)
      : samples_(std::move(samples)), step_(step), interval_(std::move(interval)) {
    if (samples_.empty()) throw InputError("potential needs at least one sample");
    if (!(step_ > 0.0) || !std::isfinite(step_)) throw InputError("grid step must be positive");
    if (!detail::all_finite(samples_)) throw InputError("potential contains a non-finite sample");
    const double len = interval_length(interval_);
    if (!(len > 0.0) || !std::isfinite(len)) throw InputError("interval length must be positive and finite");
    const double grid_len = static_cast<double>(samples_.size() - 1) * step_;
    if (std::abs(grid_len - len) > step_ * (1.0 + 1e-9))
      throw InputError("sample count does not match interval length: " + std::to_string(samples_.size()) +
                       " samples at step " + std::to_string(step_) + " cover " + std::to_string(grid_len) +
                       ", interval is " + std::to_string(len));
  }

  std::span<const double> samples() const { return samples_; }
  double step() const { return step_; }
  const Interval& interval() const { return interval_; }
  std::size_t size() const { return samples_.size(); }
  /// Grid length N*h; agrees with the interval length to within one step.
  double length() const { return static_cast<double>(samples_.size() - 1) * step_; }
  double operator[](std::size_t i) const { return samples_[i]; }

  bool is_finite_interval() const { return std::holds_alternative<FiniteInterval>(interval_); }
  const FiniteInterval& finite() const { return std::get<FiniteInterval>(interval_); }

  /// Piecewise-linear value at x in [0, length()]; clamps outside.
  double at(double x) const {
    if (x <= 0.0) return samples_.front();
    const double s = x / step_;
    const auto i = static_cast<std::size_t>(s);
    if (i + 1 >= samples_.size()) return samples_.back();
    const double t = s - static_cast<double>(i);
    return samples_[i] + t * (samples_[i + 1] - samples_[i]);
  }

  /// Q(x_i) = int_0^{x_i} |q| for every node (nondecreasing).
  std::vector<double> l1_prefix() const { return abs_prefix_integral(samples_, step_); }

  double min_value() const { return *std::min_element(samples_.begin(), samples_.end()); }

 private:
  std::vector<double> samples_;
  double step_;
  Interval interval_;
};

inline Potential make_potential(std::vector<double> values, double step, Interval interval) {
  return Potential(std::move(values), step, std::move(interval));
}

enum class Tail {
  drop,  ///< result lives on [0, a] as a half-line potential with cutoff a
  zero,  ///< result keeps the original length with q = 0 beyond a (half-line)
};

/// q restricted to [0, a]. Samples on [0, a] are copied verbatim.
inline Potential restrict(const Potential& p, double a, Tail tail = Tail::drop) {
  if (!(a > 0.0) || a > p.length() * (1.0 + 1e-12))
    throw InputError("restrict: a = " + std::to_string(a) + " outside (0, " + std::to_string(p.length()) + "]");
  const auto k = detail::grid_index(a, p.step());
  if (!k) throw InputError("restrict: a is not a grid multiple");
  if (*k + 1 == p.size() && tail == Tail::drop) return p;
  auto s = p.samples();
  if (tail == Tail::drop)
    return Potential(std::vector<double>(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(*k + 1)), p.step(),
                     HalfLine{a});
  std::vector<double> out(s.begin(), s.end());
  std::fill(out.begin() + static_cast<std::ptrdiff_t>(*k + 1), out.end(), 0.0);
  return Potential(std::move(out), p.step(), HalfLine{p.length()});
}

/// q(x0 + .) on [0, L - x0] with the same far-end condition.
inline Potential shift(const Potential& p, double x0) {
  const auto k = detail::grid_index(x0, p.step());
  if (!k) throw InputError("shift: x0 is not a non-negative grid multiple");
  if (*k == 0) return p;
  if (*k + 1 >= p.size()) throw InputError("shift: x0 must be smaller than the potential length");
  auto s = p.samples();
  std::vector<double> out(s.begin() + static_cast<std::ptrdiff_t>(*k), s.end());
  const double x0g = static_cast<double>(*k) * p.step();
  Interval iv = std::visit(
      [&](const auto& v) -> Interval {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FiniteInterval>)
          return FiniteInterval{v.b - x0g, v.bc};
        else
          return HalfLine{v.cutoff - x0g};
      },
      p.interval());
  return Potential(std::move(out), p.step(), iv);
}

/// Linear-interpolation resampling onto a new step covering the same interval.
inline Potential resample(const Potential& p, double new_step) {
  if (!(new_step > 0.0)) throw InputError("resample: step must be positive");
  const double len = interval_length(p.interval());
  const auto n = static_cast<std::size_t>(std::llround(len / new_step));
  if (n == 0) throw InputError("resample: step longer than the interval");
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out[i] = p.at(static_cast<double>(i) * new_step);
  return Potential(std::move(out), new_step, p.interval());
}

/// Samples of A(alpha) at alpha_i = i*step on [0, a], a = M*step.
class AFunction {
 public:
  AFunction(std::vector<double> samples, double step) : samples_(std::move(samples)), step_(step) {
    if (samples_.empty()) throw InputError("A-function needs at least one sample");
    if (!(step_ > 0.0) || !std::isfinite(step_)) throw InputError("grid step must be positive");
    if (!detail::all_finite(samples_)) throw InputError("A-function contains a non-finite sample");
  }

  std::span<const double> samples() const { return samples_; }
  double step() const { return step_; }
  std::size_t size() const { return samples_.size(); }
  double length() const { return static_cast<double>(samples_.size() - 1) * step_; }
  double operator[](std::size_t i) const { return samples_[i]; }

 private:
  std::vector<double> samples_;
  double step_;
};

/**
 * Lower-triangular field C[i][j] ~ C(gamma_i, x_j) = A(gamma_i - x_j, x_j), 0 <= j <= i <= M.
 * Row i is one characteristic gamma = gamma_i; the column j = 0 is A(., 0).
 */
class AField {
 public:
  AField(std::size_t m, double step) : m_(m), step_(step), data_((m + 1) * (m + 2) / 2, 0.0) {}

  std::size_t order() const { return m_; }
  double step() const { return step_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[offset(i) + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[offset(i) + j]; }

  /// A(alpha_k, x_j) = C(gamma_{j+k}, x_j) for k = 0..M-j.
  std::vector<double> slice_at(std::size_t j) const {
    std::vector<double> out(m_ - j + 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = (*this)(j + k, j);
    return out;
  }

 private:
  static std::size_t offset(std::size_t i) { return i * (i + 1) / 2; }
  std::size_t m_;
  double step_;
  std::vector<double> data_;
};

struct ResidualPoint {
  double kappa;
  double residual;
};

/// (kappa, residual) pairs with kappa strictly increasing and positive.
class ResidualCurve {
 public:
  ResidualCurve() = default;
  explicit ResidualCurve(std::vector<ResidualPoint> pts) : pts_(std::move(pts)) {
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (!(pts_[i].kappa > 0.0)) throw InputError("residual curve: kappa must be positive");
      if (i > 0 && !(pts_[i].kappa > pts_[i - 1].kappa))
        throw InputError("residual curve: kappa must be strictly increasing");
      if (!(pts_[i].residual >= 0.0)) throw InputError("residual curve: residuals must be non-negative");
    }
  }
  std::span<const ResidualPoint> points() const { return pts_; }
  std::size_t size() const { return pts_.size(); }

 private:
  std::vector<ResidualPoint> pts_;
};

struct BoundaryTerm {
  int j;
  double A;  ///< coefficient of kappa e^{-2 kappa b j}; |A| = 2
  double B;  ///< coefficient of e^{-2 kappa b j}
};

struct BoundaryExpansion {
  double b;
  std::vector<BoundaryTerm> terms;
};

/// beta_j(0) for j = 0..n, with each beta_j(x) as polynomial coefficients in x.
struct BetaCoeffs {
  std::vector<double> at_zero;
  std::vector<std::vector<double>> polys;
};

/// n evenly spaced values including both endpoints.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = hi;
  return out;
}

}  // namespace afn
