#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace afn {

/// out_k = h * sum''_{l=0..k} f_l g_{k-l}  (endpoint weights halved), out_0 = 0.
inline std::vector<double> trapezoid_convolution(std::span<const double> f, std::span<const double> g, double h) {
  const std::size_t n = std::min(f.size(), g.size());
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.5 * (f[0] * g[k] + f[k] * g[0]);
    for (std::size_t l = 1; l < k; ++l) s += f[l] * g[k - l];
    out[k] = h * s;
  }
  return out;
}

/// trapezoid_convolution(f, f, h), using the symmetry of the sum.
inline std::vector<double> trapezoid_self_convolution(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.0;
    const std::size_t half = (k - 1) / 2;
    for (std::size_t l = 1; l <= half; ++l) s += f[l] * f[k - l];
    s *= 2.0;
    if (k % 2 == 0) s += f[k / 2] * f[k / 2];
    out[k] = h * (s + f[0] * f[k]);
  }
  return out;
}

}  // namespace afn
