#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "iceshed/error.hpp"

namespace iceshed {

/// Monotonicity-preserving piecewise cubic Hermite interpolant
/// (Fritsch-Carlson slopes with the three-point end condition). Monotone data
/// gives a monotone interpolant; knots are reproduced exactly.
class MonotoneCubic {
 public:
  MonotoneCubic(std::span<const double> x, std::span<const double> y)
      : x_(x.begin(), x.end()), y_(y.begin(), y.end()), d_(x.size(), 0.0) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw InputError("monotone cubic needs at least two knots");
    for (std::size_t i = 1; i < n; ++i)
      if (!(x_[i] > x_[i - 1])) throw InputError("monotone cubic knots must be increasing");

    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      h[k] = x_[k + 1] - x_[k];
      delta[k] = (y_[k + 1] - y_[k]) / h[k];
    }
    if (n == 2) {
      d_[0] = d_[1] = delta[0];
      return;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (delta[k - 1] * delta[k] <= 0.0) continue;
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      d_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  /// Evaluates the interpolant; arguments outside the knot range are clamped.
  [[nodiscard]] double operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - x_.begin()) - 1;
    if (x == x_[k]) return y_[k];
    const double h = x_[k + 1] - x_[k];
    const double t = (x - x_[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[k] + h10 * h * d_[k] + h01 * y_[k + 1] + h11 * h * d_[k + 1];
  }

  [[nodiscard]] std::span<const double> knots() const { return x_; }
  [[nodiscard]] std::span<const double> slopes() const { return d_; }

 private:
  static double end_slope(double h0, double h1, double delta0, double delta1) {
    double d = ((2.0 * h0 + h1) * delta0 - h0 * delta1) / (h0 + h1);
    if (std::signbit(d) != std::signbit(delta0) || delta0 == 0.0) {
      d = 0.0;
    } else if (std::signbit(delta0) != std::signbit(delta1) && std::abs(d) > 3.0 * std::abs(delta0)) {
      d = 3.0 * delta0;
    }
    return d;
  }

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> d_;
};

/// Walking from the largest knot toward the smallest, finds the first place
/// where `g` turns strictly positive and refines it by bisection until the
/// bracket is narrower than `tolerance`. Each knot interval is scanned at
/// `subdivisions` points.
template <class F>
std::optional<double> tipmost_onset(F&& g, std::span<const double> knots, double tolerance,
                                    int subdivisions = 32) {
  if (knots.size() < 2) return std::nullopt;
  double prev_z = knots.back();
  if (g(prev_z) > 0.0) return prev_z;
  for (std::size_t k = knots.size() - 1; k-- > 0;) {
    const double lo = knots[k];
    const double hi = knots[k + 1];
    for (int s = 1; s <= subdivisions; ++s) {
      const double z = s == subdivisions ? lo : hi - (hi - lo) * s / subdivisions;
      if (g(z) > 0.0) {
        double pos = z;          // g > 0
        double nonpos = prev_z;  // g <= 0
        while (nonpos - pos > tolerance) {
          const double mid = 0.5 * (pos + nonpos);
          if (mid <= pos || mid >= nonpos) break;
          (g(mid) > 0.0 ? pos : nonpos) = mid;
        }
        return 0.5 * (pos + nonpos);
      }
      prev_z = z;
    }
  }
  return std::nullopt;
}

}  // namespace iceshed
