#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "iceshed/error.hpp"

namespace iceshed {

enum class CurveKind { Constant, Polynomial, Table };

inline const char* to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::Constant: return "constant";
    case CurveKind::Polynomial: return "polynomial";
    case CurveKind::Table: return "table";
  }
  return "unknown";
}

/// A strength curve in Pa as a function of temperature in degrees Celsius.
///
/// Constant: one coefficient. Polynomial: c0 + c1 T + ... + c4 T^4 (at most
/// five coefficients). Table: (T, value) knots, linearly interpolated.
struct CurveSpec {
  CurveKind kind = CurveKind::Constant;
  std::vector<double> coefficients;
  std::vector<std::pair<double, double>> knots;

  static CurveSpec constant(double value) { return {CurveKind::Constant, {value}, {}}; }
  static CurveSpec polynomial(std::vector<double> c) {
    return {CurveKind::Polynomial, std::move(c), {}};
  }
  static CurveSpec table(std::vector<std::pair<double, double>> k) {
    return {CurveKind::Table, {}, std::move(k)};
  }

  [[nodiscard]] double operator()(double t) const {
    switch (kind) {
      case CurveKind::Constant:
        return coefficients.front();
      case CurveKind::Polynomial: {
        double v = 0.0;
        for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) v = v * t + *it;
        return v;
      }
      case CurveKind::Table: {
        auto hi = std::lower_bound(knots.begin(), knots.end(), t,
                                   [](const auto& k, double x) { return k.first < x; });
        if (hi != knots.end() && hi->first == t) return hi->second;
        if (hi == knots.begin() || hi == knots.end())
          throw OutOfRangeError("temperature outside the strength table");
        const auto lo = hi - 1;
        const double f = (t - lo->first) / (hi->first - lo->first);
        return lo->second + f * (hi->second - lo->second);
      }
    }
    return 0.0;
  }
};

struct TemperatureRange {
  double min = 0.0;
  double max = 0.0;
  [[nodiscard]] bool contains(double t) const { return t >= min && t <= max; }
};

/// Temperature-dependent cohesion and adhesion strength. Construction checks
/// that both curves are positive and non-increasing over the valid range.
class StrengthModel {
 public:
  StrengthModel(CurveSpec cohesion, CurveSpec adhesion, TemperatureRange range)
      : cohesion_(std::move(cohesion)), adhesion_(std::move(adhesion)), range_(range) {
    if (!(range_.max >= range_.min) || !std::isfinite(range_.min) || !std::isfinite(range_.max))
      throw ConfigError("strength temperature range is empty");
    check(cohesion_, "cohesion");
    check(adhesion_, "adhesion");
  }

  /// Placeholder tables, not calibrated against measured data.
  static StrengthModel defaults() {
    return {CurveSpec::table({{-16.0, 1.4e6}, {-8.0, 1.1e6}, {-4.0, 8e5}}),
            CurveSpec::table({{-16.0, 4.5e5}, {-8.0, 3.4e5}, {-4.0, 2.0e5}}),
            {-16.0, -4.0}};
  }

  [[nodiscard]] double cohesion_strength(double t) const { return eval(cohesion_, t); }
  [[nodiscard]] double adhesion_strength(double t) const { return eval(adhesion_, t); }

  [[nodiscard]] const CurveSpec& cohesion() const { return cohesion_; }
  [[nodiscard]] const CurveSpec& adhesion() const { return adhesion_; }
  [[nodiscard]] TemperatureRange range() const { return range_; }

 private:
  static constexpr int kScanPoints = 1000;

  [[nodiscard]] double eval(const CurveSpec& curve, double t) const {
    if (!range_.contains(t))
      throw OutOfRangeError("temperature " + std::to_string(t) + " C is outside the valid range [" +
                            std::to_string(range_.min) + ", " + std::to_string(range_.max) + "]");
    return curve(t);
  }

  void check(const CurveSpec& c, const std::string& name) const {
    switch (c.kind) {
      case CurveKind::Constant:
        if (c.coefficients.size() != 1) throw ConfigError(name + ": constant needs one value");
        break;
      case CurveKind::Polynomial:
        if (c.coefficients.empty() || c.coefficients.size() > 5)
          throw ConfigError(name + ": polynomial needs 1 to 5 coefficients (degree <= 4)");
        break;
      case CurveKind::Table:
        if (c.knots.size() < 2) throw ConfigError(name + ": table needs at least two knots");
        for (std::size_t i = 1; i < c.knots.size(); ++i)
          if (!(c.knots[i].first > c.knots[i - 1].first))
            throw ConfigError(name + ": table temperatures must be strictly increasing");
        if (c.knots.front().first > range_.min || c.knots.back().first < range_.max)
          throw ConfigError(name + ": table does not cover the valid range");
        break;
    }
    double prev = 0.0;
    for (int i = 0; i <= kScanPoints; ++i) {
      const double t = i == kScanPoints
                           ? range_.max
                           : range_.min + (range_.max - range_.min) * i / kScanPoints;
      const double v = c(t);
      if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(name + " strength must be positive over the valid range");
      if (i > 0 && v > prev)
        throw ConfigError(name + " strength must not increase with temperature");
      prev = v;
    }
  }

  CurveSpec cohesion_;
  CurveSpec adhesion_;
  TemperatureRange range_;
};

}  // namespace iceshed
