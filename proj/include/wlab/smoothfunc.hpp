#pragma once

#include <functional>
#include <memory>

namespace wlab {

/// A scalar function of one variable with analytic derivative oracles.
///
/// Derivatives are exact closed forms (Hermite recursion for Gaussian
/// windows, exponential-composition recursion for bumps), not finite
/// differences, so they stay usable up to order ~10 as required by the
/// almost-analytic extension.
class SmoothFunction {
public:
  SmoothFunction() = default;

  double operator()(double t) const { return deriv_(0, t); }
  /// order-th derivative at t; order 0 is the value.
  double derivative(int order, double t) const { return deriv_(order, t); }

  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }

  /// C^inf bump on (a,b): exp(1 - 1/(1-u^2)) in the normalized variable,
  /// peak value 1 at the midpoint, identically 0 outside.
  static SmoothFunction bump(double a, double b);

  /// 0 for t <= a, 1 for t >= b, monotone C^inf in between.
  static SmoothFunction step_up(double a, double b);

  /// 1 for t <= a, 0 for t >= b.
  static SmoothFunction step_down(double a, double b);

  /// exp(-rate * t) on the whole line.
  static SmoothFunction exp_decay(double rate);

  /// 1 on [a+rise, b-rise], 0 outside (a,b), C^inf shoulders.
  static SmoothFunction plateau(double a, double b, double rise);

  /// exp(-((t-c)/w)^2). Not compactly supported; treated as vanishing
  /// beyond |t-c| > 9w (values < 1e-35).
  static SmoothFunction gaussian(double center, double width);

  /// p(t) * f(t) with p a polynomial given by coefficients (low to high).
  static SmoothFunction poly_times(const std::vector<double>& coeffs,
                                   const SmoothFunction& f);

  SmoothFunction scaled(double factor) const;
  SmoothFunction sum(const SmoothFunction& other) const;
  SmoothFunction product(const SmoothFunction& other) const;

private:
  std::function<double(int, double)> deriv_;
  double lo_ = 0.0, hi_ = 0.0;
};

}  // namespace wlab
