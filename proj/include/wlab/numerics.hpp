#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wlab {

/// Thrown when a quadrature cannot reach its requested tolerance.
/// Carries the tolerance that was actually achieved so callers can
/// decide whether to accept the value anyway.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_tol(achieved) {}
  double achieved_tol;
};

/// Domain / precondition violations (bad gamma, bad grid, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points, nodes in (-1,1).
const Rule& gauss_legendre(int n);

/// Adaptive Gauss-Legendre integration of f over [a,b].
/// Panels are split until the G7/G15-style two-order estimate is below
/// tol (absolute + relative mix). Deterministic: fixed split order.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10, int max_depth = 40);

/// Same but never throws; reports the achieved error estimate.
struct Result {
  double value;
  double err_estimate;
};
Result integrate_estimate(const std::function<double(double)>& f, double a,
                          double b, double tol = 1e-10, int max_depth = 40);

/// Adaptive tensor-product integration over a box in dimension d <= 3.
/// Integrates the innermost axis first; every axis is adaptive.
double integrate_box(int dim, const std::function<double(const double*)>& f,
                     const double* lo, const double* hi, double tol = 1e-8);

/// Fixed tensor Gauss-Legendre over a box: panels_per_axis panels of
/// n_per_panel points on each axis. No error control; for smooth bulk work.
double integrate_box_fixed(int dim, const std::function<double(const double*)>& f,
                           const double* lo, const double* hi,
                           int panels_per_axis, int n_per_panel);

}  // namespace quad

namespace fit {

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

/// Least-squares fit of log(y) vs log(x). Requires all x,y > 0.
LogLogFit loglog(std::span<const double> x, std::span<const double> y);

}  // namespace fit

namespace rng {

/// splitmix64: tiny deterministic generator for sampling audits.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// uniform in [0,1)
  double uniform();
  /// uniform in [a,b)
  double uniform(double a, double b);

private:
  std::uint64_t state_;
};

}  // namespace rng

}  // namespace wlab
