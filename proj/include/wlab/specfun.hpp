#pragma once

#include <vector>

#include "wlab/smoothfunc.hpp"

namespace wlab::specfun {

/// Riesz-mean weight: the indicator of (-inf,0] for gamma = 0, and
/// t -> max(0,-t)^gamma for gamma in (0,1]. By convention g_0(0) = 1
/// (closed half-line).
double eval_g_gamma(double gamma, double t);

/// Classical phase-space constant
///   L_{gamma,d} = Gamma(gamma+1) / ((4 pi)^{d/2} Gamma(gamma + d/2 + 1)),
/// normalized so that (2 pi)^{-d} * Int g_gamma(p^2 + v) dp
///   = L_{gamma,d} * (v)_-^{gamma + d/2} for every real v.
double weyl_constant(double gamma, int d);

/// Independent quadrature route to the momentum integral
///   (2 pi)^{-d} * Int_{R^d} g_gamma(p^2 + v) dp
/// via radial reduction; used as the oracle against weyl_constant.
double momentum_integral_quadrature(double gamma, int d, double v,
                                    double tol = 1e-9);

/// Same integral with the momentum argument shifted to (p - w)^2; exercises
/// translation invariance. Direct 1-D tensor quadrature, d = 1 only.
double momentum_integral_shifted_1d(double gamma, double v, double w,
                                    double p_cutoff, double tol = 1e-9);

struct GammaFunctional {
  double gamma = 0.0;
  enum class Kind { indicator, riesz } kind = Kind::indicator;
  double eval(double t) const { return eval_g_gamma(gamma, t); }
};

GammaFunctional make_gamma_functional(double gamma);

/// A concrete compactly supported member of the singular test class:
/// t -> (t)_-^gamma times a smooth left cutoff, vanishing above
/// support_hi and below support_lo, with the derivative blow-up profile
/// |d^m g(t)| <= C_m |t|^{gamma-m} near t = 0.
struct TestGFunction {
  double gamma = 0.0;
  double support_lo = -1.0;
  double support_hi = 0.0;
  SmoothFunction cutoff;  // smooth factor, = 1 near the singular point
  /// membership constants C_m, m = 0..max_order, measured by sampling
  std::vector<double> derivative_bounds;

  double eval(double t) const;
  /// analytic derivative on the region where the cutoff is flat;
  /// combined product rule elsewhere (cutoff has exact derivatives)
  double derivative(int order, double t) const;
};

/// Builds the (t)_-^gamma * cutoff profile on [support_lo, support_hi]
/// (support_hi <= 0) and measures C_m for m <= max_order by sampling a
/// dyadic grid t = -2^{-j}.
TestGFunction make_test_g(double gamma, double support_lo, double support_hi,
                          int max_order = 4);

}  // namespace wlab::specfun
