#include "wlab/specfun.hpp"

#include <cmath>

#include "wlab/numerics.hpp"

namespace wlab::specfun {

namespace {

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw DomainError("gamma must lie in [0,1]");
}

double sphere_area(int d) {
  // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2)
  const double pi = std::acos(-1.0);
  return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace

double eval_g_gamma(double gamma, double t) {
  check_gamma(gamma);
  if (gamma == 0.0) return t <= 0.0 ? 1.0 : 0.0;
  const double neg = t < 0.0 ? -t : 0.0;
  return neg > 0.0 ? std::pow(neg, gamma) : 0.0;
}

double weyl_constant(double gamma, int d) {
  check_gamma(gamma);
  if (d < 1) throw DomainError("weyl_constant: d must be >= 1");
  const double pi = std::acos(-1.0);
  return std::tgamma(gamma + 1.0) /
         (std::pow(4.0 * pi, 0.5 * d) * std::tgamma(gamma + 0.5 * d + 1.0));
}

double momentum_integral_quadrature(double gamma, int d, double v, double tol) {
  check_gamma(gamma);
  if (d < 1) throw DomainError("momentum integral: d must be >= 1");
  if (v >= 0.0) return 0.0;
  const double pi = std::acos(-1.0);
  const double R = std::sqrt(-v);
  // radial form: |S^{d-1}| Int_0^R (|v| - r^2)^gamma r^{d-1} dr,
  // substituted r = R sin(theta) to keep the endpoint mild
  const double val = quad::integrate(
      [&](double theta) {
        const double s = std::sin(theta), c = std::cos(theta);
        const double r = R * s;
        const double core = (gamma == 0.0)
                                ? 1.0
                                : std::pow((-v) * c * c, gamma);
        return core * std::pow(r, d - 1) * R * c;
      },
      0.0, 0.5 * pi, tol);
  return std::pow(2.0 * pi, -d) * sphere_area(d) * val;
}

double momentum_integral_shifted_1d(double gamma, double v, double w,
                                    double p_cutoff, double tol) {
  check_gamma(gamma);
  if (p_cutoff * p_cutoff < -v)
    throw DomainError("momentum integral: p_cutoff too small");
  const double pi = std::acos(-1.0);
  const double val = quad::integrate(
      [&](double p) {
        const double q = p - w;
        return eval_g_gamma(gamma, q * q + v);
      },
      w - p_cutoff, w + p_cutoff, tol);
  return val / (2.0 * pi);
}

GammaFunctional make_gamma_functional(double gamma) {
  check_gamma(gamma);
  GammaFunctional g;
  g.gamma = gamma;
  g.kind = gamma == 0.0 ? GammaFunctional::Kind::indicator
                        : GammaFunctional::Kind::riesz;
  return g;
}

double TestGFunction::eval(double t) const {
  if (t >= 0.0 || t <= support_lo) return 0.0;
  const double core = gamma == 0.0 ? 1.0 : std::pow(-t, gamma);
  return core * cutoff(t);
}

double TestGFunction::derivative(int order, double t) const {
  if (order == 0) return eval(t);
  if (t >= 0.0 || t <= support_lo) return 0.0;
  // Leibniz on (t)_-^gamma * cutoff; the power factor has the closed form
  // d^m (-t)^gamma = (-1)^m gamma(gamma-1)...(gamma-m+1) (-t)^{gamma-m}.
  double acc = 0.0;
  for (int k = 0; k <= order; ++k) {
    double falling = 1.0, sign = 1.0;
    for (int i = 0; i < k; ++i) {
      falling *= (gamma - i);
      sign = -sign;
    }
    if (gamma == 0.0 && k > 0) continue;  // indicator branch: flat left of 0
    const double core =
        (k == 0 && gamma == 0.0) ? 1.0 : sign * falling * std::pow(-t, gamma - k);
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (order - i + 1) / i;
    acc += b * core * cutoff.derivative(order - k, t);
  }
  return acc;
}

TestGFunction make_test_g(double gamma, double support_lo, double support_hi,
                          int max_order) {
  check_gamma(gamma);
  if (!(support_lo < support_hi) || support_hi > 0.0)
    throw DomainError("make_test_g: need support_lo < support_hi <= 0");
  TestGFunction g;
  g.gamma = gamma;
  g.support_lo = support_lo;
  g.support_hi = support_hi;
  if (support_hi == 0.0) {
    // flat = 1 on the right half so the blow-up profile near 0 is exact
    g.cutoff = SmoothFunction::step_up(support_lo, 0.5 * support_lo);
  } else {
    g.cutoff = SmoothFunction::plateau(support_lo, support_hi,
                                       0.25 * (support_hi - support_lo));
  }
  // measure the membership constants C_m on a dyadic grid toward 0
  g.derivative_bounds.assign(max_order + 1, 0.0);
  for (int j = 0; j <= 52; ++j) {
    const double t = -std::pow(2.0, -j);
    if (t <= support_lo || t >= 0.0) continue;
    for (int m = 0; m <= max_order; ++m) {
      const double dm = std::abs(g.derivative(m, t));
      double weight = 1.0;
      if (gamma > 0.0 && gamma < 1.0 && m >= 1)
        weight = std::pow(-t, m - gamma);
      g.derivative_bounds[m] = std::max(g.derivative_bounds[m], dm * weight);
    }
  }
  return g;
}

}  // namespace wlab::specfun
