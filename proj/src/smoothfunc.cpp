#include "wlab/smoothfunc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wlab/numerics.hpp"

namespace wlab {

namespace {

constexpr int kMaxOrder = 24;

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Derivatives of the normalized bump e(u) = exp(1 - 1/(1-u^2)) on (-1,1).
// With s(u) = 1 - 1/(1-u^2) = 1 - (1/2)(1/(1-u) + 1/(1+u)) the derivatives
// of s are closed forms, and e^(n) follows from the e' = s'e recursion.
void bump_core_derivs(double u, int order, double* out) {
  for (int n = 0; n <= order; ++n) out[n] = 0.0;
  if (u <= -1.0 || u >= 1.0) return;
  double s[kMaxOrder + 2];
  const double om = 1.0 - u, op = 1.0 + u;
  s[0] = 1.0 - 0.5 * (1.0 / om + 1.0 / op);
  // d^k/du^k [1/(1-u)] = k!/(1-u)^{k+1};  d^k/du^k [1/(1+u)] = (-1)^k k!/(1+u)^{k+1}
  double fact = 1.0, pom = om, pop = op;
  for (int k = 1; k <= order + 1; ++k) {
    fact *= k;
    pom *= om;
    pop *= op;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    s[k] = -0.5 * (fact / pom + sign * fact / pop);
  }
  out[0] = std::exp(s[0]);
  for (int n = 1; n <= order; ++n) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += binom(n - 1, k) * s[n - k] * out[k];
    out[n] = acc;
  }
}

double bump_mass() {
  static const double mass = quad::integrate(
      [](double u) {
        double v[1];
        bump_core_derivs(u, 0, v);
        return v[0];
      },
      -1.0, 1.0, 1e-13);
  return mass;
}

}  // namespace

SmoothFunction SmoothFunction::bump(double a, double b) {
  if (!(b > a)) throw DomainError("bump: requires b > a");
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  SmoothFunction f;
  f.lo_ = a;
  f.hi_ = b;
  f.deriv_ = [mid, half](int order, double t) -> double {
    if (order > kMaxOrder) throw DomainError("bump: derivative order too high");
    double buf[kMaxOrder + 1];
    bump_core_derivs((t - mid) / half, order, buf);
    return buf[order] * std::pow(half, -order);
  };
  return f;
}

SmoothFunction SmoothFunction::step_up(double a, double b) {
  if (!(b > a)) throw DomainError("step_up: requires b > a");
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double mass = bump_mass();
  SmoothFunction f;
  f.lo_ = a;
  f.hi_ = std::numeric_limits<double>::infinity();
  f.deriv_ = [mid, half, mass](int order, double t) -> double {
    const double u = (t - mid) / half;
    if (order == 0) {
      if (u <= -1.0) return 0.0;
      if (u >= 1.0) return 1.0;
      const double v = quad::integrate(
          [](double w) {
            double buf[1];
            bump_core_derivs(w, 0, buf);
            return buf[0];
          },
          -1.0, u, 1e-12);
      return v / mass;
    }
    // n-th derivative of the step = (n-1)-th derivative of the bump / mass
    if (order - 1 > kMaxOrder) throw DomainError("step_up: order too high");
    double buf[kMaxOrder + 1];
    bump_core_derivs(u, order - 1, buf);
    return buf[order - 1] / mass * std::pow(half, -order);
  };
  return f;
}

SmoothFunction SmoothFunction::step_down(double a, double b) {
  SmoothFunction up = step_up(a, b);
  SmoothFunction f;
  f.lo_ = -std::numeric_limits<double>::infinity();
  f.hi_ = b;
  f.deriv_ = [up](int order, double t) -> double {
    const double v = up.derivative(order, t);
    return order == 0 ? 1.0 - v : -v;
  };
  return f;
}

SmoothFunction SmoothFunction::exp_decay(double rate) {
  SmoothFunction f;
  f.lo_ = -std::numeric_limits<double>::infinity();
  f.hi_ = std::numeric_limits<double>::infinity();
  f.deriv_ = [rate](int order, double t) -> double {
    double c = 1.0;
    for (int i = 0; i < order; ++i) c *= -rate;
    return c * std::exp(-rate * t);
  };
  return f;
}

SmoothFunction SmoothFunction::plateau(double a, double b, double rise) {
  if (!(b - a > 2.0 * rise) || rise <= 0.0)
    throw DomainError("plateau: requires b - a > 2*rise > 0");
  SmoothFunction up = step_up(a, a + rise);
  SmoothFunction down = step_up(-b, -b + rise);  // reflected
  SmoothFunction f;
  f.lo_ = a;
  f.hi_ = b;
  f.deriv_ = [up, down](int order, double t) -> double {
    // product rule for S_up(t) * S_up(-t reflected)
    double acc = 0.0;
    for (int k = 0; k <= order; ++k) {
      const double sign = (order - k) % 2 ? -1.0 : 1.0;
      acc += binom(order, k) * up.derivative(k, t) * sign *
             down.derivative(order - k, -t);
    }
    return acc;
  };
  return f;
}

SmoothFunction SmoothFunction::gaussian(double center, double width) {
  if (width <= 0.0) throw DomainError("gaussian: width must be positive");
  SmoothFunction f;
  f.lo_ = center - 9.0 * width;
  f.hi_ = center + 9.0 * width;
  f.deriv_ = [center, width](int order, double t) -> double {
    const double u = (t - center) / width;
    if (std::abs(u) > 26.0) return 0.0;
    // (d/dt)^n exp(-u^2) = (-1)^n H_n(u) exp(-u^2) / width^n
    double h0 = 1.0, h1 = 2.0 * u;
    double hn = (order == 0) ? h0 : h1;
    for (int k = 1; k < order; ++k) {
      const double h2 = 2.0 * u * h1 - 2.0 * k * h0;
      h0 = h1;
      h1 = h2;
      hn = h2;
    }
    const double sign = order % 2 ? -1.0 : 1.0;
    return sign * hn * std::exp(-u * u) * std::pow(width, -order);
  };
  return f;
}

SmoothFunction SmoothFunction::poly_times(const std::vector<double>& coeffs,
                                          const SmoothFunction& f) {
  SmoothFunction g;
  g.lo_ = f.lo_;
  g.hi_ = f.hi_;
  g.deriv_ = [coeffs, f](int order, double t) -> double {
    // Leibniz; polynomial derivatives in closed form.
    double acc = 0.0;
    for (int k = 0; k <= order; ++k) {
      double p = 0.0;  // k-th derivative of the polynomial at t
      for (size_t j = k; j < coeffs.size(); ++j) {
        double c = coeffs[j];
        for (size_t i = 0; i < static_cast<size_t>(k); ++i) c *= (j - i);
        p += c * std::pow(t, static_cast<double>(j - k));
      }
      acc += binom(order, k) * p * f.derivative(order - k, t);
    }
    return acc;
  };
  return g;
}

SmoothFunction SmoothFunction::scaled(double factor) const {
  SmoothFunction g = *this;
  auto base = deriv_;
  g.deriv_ = [base, factor](int order, double t) { return factor * base(order, t); };
  return g;
}

SmoothFunction SmoothFunction::sum(const SmoothFunction& other) const {
  SmoothFunction g;
  g.lo_ = std::min(lo_, other.lo_);
  g.hi_ = std::max(hi_, other.hi_);
  auto a = deriv_, b = other.deriv_;
  g.deriv_ = [a, b](int order, double t) { return a(order, t) + b(order, t); };
  return g;
}

SmoothFunction SmoothFunction::product(const SmoothFunction& other) const {
  SmoothFunction g;
  g.lo_ = std::max(lo_, other.lo_);
  g.hi_ = std::min(hi_, other.hi_);
  auto a = *this;
  auto b = other;
  g.deriv_ = [a, b](int order, double t) {
    double acc = 0.0;
    for (int k = 0; k <= order; ++k)
      acc += binom(order, k) * a.derivative(k, t) * b.derivative(order - k, t);
    return acc;
  };
  return g;
}

}  // namespace wlab
