#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "wlab/smoothfunc.hpp"

namespace wlab {

/// Scalar field on R^d (d <= 3) with optional derivative oracles.
/// Points are passed as raw pointers to avoid per-call allocation in
/// quadrature loops.
struct ScalarField {
  int dim = 1;
  std::function<double(const double*)> value;
  /// fills grad[0..dim-1]; may be empty
  std::function<void(const double*, double*)> gradient;
  /// fills hess[dim*dim], row-major; may be empty
  std::function<void(const double*, double*)> hessian;
  /// field vanishes for |x| > support_radius (inf = whole space)
  double support_radius = std::numeric_limits<double>::infinity();

  double operator()(const double* x) const { return value(x); }
  double at(double x0, double x1 = 0.0, double x2 = 0.0) const {
    const double x[3] = {x0, x1, x2};
    return value(x);
  }

  static ScalarField constant(int dim, double c);
  /// radial profile g(|x|^2) from a 1-D smooth function of r^2
  static ScalarField radial_of_r2(int dim, SmoothFunction profile,
                                  double support_radius);
  /// |x - x0|^q for q > 2, with the Hessian finite (zero) at x0
  static ScalarField power_radial(int dim, double q,
                                  const std::array<double, 3>& x0);
};

ScalarField field_sum(const ScalarField& a, const ScalarField& b);
ScalarField field_product(const ScalarField& a, const ScalarField& b);
ScalarField field_scale(const ScalarField& a, double c);
ScalarField field_shift(const ScalarField& a, const std::array<double, 3>& x0);

/// Vector field a: R^d -> R^d, componentwise oracles.
struct VectorField {
  int dim = 1;
  std::vector<ScalarField> components;

  void eval(const double* x, double* out) const {
    for (int j = 0; j < dim; ++j) out[j] = components[j].value(x);
  }
  static VectorField zero(int dim);
};

inline ScalarField ScalarField::constant(int dim, double c) {
  ScalarField f;
  f.dim = dim;
  f.value = [c](const double*) { return c; };
  f.gradient = [dim](const double*, double* g) {
    for (int j = 0; j < dim; ++j) g[j] = 0.0;
  };
  f.hessian = [dim](const double*, double* h) {
    for (int j = 0; j < dim * dim; ++j) h[j] = 0.0;
  };
  return f;
}

inline ScalarField ScalarField::radial_of_r2(int dim, SmoothFunction profile,
                                             double support_radius) {
  ScalarField f;
  f.dim = dim;
  f.support_radius = support_radius;
  f.value = [profile, dim](const double* x) {
    double r2 = 0.0;
    for (int j = 0; j < dim; ++j) r2 += x[j] * x[j];
    return profile(r2);
  };
  f.gradient = [profile, dim](const double* x, double* g) {
    double r2 = 0.0;
    for (int j = 0; j < dim; ++j) r2 += x[j] * x[j];
    const double dp = profile.derivative(1, r2);
    for (int j = 0; j < dim; ++j) g[j] = 2.0 * x[j] * dp;
  };
  f.hessian = [profile, dim](const double* x, double* h) {
    double r2 = 0.0;
    for (int j = 0; j < dim; ++j) r2 += x[j] * x[j];
    const double d1 = profile.derivative(1, r2);
    const double d2 = profile.derivative(2, r2);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        h[i * dim + j] = 4.0 * x[i] * x[j] * d2 + (i == j ? 2.0 * d1 : 0.0);
  };
  return f;
}

inline VectorField VectorField::zero(int dim) {
  VectorField a;
  a.dim = dim;
  for (int j = 0; j < dim; ++j) a.components.push_back(ScalarField::constant(dim, 0.0));
  return a;
}

inline ScalarField ScalarField::power_radial(int dim, double q,
                                             const std::array<double, 3>& x0) {
  ScalarField f;
  f.dim = dim;
  f.value = [q, x0, dim](const double* x) {
    double r2 = 0.0;
    for (int j = 0; j < dim; ++j) r2 += (x[j] - x0[j]) * (x[j] - x0[j]);
    return std::pow(r2, 0.5 * q);
  };
  f.gradient = [q, x0, dim](const double* x, double* g) {
    double r2 = 0.0;
    for (int j = 0; j < dim; ++j) r2 += (x[j] - x0[j]) * (x[j] - x0[j]);
    if (r2 == 0.0) {
      for (int j = 0; j < dim; ++j) g[j] = 0.0;
      return;
    }
    const double c = q * std::pow(r2, 0.5 * q - 1.0);
    for (int j = 0; j < dim; ++j) g[j] = c * (x[j] - x0[j]);
  };
  f.hessian = [q, x0, dim](const double* x, double* h) {
    double r2 = 0.0;
    for (int j = 0; j < dim; ++j) r2 += (x[j] - x0[j]) * (x[j] - x0[j]);
    if (r2 == 0.0) {
      for (int j = 0; j < dim * dim; ++j) h[j] = 0.0;  // q > 2
      return;
    }
    const double c1 = q * std::pow(r2, 0.5 * q - 1.0);
    const double c2 = q * (q - 2.0) * std::pow(r2, 0.5 * q - 2.0);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        h[i * dim + j] = c2 * (x[i] - x0[i]) * (x[j] - x0[j]) +
                         (i == j ? c1 : 0.0);
  };
  return f;
}

inline ScalarField field_sum(const ScalarField& a, const ScalarField& b) {
  ScalarField f;
  f.dim = a.dim;
  f.support_radius = std::max(a.support_radius, b.support_radius);
  f.value = [a, b](const double* x) { return a.value(x) + b.value(x); };
  if (a.gradient && b.gradient)
    f.gradient = [a, b](const double* x, double* g) {
      double gb[3];
      a.gradient(x, g);
      b.gradient(x, gb);
      for (int j = 0; j < a.dim; ++j) g[j] += gb[j];
    };
  if (a.hessian && b.hessian)
    f.hessian = [a, b](const double* x, double* h) {
      double hb[9];
      a.hessian(x, h);
      b.hessian(x, hb);
      for (int j = 0; j < a.dim * a.dim; ++j) h[j] += hb[j];
    };
  return f;
}

inline ScalarField field_product(const ScalarField& a, const ScalarField& b) {
  ScalarField f;
  f.dim = a.dim;
  f.support_radius = std::min(a.support_radius, b.support_radius);
  f.value = [a, b](const double* x) { return a.value(x) * b.value(x); };
  if (a.gradient && b.gradient)
    f.gradient = [a, b](const double* x, double* g) {
      double ga[3], gb[3];
      a.gradient(x, ga);
      b.gradient(x, gb);
      const double va = a.value(x), vb = b.value(x);
      for (int j = 0; j < a.dim; ++j) g[j] = ga[j] * vb + va * gb[j];
    };
  if (a.hessian && b.hessian && a.gradient && b.gradient)
    f.hessian = [a, b](const double* x, double* h) {
      const int d = a.dim;
      double ga[3], gb[3], ha[9], hb[9];
      a.gradient(x, ga);
      b.gradient(x, gb);
      a.hessian(x, ha);
      b.hessian(x, hb);
      const double va = a.value(x), vb = b.value(x);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          h[i * d + j] = ha[i * d + j] * vb + va * hb[i * d + j] +
                         ga[i] * gb[j] + ga[j] * gb[i];
    };
  return f;
}

inline ScalarField field_scale(const ScalarField& a, double c) {
  ScalarField f = a;
  auto v = a.value;
  f.value = [v, c](const double* x) { return c * v(x); };
  if (a.gradient) {
    auto g0 = a.gradient;
    const int d = a.dim;
    f.gradient = [g0, c, d](const double* x, double* g) {
      g0(x, g);
      for (int j = 0; j < d; ++j) g[j] *= c;
    };
  }
  if (a.hessian) {
    auto h0 = a.hessian;
    const int d = a.dim;
    f.hessian = [h0, c, d](const double* x, double* h) {
      h0(x, h);
      for (int j = 0; j < d * d; ++j) h[j] *= c;
    };
  }
  return f;
}

inline ScalarField field_shift(const ScalarField& a, const std::array<double, 3>& x0) {
  // f(x) = a(x - x0)
  ScalarField f = a;
  auto v = a.value;
  const int d = a.dim;
  f.value = [v, x0, d](const double* x) {
    double y[3];
    for (int j = 0; j < d; ++j) y[j] = x[j] - x0[j];
    return v(y);
  };
  if (a.gradient) {
    auto g0 = a.gradient;
    f.gradient = [g0, x0, d](const double* x, double* g) {
      double y[3];
      for (int j = 0; j < d; ++j) y[j] = x[j] - x0[j];
      g0(y, g);
    };
  }
  if (a.hessian) {
    auto h0 = a.hessian;
    f.hessian = [h0, x0, d](const double* x, double* h) {
      double y[3];
      for (int j = 0; j < d; ++j) y[j] = x[j] - x0[j];
      h0(y, h);
    };
  }
  double norm = 0.0;
  for (int j = 0; j < d; ++j) norm += x0[j] * x0[j];
  f.support_radius = a.support_radius + std::sqrt(norm);
  return f;
}

}  // namespace wlab
