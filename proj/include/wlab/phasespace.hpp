#pragma once

#include <array>

#include "wlab/fields.hpp"

namespace wlab::phasespace {

/// Inputs for the leading phase-space term
///   (2 pi hbar)^{-d} Int g_gamma(p^2 + V(x)) phi(x) dx dp.
struct WeylTermRequest {
  ScalarField V;
  ScalarField phi;
  double gamma = 0.0;
  double hbar = 1.0;
  int d = 1;
  std::array<double, 3> lo{};  // x-quadrature box, must cover supp(phi)
  std::array<double, 3> hi{};
  double tol = 1e-8;
  /// 0: adaptive x-quadrature (refines near the zero set of V).
  /// > 0: fixed tensor Gauss-Legendre with this many panels per axis;
  /// appropriate when V_-^{d/2+gamma} is smooth on the box.
  int fixed_panels = 0;
};

/// Momentum integral evaluated in closed form:
///   hbar^{-d} L_{gamma,d} Int V_-^{d/2+gamma} phi dx.
double weyl_term_closed(const WeylTermRequest& req);

/// Direct route: radial momentum quadrature inside an x-quadrature.
/// Fails if p_cutoff^2 < sup V_- over the box.
double weyl_term_quadrature(const WeylTermRequest& req, double p_cutoff);

/// d = 1 variant with the symbol shifted to (p - w(x))^2; w = mu * a(x).
/// Exercises translation invariance of the momentum integral.
double weyl_term_quadrature_shifted(const WeylTermRequest& req, double p_cutoff,
                                    const ScalarField& a, double mu);

struct CompareReport {
  double value = 0.0;       // |(2 pi)^{-d} Int Int [g(p^2+V_eps) - g(p^2+V)] phi|
  double sup_gap = 0.0;     // sup over box of |V_- - (V_eps)_-|
  double bound = 0.0;       // Lipschitz constant route applied to sup_gap
  bool within_bound = false;
};

/// Phase-space comparison of two potentials under one localizer; the
/// momentum integral is evaluated in closed form on both sides and the
/// result is checked against the Lipschitz bound of r -> r^{d/2+gamma}.
CompareReport phase_space_compare(const ScalarField& V, const ScalarField& V_eps,
                                  const ScalarField& phi, double gamma, int d,
                                  const std::array<double, 3>& lo,
                                  const std::array<double, 3>& hi,
                                  double tol = 1e-10, int fixed_panels = 0);

/// Smooth radial localizer: 1 on |x-c| <= plateau_frac * radius, 0 outside
/// |x-c| >= radius.
ScalarField make_localizer(int d, const std::array<double, 3>& center,
                           double radius, double plateau_frac = 0.5);

/// Int phi dx over the box (helper for mass-normalized localizers).
double field_mass(const ScalarField& phi, int d, const std::array<double, 3>& lo,
                  const std::array<double, 3>& hi, double tol = 1e-10,
                  int fixed_panels = 0);

}  // namespace wlab::phasespace
