#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wlab/fields.hpp"

namespace wlab::potentials {

/// Electric potential with two-derivative oracles plus Holder metadata
/// for the second derivatives.
struct PotentialModel {
  ScalarField field;
  double kappa = 1.0;            // Holder exponent of D^2 V, in (0,1]
  double holder_constant = 0.0;  // empirical seminorm certificate
  double support_radius = 0.0;
  std::string name;

  double value(const double* x) const { return field.value(x); }
};

using VectorPotential = VectorField;

/// Tensorized mollifier: 1-D profile (c0 + c2 t^2) * bump(t) on [-1,1]
/// with unit mass and vanishing first and second moments per axis. The
/// profile is signed; positivity is not required here.
struct MollifierKernel {
  double c0 = 0.0, c2 = 0.0;
  SmoothFunction profile;  // already includes the polynomial factor

  double eval1d(double t) const { return profile(t); }
  double deriv1d(int order, double t) const { return profile.derivative(order, t); }
  /// j-th moment of the 1-D profile by quadrature
  double moment(int j) const;
};

MollifierKernel make_mollifier_kernel();

/// V_eps = V * kernel_eps with certified approximation rates. Derivatives
/// up to total order 4: at most two land on V (its oracles stop at the
/// Hessian), the rest are transferred to the kernel at an eps^-1 cost each.
struct MollifiedPotential {
  PotentialModel base;
  double epsilon = 0.0;
  double delta = 0.0;  // records an eps = hbar^(1-delta) coupling when set
  MollifierKernel kernel;
  double quad_tol = 1e-9;
  // tensor rule for d >= 2 (per-axis panels x nodes); the plain-value
  // path reuses precomputed kernel-weighted nodes, which matters when a
  // sweep samples the field at every grid node
  int tensor_panels = 2;
  int tensor_nodes = 10;
  std::shared_ptr<const std::vector<std::pair<double, double>>> value_rule;
  void build_value_rule();

  double value(const double* x) const;
  /// alpha is a per-axis multi-index, |alpha| <= 4
  double derivative(const double* x, const int alpha[3]) const;
  double support_radius() const { return base.support_radius + epsilon; }
  /// value/gradient/hessian adapter
  ScalarField as_field() const;
};

/// Named corpus: gaussian_well (smooth, kappa = 1), holder_well (exact
/// Holder-kappa Hessian modulus at a singular point), weierstrass_well
/// (lacunary sum, Holder-kappa Hessian on the whole support), double_well.
/// Common params: "dimension", "depth", "width"; holder_well and
/// weierstrass_well also take "kappa"; holder_well an optional "x0".
PotentialModel make_library_potential(const std::string& name,
                                      const std::map<std::string, double>& params);

MollifiedPotential mollify(const PotentialModel& V, double epsilon,
                           const MollifierKernel& kernel, double tol = 1e-9);

struct NoncriticalReport {
  bool holds = false;
  double measured_min = 0.0;
};

/// min over a sampling grid of |V(x)| + hbar^(2/3) against the level c.
/// spacing <= max_spacing on every axis.
NoncriticalReport check_noncritical(const ScalarField& V, const double* lo,
                                    const double* hi, double hbar, double c,
                                    double max_spacing);

/// a -> a + grad(chi), componentwise.
VectorPotential gauge_transform(const VectorPotential& a, const ScalarField& chi);

/// Empirical Holder-seminorm audit of the Hessian: sup over sampled pairs
/// of |D^2V(x) - D^2V(y)|_max / |x-y|^kappa.
double sample_holder_ratio(const PotentialModel& V, int pairs, std::uint64_t seed);

}  // namespace wlab::potentials
