#pragma once

#include <array>
#include <vector>

#include "wlab/fields.hpp"

namespace wlab::multiscale {

/// Axis box with an optional ball restriction (the usual target is the
/// support ball of a localizer).
struct Region {
  int dim = 1;
  std::array<double, 3> lo{}, hi{};
  bool is_ball = false;
  std::array<double, 3> center{};
  double radius = 0.0;

  bool inside(const double* x) const {
    for (int j = 0; j < dim; ++j)
      if (x[j] < lo[j] || x[j] > hi[j]) return false;
    if (!is_ball) return true;
    double r2 = 0.0;
    for (int j = 0; j < dim; ++j)
      r2 += (x[j] - center[j]) * (x[j] - center[j]);
    return r2 <= radius * radius;
  }
  static Region ball(int dim, const std::array<double, 3>& c, double r);
  static Region box(int dim, const std::array<double, 3>& lo,
                    const std::array<double, 3>& hi);
};

/// Local length scale l(x): either A^{-1} sqrt(V^2 + hbar^{4/3}) tied to
/// the non-critical structure, or the constant large-mu scale.
struct ScaleFunction {
  enum class Mode { noncritical, large_mu } mode = Mode::noncritical;
  int dim = 1;
  double A = 1.0;
  double rho = 0.0;  // measured sup |grad l| over the calibration region
  double hbar = 0.0;
  double epsilon_buffer = 1.0;
  double const_value = 0.0;  // large_mu mode
  ScalarField V;

  double operator()(const double* x) const;
  double grad_norm(const double* x) const;
};

/// Smallest A (doubling search) such that l <= min(eps_buffer/11, 1) and
/// sup |grad l| <= rho < 1/8 on the region, both measured by sampling.
ScaleFunction calibrate_scale(const ScalarField& V, double hbar,
                              const Region& target, double epsilon_buffer);

/// Constant scale l = min(1, eps_buffer/11) mu0/mu, f = 1.
ScaleFunction large_mu_scale(int dim, double mu, double mu0,
                             double epsilon_buffer);

struct ScaleCover {
  ScaleFunction l;
  Region region;
  std::vector<std::array<double, 3>> centers;
  std::vector<double> scales;  // l_k = l(x_k)
  int overlap_bound = 0;       // documented packing bound 2 * 6^d
  int measured_overlap = 0;    // max multiplicity over audit samples
  bool has_partition = false;

  size_t size() const { return centers.size(); }
  /// partition function phi_k (valid after partition_of_unity)
  double phi(size_t k, const double* x) const;
  /// sum of all phi_k at x (audit)
  double phi_sum(const double* x) const;
};

/// Greedy covering: repeatedly pick a point not covered by any half-ball
/// B(x_k, l_k / 2) (octree search at resolution l/8) and open a new ball
/// there. Full balls then cover with slack, which the partition relies on.
ScaleCover greedy_cover(const Region& region, const ScaleFunction& l);

/// Installs phi_k = psi(|x-x_k|/l_k) / sum_j psi(|x-x_j|/l_j) with psi = 1
/// on the half-ball; the greedy construction keeps the denominator >= 1.
void partition_of_unity(ScaleCover& cover);

struct RescaledProblem {
  double l_k = 0.0, f_k = 0.0;
  double hbar_k = 0.0, mu_k = 0.0;
  ScalarField V_tilde;        // f_k^{-2} V(l_k y + x_k)
  VectorField a_tilde;        // l_k^{-1} a_j(l_k y + x_k)
  ScalarField localizer_tilde;
  // sampled sup tables over B(0,8) (pulled back into the region)
  double sup_V = 0.0, sup_dV = 0.0, sup_d2V = 0.0;
  double noncritical_min = 0.0;  // min |V~| + hbar_k^{2/3}
};

RescaledProblem rescale(const ScalarField& V, const VectorField& a,
                        const ScalarField& localizer,
                        const std::array<double, 3>& x_k, double l_k,
                        double hbar, double mu, const Region& region);

struct ErrorBudget {
  double sum = 0.0;             // sum_k hbar_k^{1+gamma-d} f_k^{2 gamma}
  double integral_bound = 0.0;  // hbar^{1+gamma-d} Int l^{(d-3-gamma)/2}
  double ratio = 0.0;           // sum / hbar^{1+gamma-d}
};

ErrorBudget error_budget(const ScaleCover& cover, double hbar, double gamma,
                         int d);

}  // namespace wlab::multiscale
