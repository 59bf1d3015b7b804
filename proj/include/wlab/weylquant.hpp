#pragma once

#include <vector>

#include "wlab/fields.hpp"
#include "wlab/linalg.hpp"
#include "wlab/smoothfunc.hpp"

namespace wlab::weylquant {

/// Discrete phase space: position grid x_m = -L + m h with h = 2L/N and
/// the dual momentum lattice p_k = (pi hbar / L) k, k = -N/2 .. N/2-1.
/// Periodic (torus) realization; symbols must vanish well inside the box
/// so periodization error stays below tolerance.
struct PhaseGrid {
  int d = 1;  // 1 or 2
  double L = 6.0;
  int N = 256;
  double hbar = 0.5;

  double hx() const { return 2.0 * L / N; }
  double p_edge() const;  // largest resolvable |p|
  std::vector<double> xs() const;
  std::vector<double> ps() const;
  /// no-aliasing gate: p_edge() must exceed p_need
  void require_resolution(double p_need) const;
};

/// Phase-space symbol with optional mixed-derivative oracle and the
/// regularity bookkeeping (tau, eps, weight) used by the class audit.
struct RoughSymbol {
  int d = 1;
  std::function<double(const double* x, const double* p)> value;
  /// d^ax_x d^ap_p a at (x, p); per-axis orders. Optional.
  std::function<double(const int* ax, const int* ap, const double* x,
                       const double* p)>
      deriv;
  int tau = 0;
  double eps = 1.0;
  std::function<double(const double* x, const double* p)> weight;  // m(x,p)
};

struct QuantizedOperator {
  linalg::MatrixC M;
  PhaseGrid grid;
};

/// Midpoint (Weyl) quantization over the discrete momentum lattice:
///   A[m,n] = N^{-d} sum_k exp(2 pi i k.(m-n)/N) a((x_m+x_n)/2, p_k).
/// Real symbols produce Hermitian matrices exactly.
QuantizedOperator weyl_quantize(const RoughSymbol& a, const PhaseGrid& grid);

struct TraceCheck {
  double matrix_trace = 0.0;
  double integral = 0.0;  // (2 pi hbar)^{-d} Int Int a dx dp
  double rel_err = 0.0;
};
TraceCheck trace_check(const RoughSymbol& a, const PhaseGrid& grid);

struct ComposeResiduals {
  double r0 = 0.0;  // |Op(a)Op(b) - Op(ab)|_op
  double r1 = 0.0;  // after subtracting hbar Op(c1)
};
/// c1 = (-i/2) sum_j (d_p_j a d_x_j b - d_x_j a d_p_j b); both symbols
/// need derivative oracles.
ComposeResiduals compose_residuals(const RoughSymbol& a, const RoughSymbol& b,
                                   const PhaseGrid& grid);

struct DecayReport {
  std::vector<double> hbars;
  std::vector<double> op_norms;
  std::vector<double> trace_norms;
  double op_slope = 0.0;
  double trace_slope = 0.0;
};
/// Norms of Op(theta1) Op(theta2) across an hbar sweep; preconditions
/// that the supports are separated by at least `min_separation` on the grid.
DecayReport disjoint_support_norms(const RoughSymbol& theta1,
                                   const RoughSymbol& theta2, PhaseGrid grid,
                                   const std::vector<double>& hbar_sweep,
                                   double min_separation);

/// Principal functional-calculus symbol f((p - mu a(x))^2 + V(x)).
RoughSymbol functional_symbol_principal(const SmoothFunction& f,
                                        const ScalarField& V,
                                        const VectorField& a, double mu);

struct AuditRow {
  int order_x = 0;
  int order_p = 0;
  double measured_sup = 0.0;  // sup |d^a_x d^b_p a| / (eps^{min(0,tau-|a|)} m)
};
/// Sampled symbol-class audit over the grid box.
std::vector<AuditRow> symbol_class_audit(
    const RoughSymbol& a, const std::vector<std::pair<int, int>>& orders,
    const PhaseGrid& grid);

/// Phase-space Gaussian with analytic derivatives of any order.
RoughSymbol gaussian_symbol(int d, const std::array<double, 3>& x0,
                            const std::array<double, 3>& p0, double sx,
                            double sp);

}  // namespace wlab::weylquant
