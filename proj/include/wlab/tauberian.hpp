#pragma once

#include <functional>
#include <vector>

#include "wlab/linalg.hpp"
#include "wlab/smoothfunc.hpp"

namespace wlab::tauberian {

/// Nonnegative unit-mass kernel whose Fourier transform is supported in
/// (-T, T). Built as chi1 = c q^2 with q the inverse transform of an even
/// bump supported in (-T/2, T/2); the square keeps the time side
/// pointwise nonnegative and the support doubles on the Fourier side.
struct MollifierSpec {
  double T = 1.0;
  double T1 = 0.0;       // measured window with chi1 >= c_lower
  double c_lower = 0.0;  // measured positive floor on [-T1, T1]
  double tau_max = 0.0;  // chi1 treated as zero beyond this |t|
  double tail_value = 0.0;

  // q table on [0, tau_max], uniform spacing dtau, cubic interpolation
  std::vector<double> q_table;
  double dtau = 0.0;
  double norm_c = 1.0;

  /// time-side kernel (even)
  double chi1(double t) const;
  /// Fourier side by direct convolution quadrature (audit use)
  double hat(double s) const;
  /// Int chi1 dt by table quadrature
  double mass() const;
};

MollifierSpec build_mollifier(double T);

/// (1/hbar) chi1(t/hbar)
double chi_hbar(const MollifierSpec& spec, double hbar, double t);

/// g * chi_hbar evaluated pointwise by quadrature. kink: optional
/// argument location where g has limited smoothness (the integration is
/// split there); pass NaN for none.
double smooth_g_at(const std::function<double(double)>& g,
                   const MollifierSpec& spec, double hbar, double t,
                   double kink = std::numeric_limits<double>::quiet_NaN());

struct TauberianGap {
  double gap_trace_norm = 0.0;  // |B^* (g(A) - g^hbar(A)) B|_1
  double z_bound = 0.0;         // sup_t |B^* chi_hbar(A - t) B|_1
};

/// Both norms in the eigenbasis of A: `eigenvalues` lists the spectrum,
/// `B` is expressed in that basis. The t-grid spans [window_lo, window_hi]
/// with spacing fine enough to resolve the chi_hbar peak.
TauberianGap tauberian_gap(const linalg::VectorR& eigenvalues,
                           const linalg::MatrixC& B,
                           const std::function<double(double)>& g, double g_kink,
                           const MollifierSpec& spec, double hbar,
                           double window_lo, double window_hi);

}  // namespace wlab::tauberian
