#pragma once

#include <optional>
#include <string>

#include "wlab/fields.hpp"
#include "wlab/linalg.hpp"
#include "wlab/smoothfunc.hpp"

namespace wlab::schrodgrid {

struct GridSpec {
  int d = 1;
  double L = 6.0;   // box half-width
  int N = 512;      // points per axis
  enum class Boundary { dirichlet, periodic } boundary = Boundary::dirichlet;

  double hx() const { return 2.0 * L / N; }
  long total() const {
    long t = 1;
    for (int j = 0; j < d; ++j) t *= N;
    return t;
  }
  /// cell-centered nodes: x_i = -L + (i + 1/2) h
  double node(int i) const { return -L + (i + 0.5) * hx(); }
  /// de Broglie resolution gate: hx <= hbar / (4 p_max)
  bool resolves(double hbar, double p_max) const {
    return hx() <= hbar / (4.0 * p_max);
  }
};

/// Discretized (-i hbar grad - mu a)^2 + V via forward covariant
/// differences with link phases (Peierls): gauge transformations act as
/// exact diagonal conjugations in the periodic scheme, and the kinetic
/// term is a clean 2d+1-point Laplacian (no spurious checkerboard band).
struct GridOperator {
  GridSpec grid;
  double hbar = 0.1;
  double mu = 0.0;
  bool is_real = true;  // no magnetic phases
  linalg::SparseC H;
  std::string provenance;

  linalg::MatrixC dense() const { return linalg::MatrixC(H); }
  linalg::SparseR real_part_sparse() const;
  /// diagonal sample of a scalar field on the grid nodes
  linalg::VectorR sample_field(const ScalarField& f) const;
};

GridOperator discretize(const ScalarField& V, const VectorField& a, double mu,
                        double hbar, const GridSpec& grid);

struct SpectralData {
  linalg::VectorR values;   // ascending, all <= lambda_cut
  linalg::MatrixC vectors;  // orthonormal columns
  double lambda_cut = 0.0;
  double residual_bound = 0.0;
  bool complete = false;    // certificate: count checked against cut
  long dim = 0;

  /// <psi_n, phi psi_n> with phi acting by multiplication
  double weight(Eigen::Index n, const linalg::VectorR& phi_diag) const;
};

/// All eigenpairs with lambda <= lambda_cut. Dense path for total() <=
/// dense_limit; sparse Chebyshev-filtered path otherwise (real operators
/// only). Completeness is certified by the full spectrum (dense), by LDLT
/// inertia when a factorization is feasible, and by the Ritz margin
/// otherwise.
SpectralData eigensolve_below(const GridOperator& op, double lambda_cut,
                              double tol = 1e-9, long dense_limit = 4096,
                              int count_hint = 32);

/// Tr[phi g_gamma(H)] from computed spectral data; requires lambda_cut >= 0.
double localized_trace(const SpectralData& spec, const GridOperator& op,
                       const ScalarField& phi, double gamma);

struct LocalPairing {
  GridOperator primary;    // the ambient operator (tampered outside Omega)
  GridOperator local;      // the magnetic Schrodinger model
  std::array<double, 3> omega_center{};
  double omega_radius = 0.0;
  double buffer = 0.0;
};

/// primary = discretization of V + tamper (tamper supported outside the
/// buffer neighborhood of the Omega ball); rows over interior nodes agree
/// with the local model exactly.
LocalPairing make_local_pair(const ScalarField& V, const VectorField& a,
                             double mu, double hbar, const GridSpec& grid,
                             const std::array<double, 3>& omega_center,
                             double omega_radius, double buffer,
                             const ScalarField& tamper);

/// Largest row mismatch over nodes strictly inside Omega (agreement audit).
double local_pair_mismatch(const LocalPairing& pair);

struct AlmostAnalytic {
  SmoothFunction f;
  int order = 8;
  double strip_flat = 0.5;  // cutoff chi(y): 1 below, 0 above strip_top
  double strip_top = 1.0;

  std::complex<double> extension(double x, double y) const;
  std::complex<double> dbar(double x, double y) const;
  /// sampled sup of |dbar f~| / |Im z|^order over the strip
  double measured_constant(int samples = 1000) const;
};

AlmostAnalytic almost_analytic_extension(const SmoothFunction& f, int order);

/// Helffer-Sjostrand functional calculus by contour quadrature over the
/// strip, resolvents via sparse LU. Dyadic refinement toward the real
/// axis; the integrand vanishes like |Im z|^{order-1} there.
linalg::MatrixC hs_apply(const GridOperator& op, const SmoothFunction& f,
                         int order, double contour_tol);

struct SmoothedDensity {
  double eigen_sum = 0.0;  // sum_n f(l_n) chi_hbar(l_n - s) <psi phi psi>
  double oracle = 0.0;     // (2 pi hbar)^{-d} f(s) d/ds Vol_phi(s)
};

/// Pointwise smoothed spectral density against the co-area oracle.
/// Refuses (throws) when the non-critical condition fails on supp phi for
/// levels in the f-window.
SmoothedDensity smoothed_density(const SpectralData& spec, const GridOperator& op,
                                 const ScalarField& phi, const SmoothFunction& f,
                                 const std::function<double(double)>& chi_hbar,
                                 double s, const ScalarField& V,
                                 double noncritical_level);

/// Trace norm of phi1 f(H) phi2 for separated localizers.
double localization_norms(const linalg::HermitianEig& eig,
                          const GridOperator& op, const SmoothFunction& f,
                          const ScalarField& phi1, const ScalarField& phi2,
                          double min_separation);

struct MollifiedGap {
  double trace_norm_diff = 0.0;  // |phi (f(H_V) - f(H_Veps))|_1
  double op_norm_diff = 0.0;     // |f(H_V) - f(H_Veps)|_op
  double sup_potential_gap = 0.0;
};

MollifiedGap mollified_operator_gap(const linalg::HermitianEig& eig_V,
                                    const linalg::HermitianEig& eig_Veps,
                                    const GridOperator& op_V,
                                    const SmoothFunction& f,
                                    const ScalarField& phi,
                                    const linalg::VectorR& v_diag,
                                    const linalg::VectorR& veps_diag);

/// Dense binary dump: 32-byte header {"WLAB", u32 d, u32 N, f64 hbar,
/// f64 mu, 4 pad bytes}, then row-major complex pairs, little-endian.
void dump_operator(const GridOperator& op, const std::string& path);
GridOperator load_operator(const std::string& path);

}  // namespace wlab::schrodgrid
