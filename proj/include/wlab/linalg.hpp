#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <functional>

namespace wlab::linalg {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using MatrixR = Eigen::MatrixXd;
using VectorR = Eigen::VectorXd;
using SparseR = Eigen::SparseMatrix<double>;
using SparseC = Eigen::SparseMatrix<Complex>;

struct HermitianEig {
  VectorR values;   // ascending
  MatrixC vectors;  // columns
};

/// Dense Hermitian eigendecomposition (LAPACK when available).
HermitianEig eig_hermitian(const MatrixC& H);

/// Eigenvalues only; cheaper than the full decomposition.
VectorR eigvals_hermitian(const MatrixC& H);

/// f applied through the spectral decomposition: U f(diag) U^*.
MatrixC apply_spectral_function(const HermitianEig& eig,
                                const std::function<double(double)>& f);

/// Largest singular value by power iteration on A^* A; deterministic start.
double operator_norm(const MatrixC& A, int max_iter = 300, double tol = 1e-13);

/// Sum of singular values via the spectrum of A^* A.
double trace_norm(const MatrixC& A);

/// Count of eigenvalues strictly below `shift` from the LDLT inertia.
int inertia_below(const SparseR& H, double shift);

struct SparseEigOptions {
  double lambda_cut = 0.0;  // compute everything at or below this level
  int initial_block = 32;   // starting subspace size (grown on demand)
  double tol = 1e-8;        // residual tolerance |Hx - lambda x|
  int cheb_degree = 60;
  int max_passes = 60;
  std::uint64_t seed = 12345;
  double lambda_min_hint = 0.0;  // lower spectral bound (e.g. min V)
};

struct SparseEigResult {
  VectorR values;    // all eigenvalues <= lambda_cut, ascending
  MatrixR vectors;   // matching columns, orthonormal
  double max_residual = 0.0;
  double next_above = 0.0;  // first Ritz value above the cut (margin evidence)
  int iterations = 0;
};

/// All eigenpairs below lambda_cut of a sparse symmetric matrix via
/// Chebyshev-filtered subspace iteration. The block is grown until the
/// first Ritz value above the cut is cleanly separated, so the count is
/// complete at the returned residual level.
SparseEigResult eig_sparse_below(const SparseR& H, const SparseEigOptions& opt);

}  // namespace wlab::linalg
