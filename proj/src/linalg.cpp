#include "wlab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "wlab/numerics.hpp"

#if defined(WLAB_HAVE_LAPACKE)
#define LAPACK_COMPLEX_CPP
#include <lapacke.h>
#endif

namespace wlab::linalg {

namespace {

bool is_real_matrix(const MatrixC& H) {
  for (Eigen::Index j = 0; j < H.cols(); ++j)
    for (Eigen::Index i = 0; i < H.rows(); ++i)
      if (H(i, j).imag() != 0.0) return false;
  return true;
}

}  // namespace

HermitianEig eig_hermitian(const MatrixC& H) {
  HermitianEig out;
#if defined(WLAB_HAVE_LAPACKE)
  const lapack_int n = static_cast<lapack_int>(H.rows());
  out.values.resize(n);
  if (is_real_matrix(H)) {
    MatrixR work = H.real();
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, work.data(), n,
                       out.values.data());
    if (info != 0) throw std::runtime_error("dsyevd failed");
    out.vectors = work.cast<Complex>();
    return out;
  }
  MatrixC work = H;
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'V', 'L', n,
      reinterpret_cast<lapack_complex_double*>(work.data()), n,
      out.values.data());
  if (info != 0) throw std::runtime_error("zheevd failed");
  out.vectors = std::move(work);
#else
  Eigen::SelfAdjointEigenSolver<MatrixC> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("dense eigensolver failed");
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
#endif
  return out;
}

VectorR eigvals_hermitian(const MatrixC& H) {
#if defined(WLAB_HAVE_LAPACKE)
  const lapack_int n = static_cast<lapack_int>(H.rows());
  VectorR vals(n);
  if (is_real_matrix(H)) {
    MatrixR work = H.real();
    const lapack_int info =
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, vals.data());
    if (info != 0) throw std::runtime_error("dsyevd failed");
    return vals;
  }
  MatrixC work = H;
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'N', 'L', n,
      reinterpret_cast<lapack_complex_double*>(work.data()), n, vals.data());
  if (info != 0) throw std::runtime_error("zheevd failed");
  return vals;
#else
  Eigen::SelfAdjointEigenSolver<MatrixC> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
#endif
}

MatrixC apply_spectral_function(const HermitianEig& eig,
                                const std::function<double(double)>& f) {
  const auto n = eig.values.size();
  VectorR fv(n);
  for (Eigen::Index i = 0; i < n; ++i) fv[i] = f(eig.values[i]);
  return eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
}

double operator_norm(const MatrixC& A, int max_iter, double tol) {
  if (A.size() == 0) return 0.0;
  const auto n = A.cols();
  rng::SplitMix64 gen(0x5eedULL);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = Complex(gen.uniform(-1.0, 1.0), gen.uniform(-1.0, 1.0));
  v.normalize();
  double prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXcd w = A.adjoint() * (A * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double cur = std::sqrt(norm);
    if (std::abs(cur - prev) <= tol * std::max(1.0, cur)) return cur;
    prev = cur;
  }
  return prev;
}

double trace_norm(const MatrixC& A) {
  if (A.size() == 0) return 0.0;
  // singular values = sqrt of the spectrum of A^* A
  MatrixC gram = A.adjoint() * A;
  VectorR ev = eigvals_hermitian(gram);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    sum += std::sqrt(std::max(0.0, ev[i]));
  return sum;
}

int inertia_below(const SparseR& H, double shift) {
  SparseR shifted = H;
  for (int k = 0; k < shifted.outerSize(); ++k)
    shifted.coeffRef(k, k) -= shift;
  Eigen::SimplicialLDLT<SparseR> ldlt(shifted);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("inertia_below: LDLT factorization failed");
  const auto& D = ldlt.vectorD();
  int count = 0;
  for (Eigen::Index i = 0; i < D.size(); ++i)
    if (D[i] < 0.0) ++count;
  return count;
}

namespace {

// y = T_m(scaled H) X by the three-term recurrence; spectrum window
// [filter_lo, filter_hi] is mapped to [-1, 1] so everything below
// filter_lo is amplified.
MatrixR cheb_filter(const SparseR& H, const MatrixR& X, int degree,
                    double filter_lo, double filter_hi) {
  const double c = 0.5 * (filter_hi + filter_lo);
  const double h = 0.5 * (filter_hi - filter_lo);
  MatrixR t0 = X;
  MatrixR t1 = (H * X - c * X) / h;
  for (int k = 2; k <= degree; ++k) {
    MatrixR t2 = 2.0 / h * (H * t1 - c * t1) - t0;
    t0.swap(t1);
    t1.swap(t2);
  }
  return t1;
}

}  // namespace

SparseEigResult eig_sparse_below(const SparseR& H, const SparseEigOptions& opt) {
  const Eigen::Index n = H.rows();
  // Gershgorin upper bound
  double upper = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < H.outerSize(); ++k) {
    double diag = 0.0, off = 0.0;
    for (SparseR::InnerIterator it(H, k); it; ++it) {
      if (it.row() == it.col())
        diag = it.value();
      else
        off += std::abs(it.value());
    }
    upper = std::max(upper, diag + off);
  }

  int block = std::min<Eigen::Index>(std::max(opt.initial_block, 8), n);
  rng::SplitMix64 gen(opt.seed);
  MatrixR X(n, block);
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = gen.uniform(-1.0, 1.0);

  SparseEigResult res;
  const double span = upper - opt.lambda_min_hint;
  double filter_lo = opt.lambda_cut + 0.02 * span;

  for (int pass = 1; pass <= opt.max_passes; ++pass) {
    res.iterations = pass;
    X = cheb_filter(H, X, opt.cheb_degree, filter_lo, upper);
    // orthonormalize
    Eigen::HouseholderQR<MatrixR> qr(X);
    X = qr.householderQ() * MatrixR::Identity(n, block);
    // Rayleigh-Ritz
    MatrixR HX = H * X;
    MatrixR S = X.transpose() * HX;
    Eigen::SelfAdjointEigenSolver<MatrixR> small(S);
    X = X * small.eigenvectors();
    HX = H * X;

    const VectorR ritz = small.eigenvalues();
    // converged pairs at or below the cut
    int below = 0;
    double max_res = 0.0;
    for (Eigen::Index j = 0; j < block; ++j) {
      if (ritz[j] > opt.lambda_cut) break;
      ++below;
      const double r = (HX.col(j) - ritz[j] * X.col(j)).norm();
      max_res = std::max(max_res, r);
    }
    const bool have_margin = below < block;
    if (have_margin && max_res <= opt.tol) {
      res.values = ritz.head(below);
      res.vectors = X.leftCols(below);
      res.max_residual = max_res;
      res.next_above = below < block ? ritz[below] : ritz[block - 1];
      return res;
    }
    if (!have_margin) {
      // the whole block sits below the cut: grow it and continue
      const int extra = std::max(8, block / 2);
      MatrixR grown(n, block + extra);
      grown.leftCols(block) = X;
      for (int j = 0; j < extra; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
          grown(i, block + j) = gen.uniform(-1.0, 1.0);
      block = block + extra;
      if (block > n) block = static_cast<int>(n);
      X = grown.leftCols(block);
    }
  }
  throw std::runtime_error("eig_sparse_below: no convergence within pass limit");
}

}  // namespace wlab::linalg
