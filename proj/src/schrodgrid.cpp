#include "wlab/schrodgrid.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "wlab/numerics.hpp"
#include "wlab/specfun.hpp"

namespace wlab::schrodgrid {

namespace {

const double kPi = std::acos(-1.0);

// multi-index <-> flat index, row-major over axes
long flat_index(const int* idx, int N, int d) {
  long f = 0;
  for (int j = 0; j < d; ++j) f = f * N + idx[j];
  return f;
}

}  // namespace

linalg::SparseR GridOperator::real_part_sparse() const {
  linalg::SparseR out(H.rows(), H.cols());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(H.nonZeros());
  for (int k = 0; k < H.outerSize(); ++k)
    for (linalg::SparseC::InnerIterator it(H, k); it; ++it)
      trip.emplace_back(it.row(), it.col(), it.value().real());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

linalg::VectorR GridOperator::sample_field(const ScalarField& f) const {
  const int d = grid.d, N = grid.N;
  linalg::VectorR out(grid.total());
  int idx[3] = {0, 0, 0};
  double x[3] = {0, 0, 0};
  for (long t = 0; t < grid.total(); ++t) {
    long r = t;
    for (int j = d - 1; j >= 0; --j) {
      idx[j] = static_cast<int>(r % N);
      r /= N;
    }
    for (int j = 0; j < d; ++j) x[j] = grid.node(idx[j]);
    out[t] = f.value(x);
  }
  return out;
}

GridOperator discretize(const ScalarField& V, const VectorField& a, double mu,
                        double hbar, const GridSpec& grid) {
  const int d = grid.d, N = grid.N;
  if (V.dim != d || a.dim != d) throw DomainError("discretize: dimension mismatch");
  const double h = grid.hx();
  const double c = hbar * hbar / (h * h);
  const bool periodic = grid.boundary == GridSpec::Boundary::periodic;

  GridOperator op;
  op.grid = grid;
  op.hbar = hbar;
  op.mu = mu;
  op.is_real = (mu == 0.0);
  op.provenance = periodic ? "peierls-periodic" : "link-dirichlet";

  const long total = grid.total();
  std::vector<Eigen::Triplet<linalg::Complex>> trip;
  trip.reserve(total * (2 * d + 1));

  // diagonal: potential + wall terms added below
  {
    linalg::VectorR vdiag = op.sample_field(V);
    for (long t = 0; t < total; ++t)
      trip.emplace_back(t, t, linalg::Complex(vdiag[t], 0.0));
  }

  // kinetic term edge by edge: |e^{i theta} u(head) - u(tail)|^2 with the
  // link phase theta = -(mu/hbar) Int_edge a_j dl
  int idx[3] = {0, 0, 0};
  double x[3] = {0, 0, 0};
  const auto& rule = quad::gauss_legendre(8);
  for (long t = 0; t < total; ++t) {
    long r = t;
    for (int j = d - 1; j >= 0; --j) {
      idx[j] = static_cast<int>(r % N);
      r /= N;
    }
    for (int j = 0; j < d; ++j) x[j] = grid.node(idx[j]);
    for (int axis = 0; axis < d; ++axis) {
      const bool wraps = idx[axis] == N - 1;
      if (wraps && !periodic) {
        // wall edges on both sides of the axis
        trip.emplace_back(t, t, linalg::Complex(c, 0.0));
        continue;
      }
      int nidx[3] = {idx[0], idx[1], idx[2]};
      nidx[axis] = wraps ? 0 : idx[axis] + 1;
      const long head = flat_index(nidx, N, d);

      double theta = 0.0;
      if (mu != 0.0) {
        // Int a_axis dl along the edge, 8-point Gauss-Legendre
        double integral = 0.0;
        double y[3] = {x[0], x[1], x[2]};
        for (size_t q = 0; q < rule.nodes.size(); ++q) {
          y[axis] = x[axis] + 0.5 * h * (1.0 + rule.nodes[q]);
          integral += 0.5 * h * rule.weights[q] * a.components[axis].value(y);
        }
        theta = -(mu / hbar) * integral;
      }
      const linalg::Complex phase = std::polar(1.0, theta);
      trip.emplace_back(t, t, linalg::Complex(c, 0.0));
      trip.emplace_back(head, head, linalg::Complex(c, 0.0));
      trip.emplace_back(head, t, -c * phase);
      trip.emplace_back(t, head, -c * std::conj(phase));
    }
  }
  // Dirichlet: the missing left-wall edges (node 0 on each axis)
  if (!periodic) {
    for (long t = 0; t < total; ++t) {
      long r = t;
      for (int j = d - 1; j >= 0; --j) {
        idx[j] = static_cast<int>(r % N);
        r /= N;
      }
      for (int axis = 0; axis < d; ++axis)
        if (idx[axis] == 0) trip.emplace_back(t, t, linalg::Complex(c, 0.0));
    }
  }

  op.H.resize(total, total);
  op.H.setFromTriplets(trip.begin(), trip.end());
  op.H.makeCompressed();
  return op;
}

double SpectralData::weight(Eigen::Index n, const linalg::VectorR& phi_diag) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < phi_diag.size(); ++i)
    acc += std::norm(vectors(i, n)) * phi_diag[i];
  return acc;
}

SpectralData eigensolve_below(const GridOperator& op, double lambda_cut,
                              double tol, long dense_limit, int count_hint) {
  SpectralData out;
  out.lambda_cut = lambda_cut;
  out.dim = op.grid.total();

  if (out.dim <= dense_limit) {
    auto eig = linalg::eig_hermitian(op.dense());
    int count = 0;
    while (count < eig.values.size() && eig.values[count] <= lambda_cut) ++count;
    out.values = eig.values.head(count);
    out.vectors = eig.vectors.leftCols(count);
    out.complete = true;  // full spectrum computed
    double res = 0.0;
    if (count > 0) {
      linalg::MatrixC R = op.H * out.vectors - out.vectors * out.values.asDiagonal();
      res = R.colwise().norm().maxCoeff();
    }
    out.residual_bound = res;
    return out;
  }

  if (!op.is_real)
    throw DomainError("eigensolve_below: sparse path requires a real operator");
  linalg::SparseR Hr = op.real_part_sparse();
  linalg::SparseEigOptions opts;
  opts.lambda_cut = lambda_cut;
  opts.initial_block = count_hint + 16;
  opts.tol = tol;
  double vmin = 0.0;
  for (int k = 0; k < Hr.outerSize(); ++k) vmin = std::min(vmin, Hr.coeff(k, k));
  opts.lambda_min_hint = vmin;
  auto res = linalg::eig_sparse_below(Hr, opts);
  out.values = res.values;
  out.vectors = res.vectors.cast<linalg::Complex>();
  out.residual_bound = res.max_residual;

  if (out.dim <= 40000) {
    const int inertia = linalg::inertia_below(Hr, lambda_cut);
    out.complete = (inertia == static_cast<int>(out.values.size()));
  } else {
    out.complete = res.next_above > lambda_cut + 10.0 * res.max_residual;
  }
  return out;
}

double localized_trace(const SpectralData& spec, const GridOperator& op,
                       const ScalarField& phi, double gamma) {
  if (spec.lambda_cut < 0.0)
    throw DomainError("localized_trace: spectral band incomplete above " +
                      std::to_string(spec.lambda_cut) + ", need lambda_cut >= 0");
  if (!spec.complete)
    throw DomainError("localized_trace: eigensolve did not certify completeness");
  const linalg::VectorR phi_diag = op.sample_field(phi);
  double acc = 0.0;
  for (Eigen::Index n = 0; n < spec.values.size(); ++n) {
    const double g = specfun::eval_g_gamma(gamma, spec.values[n]);
    if (g != 0.0) acc += g * spec.weight(n, phi_diag);
  }
  return acc;
}

LocalPairing make_local_pair(const ScalarField& V, const VectorField& a,
                             double mu, double hbar, const GridSpec& grid,
                             const std::array<double, 3>& omega_center,
                             double omega_radius, double buffer,
                             const ScalarField& tamper) {
  // precondition: tamper vanishes on the buffered Omega ball
  {
    const int d = grid.d, N = grid.N;
    int idx[3] = {0, 0, 0};
    double x[3] = {0, 0, 0};
    for (long t = 0; t < grid.total(); ++t) {
      long r = t;
      for (int j = d - 1; j >= 0; --j) {
        idx[j] = static_cast<int>(r % N);
        r /= N;
      }
      double dist2 = 0.0;
      for (int j = 0; j < d; ++j) {
        x[j] = grid.node(idx[j]);
        dist2 += (x[j] - omega_center[j]) * (x[j] - omega_center[j]);
      }
      const double reach = omega_radius + buffer;
      if (dist2 < reach * reach && tamper.value(x) != 0.0)
        throw DomainError("make_local_pair: tamper reaches into the buffer");
    }
  }
  LocalPairing pair;
  pair.local = discretize(V, a, mu, hbar, grid);
  pair.primary = discretize(field_sum(V, tamper), a, mu, hbar, grid);
  pair.omega_center = omega_center;
  pair.omega_radius = omega_radius;
  pair.buffer = buffer;
  return pair;
}

double local_pair_mismatch(const LocalPairing& pair) {
  const auto& grid = pair.primary.grid;
  const int d = grid.d, N = grid.N;
  linalg::MatrixC diff = pair.primary.dense() - pair.local.dense();
  double worst = 0.0;
  int idx[3] = {0, 0, 0};
  for (long t = 0; t < grid.total(); ++t) {
    long r = t;
    for (int j = d - 1; j >= 0; --j) {
      idx[j] = static_cast<int>(r % N);
      r /= N;
    }
    double dist2 = 0.0;
    for (int j = 0; j < d; ++j) {
      const double x = grid.node(idx[j]);
      dist2 += (x - pair.omega_center[j]) * (x - pair.omega_center[j]);
    }
    if (dist2 < pair.omega_radius * pair.omega_radius)
      worst = std::max(worst, diff.row(t).cwiseAbs().maxCoeff());
  }
  return worst;
}

namespace {

// septic smoothstep: C^3, s(0)=0, s(1)=1, s'(u) = 140 u^3 (1-u)^3.
// Polynomial cutoffs keep the strip-fringe integrand Gauss-friendly.
double smoothstep7(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * u * u * (35.0 + u * (-84.0 + u * (70.0 - 20.0 * u)));
}

double smoothstep7_deriv(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double a = u * (1.0 - u);
  return 140.0 * a * a * a;
}

}  // namespace

std::complex<double> AlmostAnalytic::extension(double x, double y) const {
  const double ay = std::abs(y);
  if (ay >= strip_top) return {0.0, 0.0};
  double chi = 1.0;
  if (ay > strip_flat)
    chi = 1.0 - smoothstep7((ay - strip_flat) / (strip_top - strip_flat));
  std::complex<double> acc(0.0, 0.0);
  std::complex<double> iy(0.0, y);
  std::complex<double> pw(1.0, 0.0);
  double fact = 1.0;
  for (int n = 0; n <= order; ++n) {
    if (n > 0) {
      pw *= iy;
      fact *= n;
    }
    acc += f.derivative(n, x) * pw / fact;
  }
  return chi * acc;
}

std::complex<double> AlmostAnalytic::dbar(double x, double y) const {
  const double ay = std::abs(y);
  if (ay >= strip_top) return {0.0, 0.0};
  double chi = 1.0, dchi = 0.0;
  if (ay > strip_flat) {
    const double u = (ay - strip_flat) / (strip_top - strip_flat);
    chi = 1.0 - smoothstep7(u);
    dchi = -smoothstep7_deriv(u) / (strip_top - strip_flat);
    if (y < 0.0) dchi = -dchi;
  }
  // dbar(chi * sum) = chi * f^{(order+1)}(x) (iy)^order / order!
  //                  + (i/2) chi'(y) * sum
  std::complex<double> iy(0.0, y);
  std::complex<double> pw(1.0, 0.0);
  double fact = 1.0;
  std::complex<double> series(0.0, 0.0);
  for (int n = 0; n <= order; ++n) {
    if (n > 0) {
      pw *= iy;
      fact *= n;
    }
    series += f.derivative(n, x) * pw / fact;
  }
  // after the loop pw = (iy)^order, fact = order!
  std::complex<double> lead =
      0.5 * chi * f.derivative(order + 1, x) * pw / fact;
  std::complex<double> cut = 0.5 * std::complex<double>(0.0, 1.0) * dchi * series;
  return lead + cut;
}

double AlmostAnalytic::measured_constant(int samples) const {
  rng::SplitMix64 gen(99);
  double worst = 0.0;
  const double xl = f.support_lo(), xh = f.support_hi();
  for (int i = 0; i < samples; ++i) {
    const double x = gen.uniform(xl, xh);
    const double y = std::pow(10.0, gen.uniform(-4.0, 0.0)) *
                     (gen.uniform() < 0.5 ? -1.0 : 1.0) * strip_flat;
    const double v = std::abs(dbar(x, y));
    worst = std::max(worst, v / std::pow(std::abs(y), order));
  }
  return worst;
}

AlmostAnalytic almost_analytic_extension(const SmoothFunction& f, int order) {
  AlmostAnalytic ext;
  ext.f = f;
  ext.order = order;
  return ext;
}

linalg::MatrixC hs_apply(const GridOperator& op, const SmoothFunction& f,
                         int order, double contour_tol) {
  AlmostAnalytic ext = almost_analytic_extension(f, order);
  const long n = op.grid.total();
  const double xl = f.support_lo() - 0.25, xh = f.support_hi() + 0.25;

  // The integrand vanishes like y^{order-1} toward the axis, so the strip
  // is cut at y0 with truncation error O(y0^order); below that nothing is
  // gained. Near the floor the resolvent varies in x on scale y, so each
  // dyadic level gets its own x-panel width ~ y.
  const double y0 = std::min(
      0.4 * ext.strip_flat,
      std::max(0.15, 0.5 * std::pow(contour_tol, 1.0 / std::max(1, order))));

  const int x_nodes = 10, y_nodes = 8;
  const auto& xr = quad::gauss_legendre(x_nodes);
  const auto& yr = quad::gauss_legendre(y_nodes);

  linalg::MatrixC F = linalg::MatrixC::Zero(n, n);
  linalg::MatrixC I = linalg::MatrixC::Identity(n, n);
  linalg::SparseC A = -op.H;
  for (long t = 0; t < n; ++t) A.coeffRef(t, t) += linalg::Complex(0.0, 1.0);
  A.makeCompressed();
  Eigen::SparseLU<linalg::SparseC> lu;
  lu.analyzePattern(A);

  // oscillation scale of f^{(order+1)} over the window
  const double f_scale = (xh - xl) / (4.0 * (order + 2));

  double yb = ext.strip_top;
  while (yb > y0) {
    const double ya = std::max(y0, 0.5 * yb);
    const double panel_w = std::min(0.8 * ya, f_scale);
    const int x_panels =
        std::min(600, static_cast<int>(std::ceil((xh - xl) / panel_w)));
    for (int iy = 0; iy < y_nodes; ++iy) {
      const double y = 0.5 * (ya + yb) + 0.5 * (yb - ya) * yr.nodes[iy];
      const double wy = 0.5 * (yb - ya) * yr.weights[iy];
      for (int px = 0; px < x_panels; ++px) {
        const double xa = xl + (xh - xl) * px / x_panels;
        const double xb = xl + (xh - xl) * (px + 1) / x_panels;
        // skip panels where the extension vanishes
        bool alive = false;
        for (int probe = 0; probe <= 2 && !alive; ++probe)
          alive = std::abs(ext.dbar(xa + 0.5 * probe * (xb - xa), y)) > 1e-300;
        if (!alive) continue;
        for (int ix = 0; ix < x_nodes; ++ix) {
          const double x = 0.5 * (xa + xb) + 0.5 * (xb - xa) * xr.nodes[ix];
          const double wx = 0.5 * (xb - xa) * xr.weights[ix];
          const std::complex<double> df = ext.dbar(x, y);
          if (std::abs(df) < 1e-300) continue;
          A = -op.H;
          for (long t = 0; t < n; ++t)
            A.coeffRef(t, t) += std::complex<double>(x, y);
          lu.factorize(A);
          if (lu.info() != Eigen::Success)
            throw std::runtime_error("hs_apply: resolvent factorization failed");
          linalg::MatrixC R = lu.solve(I);
          const std::complex<double> wgt = wx * wy * df;
          // conjugate-pair accumulation keeps the result Hermitian
          F.noalias() += (-1.0 / kPi) * (wgt * R + std::conj(wgt) * R.adjoint());
        }
      }
    }
    yb = ya;
  }
  return F;
}

SmoothedDensity smoothed_density(const SpectralData& spec, const GridOperator& op,
                                 const ScalarField& phi, const SmoothFunction& f,
                                 const std::function<double(double)>& chi_hbar,
                                 double s, const ScalarField& V,
                                 double noncritical_level) {
  const int d = op.grid.d;
  const double L = op.grid.L;
  // non-critical gate: |nu - V(x)| + hbar^(2/3) >= level for nu in the
  // f-window and x in supp phi, sampled on the operator grid
  {
    const double floor_term = std::pow(op.hbar, 2.0 / 3.0);
    const linalg::VectorR phi_g = op.sample_field(phi);
    const linalg::VectorR v_g = op.sample_field(V);
    double worst = std::numeric_limits<double>::infinity();
    const int nnu = 40;
    for (Eigen::Index i = 0; i < phi_g.size(); ++i) {
      if (phi_g[i] == 0.0) continue;
      for (int k = 0; k < nnu; ++k) {
        const double nu = f.support_lo() +
                          (f.support_hi() - f.support_lo()) * (k + 0.5) / nnu;
        worst = std::min(worst, std::abs(nu - v_g[i]) + floor_term);
      }
    }
    if (worst < noncritical_level)
      throw DomainError("smoothed_density: non-critical condition fails, min " +
                        std::to_string(worst));
  }

  SmoothedDensity out;
  const linalg::VectorR phi_diag = op.sample_field(phi);
  for (Eigen::Index nn = 0; nn < spec.values.size(); ++nn) {
    const double lam = spec.values[nn];
    const double fv = f(lam);
    if (fv == 0.0) continue;
    out.eigen_sum += fv * chi_hbar(lam - s) * spec.weight(nn, phi_diag);
  }

  // co-area oracle: (2 pi hbar)^{-d} f(s) (d/ds) Int vol(B_d) (s-V)_+^{d/2} phi
  const double ball = std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
  auto integrand = [&](const double* x) {
    const double w = phi.value(x);
    if (w == 0.0) return 0.0;
    const double gap = s - V.value(x);
    if (gap <= 0.0) return 0.0;
    return std::pow(gap, 0.5 * d - 1.0) * w;
  };
  double lo[3] = {-L, -L, -L}, hi[3] = {L, L, L};
  const double dvol = quad::integrate_box(d, integrand, lo, hi, 1e-10);
  out.oracle = std::pow(2.0 * kPi * op.hbar, -d) * f(s) * ball * 0.5 * d * dvol;
  return out;
}

double localization_norms(const linalg::HermitianEig& eig,
                          const GridOperator& op, const SmoothFunction& f,
                          const ScalarField& phi1, const ScalarField& phi2,
                          double min_separation) {
  const linalg::VectorR d1 = op.sample_field(phi1);
  const linalg::VectorR d2 = op.sample_field(phi2);
  // support separation audit on the grid (1-D corpus)
  double hi1 = -1e300, lo2 = 1e300, hi2 = -1e300, lo1 = 1e300;
  for (Eigen::Index i = 0; i < d1.size(); ++i) {
    const double x = op.grid.node(static_cast<int>(i));
    if (d1[i] != 0.0) {
      lo1 = std::min(lo1, x);
      hi1 = std::max(hi1, x);
    }
    if (d2[i] != 0.0) {
      lo2 = std::min(lo2, x);
      hi2 = std::max(hi2, x);
    }
  }
  if (hi2 >= lo2 && hi1 >= lo1) {
    const double sep = std::max(lo2 - hi1, lo1 - hi2);
    if (sep < min_separation)
      throw DomainError("localization_norms: supports not separated");
  }
  linalg::MatrixC fH =
      linalg::apply_spectral_function(eig, [&](double t) { return f(t); });
  linalg::MatrixC M = d1.asDiagonal() * fH * d2.asDiagonal();
  return linalg::trace_norm(M);
}

MollifiedGap mollified_operator_gap(const linalg::HermitianEig& eig_V,
                                    const linalg::HermitianEig& eig_Veps,
                                    const GridOperator& op_V,
                                    const SmoothFunction& f,
                                    const ScalarField& phi,
                                    const linalg::VectorR& v_diag,
                                    const linalg::VectorR& veps_diag) {
  auto fn = [&](double t) { return f(t); };
  linalg::MatrixC fV = linalg::apply_spectral_function(eig_V, fn);
  linalg::MatrixC fVe = linalg::apply_spectral_function(eig_Veps, fn);
  linalg::MatrixC diff = fV - fVe;
  MollifiedGap out;
  out.op_norm_diff = linalg::operator_norm(diff);
  const linalg::VectorR phi_diag = op_V.sample_field(phi);
  out.trace_norm_diff = linalg::trace_norm(phi_diag.asDiagonal() * diff);
  out.sup_potential_gap = (v_diag - veps_diag).cwiseAbs().maxCoeff();
  return out;
}

void dump_operator(const GridOperator& op, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("dump_operator: cannot open " + path);
  char header[32] = {0};
  std::memcpy(header, "WLAB", 4);
  const std::uint32_t d32 = static_cast<std::uint32_t>(op.grid.d);
  const std::uint32_t n32 = static_cast<std::uint32_t>(op.grid.N);
  std::memcpy(header + 4, &d32, 4);
  std::memcpy(header + 8, &n32, 4);
  std::memcpy(header + 12, &op.hbar, 8);
  std::memcpy(header + 20, &op.mu, 8);
  out.write(header, 32);
  linalg::MatrixC dense = op.dense();
  const long n = dense.rows();
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      const double re = dense(i, j).real(), im = dense(i, j).imag();
      out.write(reinterpret_cast<const char*>(&re), 8);
      out.write(reinterpret_cast<const char*>(&im), 8);
    }
}

GridOperator load_operator(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_operator: cannot open " + path);
  char header[32];
  in.read(header, 32);
  if (in.gcount() != 32 || std::memcmp(header, "WLAB", 4) != 0)
    throw std::runtime_error("load_operator: bad magic");
  std::uint32_t d32 = 0, n32 = 0;
  std::memcpy(&d32, header + 4, 4);
  std::memcpy(&n32, header + 8, 4);
  GridOperator op;
  op.grid.d = static_cast<int>(d32);
  op.grid.N = static_cast<int>(n32);
  std::memcpy(&op.hbar, header + 12, 8);
  std::memcpy(&op.mu, header + 20, 8);
  const long n = op.grid.total();
  std::vector<Eigen::Triplet<linalg::Complex>> trip;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      double re = 0, im = 0;
      in.read(reinterpret_cast<char*>(&re), 8);
      in.read(reinterpret_cast<char*>(&im), 8);
      if (re != 0.0 || im != 0.0) trip.emplace_back(i, j, linalg::Complex(re, im));
    }
  op.H.resize(n, n);
  op.H.setFromTriplets(trip.begin(), trip.end());
  op.is_real = op.mu == 0.0;
  return op;
}

}  // namespace wlab::schrodgrid
