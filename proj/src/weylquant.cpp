#include "wlab/weylquant.hpp"

#include <cmath>

#include "wlab/numerics.hpp"

namespace wlab::weylquant {

namespace {
const double kPi = std::acos(-1.0);
}

double PhaseGrid::p_edge() const { return kPi * hbar / hx(); }

std::vector<double> PhaseGrid::xs() const {
  std::vector<double> v(N);
  for (int m = 0; m < N; ++m) v[m] = -L + m * hx();
  return v;
}

std::vector<double> PhaseGrid::ps() const {
  std::vector<double> v(N);
  for (int k = 0; k < N; ++k) v[k] = kPi * hbar / L * (k - N / 2);
  return v;
}

void PhaseGrid::require_resolution(double p_need) const {
  if ((N & (N - 1)) != 0) throw DomainError("PhaseGrid: N must be a power of two");
  if (p_edge() < p_need)
    throw DomainError("PhaseGrid: momentum grid too coarse (aliasing)");
}

namespace {

// in-place radix-2 FFT with sign +1 in the exponent, no normalization
void fft_plus(std::vector<linalg::Complex>& a) {
  const int n = static_cast<int>(a.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * kPi / len;
    const linalg::Complex wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      linalg::Complex w(1.0, 0.0);
      for (int k = 0; k < len / 2; ++k) {
        const linalg::Complex u = a[i + k];
        const linalg::Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Torus midpoint in half-step units: the midpoint of the SHORTEST path
// from n to m. At the antipodal distance |m-n| = N/2 the two candidates
// are averaged, which keeps real symbols exactly Hermitian.
struct TorusMid {
  int s[2];       // midpoint indices in half-steps, wrapped to [0, 2N)
  double w[2];    // weights
  int count = 1;
};

TorusMid torus_midpoint(int m, int n, int N) {
  TorusMid out;
  int j = m - n;
  while (j > N / 2) j -= N;
  while (j < -N / 2) j += N;
  if (std::abs(j) == N / 2) {
    const int s1 = ((2 * n + j) % (2 * N) + 2 * N) % (2 * N);
    const int s2 = ((2 * n - j) % (2 * N) + 2 * N) % (2 * N);
    out.count = 2;
    out.s[0] = s1;
    out.s[1] = s2;
    out.w[0] = out.w[1] = 0.5;
    return out;
  }
  out.s[0] = ((2 * n + j) % (2 * N) + 2 * N) % (2 * N);
  out.w[0] = 1.0;
  return out;
}

}  // namespace

QuantizedOperator weyl_quantize(const RoughSymbol& a, const PhaseGrid& grid) {
  if (a.d != grid.d) throw DomainError("weyl_quantize: dimension mismatch");
  const int N = grid.N;
  const auto ps = grid.ps();
  const double hx = grid.hx();
  // twiddle table: e^{2 pi i j / N}, j = 0..N-1
  std::vector<linalg::Complex> tw(N);
  for (int j = 0; j < N; ++j)
    tw[j] = std::polar(1.0, 2.0 * kPi * j / N);

  QuantizedOperator out;
  out.grid = grid;

  if (grid.d == 1) {
    // momentum DFT cached per midpoint half-step:
    // F[s][j] = (1/N) sum_k a(x_s, p_k) e^{2 pi i (k - N/2) j / N}
    //         = (-1)^j (1/N) [FFT_+ of the row]_j
    linalg::MatrixC F(2 * N, N);
    std::vector<linalg::Complex> row(N);
    for (int s = 0; s < 2 * N; ++s) {
      double mid = -grid.L + 0.5 * s * hx;
      if (mid >= grid.L) mid -= 2.0 * grid.L;
      bool any = false;
      for (int k = 0; k < N; ++k) {
        const double v = a.value(&mid, &ps[k]);
        row[k] = v;
        any = any || v != 0.0;
      }
      if (!any) {
        F.row(s).setZero();
        continue;
      }
      fft_plus(row);
      for (int j = 0; j < N; ++j)
        F(s, j) = (j % 2 ? -1.0 : 1.0) * row[j] / static_cast<double>(N);
    }
    out.M.resize(N, N);
    for (int m = 0; m < N; ++m)
      for (int n = 0; n < N; ++n) {
        const TorusMid tm = torus_midpoint(m, n, N);
        const int j = ((m - n) % N + N) % N;
        linalg::Complex acc = tm.w[0] * F(tm.s[0], j);
        if (tm.count == 2) acc += tm.w[1] * F(tm.s[1], j);
        out.M(m, n) = acc;
      }
    return out;
  }

  // d == 2: separable momentum DFT cached per midpoint half-step pair
  const int total = N * N;
  out.M.resize(total, total);
  linalg::MatrixC W(N, N);
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k)
      W(j, k) = tw[(((k - N / 2) * j) % N + N) % N];

  std::vector<std::vector<linalg::MatrixC>> cache(
      2 * N, std::vector<linalg::MatrixC>(2 * N));
  for (int sx = 0; sx < 2 * N; ++sx) {
    double mx = -grid.L + 0.5 * sx * hx;
    if (mx >= grid.L) mx -= 2.0 * grid.L;
    for (int sy = 0; sy < 2 * N; ++sy) {
      double my = -grid.L + 0.5 * sy * hx;
      if (my >= grid.L) my -= 2.0 * grid.L;
      linalg::MatrixC A(N, N);
      const double xv[2] = {mx, my};
      for (int kx = 0; kx < N; ++kx)
        for (int ky = 0; ky < N; ++ky) {
          const double pv[2] = {ps[kx], ps[ky]};
          A(kx, ky) = a.value(xv, pv);
        }
      cache[sx][sy] = W * A * W.transpose() / static_cast<double>(N * N);
    }
  }
  for (int mx = 0; mx < N; ++mx)
    for (int my = 0; my < N; ++my) {
      const int row = mx * N + my;
      for (int nx = 0; nx < N; ++nx) {
        const TorusMid tx = torus_midpoint(mx, nx, N);
        const int jx = ((mx - nx) % N + N) % N;
        for (int ny = 0; ny < N; ++ny) {
          const TorusMid ty = torus_midpoint(my, ny, N);
          const int jy = ((my - ny) % N + N) % N;
          linalg::Complex acc(0.0, 0.0);
          for (int ix = 0; ix < tx.count; ++ix)
            for (int iy = 0; iy < ty.count; ++iy)
              acc += tx.w[ix] * ty.w[iy] * cache[tx.s[ix]][ty.s[iy]](jx, jy);
          out.M(row, nx * N + ny) = acc;
        }
      }
    }
  return out;
}

TraceCheck trace_check(const RoughSymbol& a, const PhaseGrid& grid) {
  QuantizedOperator A = weyl_quantize(a, grid);
  TraceCheck out;
  out.matrix_trace = A.M.trace().real();
  if (grid.d == 1) {
    const double P = grid.p_edge();
    auto integrand = [&](const double* q) {
      return a.value(&q[0], &q[1]);
    };
    const double lo[2] = {-grid.L, -P}, hi[2] = {grid.L, P};
    out.integral = quad::integrate_box(2, integrand, lo, hi, 1e-10) /
                   (2.0 * kPi * grid.hbar);
  } else {
    // 4-D tensor quadrature with fixed panels; symbols used here are smooth
    const double P = grid.p_edge();
    auto inner = [&](const double* x) {
      auto f = [&](const double* p) { return a.value(x, p); };
      const double lo[2] = {-P, -P}, hi[2] = {P, P};
      return quad::integrate_box_fixed(2, f, lo, hi, 4, 10);
    };
    const double lo[2] = {-grid.L, -grid.L}, hi[2] = {grid.L, grid.L};
    out.integral = quad::integrate_box_fixed(2, inner, lo, hi, 4, 10) /
                   std::pow(2.0 * kPi * grid.hbar, 2);
  }
  const double scale = std::max(std::abs(out.integral), 1e-300);
  out.rel_err = std::abs(out.matrix_trace - out.integral) / scale;
  return out;
}

ComposeResiduals compose_residuals(const RoughSymbol& a, const RoughSymbol& b,
                                   const PhaseGrid& grid) {
  if (!a.deriv || !b.deriv)
    throw DomainError("compose_residuals: derivative oracles required");
  QuantizedOperator A = weyl_quantize(a, grid);
  QuantizedOperator B = weyl_quantize(b, grid);

  RoughSymbol ab;
  ab.d = a.d;
  auto av = a.value, bv = b.value;
  ab.value = [av, bv](const double* x, const double* p) {
    return av(x, p) * bv(x, p);
  };
  QuantizedOperator AB = weyl_quantize(ab, grid);

  // c1 = (-i/2) sum_j (d_p_j a d_x_j b - d_x_j a d_p_j b); real symbols give
  // a purely imaginary c1, so quantize the real bracket and twist by -i/2.
  RoughSymbol bracket;
  bracket.d = a.d;
  const int dd = a.d;
  auto ad = a.deriv, bd = b.deriv;
  bracket.value = [ad, bd, dd](const double* x, const double* p) {
    double acc = 0.0;
    for (int j = 0; j < dd; ++j) {
      int ax[2] = {0, 0}, ap[2] = {0, 0};
      ap[j] = 1;
      const double a_p = ad(ax, ap, x, p);
      const double b_x = bd(ap, ax, x, p);  // swapped: x-order in first slot
      const double a_x = ad(ap, ax, x, p);
      const double b_p = bd(ax, ap, x, p);
      acc += a_p * b_x - a_x * b_p;
    }
    return acc;
  };
  QuantizedOperator C1 = weyl_quantize(bracket, grid);

  linalg::MatrixC prod = A.M * B.M;
  ComposeResiduals out;
  out.r0 = linalg::operator_norm(prod - AB.M);
  linalg::MatrixC corr =
      prod - AB.M - grid.hbar * linalg::Complex(0.0, -0.5) * C1.M;
  out.r1 = linalg::operator_norm(corr);
  return out;
}

DecayReport disjoint_support_norms(const RoughSymbol& theta1,
                                   const RoughSymbol& theta2, PhaseGrid grid,
                                   const std::vector<double>& hbar_sweep,
                                   double min_separation) {
  // measure support separation on the grid (x-projection)
  const auto xs = grid.xs();
  const auto ps = grid.ps();
  double lo1 = 1e300, hi1 = -1e300, lo2 = 1e300, hi2 = -1e300;
  for (double x : xs)
    for (double p : ps) {
      if (std::abs(theta1.value(&x, &p)) > 1e-14) {
        lo1 = std::min(lo1, x);
        hi1 = std::max(hi1, x);
      }
      if (std::abs(theta2.value(&x, &p)) > 1e-14) {
        lo2 = std::min(lo2, x);
        hi2 = std::max(hi2, x);
      }
    }
  const double sep = std::max(lo2 - hi1, lo1 - hi2);
  if (hi2 >= lo2 && sep < min_separation)
    throw DomainError("disjoint_support_norms: supports not separated");

  DecayReport rep;
  for (double hb : hbar_sweep) {
    grid.hbar = hb;
    QuantizedOperator T1 = weyl_quantize(theta1, grid);
    QuantizedOperator T2 = weyl_quantize(theta2, grid);
    linalg::MatrixC prod = T1.M * T2.M;
    rep.hbars.push_back(hb);
    rep.op_norms.push_back(linalg::operator_norm(prod));
    rep.trace_norms.push_back(linalg::trace_norm(prod));
  }
  bool positive = rep.hbars.size() >= 2;
  for (double v : rep.op_norms) positive = positive && v > 0.0;
  for (double v : rep.trace_norms) positive = positive && v > 0.0;
  if (positive) {
    rep.op_slope = fit::loglog(rep.hbars, rep.op_norms).slope;
    rep.trace_slope = fit::loglog(rep.hbars, rep.trace_norms).slope;
  }
  return rep;
}

RoughSymbol functional_symbol_principal(const SmoothFunction& f,
                                        const ScalarField& V,
                                        const VectorField& a, double mu) {
  RoughSymbol s;
  s.d = V.dim;
  const int dd = V.dim;
  s.value = [f, V, a, mu, dd](const double* x, const double* p) {
    double av[3] = {0, 0, 0};
    a.eval(x, av);
    double kin = 0.0;
    for (int j = 0; j < dd; ++j) {
      const double q = p[j] - mu * av[j];
      kin += q * q;
    }
    return f(kin + V.value(x));
  };
  return s;
}

std::vector<AuditRow> symbol_class_audit(
    const RoughSymbol& a, const std::vector<std::pair<int, int>>& orders,
    const PhaseGrid& grid) {
  if (!a.deriv) throw DomainError("symbol_class_audit: derivative oracle required");
  std::vector<AuditRow> rows;
  const int samples = 48;
  const double P = grid.p_edge();
  for (auto [ox, op] : orders) {
    AuditRow row;
    row.order_x = ox;
    row.order_p = op;
    double sup = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double x = -grid.L + 2.0 * grid.L * (i + 0.5) / samples;
      for (int j = 0; j < samples; ++j) {
        const double p = -P + 2.0 * P * (j + 0.5) / samples;
        const int ax[1] = {ox}, ap[1] = {op};
        const double d = std::abs(a.deriv(ax, ap, &x, &p));
        const double m = a.weight ? a.weight(&x, &p) : 1.0;
        const double scale =
            std::pow(a.eps, std::min(0, a.tau - ox)) * std::max(m, 1e-300);
        sup = std::max(sup, d / scale);
      }
    }
    row.measured_sup = sup;
    rows.push_back(row);
  }
  return rows;
}

RoughSymbol gaussian_symbol(int d, const std::array<double, 3>& x0,
                            const std::array<double, 3>& p0, double sx,
                            double sp) {
  RoughSymbol s;
  s.d = d;
  std::vector<SmoothFunction> gx, gp;
  for (int j = 0; j < d; ++j) {
    gx.push_back(SmoothFunction::gaussian(x0[j], sx));
    gp.push_back(SmoothFunction::gaussian(p0[j], sp));
  }
  s.value = [gx, gp, d](const double* x, const double* p) {
    double v = 1.0;
    for (int j = 0; j < d; ++j) v *= gx[j](x[j]) * gp[j](p[j]);
    return v;
  };
  s.deriv = [gx, gp, d](const int* ax, const int* ap, const double* x,
                        const double* p) {
    double v = 1.0;
    for (int j = 0; j < d; ++j)
      v *= gx[j].derivative(ax[j], x[j]) * gp[j].derivative(ap[j], p[j]);
    return v;
  };
  return s;
}

}  // namespace wlab::weylquant
