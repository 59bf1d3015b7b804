#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "wlab/numerics.hpp"
#include "wlab/potentials.hpp"
#include "wlab/weylquant.hpp"

using namespace wlab;
using namespace wlab::weylquant;
using linalg::Complex;

namespace {

const double kPi = std::acos(-1.0);

PhaseGrid small_grid(double hbar = 0.5, int N = 256, double L = 6.0) {
  PhaseGrid g;
  g.d = 1;
  g.N = N;
  g.L = L;
  g.hbar = hbar;
  return g;
}

// compactly supported phase-space bump via per-axis profiles
RoughSymbol bump_symbol(double x_lo, double x_hi, double p_lo, double p_hi) {
  auto bx = SmoothFunction::bump(x_lo, x_hi);
  auto bp = SmoothFunction::bump(p_lo, p_hi);
  RoughSymbol s;
  s.d = 1;
  s.value = [bx, bp](const double* x, const double* p) {
    return bx(x[0]) * bp(p[0]);
  };
  s.deriv = [bx, bp](const int* ax, const int* ap, const double* x,
                     const double* p) {
    return bx.derivative(ax[0], x[0]) * bp.derivative(ap[0], p[0]);
  };
  return s;
}

RoughSymbol constant_symbol(int d, double c) {
  RoughSymbol s;
  s.d = d;
  s.value = [c](const double*, const double*) { return c; };
  s.deriv = [c](const int* ax, const int* ap, const double*, const double*) {
    int tot = 0;
    for (int j = 0; j < 2; ++j) tot += ax[0] * 0;  // orders checked below
    (void)tot;
    return (ax[0] == 0 && ap[0] == 0) ? c : 0.0;
  };
  return s;
}

}  // namespace

TEST_CASE("unit symbol quantizes to the identity") {
  auto g = small_grid();
  auto q = weyl_quantize(constant_symbol(1, 1.0), g);
  CHECK((q.M - linalg::MatrixC::Identity(g.N, g.N)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("multiplication symbol quantizes to a diagonal matrix") {
  auto g = small_grid(0.5, 128);
  auto prof = SmoothFunction::gaussian(0.3, 1.1);
  RoughSymbol s;
  s.d = 1;
  s.value = [prof](const double* x, const double*) { return prof(x[0]); };
  auto q = weyl_quantize(s, g);
  auto xs = g.xs();
  for (int m = 0; m < g.N; m += 7) {
    CHECK(q.M(m, m).real() == doctest::Approx(prof(xs[m])).epsilon(1e-12));
  }
  linalg::MatrixC off = q.M;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("kinetic symbol acts on lattice plane waves by p^2") {
  auto g = small_grid(0.5, 256);
  RoughSymbol s;
  s.d = 1;
  s.value = [](const double*, const double* p) { return p[0] * p[0]; };
  auto q = weyl_quantize(s, g);
  auto xs = g.xs();
  const double p0 = kPi * g.hbar / g.L * 10.0;  // lattice momentum
  Eigen::VectorXcd psi(g.N);
  for (int m = 0; m < g.N; ++m)
    psi[m] = std::polar(1.0, p0 * xs[m] / g.hbar);
  Eigen::VectorXcd out = q.M * psi;
  for (int m = 0; m < g.N; m += 17)
    CHECK(std::abs(out[m] - p0 * p0 * psi[m]) < 1e-9);
}

TEST_CASE("real symbols give Hermitian matrices; quantization is linear") {
  auto g = small_grid(0.4, 128);
  auto s1 = gaussian_symbol(1, {0.5, 0, 0}, {0.3, 0, 0}, 1.0, 0.8);
  auto s2 = bump_symbol(-2.0, 1.0, -1.5, 1.5);
  auto q1 = weyl_quantize(s1, g);
  auto q2 = weyl_quantize(s2, g);
  CHECK((q1.M - q1.M.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((q2.M - q2.M.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  RoughSymbol combo;
  combo.d = 1;
  auto v1 = s1.value, v2 = s2.value;
  combo.value = [v1, v2](const double* x, const double* p) {
    return 2.0 * v1(x, p) - 0.25 * v2(x, p);
  };
  auto qc = weyl_quantize(combo, g);
  CHECK((qc.M - (2.0 * q1.M - 0.25 * q2.M)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("operator norm bounded by scaled derivative sups") {
  // one-sided Calderon-Vaillancourt-style check with the measured constant
  auto g = small_grid(0.3, 256);
  auto s = gaussian_symbol(1, {0.0, 0, 0}, {0.0, 0, 0}, 0.9, 1.1);
  auto q = weyl_quantize(s, g);
  const double norm = linalg::operator_norm(q.M);
  double dsup = 0.0;
  for (int ox = 0; ox <= 2; ++ox)
    for (int op = 0; op <= 2; ++op) {
      double sup = 0.0;
      for (double x = -4.0; x <= 4.0; x += 0.05)
        for (double p = -4.0; p <= 4.0; p += 0.05) {
          const int ax[1] = {ox}, ap[1] = {op};
          sup = std::max(sup, std::abs(s.deriv(ax, ap, &x, &p)));
        }
      dsup = std::max(dsup, sup);
    }
  INFO("norm ", norm, " derivative sup ", dsup);
  CHECK(norm <= 10.0 * dsup);  // measured constant stays modest
}

TEST_CASE("trace formula") {
  auto g = small_grid(0.5, 256);
  auto s = gaussian_symbol(1, {0.4, 0, 0}, {-0.2, 0, 0}, 0.8, 0.9);
  auto tc = trace_check(s, g);
  CHECK(tc.rel_err <= 1e-6);

  auto zero = constant_symbol(1, 0.0);
  auto qz = weyl_quantize(zero, g);
  CHECK(qz.M.cwiseAbs().maxCoeff() == 0.0);

  // symbol living beyond the momentum lattice: trace collapses
  auto far = gaussian_symbol(1, {0.0, 0, 0}, {3.0 * g.p_edge(), 0, 0}, 0.8, 0.05);
  auto qf = weyl_quantize(far, g);
  CHECK(std::abs(qf.M.trace()) < 1e-10);
}

TEST_CASE("canonical commutator is exact on resolved states") {
  // [Op(x), Op(p)] psi = i hbar psi for states supported well inside the
  // box in both position and momentum
  auto g = small_grid(0.5, 256);
  RoughSymbol sx;
  sx.d = 1;
  sx.value = [](const double* x, const double*) { return x[0]; };
  RoughSymbol sp;
  sp.d = 1;
  sp.value = [](const double*, const double* p) { return p[0]; };
  auto X = weyl_quantize(sx, g);
  auto P = weyl_quantize(sp, g);
  auto xs = g.xs();
  Eigen::VectorXcd psi(g.N);
  for (int m = 0; m < g.N; ++m)
    psi[m] = std::exp(-xs[m] * xs[m]);  // resolved Gaussian
  psi.normalize();
  Eigen::VectorXcd comm = X.M * (P.M * psi) - P.M * (X.M * psi);
  CHECK((comm - Complex(0.0, g.hbar) * psi).norm() < 1e-10);
}

TEST_CASE("composition residuals") {
  auto g = small_grid(0.4, 256);
  auto a = gaussian_symbol(1, {-0.3, 0, 0}, {0.2, 0, 0}, 1.0, 0.9);
  auto one = constant_symbol(1, 1.0);

  SUBCASE("unit right factor is exact") {
    auto r = compose_residuals(a, one, g);
    CHECK(r.r0 < 1e-12);
    CHECK(r.r1 < 1e-12);
  }

  SUBCASE("Gaussian pair: r0 ~ hbar, r1 ~ hbar^2") {
    // wide symbols keep the expansion parameter hbar/(2 sx sp) small over
    // the sweep; the large box keeps edge tails below the residual floor
    auto aa = gaussian_symbol(1, {-0.35, 0, 0}, {0.15, 0, 0}, 3.0, 1.2);
    auto b = gaussian_symbol(1, {0.35, 0, 0}, {-0.15, 0, 0}, 2.7, 1.32);
    std::vector<double> hbars = {0.4, 0.2, 0.1, 0.05};
    std::vector<double> r0s, r1s;
    for (double hb : hbars) {
      auto gg = small_grid(hb, 1024, 13.0);
      auto r = compose_residuals(aa, b, gg);
      r0s.push_back(r.r0);
      r1s.push_back(r.r1);
    }
    auto f0 = fit::loglog(hbars, r0s);
    auto f1 = fit::loglog(hbars, r1s);
    INFO("r0 slope ", f0.slope, " r1 slope ", f1.slope);
    CHECK(std::abs(f0.slope - 1.0) <= 0.15);
    CHECK(std::abs(f1.slope - 2.0) <= 0.2);
  }
}

TEST_CASE("disjoint supports: norms collapse superpolynomially") {
  auto theta1 = bump_symbol(-4.0, -1.0, -2.0, 2.0);
  auto theta2 = bump_symbol(0.5, 3.5, -2.0, 2.0);
  auto zero = constant_symbol(1, 0.0);
  auto g = small_grid(0.4, 256);

  SUBCASE("zero factor gives exactly zero") {
    auto rep = disjoint_support_norms(theta1, zero, g, {0.4, 0.2}, 1.0);
    CHECK(rep.op_norms[0] == 0.0);
    CHECK(rep.op_norms[1] == 0.0);
  }

  SUBCASE("separated bumps decay, overlapping bumps do not") {
    std::vector<double> hbars = {0.4, 0.28, 0.2, 0.14, 0.1, 0.07, 0.05};
    auto rep = disjoint_support_norms(theta1, theta2, g, hbars, 1.0);
    INFO("op slope ", rep.op_slope, " trace slope ", rep.trace_slope);
    CHECK(rep.op_slope >= 3.0);
    CHECK(rep.trace_slope >= 3.0);

    auto theta3 = bump_symbol(-2.0, 1.5, -2.0, 2.0);  // overlaps theta1
    CHECK_THROWS_AS(disjoint_support_norms(theta1, theta3, g, hbars, 1.0),
                    DomainError);
    PhaseGrid gg = g;
    std::vector<double> overlap_norms;
    for (double hb : hbars) {
      gg.hbar = hb;
      auto q1 = weyl_quantize(theta1, gg);
      auto q3 = weyl_quantize(theta3, gg);
      overlap_norms.push_back(linalg::operator_norm(q1.M * q3.M));
    }
    auto f = fit::loglog(hbars, overlap_norms);
    CHECK(std::abs(f.slope) < 0.5);  // O(1), no decay
  }
}

TEST_CASE("symbol class audit") {
  auto g = small_grid(0.3, 128);

  SUBCASE("x-independent symbols have vanishing x-derivative rows") {
    auto prof = SmoothFunction::gaussian(0.0, 1.0);
    RoughSymbol s;
    s.d = 1;
    s.value = [prof](const double*, const double* p) { return prof(p[0]); };
    s.deriv = [prof](const int* ax, const int* ap, const double*, const double* p) {
      if (ax[0] > 0) return 0.0;
      return prof.derivative(ap[0], p[0]);
    };
    s.tau = 2;
    s.eps = 0.1;
    auto rows = symbol_class_audit(s, {{1, 0}, {2, 1}, {3, 0}}, g);
    for (const auto& r : rows) CHECK(r.measured_sup == 0.0);
  }

  SUBCASE("mollified potential symbol: order-3 row scales like 1/eps") {
    auto V = potentials::make_library_potential("holder_well", {{"kappa", 0.5}});
    auto kern = potentials::make_mollifier_kernel();
    std::vector<double> epss = {0.25, 0.125, 0.0625};
    std::vector<double> row3, row2;
    for (double eps : epss) {
      auto Ve = potentials::mollify(V, eps, kern, 1e-8);
      RoughSymbol s;
      s.d = 1;
      s.eps = eps;
      s.tau = 2;
      auto Vf = Ve;
      s.value = [Vf](const double* x, const double*) { return Vf.value(x); };
      s.deriv = [Vf](const int* ax, const int* ap, const double* x,
                     const double*) {
        if (ap[0] > 0) return 0.0;
        const int alpha[3] = {ax[0], 0, 0};
        return Vf.derivative(x, alpha);
      };
      // raw sups (weight 1, tau set so the audit divides by eps^{tau-|a|})
      auto rows = symbol_class_audit(s, {{2, 0}, {3, 0}}, g);
      row2.push_back(rows[0].measured_sup);
      row3.push_back(rows[1].measured_sup);
    }
    // |d^2 V_eps| stays O(1); the audit normalizes |d^3| by eps^{-1}, so a
    // flat normalized row means the raw sup grew like eps^{-1}
    CHECK(row2[2] <= 2.0 * row2[0] + 1e-9);
    CHECK(row3[2] <= 4.0 * row3[0]);
    CHECK(row3[2] >= 0.25 * row3[0]);
  }
}

TEST_CASE("principal functional-calculus symbol") {
  auto f = SmoothFunction::gaussian(-0.5, 0.4);
  auto zero_f = SmoothFunction::gaussian(0.0, 1.0).scaled(0.0);
  auto V = ScalarField::constant(1, 0.0);
  auto a0 = VectorField::zero(1);

  auto s0 = functional_symbol_principal(zero_f, V, a0, 0.0);
  const double x = 0.3, p = 0.7;
  CHECK(s0.value(&x, &p) == 0.0);

  auto s = functional_symbol_principal(f, V, a0, 0.0);
  CHECK(s.value(&x, &p) == doctest::Approx(f(p * p)).epsilon(1e-12));
}

TEST_CASE("functional calculus: principal symbol error is O(hbar^2)") {
  // H = Op(p^2 + V): f(H) against Op(f(p^2 + V)) across an hbar sweep
  // the hbar^2 term's constant is f'''-heavy; a wide window function and a
  // small hbar range keep the next order subdominant
  auto P = potentials::make_library_potential("gaussian_well",
                                              {{"depth", 1.0}, {"width", 1.0}});
  auto f = SmoothFunction::gaussian(-0.45, 0.5);
  auto a0 = VectorField::zero(1);

  std::vector<double> hbars = {0.04, 0.028, 0.02, 0.014, 0.01};
  std::vector<double> errs;
  for (double hb : hbars) {
    auto g = small_grid(hb, 1024, 10.0);
    RoughSymbol ham;
    ham.d = 1;
    auto Vf = P.field;
    ham.value = [Vf](const double* x, const double* p) {
      return p[0] * p[0] + Vf.value(x);
    };
    auto H = weyl_quantize(ham, g);
    auto eig = linalg::eig_hermitian(H.M);
    auto fH = linalg::apply_spectral_function(
        eig, [&](double t) { return f(t); });
    auto sym = functional_symbol_principal(f, P.field, a0, 0.0);
    auto opf = weyl_quantize(sym, g);
    errs.push_back(linalg::operator_norm(fH - opf.M));
  }
  auto fit0 = fit::loglog(hbars, errs);
  INFO("slope ", fit0.slope);
  CHECK(std::abs(fit0.slope - 2.0) <= 0.3);
}

TEST_CASE("two-dimensional quantization sanity") {
  PhaseGrid g;
  g.d = 2;
  g.N = 16;
  g.L = 5.0;
  g.hbar = 0.6;
  auto one = constant_symbol(2, 1.0);
  auto q = weyl_quantize(one, g);
  CHECK((q.M - linalg::MatrixC::Identity(g.N * g.N, g.N * g.N))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // multiplication symbol: diagonal with v(x) entries
  RoughSymbol v;
  v.d = 2;
  v.value = [](const double* x, const double*) {
    return std::exp(-x[0] * x[0] - 0.5 * x[1] * x[1]);
  };
  auto qv = weyl_quantize(v, g);
  auto xs = g.xs();
  const double probe[2] = {xs[3], xs[10]};
  CHECK(qv.M(3 * g.N + 10, 3 * g.N + 10).real() ==
        doctest::Approx(v.value(probe, nullptr)).epsilon(1e-12));
  linalg::MatrixC off = qv.M;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() < 1e-12);
}
