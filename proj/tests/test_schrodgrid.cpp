#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "wlab/numerics.hpp"
#include "wlab/phasespace.hpp"
#include "wlab/potentials.hpp"
#include "wlab/schrodgrid.hpp"
#include "wlab/tauberian.hpp"

using namespace wlab;
using namespace wlab::schrodgrid;

namespace {

const double kPi = std::acos(-1.0);

// flat-bottom well: V = -depth on |x| <= r1, C^inf rise to 0 by r2.
// Noncritical on any region where |V| stays away from 0.
ScalarField plateau_well(int d, double depth, double r1, double r2) {
  auto prof = SmoothFunction::step_down(r1 * r1, r2 * r2).scaled(-depth);
  return ScalarField::radial_of_r2(d, prof, r2);
}

ScalarField radial_localizer(int d, double r_flat, double r_max) {
  return ScalarField::radial_of_r2(
      d, SmoothFunction::step_down(r_flat * r_flat, r_max * r_max), r_max);
}

// smooth compactly supported 1-D vector potential
VectorField bump_vector_potential_1d(double amp) {
  VectorField a;
  a.dim = 1;
  ScalarField c;
  c.dim = 1;
  auto prof = SmoothFunction::bump(-3.0, 3.0).scaled(amp);
  c.value = [prof](const double* x) { return prof(x[0]); };
  c.gradient = [prof](const double* x, double* g) {
    g[0] = prof.derivative(1, x[0]);
  };
  a.components.push_back(c);
  return a;
}

}  // namespace

TEST_CASE("free periodic operator diagonalizes on the lattice dispersion") {
  GridSpec g;
  g.d = 1;
  g.L = 4.0;
  g.N = 256;
  g.boundary = GridSpec::Boundary::periodic;
  const double hbar = 0.1;
  auto op = discretize(ScalarField::constant(1, 0.0), VectorField::zero(1), 0.0,
                       hbar, g);
  auto eig = linalg::eig_hermitian(op.dense());
  std::vector<double> disp;
  const double h = g.hx();
  for (int k = 0; k < g.N; ++k)
    disp.push_back(hbar * hbar * (2.0 - 2.0 * std::cos(2.0 * kPi * k / g.N)) /
                   (h * h));
  std::sort(disp.begin(), disp.end());
  double worst = 0.0;
  for (int i = 0; i < g.N; ++i)
    worst = std::max(worst, std::abs(disp[i] - eig.values[i]));
  CHECK(worst < 1e-12);
  // resolved low modes sit on hbar^2 (pi k / L)^2 to discretization accuracy
  const double k1 = hbar * hbar * std::pow(kPi / g.L, 2);
  CHECK(eig.values[1] == doctest::Approx(k1).epsilon(1e-3));
  // count below a cut matches the closed-form lattice count
  const double cut = 0.04;
  int count = 0;
  for (double v : disp)
    if (v <= cut) ++count;
  auto spec = eigensolve_below(op, cut);
  CHECK(static_cast<int>(spec.values.size()) == count);
  CHECK(spec.complete);
}

TEST_CASE("harmonic-type well reproduces hbar(2n+1)") {
  GridSpec g;
  g.d = 1;
  g.L = 6.0;
  g.N = 1024;
  g.boundary = GridSpec::Boundary::dirichlet;
  ScalarField q2;
  q2.dim = 1;
  q2.value = [](const double* x) { return x[0] * x[0]; };
  auto op = discretize(q2, VectorField::zero(1), 0.0, 0.05, g);
  auto eig = linalg::eig_hermitian(op.dense());
  for (int n = 0; n < 8; ++n) {
    const double expect = 0.05 * (2 * n + 1);
    CHECK(std::abs(eig.values[n] - expect) <= 0.01 * expect);
  }
}

TEST_CASE("mu = 0 reduces to the real Laplacian plus potential") {
  GridSpec g;
  g.d = 1;
  g.L = 4.0;
  g.N = 64;
  g.boundary = GridSpec::Boundary::periodic;
  auto V = plateau_well(1, 1.0, 1.0, 2.0);
  auto op = discretize(V, bump_vector_potential_1d(0.7), 0.0, 0.2, g);
  CHECK(op.is_real);
  linalg::MatrixC H = op.dense();
  CHECK(H.imag().cwiseAbs().maxCoeff() == 0.0);
  // diagonal = 2 c + V, off-diagonal = -c
  const double c = 0.2 * 0.2 / (g.hx() * g.hx());
  const double x0[1] = {g.node(0)};
  CHECK(H(0, 0).real() == doctest::Approx(2.0 * c + V.value(x0)).epsilon(1e-12));
  CHECK(H(0, 1).real() == doctest::Approx(-c).epsilon(1e-12));
}

TEST_CASE("gauge transform acts as an exact diagonal conjugation (Peierls)") {
  GridSpec g;
  g.d = 1;
  g.L = 4.0;
  g.N = 192;
  g.boundary = GridSpec::Boundary::periodic;
  const double hbar = 0.15, mu = 0.8;
  auto V = plateau_well(1, 1.0, 1.0, 2.0);
  auto a = bump_vector_potential_1d(0.6);

  // chi: smooth compactly supported gauge function
  ScalarField chi;
  chi.dim = 1;
  auto cprof = SmoothFunction::bump(-2.5, 2.5).scaled(0.9);
  chi.value = [cprof](const double* x) { return cprof(x[0]); };
  chi.gradient = [cprof](const double* x, double* g) {
    g[0] = cprof.derivative(1, x[0]);
  };
  chi.hessian = [cprof](const double* x, double* h) {
    h[0] = cprof.derivative(2, x[0]);
  };

  auto op1 = discretize(V, a, mu, hbar, g);
  auto op2 = discretize(V, potentials::gauge_transform(a, chi), mu, hbar, g);

  // unitary conjugation by the diagonal phase e^{-i mu chi / hbar}
  // (sign tied to the link-phase convention theta = -(mu/hbar) Int a)
  linalg::MatrixC U = linalg::MatrixC::Zero(g.N, g.N);
  for (int i = 0; i < g.N; ++i) {
    const double x[1] = {g.node(i)};
    U(i, i) = std::polar(1.0, -mu * chi.value(x) / hbar);
  }
  linalg::MatrixC lhs = U.adjoint() * op2.dense() * U;
  const double scale = op1.dense().cwiseAbs().maxCoeff();
  CHECK((lhs - op1.dense()).cwiseAbs().maxCoeff() <= 1e-12 * scale);

  // spectra agree to 1e-10
  auto e1 = linalg::eigvals_hermitian(op1.dense());
  auto e2 = linalg::eigvals_hermitian(op2.dense());
  CHECK((e1 - e2).cwiseAbs().maxCoeff() <= 1e-10);

  // localized traces agree outright (phi commutes with the phase)
  auto phi = radial_localizer(1, 0.5, 1.0);
  auto s1 = eigensolve_below(op1, 0.0);
  auto s2 = eigensolve_below(op2, 0.0);
  const double t1 = localized_trace(s1, op1, phi, 0.0);
  const double t2 = localized_trace(s2, op2, phi, 0.0);
  CHECK(std::abs(t1 - t2) <= 1e-10);
  const double t1g = localized_trace(s1, op1, phi, 1.0);
  const double t2g = localized_trace(s2, op2, phi, 1.0);
  CHECK(std::abs(t1g - t2g) <= 1e-10);
}

TEST_CASE("eigensolve_below: sparse path agrees with the dense path") {
  GridSpec g;
  g.d = 1;
  g.L = 4.0;
  g.N = 512;
  g.boundary = GridSpec::Boundary::dirichlet;
  auto V = plateau_well(1, 1.0, 1.2, 2.4);
  auto op = discretize(V, VectorField::zero(1), 0.0, 0.1, g);

  auto dense = eigensolve_below(op, 0.0, 1e-9, 4096);
  auto sparse = eigensolve_below(op, 0.0, 1e-9, 64, 24);  // force sparse
  REQUIRE(dense.values.size() == sparse.values.size());
  CHECK((dense.values - sparse.values).cwiseAbs().maxCoeff() <= 1e-7);
  CHECK(sparse.complete);  // inertia certificate
  CHECK(sparse.residual_bound <= 1e-8);

  // diagonal sanity: eigenvalues of a pure potential (hbar -> tiny kinetic)
  auto spec = eigensolve_below(op, -0.5);
  for (Eigen::Index i = 0; i < spec.values.size(); ++i)
    CHECK(spec.values[i] <= -0.5);
}

TEST_CASE("localized trace basics") {
  GridSpec g;
  g.d = 1;
  g.L = 4.0;
  g.N = 512;
  g.boundary = GridSpec::Boundary::dirichlet;
  auto V = plateau_well(1, 1.0, 1.2, 2.4);
  auto op = discretize(V, VectorField::zero(1), 0.0, 0.05, g);
  auto spec = eigensolve_below(op, 0.0);

  // phi = 1: gamma = 0 trace is the integer count
  auto one = ScalarField::constant(1, 1.0);
  const double n0 = localized_trace(spec, op, one, 0.0);
  CHECK(n0 == doctest::Approx(std::round(n0)).epsilon(1e-12));
  CHECK(n0 ==
        doctest::Approx(static_cast<double>(spec.values.size())).epsilon(1e-10));

  // gamma = 1 with nonnegative phi is nonnegative
  auto phi = radial_localizer(1, 0.5, 1.0);
  CHECK(localized_trace(spec, op, phi, 1.0) >= 0.0);

  // incomplete band is refused
  auto low = eigensolve_below(op, -0.2);
  CHECK_THROWS_AS(localized_trace(low, op, phi, 0.0), DomainError);
}

TEST_CASE("localized trace matches the Weyl term at small hbar (d=1)") {
  GridSpec g;
  g.d = 1;
  g.L = 4.0;
  g.N = 2048;
  g.boundary = GridSpec::Boundary::dirichlet;
  const double hbar = 0.02;
  auto V = plateau_well(1, 1.0, 1.2, 2.4);
  auto phi = radial_localizer(1, 0.5, 1.0);  // supported where V = -1
  auto op = discretize(V, VectorField::zero(1), 0.0, hbar, g);
  auto spec = eigensolve_below(op, 0.0);
  const double trace = localized_trace(spec, op, phi, 0.0);

  phasespace::WeylTermRequest req;
  req.d = 1;
  req.gamma = 0.0;
  req.hbar = hbar;
  req.V = V;
  req.phi = phi;
  req.lo[0] = -1.1;
  req.hi[0] = 1.1;
  const double weyl = phasespace::weyl_term_closed(req);
  INFO("trace ", trace, " weyl ", weyl);
  CHECK(std::abs(trace - weyl) <= 0.05 * weyl);
}

TEST_CASE("local pair: tampering outside the buffer leaves Omega rows alone") {
  GridSpec g;
  g.d = 1;
  g.L = 6.0;
  g.N = 512;
  g.boundary = GridSpec::Boundary::dirichlet;
  auto V = plateau_well(1, 1.0, 1.2, 2.4);
  auto a0 = VectorField::zero(1);
  std::array<double, 3> omega{0, 0, 0};

  // tamper: +5 bump supported in |x| in [4.2, 5.8]
  ScalarField tamper;
  tamper.dim = 1;
  auto tprof = SmoothFunction::bump(4.2, 5.8).scaled(5.0);
  tamper.value = [tprof](const double* x) {
    return tprof(x[0]) + tprof(-x[0]);
  };
  tamper.gradient = [tprof](const double* x, double* gr) {
    gr[0] = tprof.derivative(1, x[0]) - tprof.derivative(1, -x[0]);
  };
  tamper.hessian = [tprof](const double* x, double* h) {
    h[0] = tprof.derivative(2, x[0]) + tprof.derivative(2, -x[0]);
  };

  auto pair = make_local_pair(V, a0, 0.0, 0.1, g, omega, 3.0, 1.0, tamper);
  CHECK(local_pair_mismatch(pair) == 0.0);

  // no tamper: operators identical
  auto idpair = make_local_pair(V, a0, 0.0, 0.1, g, omega, 3.0, 1.0,
                                ScalarField::constant(1, 0.0));
  CHECK((idpair.primary.dense() - idpair.local.dense()).cwiseAbs().maxCoeff() ==
        0.0);

  // tamper reaching into the buffer is refused
  ScalarField bad;
  bad.dim = 1;
  auto bprof = SmoothFunction::bump(2.0, 5.0);
  bad.value = [bprof](const double* x) { return bprof(x[0]); };
  CHECK_THROWS_AS(make_local_pair(V, a0, 0.0, 0.1, g, omega, 3.0, 1.0, bad),
                  DomainError);
}

TEST_CASE("local agreement: phi [f(H_amb) - f(H)] collapses in hbar") {
  GridSpec g;
  g.d = 1;
  g.L = 6.0;
  g.N = 768;
  g.boundary = GridSpec::Boundary::dirichlet;
  auto V = plateau_well(1, 1.0, 1.2, 2.4);
  auto a0 = VectorField::zero(1);
  std::array<double, 3> omega{0, 0, 0};
  ScalarField tamper;
  tamper.dim = 1;
  auto tprof = SmoothFunction::bump(4.2, 5.8).scaled(5.0);
  tamper.value = [tprof](const double* x) { return tprof(x[0]) + tprof(-x[0]); };

  auto f = SmoothFunction::gaussian(-0.5, 0.25);
  auto phi = radial_localizer(1, 0.8, 1.6);
  linalg::VectorR phi_diag;

  std::vector<double> hbars = {0.4, 0.28, 0.2, 0.14, 0.1};
  std::vector<double> norms;
  for (double hb : hbars) {
    auto pair = make_local_pair(V, a0, 0.0, hb, g, omega, 3.0, 1.0, tamper);
    auto e_amb = linalg::eig_hermitian(pair.primary.dense());
    auto e_loc = linalg::eig_hermitian(pair.local.dense());
    auto fn = [&](double t) { return f(t); };
    linalg::MatrixC diff = linalg::apply_spectral_function(e_amb, fn) -
                           linalg::apply_spectral_function(e_loc, fn);
    phi_diag = pair.primary.sample_field(phi);
    norms.push_back(linalg::trace_norm(phi_diag.asDiagonal() * diff));
  }
  auto fit0 = fit::loglog(hbars, norms);
  INFO("slope ", fit0.slope);
  CHECK(fit0.slope >= 3.0);
}

TEST_CASE("almost analytic extension") {
  auto f = SmoothFunction::gaussian(0.0, 0.6);
  auto ext = almost_analytic_extension(f, 4);

  SUBCASE("restriction to the real axis is f") {
    for (double x : {-1.2, -0.3, 0.0, 0.7})
      CHECK(ext.extension(x, 0.0).real() == doctest::Approx(f(x)).epsilon(1e-14));
  }

  SUBCASE("dbar vanishes to the stated order") {
    CHECK(ext.measured_constant(2000) < 1e4);
    // order 0: no vanishing, O(1) values on the strip
    auto ext0 = almost_analytic_extension(f, 0);
    double probe = std::abs(ext0.dbar(0.3, 0.2));
    CHECK(probe > 1e-4);
  }
}

TEST_CASE("Helffer-Sjostrand matches eigendecomposition calculus") {
  GridSpec g;
  g.d = 1;
  g.L = 4.0;
  g.N = 256;
  g.boundary = GridSpec::Boundary::dirichlet;
  ScalarField q2;
  q2.dim = 1;
  q2.value = [](const double* x) { return x[0] * x[0]; };
  auto op = discretize(q2, VectorField::zero(1), 0.0, 0.1, g);
  auto f = SmoothFunction::gaussian(0.3, 0.5);

  SUBCASE("zero function gives the zero matrix") {
    auto zf = SmoothFunction::gaussian(0.3, 0.5).scaled(0.0);
    auto hs = hs_apply(op, zf, 4, 1e-6);
    CHECK(hs.cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("order sweep: monotone improvement, 1e-6 reached at order 8") {
    auto eig = linalg::eig_hermitian(op.dense());
    auto fH = linalg::apply_spectral_function(eig, [&](double t) { return f(t); });
    double prev = 1e300;
    for (int order : {2, 4, 8}) {
      auto hs = hs_apply(op, f, order, 1e-8);
      const double err = linalg::operator_norm(hs - fH);
      CHECK(err < prev);
      prev = err;
      if (order == 8) CHECK(err <= 1e-6);
      // Hermitian by construction
      CHECK((hs - hs.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("smoothed spectral density against the co-area oracle") {
  auto moll = tauberian::build_mollifier(1.0);
  auto V = plateau_well(1, 1.0, 1.2, 2.4);
  auto phi = radial_localizer(1, 0.5, 1.0);
  // the window must be flat across the chi_hbar peak (so only f(s)
  // enters) while keeping |nu - V| >= 0.2 on supp phi
  auto f = SmoothFunction::plateau(-0.8, -0.2, 0.1);
  const double s = -0.5;

  double prev_err = 1e300;
  struct Pt {
    double hbar;
    int N;
  };
  for (Pt pt : {Pt{0.04, 1024}, Pt{0.02, 2048}}) {
    GridSpec g;
    g.d = 1;
    g.L = 4.0;
    g.N = pt.N;
    g.boundary = GridSpec::Boundary::dirichlet;
    auto op = discretize(V, VectorField::zero(1), 0.0, pt.hbar, g);
    auto spec = eigensolve_below(op, 0.4);
    auto chi = [&](double t) { return tauberian::chi_hbar(moll, pt.hbar, t); };
    auto sd = smoothed_density(spec, op, phi, f, chi, s, V, 0.15);
    const double rel = std::abs(sd.eigen_sum - sd.oracle) / sd.oracle;
    INFO("hbar ", pt.hbar, " eigen_sum ", sd.eigen_sum, " oracle ", sd.oracle);
    CHECK(rel <= 0.10);
    CHECK(rel < prev_err);
    prev_err = rel;
  }
}

TEST_CASE("smoothed density edge cases") {
  auto moll = tauberian::build_mollifier(1.0);
  auto V = plateau_well(1, 1.0, 1.2, 2.4);
  auto phi = radial_localizer(1, 0.5, 1.0);
  GridSpec g;
  g.d = 1;
  g.L = 4.0;
  g.N = 512;
  g.boundary = GridSpec::Boundary::dirichlet;
  const double hbar = 0.1;
  auto op = discretize(V, VectorField::zero(1), 0.0, hbar, g);
  auto spec = eigensolve_below(op, 0.4);
  auto chi = [&](double t) { return tauberian::chi_hbar(moll, hbar, t); };

  SUBCASE("f vanishing on the whole spectrum gives zero") {
    auto f = SmoothFunction::bump(-9.0, -7.0);  // below the spectrum
    auto sd = smoothed_density(spec, op, phi, f, chi, -8.0, V, 0.3);
    CHECK(sd.eigen_sum == 0.0);
  }

  SUBCASE("s in a spectral gap: exponentially small value") {
    auto f = SmoothFunction::bump(-0.78, -0.3);
    // ground state sits near -1 + O(hbar); s far below the first cluster
    auto sd_lo = smoothed_density(spec, op, phi, f, chi, -0.74, V, 0.2);
    auto sd_mid = smoothed_density(spec, op, phi, f, chi, -0.5, V, 0.2);
    CHECK(sd_lo.eigen_sum < sd_mid.eigen_sum);
  }

  SUBCASE("non-critical failure is refused with a diagnostic") {
    auto fbad = SmoothFunction::bump(-0.7, -0.3);
    // phi sits where V = -1, so make the level impossible
    CHECK_THROWS_AS(smoothed_density(spec, op, phi, fbad, chi, -0.5, V, 10.0),
                    DomainError);
  }
}

TEST_CASE("localization norms: disjoint localizers collapse superpolynomially") {
  // the kernel of f(H) decays like exp(-c (dist/hbar)^2) here, so the
  // wide separation puts the whole sweep in the collapsing regime while
  // staying above the numerical floor
  GridSpec g;
  g.d = 1;
  g.L = 6.0;
  g.N = 768;
  g.boundary = GridSpec::Boundary::dirichlet;
  auto V = plateau_well(1, 1.0, 3.2, 4.2);
  auto f = SmoothFunction::gaussian(-0.5, 0.25);
  auto phi1 = phasespace::make_localizer(1, {-2.2, 0, 0}, 0.5);
  auto phi2 = phasespace::make_localizer(1, {2.2, 0, 0}, 0.5);
  auto phi_olap = phasespace::make_localizer(1, {-1.6, 0, 0}, 0.9);

  std::vector<double> hbars = {0.4, 0.28, 0.2, 0.14, 0.1, 0.07, 0.05};
  std::vector<double> tn, tn_olap;
  for (double hb : hbars) {
    auto op = discretize(V, VectorField::zero(1), 0.0, hb, g);
    auto eig = linalg::eig_hermitian(op.dense());
    tn.push_back(localization_norms(eig, op, f, phi1, phi2, 1.0));
    // overlapping contrast case
    linalg::MatrixC fH =
        linalg::apply_spectral_function(eig, [&](double t) { return f(t); });
    linalg::VectorR d1 = op.sample_field(phi1), d2 = op.sample_field(phi_olap);
    tn_olap.push_back(linalg::trace_norm(d1.asDiagonal() * fH * d2.asDiagonal()));
  }
  auto fit_sep = fit::loglog(hbars, tn);
  INFO("separated slope ", fit_sep.slope);
  CHECK(fit_sep.slope >= 3.0);

  // overlapping localizers scale like hbar^{-d}
  auto fit_olap = fit::loglog(hbars, tn_olap);
  INFO("overlap slope ", fit_olap.slope);
  CHECK(fit_olap.slope <= -0.7);

  SUBCASE("zero localizer gives zero") {
    auto op = discretize(V, VectorField::zero(1), 0.0, 0.2, g);
    auto eig = linalg::eig_hermitian(op.dense());
    CHECK(localization_norms(eig, op, f, phi1, ScalarField::constant(1, 0.0),
                             1.0) == 0.0);
  }

  SUBCASE("separation precondition enforced") {
    auto op = discretize(V, VectorField::zero(1), 0.0, 0.2, g);
    auto eig = linalg::eig_hermitian(op.dense());
    CHECK_THROWS_AS(localization_norms(eig, op, f, phi1, phi_olap, 1.0),
                    DomainError);
  }
}

TEST_CASE("mollified operator gap") {
  // the Holder roughness must live on a fat set for the trace-norm gap to
  // inherit the eps^{2+kappa} envelope (a single rough point decays
  // faster), and hbar must be small enough that the eigenfunctions stay
  // resonant with the surviving potential oscillations
  GridSpec g;
  g.d = 1;
  g.L = 5.0;
  g.N = 1024;
  g.boundary = GridSpec::Boundary::dirichlet;
  const double hbar = 0.05, kappa = 0.5;
  auto V = potentials::make_library_potential("weierstrass_well",
                                              {{"kappa", kappa}});
  auto kern = potentials::make_mollifier_kernel();
  auto f = SmoothFunction::gaussian(-0.6, 0.3);
  auto phi = radial_localizer(1, 1.0, 2.0);

  auto op_V = discretize(V.field, VectorField::zero(1), 0.0, hbar, g);
  auto eig_V = linalg::eig_hermitian(op_V.dense());
  linalg::VectorR v_diag = op_V.sample_field(V.field);

  SUBCASE("identical potentials give zero gap") {
    auto gap = mollified_operator_gap(eig_V, eig_V, op_V, f, phi, v_diag, v_diag);
    CHECK(gap.trace_norm_diff <= 1e-12);
    CHECK(gap.op_norm_diff <= 1e-12);
  }

  SUBCASE("eps sweep at fixed hbar: trace-norm slope 2 + kappa") {
    // surviving potential oscillations must stay inside the resonance
    // band 2 p / hbar, which caps how small eps can go at this hbar
    std::vector<double> epss = {0.5, 0.35, 0.25, 0.177};
    std::vector<double> gaps;
    for (double eps : epss) {
      auto Ve = potentials::mollify(V, eps, kern, 1e-9);
      auto vf = Ve.as_field();
      auto op_e = discretize(vf, VectorField::zero(1), 0.0, hbar, g);
      auto eig_e = linalg::eig_hermitian(op_e.dense());
      auto gap = mollified_operator_gap(eig_V, eig_e, op_V, f, phi, v_diag,
                                        op_e.sample_field(vf));
      gaps.push_back(gap.trace_norm_diff);
      // operator-norm core bound from the resolvent route
      CHECK(gap.op_norm_diff <= 20.0 * gap.sup_potential_gap);
    }
    auto fit0 = fit::loglog(epss, gaps);
    INFO("gap slope ", fit0.slope);
    CHECK(std::abs(fit0.slope - (2.0 + kappa)) <= 0.3);
  }
}

TEST_CASE("matrix dump round-trips with the documented header") {
  GridSpec g;
  g.d = 1;
  g.L = 4.0;
  g.N = 32;
  g.boundary = GridSpec::Boundary::periodic;
  auto V = plateau_well(1, 1.0, 1.0, 2.0);
  auto op = discretize(V, bump_vector_potential_1d(0.4), 0.6, 0.2, g);

  const std::string path = "/tmp/wlab_dump_test.bin";
  dump_operator(op, path);

  // header bytes
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  REQUIRE(fp != nullptr);
  char head[32];
  REQUIRE(std::fread(head, 1, 32, fp) == 32);
  std::fclose(fp);
  CHECK(std::memcmp(head, "WLAB", 4) == 0);
  std::uint32_t d32 = 0, n32 = 0;
  std::memcpy(&d32, head + 4, 4);
  std::memcpy(&n32, head + 8, 4);
  CHECK(d32 == 1);
  CHECK(n32 == 32);
  double hb = 0, mu = 0;
  std::memcpy(&hb, head + 12, 8);
  std::memcpy(&mu, head + 20, 8);
  CHECK(hb == 0.2);
  CHECK(mu == 0.6);
  CHECK(std::filesystem::file_size(path) == 32 + 16ull * 32 * 32);

  auto loaded = load_operator(path);
  CHECK((loaded.dense() - op.dense()).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}
