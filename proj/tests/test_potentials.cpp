#include <cmath>
#include <vector>

#include "doctest.h"
#include "wlab/numerics.hpp"
#include "wlab/potentials.hpp"

using namespace wlab;
using namespace wlab::potentials;

TEST_CASE("mollifier kernel moments") {
  auto k = make_mollifier_kernel();
  CHECK(std::abs(k.moment(0) - 1.0) < 1e-10);
  CHECK(std::abs(k.moment(1)) < 1e-10);
  CHECK(std::abs(k.moment(2)) < 1e-10);
}

TEST_CASE("library potentials: construction basics") {
  auto g = make_library_potential("gaussian_well", {{"depth", 1.0}, {"width", 1.0}});
  const double zero[1] = {0.0};
  CHECK(g.value(zero) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(g.kappa == 1.0);
  const double far[1] = {g.support_radius + 0.5};
  CHECK(g.value(far) == 0.0);

  auto h = make_library_potential("holder_well", {{"kappa", 0.5}});
  const double far2[1] = {h.support_radius + 1.0};
  CHECK(h.value(far2) == 0.0);

  auto dw = make_library_potential(
      "double_well", {{"depth", 1.0}, {"width", 0.5}, {"separation", 2.0}});
  const double lm[1] = {-1.0}, mid[1] = {0.0};
  CHECK(dw.value(lm) < -0.9);
  CHECK(dw.value(mid) > dw.value(lm));

  CHECK_THROWS_AS(make_library_potential("nope", {}), DomainError);
}

TEST_CASE("holder_well: Hessian Holder ratio near the certified constant") {
  const double kappa = 0.5;
  auto V = make_library_potential("holder_well", {{"kappa", kappa}});
  // pair sampling anchored at the singular point, 1e4 pairs
  rng::SplitMix64 gen(7);
  double worst = 0.0;
  double hx[1], hy[1];
  for (int i = 0; i < 10000; ++i) {
    const double r = std::pow(10.0, gen.uniform(-6.0, -0.5));
    double x[1] = {gen.uniform() < 0.5 ? r : -r};
    double y[1] = {0.0};
    V.field.hessian(x, hx);
    V.field.hessian(y, hy);
    worst = std::max(worst, std::abs(hx[0] - hy[0]) / std::pow(r, kappa));
  }
  CHECK(worst > 0.5 * V.holder_constant);
  CHECK(worst < 2.0 * V.holder_constant);
}

TEST_CASE("mollify reproduces quadratics away from the support edge") {
  // quadratic inside its support: kernel moment conditions give exactness
  PotentialModel V;
  V.name = "quadratic";
  V.support_radius = 4.0;
  V.kappa = 1.0;
  V.field.dim = 1;
  V.field.support_radius = 4.0;
  V.field.value = [](const double* x) {
    return std::abs(x[0]) <= 4.0 ? 1.0 + 2.0 * x[0] - 3.0 * x[0] * x[0] : 0.0;
  };
  V.field.gradient = [](const double* x, double* g) { g[0] = 2.0 - 6.0 * x[0]; };
  V.field.hessian = [](const double*, double* h) { h[0] = -6.0; };

  auto k = make_mollifier_kernel();
  auto Ve = mollify(V, 0.125, k);
  for (double x = -3.0; x <= 3.0; x += 0.5) {
    const double p[1] = {x};
    CHECK(Ve.value(p) == doctest::Approx(V.value(p)).epsilon(1e-9));
  }
}

TEST_CASE("mollification is linear") {
  auto k = make_mollifier_kernel();
  auto V1 = make_library_potential("gaussian_well", {{"depth", 1.0}, {"width", 1.0}});
  auto V2 = make_library_potential("holder_well", {{"kappa", 0.5}});
  PotentialModel combo;
  combo = V1;
  combo.field = field_sum(field_scale(V1.field, 2.0), field_scale(V2.field, -0.5));
  combo.support_radius = std::max(V1.support_radius, V2.support_radius);
  combo.field.support_radius = combo.support_radius;
  auto m1 = mollify(V1, 0.2, k);
  auto m2 = mollify(V2, 0.2, k);
  auto mc = mollify(combo, 0.2, k);
  for (double x = -2.0; x <= 2.0; x += 0.4) {
    const double p[1] = {x};
    CHECK(mc.value(p) ==
          doctest::Approx(2.0 * m1.value(p) - 0.5 * m2.value(p)).epsilon(1e-8));
  }
}

TEST_CASE("support growth: mollified field vanishes outside R + eps") {
  auto k = make_mollifier_kernel();
  auto V = make_library_potential("gaussian_well", {{"depth", 1.0}, {"width", 0.8}});
  auto Ve = mollify(V, 0.25, k);
  const double p[1] = {Ve.support_radius() + 1e-6};
  CHECK(Ve.value(p) == 0.0);
  const double q[1] = {-(Ve.support_radius() + 0.3)};
  CHECK(Ve.value(q) == 0.0);
}

namespace {

// sup over a sampling grid of |d^alpha (V - V_eps)| (diff=true) or
// |d^alpha V_eps|. The grid mixes a coarse global sweep with a cluster
// around the singular point at x = 0 where the error profile has width
// of order eps.
double sup_norm_error(const PotentialModel& V, const MollifiedPotential& Ve,
                      int order, bool diff) {
  const double R = V.support_radius;
  const double eps = Ve.epsilon;
  std::vector<double> xs;
  for (int i = 0; i <= 600; ++i) xs.push_back(-R - 0.5 + (2.0 * R + 1.0) * i / 600.0);
  for (int i = -120; i <= 120; ++i) xs.push_back(8.0 * eps * i / 120.0);

  double sup = 0.0;
  for (double x : xs) {
    const double p[1] = {x};
    int alpha[3] = {order, 0, 0};
    double v_eps = Ve.derivative(p, alpha);
    double v = 0.0;
    if (diff) {
      if (order == 0) v = V.field.value(p);
      if (order == 1) V.field.gradient(p, &v);
      if (order == 2) {
        double h[1];
        V.field.hessian(p, h);
        v = h[0];
      }
    }
    sup = std::max(sup, std::abs(v - v_eps));
  }
  return sup;
}

}  // namespace

TEST_CASE("mollification rates on holder_well(kappa=0.5)") {
  const double kappa = 0.5;
  auto V = make_library_potential("holder_well", {{"kappa", kappa}});
  auto k = make_mollifier_kernel();

  std::vector<double> eps_list;
  for (int j = 3; j <= 8; ++j) eps_list.push_back(std::pow(2.0, -j));

  for (int order = 0; order <= 3; ++order) {
    std::vector<double> sups;
    for (double eps : eps_list) {
      auto Ve = mollify(V, eps, k);
      sups.push_back(sup_norm_error(V, Ve, order, order <= 2));
    }
    auto f = fit::loglog(eps_list, sups);
    const double expected = 2.0 + kappa - order;
    INFO("order ", order, " slope ", f.slope);
    CHECK(std::abs(f.slope - expected) <= 0.2);
  }
}

TEST_CASE("check_noncritical") {
  auto flat = ScalarField::constant(1, -1.0);
  const double lo[1] = {-1.0}, hi[1] = {1.0};
  auto rep = check_noncritical(flat, lo, hi, 0.1, 0.5, 0.01);
  CHECK(rep.holds);
  CHECK(rep.measured_min ==
        doctest::Approx(1.0 + std::pow(0.1, 2.0 / 3.0)).epsilon(1e-12));

  // gaussian well vanishes near its support edge: must fail there
  auto V = make_library_potential("gaussian_well", {{"depth", 1.0}, {"width", 1.0}});
  const double lo2[1] = {V.support_radius - 0.5}, hi2[1] = {V.support_radius + 0.5};
  auto rep2 = check_noncritical(V.field, lo2, hi2, 1e-3, 0.5, 0.005);
  CHECK_FALSE(rep2.holds);

  // mollified field keeps the non-critical level up to C eps^{2+kappa}
  auto k = make_mollifier_kernel();
  const double lo3[1] = {-0.5}, hi3[1] = {0.5};
  auto base_rep = check_noncritical(V.field, lo3, hi3, 0.1, 0.5, 0.01);
  CHECK(base_rep.holds);
  auto Ve = mollify(V, 0.05, k);
  auto field = Ve.as_field();
  auto moll_rep = check_noncritical(field, lo3, hi3, 0.1, 0.5, 0.01);
  CHECK(moll_rep.holds);
  CHECK(moll_rep.measured_min >= base_rep.measured_min - 1.0 * std::pow(0.05, 2.5));
}

TEST_CASE("gauge transform") {
  auto a = VectorField::zero(2);
  // chi = 3 x0 - 2 x1 (linear): grad chi constant
  ScalarField chi;
  chi.dim = 2;
  chi.value = [](const double* x) { return 3.0 * x[0] - 2.0 * x[1]; };
  chi.gradient = [](const double*, double* g) {
    g[0] = 3.0;
    g[1] = -2.0;
  };
  chi.hessian = [](const double*, double* h) {
    for (int i = 0; i < 4; ++i) h[i] = 0.0;
  };
  auto at = gauge_transform(a, chi);
  const double p[2] = {0.3, -0.7};
  double out[2];
  at.eval(p, out);
  CHECK(out[0] == doctest::Approx(3.0));
  CHECK(out[1] == doctest::Approx(-2.0));

  // chi = 0 leaves a unchanged
  auto id = gauge_transform(a, ScalarField::constant(2, 0.0));
  id.eval(p, out);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.0);
}
