#include "wlab/phasespace.hpp"

#include <cmath>

#include "wlab/numerics.hpp"
#include "wlab/specfun.hpp"

namespace wlab::phasespace {

namespace {

double neg_part(double v) { return v < 0.0 ? -v : 0.0; }

double sup_neg_part(const ScalarField& V, int d, const std::array<double, 3>& lo,
                    const std::array<double, 3>& hi, int n_per_axis) {
  double x[3] = {0, 0, 0};
  double sup = 0.0;
  const int n1 = d >= 2 ? n_per_axis : 1, n2 = d >= 3 ? n_per_axis : 1;
  for (int i = 0; i < n_per_axis; ++i) {
    x[0] = lo[0] + (hi[0] - lo[0]) * (i + 0.5) / n_per_axis;
    for (int j = 0; j < n1; ++j) {
      if (d >= 2) x[1] = lo[1] + (hi[1] - lo[1]) * (j + 0.5) / n1;
      for (int k = 0; k < n2; ++k) {
        if (d >= 3) x[2] = lo[2] + (hi[2] - lo[2]) * (k + 0.5) / n2;
        sup = std::max(sup, neg_part(V.value(x)));
      }
    }
  }
  return sup;
}

double box_quadrature(const WeylTermRequest& req,
                      const std::function<double(const double*)>& f) {
  if (req.fixed_panels > 0)
    return quad::integrate_box_fixed(req.d, f, req.lo.data(), req.hi.data(),
                                     req.fixed_panels, 12);
  return quad::integrate_box(req.d, f, req.lo.data(), req.hi.data(), req.tol);
}

}  // namespace

double weyl_term_closed(const WeylTermRequest& req) {
  const double q = 0.5 * req.d + req.gamma;
  const double L = specfun::weyl_constant(req.gamma, req.d);
  auto integrand = [&](const double* x) {
    const double phi = req.phi.value(x);
    if (phi == 0.0) return 0.0;
    return std::pow(neg_part(req.V.value(x)), q) * phi;
  };
  const double I = box_quadrature(req, integrand);
  return std::pow(req.hbar, -req.d) * L * I;
}

double weyl_term_quadrature(const WeylTermRequest& req, double p_cutoff) {
  const double sup = sup_neg_part(req.V, req.d, req.lo, req.hi, 64);
  if (p_cutoff * p_cutoff < sup)
    throw DomainError("weyl_term_quadrature: p_cutoff below sup V_-");
  auto integrand = [&](const double* x) {
    const double phi = req.phi.value(x);
    if (phi == 0.0) return 0.0;
    // (2 pi)^{-d} momentum integral by radial quadrature at this x
    return specfun::momentum_integral_quadrature(req.gamma, req.d,
                                                 req.V.value(x), 1e-9) *
           phi;
  };
  const double I = box_quadrature(req, integrand);
  return std::pow(req.hbar, -req.d) * I;
}

double weyl_term_quadrature_shifted(const WeylTermRequest& req, double p_cutoff,
                                    const ScalarField& a, double mu) {
  if (req.d != 1)
    throw DomainError("weyl_term_quadrature_shifted: d = 1 only");
  const double sup = sup_neg_part(req.V, 1, req.lo, req.hi, 512);
  if (p_cutoff * p_cutoff < sup)
    throw DomainError("weyl_term_quadrature_shifted: p_cutoff below sup V_-");
  auto integrand = [&](const double* x) {
    const double phi = req.phi.value(x);
    if (phi == 0.0) return 0.0;
    const double w = mu * a.value(x);
    return specfun::momentum_integral_shifted_1d(req.gamma, req.V.value(x), w,
                                                 p_cutoff, req.tol * 0.1) *
           phi;
  };
  const double I =
      quad::integrate_box(1, integrand, req.lo.data(), req.hi.data(), req.tol);
  return I / req.hbar;
}

CompareReport phase_space_compare(const ScalarField& V, const ScalarField& V_eps,
                                  const ScalarField& phi, double gamma, int d,
                                  const std::array<double, 3>& lo,
                                  const std::array<double, 3>& hi, double tol,
                                  int fixed_panels) {
  const double q = 0.5 * d + gamma;
  const double L = specfun::weyl_constant(gamma, d);

  auto diff_integrand = [&](const double* x) {
    const double w = phi.value(x);
    if (w == 0.0) return 0.0;
    return (std::pow(neg_part(V_eps.value(x)), q) -
            std::pow(neg_part(V.value(x)), q)) *
           w;
  };
  const double raw =
      fixed_panels > 0
          ? quad::integrate_box_fixed(d, diff_integrand, lo.data(), hi.data(),
                                      fixed_panels, 12)
          : quad::integrate_box(d, diff_integrand, lo.data(), hi.data(), tol);

  CompareReport rep;
  rep.value = std::abs(L * raw);

  // sup gap and range of the negative parts over a sampling grid
  double sup_gap = 0.0, range = 0.0;
  {
    const int n = d == 1 ? 4096 : (d == 2 ? 128 : 48);
    double x[3] = {0, 0, 0};
    const int n1 = d >= 2 ? n : 1, n2 = d >= 3 ? n : 1;
    for (int i = 0; i < n; ++i) {
      x[0] = lo[0] + (hi[0] - lo[0]) * (i + 0.5) / n;
      for (int j = 0; j < n1; ++j) {
        if (d >= 2) x[1] = lo[1] + (hi[1] - lo[1]) * (j + 0.5) / n1;
        for (int k = 0; k < n2; ++k) {
          if (d >= 3) x[2] = lo[2] + (hi[2] - lo[2]) * (k + 0.5) / n2;
          if (phi.value(x) == 0.0) continue;
          const double a = neg_part(V.value(x)), b = neg_part(V_eps.value(x));
          sup_gap = std::max(sup_gap, std::abs(a - b));
          range = std::max({range, a, b});
        }
      }
    }
  }
  rep.sup_gap = sup_gap;

  // Lipschitz constant of r -> r^q on [0, range]; q >= 1 on the corpus
  auto abs_phi = [&](const double* x) { return std::abs(phi.value(x)); };
  const double phi_mass =
      fixed_panels > 0 ? quad::integrate_box_fixed(d, abs_phi, lo.data(),
                                                   hi.data(), fixed_panels, 12)
                       : quad::integrate_box(d, abs_phi, lo.data(), hi.data(), tol);
  // q >= 1: Lipschitz on [0, range]; q < 1: Holder |a^q - b^q| <= |a-b|^q
  if (q >= 1.0)
    rep.bound = L * q * std::pow(std::max(range, 1e-300), q - 1.0) * sup_gap *
                phi_mass;
  else
    rep.bound = L * std::pow(sup_gap, q) * phi_mass;
  rep.within_bound = rep.value <= rep.bound * (1.0 + 1e-9) + 1e-14;
  return rep;
}

ScalarField make_localizer(int d, const std::array<double, 3>& center,
                           double radius, double plateau_frac) {
  const double r1 = plateau_frac * radius;
  ScalarField f = ScalarField::radial_of_r2(
      d, SmoothFunction::step_down(r1 * r1, radius * radius), radius);
  return field_shift(f, center);
}

double field_mass(const ScalarField& phi, int d, const std::array<double, 3>& lo,
                  const std::array<double, 3>& hi, double tol, int fixed_panels) {
  auto f = [&](const double* x) { return phi.value(x); };
  if (fixed_panels > 0)
    return quad::integrate_box_fixed(d, f, lo.data(), hi.data(), fixed_panels, 12);
  return quad::integrate_box(d, f, lo.data(), hi.data(), tol);
}

}  // namespace wlab::phasespace
