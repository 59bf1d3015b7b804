#include "wlab/potentials.hpp"

#include <cmath>

#include "wlab/numerics.hpp"

namespace wlab::potentials {

namespace {

double get_param(const std::map<std::string, double>& params,
                 const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

int get_dim(const std::map<std::string, double>& params) {
  const int d = static_cast<int>(get_param(params, "dimension", 1));
  if (d < 1 || d > 3) throw DomainError("potential: dimension must be 1..3");
  return d;
}

// Smooth radial cutoff in the r^2 variable: 1 for r <= r_flat, 0 for r >= r_max.
SmoothFunction radial_cut(double r_flat, double r_max) {
  return SmoothFunction::step_down(r_flat * r_flat, r_max * r_max);
}

PotentialModel gaussian_well(const std::map<std::string, double>& params) {
  const int d = get_dim(params);
  const double depth = get_param(params, "depth", 1.0);
  const double width = get_param(params, "width", 1.0);
  const double R = get_param(params, "support_radius", 5.0 * width);
  if (depth <= 0.0 || width <= 0.0) throw DomainError("gaussian_well: bad params");
  auto profile = SmoothFunction::exp_decay(1.0 / (2.0 * width * width))
                     .product(radial_cut(0.7 * R, R))
                     .scaled(-depth);
  PotentialModel V;
  V.name = "gaussian_well";
  V.field = ScalarField::radial_of_r2(d, profile, R);
  V.kappa = 1.0;
  V.support_radius = R;
  V.holder_constant = sample_holder_ratio(V, 2000, 42);
  return V;
}

PotentialModel holder_well(const std::map<std::string, double>& params) {
  const int d = get_dim(params);
  const double depth = get_param(params, "depth", 1.0);
  const double width = get_param(params, "width", 1.2);
  const double kappa = get_param(params, "kappa", 0.5);
  const double amp = get_param(params, "amplitude", 2.0 * depth);
  const double R = get_param(params, "support_radius", 4.0);
  std::array<double, 3> x0 = {get_param(params, "x0", 0.0),
                              get_param(params, "x1", 0.0),
                              get_param(params, "x2", 0.0)};
  if (!(kappa > 0.0 && kappa <= 1.0)) throw DomainError("holder_well: kappa in (0,1]");

  // Smooth well plus amp * |x - x0|^{2+kappa} under its own Gaussian
  // envelope. The envelope kills the singular term well before the outer
  // cutoff so the Hessian's Holder modulus is governed by the singular
  // point, not by cutoff derivatives.
  auto well_profile = SmoothFunction::exp_decay(1.0 / (2.0 * width * width))
                          .scaled(-depth);
  ScalarField smooth_part = ScalarField::radial_of_r2(d, well_profile, R);
  const double sigma = 0.8;
  ScalarField envelope = field_shift(
      ScalarField::radial_of_r2(d, SmoothFunction::exp_decay(1.0 / (2.0 * sigma * sigma)), R),
      x0);
  ScalarField rough_part =
      field_product(ScalarField::power_radial(d, 2.0 + kappa, x0), envelope);
  ScalarField cut = ScalarField::radial_of_r2(d, radial_cut(0.6 * R, R), R);
  PotentialModel V;
  V.name = "holder_well";
  V.field = field_product(field_sum(smooth_part, field_scale(rough_part, amp)), cut);
  V.field.support_radius = R;
  V.kappa = kappa;
  // entrywise Holder modulus of amp * Hess |x|^{2+kappa} at the singular point
  V.holder_constant = amp * (2.0 + kappa) * (1.0 + kappa);
  V.support_radius = R;
  return V;
}

// flat-bottom well: -depth on |x| <= r_flat, smooth rise to 0 by the
// support radius; non-critical on any region compactly inside r_flat
PotentialModel plateau_well(const std::map<std::string, double>& params) {
  const int d = get_dim(params);
  const double depth = get_param(params, "depth", 1.0);
  const double r1 = get_param(params, "r_flat", 1.2);
  const double R = get_param(params, "support_radius", 2.0 * r1);
  if (!(R > r1)) throw DomainError("plateau_well: support_radius > r_flat");
  auto prof = SmoothFunction::step_down(r1 * r1, R * R).scaled(-depth);
  PotentialModel V;
  V.name = "plateau_well";
  V.field = ScalarField::radial_of_r2(d, prof, R);
  V.kappa = 1.0;
  V.support_radius = R;
  V.holder_constant = sample_holder_ratio(V, 2000, 42);
  return V;
}

// constant potential (torus calibration runs)
PotentialModel flat(const std::map<std::string, double>& params) {
  const int d = get_dim(params);
  const double depth = get_param(params, "depth", 1.0);
  PotentialModel V;
  V.name = "flat";
  V.field = ScalarField::constant(d, -depth);
  V.kappa = 1.0;
  V.support_radius = std::numeric_limits<double>::infinity();
  V.holder_constant = 0.0;
  return V;
}

// lacunary cosine sum: second derivatives are Holder-kappa on the whole
// support, not just at one point
PotentialModel weierstrass_well(const std::map<std::string, double>& params) {
  const int d = get_dim(params);
  const double depth = get_param(params, "depth", 1.0);
  const double amp = get_param(params, "amplitude", 0.5 * depth);
  const double kappa = get_param(params, "kappa", 0.5);
  const double base = get_param(params, "base", 1.3);
  const int modes = static_cast<int>(get_param(params, "modes", 18));
  const double R = get_param(params, "support_radius", 4.0);
  if (!(kappa > 0.0 && kappa <= 1.0))
    throw DomainError("weierstrass_well: kappa in (0,1]");
  if (!(base > 1.0)) throw DomainError("weierstrass_well: base > 1");

  std::vector<double> freq(modes), coef(modes);
  for (int k = 0; k < modes; ++k) {
    freq[k] = std::pow(base, k + 1);
    coef[k] = std::pow(base, -(k + 1) * (2.0 + kappa));
  }
  ScalarField W;
  W.dim = d;
  W.value = [freq, coef, d](const double* x) {
    double s = 0.0;
    for (int j = 0; j < d; ++j)
      for (size_t k = 0; k < freq.size(); ++k)
        s += coef[k] * std::cos(freq[k] * x[j]);
    return s;
  };
  W.gradient = [freq, coef, d](const double* x, double* g) {
    for (int j = 0; j < d; ++j) {
      g[j] = 0.0;
      for (size_t k = 0; k < freq.size(); ++k)
        g[j] -= coef[k] * freq[k] * std::sin(freq[k] * x[j]);
    }
  };
  W.hessian = [freq, coef, d](const double* x, double* h) {
    for (int i = 0; i < d * d; ++i) h[i] = 0.0;
    for (int j = 0; j < d; ++j)
      for (size_t k = 0; k < freq.size(); ++k)
        h[j * d + j] -= coef[k] * freq[k] * freq[k] * std::cos(freq[k] * x[j]);
  };

  ScalarField cut = ScalarField::radial_of_r2(d, radial_cut(0.6 * R, R), R);
  PotentialModel V;
  V.name = "weierstrass_well";
  V.field = field_product(
      field_sum(ScalarField::constant(d, -depth), field_scale(W, amp)), cut);
  V.field.support_radius = R;
  V.kappa = kappa;
  V.support_radius = R;
  V.holder_constant = sample_holder_ratio(V, 4000, 42);
  return V;
}

PotentialModel double_well(const std::map<std::string, double>& params) {
  const int d = get_dim(params);
  const double depth = get_param(params, "depth", 1.0);
  const double width = get_param(params, "width", 0.6);
  const double sep = get_param(params, "separation", 2.0);
  const double R = get_param(params, "support_radius", sep + 5.0 * width);
  auto profile = SmoothFunction::exp_decay(1.0 / (2.0 * width * width))
                     .product(radial_cut(3.0 * width, 4.5 * width))
                     .scaled(-depth);
  ScalarField lobe = ScalarField::radial_of_r2(d, profile, 4.5 * width);
  std::array<double, 3> left = {-0.5 * sep, 0, 0}, right = {0.5 * sep, 0, 0};
  PotentialModel V;
  V.name = "double_well";
  V.field = field_sum(field_shift(lobe, left), field_shift(lobe, right));
  V.field.support_radius = R;
  V.kappa = 1.0;
  V.support_radius = R;
  V.holder_constant = sample_holder_ratio(V, 2000, 42);
  return V;
}

}  // namespace

double MollifierKernel::moment(int j) const {
  return quad::integrate(
      [&](double t) { return std::pow(t, j) * profile(t); }, -1.0, 1.0, 1e-13);
}

MollifierKernel make_mollifier_kernel() {
  // profile (c0 + c2 t^2) b(t): solve the 2x2 moment system so that
  // moments 0..2 are (1, 0, 0); odd moments vanish by symmetry.
  SmoothFunction b = SmoothFunction::bump(-1.0, 1.0);
  auto mom = [&](int j) {
    return quad::integrate([&](double t) { return std::pow(t, j) * b(t); },
                           -1.0, 1.0, 1e-13);
  };
  const double m0 = mom(0), m2 = mom(2), m4 = mom(4);
  const double c0 = 1.0 / (m0 - m2 * m2 / m4);
  const double c2 = -c0 * m2 / m4;
  MollifierKernel k;
  k.c0 = c0;
  k.c2 = c2;
  k.profile = SmoothFunction::poly_times({c0, 0.0, c2}, b);
  return k;
}

namespace {

// integrand for one point of the mollified field:
//   prefactor * Int (d^(alpha-beta) Psi)(z) (d^beta V)(x - eps z) dz
struct ConvPlan {
  int beta[3] = {0, 0, 0};   // derivatives placed on V (|beta| <= 2)
  int on_kernel[3] = {0, 0, 0};
  double prefactor = 1.0;    // eps^{-|alpha - beta|}
};

ConvPlan plan_derivative(const int alpha[3], int dim, double eps) {
  ConvPlan p;
  int budget = 2;
  int rem[3];
  for (int j = 0; j < dim; ++j) rem[j] = alpha[j];
  // place derivatives on V greedily, largest axis first
  while (budget > 0) {
    int best = -1;
    for (int j = 0; j < dim; ++j)
      if (rem[j] > 0 && (best < 0 || rem[j] > rem[best])) best = j;
    if (best < 0) break;
    p.beta[best] += 1;
    rem[best] -= 1;
    budget -= 1;
  }
  int transferred = 0;
  for (int j = 0; j < dim; ++j) {
    p.on_kernel[j] = rem[j];
    transferred += rem[j];
  }
  p.prefactor = std::pow(eps, -transferred);
  return p;
}

double eval_dbeta_V(const PotentialModel& V, const double* y, const int beta[3],
                    int dim) {
  const int total = beta[0] + beta[1] + beta[2];
  if (total == 0) return V.field.value(y);
  if (total == 1) {
    double g[3];
    V.field.gradient(y, g);
    for (int j = 0; j < dim; ++j)
      if (beta[j] == 1) return g[j];
  }
  if (total == 2) {
    double h[9];
    V.field.hessian(y, h);
    int i = -1, j = -1;
    for (int k = 0; k < dim; ++k) {
      if (beta[k] == 2) return h[k * dim + k];
      if (beta[k] == 1) (i < 0 ? i : j) = k;
    }
    return h[i * dim + j];
  }
  throw DomainError("mollify: more than two derivatives on the base field");
}

}  // namespace

void MollifiedPotential::build_value_rule() {
  auto rule = std::make_shared<std::vector<std::pair<double, double>>>();
  const auto& gl = quad::gauss_legendre(tensor_nodes);
  const double step = 2.0 / tensor_panels;
  for (int p = 0; p < tensor_panels; ++p) {
    const double a = -1.0 + p * step, c = a + 0.5 * step, h = 0.5 * step;
    for (int i = 0; i < tensor_nodes; ++i) {
      const double z = c + h * gl.nodes[i];
      rule->emplace_back(z, h * gl.weights[i] * kernel.eval1d(z));
    }
  }
  value_rule = rule;
}

double MollifiedPotential::value(const double* x) const {
  const int dim = base.field.dim;
  if (dim >= 2 && value_rule) {
    double r2 = 0.0;
    for (int j = 0; j < dim; ++j) r2 += x[j] * x[j];
    const double reach = support_radius();
    if (r2 > reach * reach) return 0.0;
    const auto& rule = *value_rule;
    const size_t m = rule.size();
    double y[3], acc = 0.0;
    if (dim == 2) {
      for (size_t i = 0; i < m; ++i) {
        y[0] = x[0] - epsilon * rule[i].first;
        double row = 0.0;
        for (size_t j = 0; j < m; ++j) {
          y[1] = x[1] - epsilon * rule[j].first;
          row += rule[j].second * base.field.value(y);
        }
        acc += rule[i].second * row;
      }
    } else {
      for (size_t i = 0; i < m; ++i) {
        y[0] = x[0] - epsilon * rule[i].first;
        double plane = 0.0;
        for (size_t j = 0; j < m; ++j) {
          y[1] = x[1] - epsilon * rule[j].first;
          double row = 0.0;
          for (size_t k = 0; k < m; ++k) {
            y[2] = x[2] - epsilon * rule[k].first;
            row += rule[k].second * base.field.value(y);
          }
          plane += rule[j].second * row;
        }
        acc += rule[i].second * plane;
      }
    }
    return acc;
  }
  const int zero[3] = {0, 0, 0};
  return derivative(x, zero);
}

double MollifiedPotential::derivative(const double* x, const int alpha[3]) const {
  const int dim = base.field.dim;
  int total = 0;
  for (int j = 0; j < dim; ++j) total += alpha[j];
  if (total > 4) throw DomainError("mollified derivative: order > 4 unsupported");

  // quick support rejection
  double r2 = 0.0;
  for (int j = 0; j < dim; ++j) r2 += x[j] * x[j];
  const double reach = support_radius();
  if (r2 > reach * reach) return 0.0;

  ConvPlan plan = plan_derivative(alpha, dim, epsilon);
  const auto& kern = kernel;
  const double eps = epsilon;
  const PotentialModel& V = base;

  double y[3] = {0, 0, 0};
  if (dim == 1) {
    auto f = [&](double z) {
      y[0] = x[0] - eps * z;
      return kern.deriv1d(plan.on_kernel[0], z) * eval_dbeta_V(V, y, plan.beta, 1);
    };
    return plan.prefactor * quad::integrate(f, -1.0, 1.0, quad_tol);
  }
  // dim 2/3: fixed tensor rule; corpus fields are smooth enough here and
  // the kernel's flat edges keep Gauss-Legendre spectral
  auto f = [&](const double* z) {
    double w = 1.0;
    for (int j = 0; j < dim; ++j) {
      w *= kern.deriv1d(plan.on_kernel[j], z[j]);
      y[j] = x[j] - eps * z[j];
    }
    return w * eval_dbeta_V(V, y, plan.beta, dim);
  };
  const double lo[3] = {-1, -1, -1}, hi[3] = {1, 1, 1};
  return plan.prefactor *
         quad::integrate_box_fixed(dim, f, lo, hi, tensor_panels, tensor_nodes);
}

ScalarField MollifiedPotential::as_field() const {
  ScalarField f;
  f.dim = base.field.dim;
  f.support_radius = support_radius();
  MollifiedPotential self = *this;
  f.value = [self](const double* x) { return self.value(x); };
  f.gradient = [self](const double* x, double* g) {
    const int d = self.base.field.dim;
    for (int j = 0; j < d; ++j) {
      int alpha[3] = {0, 0, 0};
      alpha[j] = 1;
      g[j] = self.derivative(x, alpha);
    }
  };
  f.hessian = [self](const double* x, double* h) {
    const int d = self.base.field.dim;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        int alpha[3] = {0, 0, 0};
        alpha[i] += 1;
        alpha[j] += 1;
        h[i * d + j] = h[j * d + i] = self.derivative(x, alpha);
      }
  };
  return f;
}

MollifiedPotential mollify(const PotentialModel& V, double epsilon,
                           const MollifierKernel& kernel, double tol) {
  if (epsilon <= 0.0) throw DomainError("mollify: epsilon must be positive");
  MollifiedPotential m;
  m.base = V;
  m.epsilon = epsilon;
  m.kernel = kernel;
  m.quad_tol = tol;
  return m;
}

NoncriticalReport check_noncritical(const ScalarField& V, const double* lo,
                                    const double* hi, double hbar, double c,
                                    double max_spacing) {
  const int d = V.dim;
  int n[3];
  for (int j = 0; j < d; ++j) {
    if (!(hi[j] > lo[j])) throw DomainError("check_noncritical: empty region");
    n[j] = std::max(2, static_cast<int>(std::ceil((hi[j] - lo[j]) / max_spacing)) + 1);
  }
  const double floor_term = std::pow(hbar, 2.0 / 3.0);
  double best = std::numeric_limits<double>::infinity();
  double x[3] = {0, 0, 0};
  const int n1 = d >= 2 ? n[1] : 1, n2 = d >= 3 ? n[2] : 1;
  for (int i = 0; i < n[0]; ++i) {
    x[0] = lo[0] + (hi[0] - lo[0]) * i / (n[0] - 1.0);
    for (int j = 0; j < n1; ++j) {
      if (d >= 2) x[1] = lo[1] + (hi[1] - lo[1]) * j / (n[1] - 1.0);
      for (int k = 0; k < n2; ++k) {
        if (d >= 3) x[2] = lo[2] + (hi[2] - lo[2]) * k / (n[2] - 1.0);
        best = std::min(best, std::abs(V.value(x)) + floor_term);
      }
    }
  }
  return {best >= c, best};
}

VectorPotential gauge_transform(const VectorPotential& a, const ScalarField& chi) {
  if (!chi.gradient) throw DomainError("gauge_transform: chi needs a gradient oracle");
  VectorPotential out;
  out.dim = a.dim;
  for (int j = 0; j < a.dim; ++j) {
    ScalarField comp = a.components[j];
    auto base_val = comp.value;
    auto chi_grad = chi.gradient;
    const int dj = j, dim = a.dim;
    comp.value = [base_val, chi_grad, dj, dim](const double* x) {
      double g[3];
      chi_grad(x, g);
      return base_val(x) + g[dj];
    };
    if (comp.gradient && chi.hessian) {
      auto base_grad = comp.gradient;
      auto chi_hess = chi.hessian;
      comp.gradient = [base_grad, chi_hess, dj, dim](const double* x, double* g) {
        double h[9];
        base_grad(x, g);
        chi_hess(x, h);
        for (int i = 0; i < dim; ++i) g[i] += h[i * dim + dj];
      };
    } else {
      comp.gradient = nullptr;
    }
    comp.hessian = nullptr;
    out.components.push_back(comp);
  }
  return out;
}

double sample_holder_ratio(const PotentialModel& V, int pairs, std::uint64_t seed) {
  const int d = V.field.dim;
  const double R = V.support_radius;
  rng::SplitMix64 gen(seed);
  double worst = 0.0;
  double ha[9], hb[9];
  for (int it = 0; it < pairs; ++it) {
    double x[3] = {0, 0, 0}, y[3] = {0, 0, 0};
    for (int j = 0; j < d; ++j) {
      x[j] = gen.uniform(-R, R);
      // mix of near and far pairs; near pairs probe the modulus at small scales
      const double scale = (it % 2 == 0) ? 1e-3 : 0.3;
      y[j] = x[j] + gen.uniform(-scale, scale);
    }
    double dist2 = 0.0;
    for (int j = 0; j < d; ++j) dist2 += (x[j] - y[j]) * (x[j] - y[j]);
    if (dist2 == 0.0) continue;
    V.field.hessian(x, ha);
    V.field.hessian(y, hb);
    double diff = 0.0;
    for (int j = 0; j < d * d; ++j) diff = std::max(diff, std::abs(ha[j] - hb[j]));
    worst = std::max(worst, diff / std::pow(std::sqrt(dist2), V.kappa));
  }
  return worst;
}

PotentialModel make_library_potential(const std::string& name,
                                      const std::map<std::string, double>& params) {
  if (name == "gaussian_well") return gaussian_well(params);
  if (name == "holder_well") return holder_well(params);
  if (name == "weierstrass_well") return weierstrass_well(params);
  if (name == "double_well") return double_well(params);
  if (name == "plateau_well") return plateau_well(params);
  if (name == "flat") return flat(params);
  throw DomainError("unknown potential: " + name);
}

}  // namespace wlab::potentials
