#include "wlab/multiscale.hpp"

#include <cmath>

#include "wlab/numerics.hpp"

namespace wlab::multiscale {

Region Region::ball(int dim, const std::array<double, 3>& c, double r) {
  Region out;
  out.dim = dim;
  out.is_ball = true;
  out.center = c;
  out.radius = r;
  for (int j = 0; j < dim; ++j) {
    out.lo[j] = c[j] - r;
    out.hi[j] = c[j] + r;
  }
  return out;
}

Region Region::box(int dim, const std::array<double, 3>& lo,
                   const std::array<double, 3>& hi) {
  Region out;
  out.dim = dim;
  out.lo = lo;
  out.hi = hi;
  return out;
}

double ScaleFunction::operator()(const double* x) const {
  if (mode == Mode::large_mu) return const_value;
  const double v = V.value(x);
  return std::sqrt(v * v + std::pow(hbar, 4.0 / 3.0)) / A;
}

double ScaleFunction::grad_norm(const double* x) const {
  if (mode == Mode::large_mu) return 0.0;
  const double v = V.value(x);
  double g[3] = {0, 0, 0};
  V.gradient(x, g);
  double gn = 0.0;
  for (int j = 0; j < dim; ++j) gn += g[j] * g[j];
  gn = std::sqrt(gn);
  const double root = std::sqrt(v * v + std::pow(hbar, 4.0 / 3.0));
  return std::abs(v) * gn / (A * root);
}

namespace {

// deterministic sample sweep over a region (grid + jitter-free)
template <typename F>
void for_each_sample(const Region& region, int per_axis, F&& fn) {
  const int d = region.dim;
  double x[3] = {0, 0, 0};
  const int n1 = d >= 2 ? per_axis : 1, n2 = d >= 3 ? per_axis : 1;
  for (int i = 0; i < per_axis; ++i) {
    x[0] = region.lo[0] + (region.hi[0] - region.lo[0]) * (i + 0.5) / per_axis;
    for (int j = 0; j < n1; ++j) {
      if (d >= 2)
        x[1] = region.lo[1] + (region.hi[1] - region.lo[1]) * (j + 0.5) / n1;
      for (int k = 0; k < n2; ++k) {
        if (d >= 3)
          x[2] = region.lo[2] + (region.hi[2] - region.lo[2]) * (k + 0.5) / n2;
        if (region.inside(x)) fn(x);
      }
    }
  }
}

int samples_per_axis(int dim) { return dim == 1 ? 4096 : (dim == 2 ? 128 : 40); }

}  // namespace

ScaleFunction calibrate_scale(const ScalarField& V, double hbar,
                              const Region& target, double epsilon_buffer) {
  if (!(epsilon_buffer > 0.0))
    throw DomainError("calibrate_scale: epsilon_buffer must be positive");
  ScaleFunction l;
  l.mode = ScaleFunction::Mode::noncritical;
  l.dim = target.dim;
  l.hbar = hbar;
  l.epsilon_buffer = epsilon_buffer;
  l.V = V;

  const double cap = std::min(epsilon_buffer / 11.0, 1.0);
  l.A = 1.0;
  for (int iter = 0; iter < 60; ++iter) {
    double sup_l = 0.0, sup_g = 0.0;
    for_each_sample(target, samples_per_axis(target.dim), [&](const double* x) {
      sup_l = std::max(sup_l, l(x));
      sup_g = std::max(sup_g, l.grad_norm(x));
    });
    if (sup_l <= cap && sup_g < 0.125) {
      l.rho = sup_g;
      return l;
    }
    l.A *= 2.0;
  }
  throw std::runtime_error("calibrate_scale: doubling search failed");
}

ScaleFunction large_mu_scale(int dim, double mu, double mu0,
                             double epsilon_buffer) {
  if (mu < mu0) throw DomainError("large_mu_scale: requires mu >= mu0");
  if (!(mu0 > 0.0 && mu0 < 1.0)) throw DomainError("large_mu_scale: mu0 in (0,1)");
  ScaleFunction l;
  l.mode = ScaleFunction::Mode::large_mu;
  l.dim = dim;
  l.epsilon_buffer = epsilon_buffer;
  l.const_value = std::min(1.0, epsilon_buffer / 11.0) * mu0 / mu;
  l.rho = 0.0;
  l.A = 1.0;
  return l;
}

namespace {

struct CoverState {
  const Region* region;
  const ScaleFunction* l;
  std::vector<std::array<double, 3>>* centers;
  std::vector<double>* scales;
};

// true if the cell (center c, half-width h per axis) lies inside the
// ball of cover element k, with the cell's diagonal as padding
bool cell_inside_ball(const CoverState& st, size_t k, const double* c,
                      double h) {
  const auto& xk = (*st.centers)[k];
  const double r = (*st.scales)[k];
  double dist2 = 0.0;
  for (int j = 0; j < st.region->dim; ++j)
    dist2 += (c[j] - xk[j]) * (c[j] - xk[j]);
  const double pad = h * std::sqrt(static_cast<double>(st.region->dim));
  const double d = std::sqrt(dist2) + pad;
  return d <= r;
}

bool point_in_ball(const CoverState& st, size_t k, const double* x) {
  const auto& xk = (*st.centers)[k];
  const double r = (*st.scales)[k];
  double dist2 = 0.0;
  for (int j = 0; j < st.region->dim; ++j)
    dist2 += (x[j] - xk[j]) * (x[j] - xk[j]);
  return dist2 < r * r;
}

// depth-first octree search for a point of the region not covered by any
// ball; candidate ball lists shrink as cells are subdivided. The leaf
// resolution l/8 also bounds the partition denominator away from zero:
// every region point sits within a leaf diagonal of a covered leaf center.
bool find_uncovered(const CoverState& st, const double* c, double h,
                    const std::vector<size_t>& candidates, double* out) {
  std::vector<size_t> kept;
  kept.reserve(candidates.size());
  for (size_t k : candidates) {
    if (cell_inside_ball(st, k, c, h)) return false;
    // keep candidates that can still touch the cell
    const auto& xk = (*st.centers)[k];
    const double r = (*st.scales)[k];
    double dist2 = 0.0;
    for (int j = 0; j < st.region->dim; ++j)
      dist2 += (c[j] - xk[j]) * (c[j] - xk[j]);
    const double pad = h * std::sqrt(static_cast<double>(st.region->dim));
    if (std::sqrt(dist2) - pad <= r) kept.push_back(k);
  }
  const double l_here = (*st.l)(c);
  if (2.0 * h <= l_here / 8.0) {
    // leaf: test the center point
    if (!st.region->inside(c)) return false;
    for (size_t k : kept)
      if (point_in_ball(st, k, c)) return false;
    for (int j = 0; j < st.region->dim; ++j) out[j] = c[j];
    return true;
  }
  // subdivide
  const int d = st.region->dim;
  const int children = 1 << d;
  for (int m = 0; m < children; ++m) {
    double cc[3] = {c[0], c[1], c[2]};
    for (int j = 0; j < d; ++j)
      cc[j] += ((m >> j) & 1 ? 0.5 : -0.5) * h;
    // skip children with no region overlap (box test)
    bool overlap = true;
    for (int j = 0; j < d; ++j) {
      if (cc[j] + 0.5 * h < st.region->lo[j] ||
          cc[j] - 0.5 * h > st.region->hi[j])
        overlap = false;
    }
    if (!overlap) continue;
    if (find_uncovered(st, cc, 0.5 * h, kept, out)) return true;
  }
  return false;
}

}  // namespace

ScaleCover greedy_cover(const Region& region, const ScaleFunction& l) {
  ScaleCover cover;
  cover.l = l;
  cover.region = region;
  cover.overlap_bound = 2;
  for (int j = 0; j < region.dim; ++j) cover.overlap_bound *= 6;

  CoverState st{&region, &l, &cover.centers, &cover.scales};
  double root_c[3] = {0, 0, 0};
  double root_h = 0.0;
  for (int j = 0; j < region.dim; ++j) {
    root_c[j] = 0.5 * (region.lo[j] + region.hi[j]);
    root_h = std::max(root_h, 0.5 * (region.hi[j] - region.lo[j]));
  }

  const size_t hard_cap = 2000000;
  double found[3];
  while (cover.centers.size() < hard_cap) {
    std::vector<size_t> all(cover.centers.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = i;
    if (!find_uncovered(st, root_c, root_h, all, found)) break;
    std::array<double, 3> x{found[0], found[1], found[2]};
    cover.centers.push_back(x);
    cover.scales.push_back(l(found));
  }
  if (cover.centers.size() >= hard_cap)
    throw std::runtime_error("greedy_cover: ball budget exhausted");

  // multiplicity audit over full balls
  int worst = 0;
  bool all_covered = true;
  for_each_sample(region, samples_per_axis(region.dim), [&](const double* x) {
    int mult = 0;
    for (size_t k = 0; k < cover.size(); ++k) {
      double dist2 = 0.0;
      for (int j = 0; j < region.dim; ++j)
        dist2 += (x[j] - cover.centers[k][j]) * (x[j] - cover.centers[k][j]);
      if (dist2 < cover.scales[k] * cover.scales[k]) ++mult;
    }
    worst = std::max(worst, mult);
    all_covered = all_covered && mult >= 1;
  });
  cover.measured_overlap = worst;
  if (!all_covered)
    throw std::runtime_error("greedy_cover: audit found an uncovered sample");
  if (worst > cover.overlap_bound)
    throw std::runtime_error("greedy_cover: overlap exceeds the packing bound");
  return cover;
}

namespace {

// psi: 1 on the half-ball, 0 outside the ball, smooth in between (radial
// in the squared variable)
double psi_profile(double r2_over_l2) {
  static const SmoothFunction down = SmoothFunction::step_down(0.25, 1.0);
  return down(r2_over_l2);
}

}  // namespace

double ScaleCover::phi(size_t k, const double* x) const {
  double num = 0.0, den = 0.0;
  for (size_t j = 0; j < size(); ++j) {
    double dist2 = 0.0;
    for (int i = 0; i < region.dim; ++i)
      dist2 += (x[i] - centers[j][i]) * (x[i] - centers[j][i]);
    const double v = psi_profile(dist2 / (scales[j] * scales[j]));
    den += v;
    if (j == k) num = v;
  }
  if (den == 0.0) return 0.0;
  return num / den;
}

double ScaleCover::phi_sum(const double* x) const {
  // literal sum over k of phi_k(x); each term re-derives the shared
  // denominator so the audit exercises the actual evaluation path
  double den = 0.0;
  std::vector<double> nums(size());
  for (size_t j = 0; j < size(); ++j) {
    double dist2 = 0.0;
    for (int i = 0; i < region.dim; ++i)
      dist2 += (x[i] - centers[j][i]) * (x[i] - centers[j][i]);
    nums[j] = psi_profile(dist2 / (scales[j] * scales[j]));
    den += nums[j];
  }
  if (den == 0.0) return 0.0;
  double acc = 0.0;
  for (size_t j = 0; j < size(); ++j) acc += nums[j] / den;
  return acc;
}

void partition_of_unity(ScaleCover& cover) {
  // the denominator must be >= psi(half-ball) = 1 somewhere for every
  // region point; the greedy construction guarantees it, audit anyway
  for_each_sample(cover.region, samples_per_axis(cover.region.dim),
                  [&](const double* x) {
                    if (cover.phi_sum(x) == 0.0)
                      throw std::runtime_error(
                          "partition_of_unity: vanishing denominator");
                  });
  cover.has_partition = true;
}

RescaledProblem rescale(const ScalarField& V, const VectorField& a,
                        const ScalarField& localizer,
                        const std::array<double, 3>& x_k, double l_k,
                        double hbar, double mu, const Region& region) {
  RescaledProblem out;
  out.l_k = l_k;
  out.f_k = std::sqrt(l_k);
  out.hbar_k = hbar / (l_k * out.f_k);
  out.mu_k = mu * l_k / out.f_k;

  const int d = V.dim;
  const double lk = l_k, fk2 = l_k;  // f_k^2 = l_k
  auto pull = [x_k, lk, d](const double* y, double* x) {
    for (int j = 0; j < d; ++j) x[j] = lk * y[j] + x_k[j];
  };

  out.V_tilde.dim = d;
  auto vv = V.value;
  out.V_tilde.value = [vv, pull, fk2](const double* y) {
    double x[3];
    pull(y, x);
    return vv(x) / fk2;
  };
  out.a_tilde.dim = d;
  for (int j = 0; j < d; ++j) {
    ScalarField comp;
    comp.dim = d;
    auto av = a.components[j].value;
    comp.value = [av, pull, lk](const double* y) {
      double x[3];
      pull(y, x);
      return av(x) / lk;
    };
    out.a_tilde.components.push_back(comp);
  }
  out.localizer_tilde.dim = d;
  auto lv = localizer.value;
  out.localizer_tilde.value = [lv, pull](const double* y) {
    double x[3];
    pull(y, x);
    return lv(x);
  };

  // sampled sup tables over B(0,8) pulled back into the region
  const int n = d == 1 ? 2048 : (d == 2 ? 64 : 24);
  double y[3] = {0, 0, 0};
  double g[3], h[9], x[3];
  const int n1 = d >= 2 ? n : 1, n2 = d >= 3 ? n : 1;
  const double floor_term = std::pow(out.hbar_k, 2.0 / 3.0);
  out.noncritical_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    y[0] = -8.0 + 16.0 * (i + 0.5) / n;
    for (int jj = 0; jj < n1; ++jj) {
      if (d >= 2) y[1] = -8.0 + 16.0 * (jj + 0.5) / n1;
      for (int kk = 0; kk < n2; ++kk) {
        if (d >= 3) y[2] = -8.0 + 16.0 * (kk + 0.5) / n2;
        pull(y, x);
        if (!region.inside(x)) continue;
        const double vt = out.V_tilde.value(y);
        out.sup_V = std::max(out.sup_V, std::abs(vt));
        out.noncritical_min =
            std::min(out.noncritical_min, std::abs(vt) + floor_term);
        if (V.gradient) {
          V.gradient(x, g);
          double gn = 0.0;
          for (int j = 0; j < d; ++j) gn = std::max(gn, std::abs(g[j]));
          // d V~ = (l_k / f_k^2) dV = dV
          out.sup_dV = std::max(out.sup_dV, gn);
        }
        if (V.hessian) {
          V.hessian(x, h);
          double hn = 0.0;
          for (int j = 0; j < d * d; ++j) hn = std::max(hn, std::abs(h[j]));
          // d^2 V~ = l_k^2 / f_k^2 d^2 V = l_k d^2 V
          out.sup_d2V = std::max(out.sup_d2V, l_k * hn);
        }
      }
    }
  }
  return out;
}

ErrorBudget error_budget(const ScaleCover& cover, double hbar, double gamma,
                         int d) {
  ErrorBudget out;
  for (size_t k = 0; k < cover.size(); ++k) {
    const double lk = cover.scales[k];
    const double fk = std::sqrt(lk);
    const double hk = hbar / (lk * fk);
    out.sum += std::pow(hk, 1.0 + gamma - d) * std::pow(fk, 2.0 * gamma);
  }
  const double power = 0.5 * (d - 3.0 - gamma);
  double integral = 0.0;
  const int n = samples_per_axis(cover.region.dim);
  double cell = 1.0;
  for (int j = 0; j < cover.region.dim; ++j)
    cell *= (cover.region.hi[j] - cover.region.lo[j]) / n;
  for_each_sample(cover.region, n, [&](const double* x) {
    integral += std::pow(cover.l(x), power) * cell;
  });
  out.integral_bound = std::pow(hbar, 1.0 + gamma - d) * integral;
  out.ratio = out.sum / std::pow(hbar, 1.0 + gamma - d);
  return out;
}

}  // namespace wlab::multiscale
