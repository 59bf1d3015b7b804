#include "wlab/tauberian.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "wlab/numerics.hpp"

namespace wlab::tauberian {

namespace {
const double kPi = std::acos(-1.0);

// cubic interpolation on a uniform table (Catmull-Rom)
double table_eval(const std::vector<double>& tab, double dtau, double t) {
  const double u = t / dtau;
  const long i = static_cast<long>(std::floor(u));
  if (i < 0) return tab.front();
  if (i + 2 >= static_cast<long>(tab.size())) return 0.0;
  const double s = u - i;
  const double ym = i > 0 ? tab[i - 1] : tab[1];  // even extension at 0
  const double y0 = tab[i], y1 = tab[i + 1], y2 = tab[i + 2];
  const double a = -0.5 * ym + 1.5 * y0 - 1.5 * y1 + 0.5 * y2;
  const double b = ym - 2.5 * y0 + 2.0 * y1 - 0.5 * y2;
  const double c = -0.5 * ym + 0.5 * y1;
  return ((a * s + b) * s + c) * s + y0;
}

}  // namespace

double MollifierSpec::chi1(double t) const {
  const double at = std::abs(t);
  if (at >= tau_max) return 0.0;
  const double q = table_eval(q_table, dtau, at);
  return norm_c * q * q;
}

double MollifierSpec::hat(double s) const {
  // c (2 pi)^{-1} (ghat * ghat)(s) with ghat the bump on (-T/2, T/2)
  const SmoothFunction ghat = SmoothFunction::bump(-0.5 * T, 0.5 * T);
  if (std::abs(s) >= T) return 0.0;
  const double lo = std::max(-0.5 * T, s - 0.5 * T);
  const double hi = std::min(0.5 * T, s + 0.5 * T);
  if (hi <= lo) return 0.0;
  const double v = quad::integrate(
      [&](double u) { return ghat(u) * ghat(s - u); }, lo, hi, 1e-12);
  return norm_c * v / (2.0 * kPi);
}

double MollifierSpec::mass() const {
  // Simpson over the table, doubled for the even extension
  auto f = [&](size_t i) { return norm_c * q_table[i] * q_table[i]; };
  double acc = 0.0;
  size_t i = 0;
  for (; i + 2 < q_table.size(); i += 2)
    acc += dtau / 3.0 * (f(i) + 4.0 * f(i + 1) + f(i + 2));
  for (; i + 1 < q_table.size(); ++i) acc += 0.5 * dtau * (f(i) + f(i + 1));
  return 2.0 * acc;
}

namespace {
std::map<double, MollifierSpec> g_moll_cache;
std::mutex g_moll_mutex;
}  // namespace

MollifierSpec build_mollifier(double T) {
  if (T <= 0.0) throw DomainError("build_mollifier: T must be positive");
  {
    std::lock_guard<std::mutex> lock(g_moll_mutex);
    auto it = g_moll_cache.find(T);
    if (it != g_moll_cache.end()) return it->second;
  }
  MollifierSpec spec;
  spec.T = T;

  const SmoothFunction ghat = SmoothFunction::bump(-0.5 * T, 0.5 * T);
  // q(t) = (2 pi)^{-1} Int ghat(s) cos(s t) ds
  auto q_of = [&](double t) {
    const int cycles = static_cast<int>(0.5 * T * std::abs(t) / (2.0 * kPi)) + 1;
    // the bump is not analytic at its endpoints, so even small-t rows
    // need a generous panel count
    const int panels = std::min(512, std::max(16, 4 * cycles));
    const auto& rule = quad::gauss_legendre(12);
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double a = -0.5 * T + T * p / panels;
      const double b = a + T / panels;
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const double s = mid + half * rule.nodes[i];
        acc += half * rule.weights[i] * ghat(s) * std::cos(s * t);
      }
    }
    return acc / (2.0 * kPi);
  };

  spec.tau_max = 400.0 / T;
  spec.dtau = 0.005 / T;
  const size_t n = static_cast<size_t>(spec.tau_max / spec.dtau) + 3;
  spec.q_table.resize(n);
  for (size_t i = 0; i < n; ++i) spec.q_table[i] = q_of(i * spec.dtau);

  // normalization: hat(0) = c (2 pi)^{-1} Int ghat^2 = 1
  const double g2 = quad::integrate(
      [&](double s) { return ghat(s) * ghat(s); }, -0.5 * T, 0.5 * T, 1e-13);
  spec.norm_c = 2.0 * kPi / g2;
  spec.tail_value = spec.norm_c * spec.q_table[n - 3] * spec.q_table[n - 3];

  // measure T1 and the floor c on [-T1, T1]
  const double peak = spec.chi1(0.0);
  double t1 = 0.0;
  for (double t = 0.0; t < spec.tau_max; t += spec.dtau) {
    if (spec.chi1(t) < 1e-4 * peak) break;
    t1 = t;
  }
  spec.T1 = 0.8 * t1;
  double floor = peak;
  for (double t = 0.0; t <= spec.T1; t += spec.dtau)
    floor = std::min(floor, spec.chi1(t));
  spec.c_lower = floor;
  {
    std::lock_guard<std::mutex> lock(g_moll_mutex);
    g_moll_cache[T] = spec;
  }
  return spec;
}

double chi_hbar(const MollifierSpec& spec, double hbar, double t) {
  if (hbar <= 0.0) throw DomainError("chi_hbar: hbar must be positive");
  return spec.chi1(t / hbar) / hbar;
}

double smooth_g_at(const std::function<double(double)>& g,
                   const MollifierSpec& spec, double hbar, double t,
                   double kink) {
  // Int g(t - hbar tau) chi1(tau) dtau, split at the kink pull-back
  const double lo = -spec.tau_max, hi = spec.tau_max;
  std::vector<double> cuts = {lo, hi};
  if (std::isfinite(kink)) {
    const double tau0 = (t - kink) / hbar;
    if (tau0 > lo && tau0 < hi) cuts.insert(cuts.begin() + 1, tau0);
  }
  double acc = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    acc += quad::integrate(
        [&](double tau) { return g(t - hbar * tau) * spec.chi1(tau); },
        cuts[i], cuts[i + 1], 1e-10, 32);
  }
  return acc;
}

TauberianGap tauberian_gap(const linalg::VectorR& eigenvalues,
                           const linalg::MatrixC& B,
                           const std::function<double(double)>& g, double g_kink,
                           const MollifierSpec& spec, double hbar,
                           double window_lo, double window_hi) {
  const Eigen::Index n = eigenvalues.size();
  if (B.rows() != n || B.cols() != n)
    throw DomainError("tauberian_gap: B must live in the eigenbasis of A");

  linalg::VectorR gap_diag(n);
  for (Eigen::Index i = 0; i < n; ++i)
    gap_diag[i] = g(eigenvalues[i]) -
                  smooth_g_at(g, spec, hbar, eigenvalues[i], g_kink);

  TauberianGap out;
  out.gap_trace_norm =
      linalg::trace_norm(B.adjoint() * gap_diag.asDiagonal() * B);

  // z_bound: chi_hbar(A - t) is nonnegative, so the trace norm of
  // B^* chi B equals its trace
  linalg::VectorR bb_diag(n);
  linalg::MatrixC BBt = B * B.adjoint();
  for (Eigen::Index i = 0; i < n; ++i) bb_diag[i] = BBt(i, i).real();

  const double step = std::max(1e-4, 0.5 * hbar * std::max(spec.T1, 0.05));
  double sup = 0.0;
  for (double t = window_lo; t <= window_hi; t += step) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = chi_hbar(spec, hbar, eigenvalues[i] - t);
      if (w != 0.0) acc += w * bb_diag[i];
    }
    sup = std::max(sup, acc);
  }
  out.z_bound = sup;
  return out;
}

}  // namespace wlab::tauberian
