#include "wlab/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace wlab {
namespace quad {

namespace {

Rule compute_gauss_legendre(int n) {
  // Newton iteration on Legendre polynomials, standard construction.
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

std::map<int, Rule> g_rules;
std::mutex g_rules_mutex;

double panel(const std::function<double(double)>& f, double a, double b,
             const Rule& rule) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * f(c + h * rule.nodes[i]);
  return s * h;
}

struct AdaptState {
  const std::function<double(double)>* f;
  const Rule* lo;
  const Rule* hi;
  double tol;
  double err_accum = 0.0;
};

double adapt(AdaptState& st, double a, double b, double coarse, int depth,
             int max_depth, double local_tol) {
  const double m = 0.5 * (a + b);
  const double left = panel(*st.f, a, m, *st.hi);
  const double right = panel(*st.f, m, b, *st.hi);
  const double fine = left + right;
  const double err = std::abs(fine - coarse);
  if (err <= local_tol || depth >= max_depth) {
    st.err_accum += err;
    return fine;
  }
  return adapt(st, a, m, left, depth + 1, max_depth, 0.5 * local_tol) +
         adapt(st, m, b, right, depth + 1, max_depth, 0.5 * local_tol);
}

}  // namespace

const Rule& gauss_legendre(int n) {
  std::lock_guard<std::mutex> lock(g_rules_mutex);
  auto it = g_rules.find(n);
  if (it == g_rules.end()) it = g_rules.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

Result integrate_estimate(const std::function<double(double)>& f, double a,
                          double b, double tol, int max_depth) {
  if (a == b) return {0.0, 0.0};
  AdaptState st{&f, &gauss_legendre(7), &gauss_legendre(15), tol, 0.0};
  const double coarse = panel(f, a, b, *st.lo);
  const double v = adapt(st, a, b, coarse, 0, max_depth, tol);
  return {v, st.err_accum};
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int max_depth) {
  Result r = integrate_estimate(f, a, b, tol, max_depth);
  const double scale = std::max(1.0, std::abs(r.value));
  if (r.err_estimate > tol * scale * 10.0)
    throw QuadratureError("adaptive quadrature did not reach tolerance",
                          r.err_estimate / scale);
  return r.value;
}

double integrate_box(int dim, const std::function<double(const double*)>& f,
                     const double* lo, const double* hi, double tol) {
  if (dim < 1 || dim > 3) throw DomainError("integrate_box: dim must be 1..3");
  double x[3] = {0, 0, 0};
  // flat per-axis tolerance; inner axes get a shallower depth cap to keep
  // the nesting from exploding in 3-D
  std::function<double(int)> level = [&](int axis) -> double {
    const int depth = axis == 0 ? 32 : 18;
    auto g = [&](double t) -> double {
      x[axis] = t;
      if (axis == dim - 1) return f(x);
      return level(axis + 1);
    };
    return integrate_estimate(g, lo[axis], hi[axis], tol / dim, depth).value;
  };
  return level(0);
}

double integrate_box_fixed(int dim, const std::function<double(const double*)>& f,
                           const double* lo, const double* hi,
                           int panels_per_axis, int n_per_panel) {
  const Rule& rule = gauss_legendre(n_per_panel);
  std::vector<std::vector<double>> nodes(dim), weights(dim);
  for (int ax = 0; ax < dim; ++ax) {
    const double step = (hi[ax] - lo[ax]) / panels_per_axis;
    for (int p = 0; p < panels_per_axis; ++p) {
      const double a = lo[ax] + p * step, c = a + 0.5 * step, h = 0.5 * step;
      for (int i = 0; i < n_per_panel; ++i) {
        nodes[ax].push_back(c + h * rule.nodes[i]);
        weights[ax].push_back(h * rule.weights[i]);
      }
    }
  }
  const size_t m = nodes[0].size();
  double x[3], total = 0.0;
  if (dim == 1) {
    for (size_t i = 0; i < m; ++i) {
      x[0] = nodes[0][i];
      total += weights[0][i] * f(x);
    }
  } else if (dim == 2) {
    for (size_t i = 0; i < m; ++i) {
      x[0] = nodes[0][i];
      double row = 0.0;
      for (size_t j = 0; j < m; ++j) {
        x[1] = nodes[1][j];
        row += weights[1][j] * f(x);
      }
      total += weights[0][i] * row;
    }
  } else {
    for (size_t i = 0; i < m; ++i) {
      x[0] = nodes[0][i];
      double plane = 0.0;
      for (size_t j = 0; j < m; ++j) {
        x[1] = nodes[1][j];
        double row = 0.0;
        for (size_t k = 0; k < m; ++k) {
          x[2] = nodes[2][k];
          row += weights[2][k] * f(x);
        }
        plane += weights[1][j] * row;
      }
      total += weights[0][i] * plane;
    }
  }
  return total;
}

}  // namespace quad

namespace fit {

LogLogFit loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("loglog fit: need >= 2 matching points");
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (int i = 0; i < n; ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0)
      throw DomainError("loglog fit: requires positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  LogLogFit out;
  out.points = n;
  const double denom = n * sxx - sx * sx;
  out.slope = (n * sxy - sx * sy) / denom;
  out.intercept = (sy - out.slope * sx) / n;
  double ss_res = 0, ss_tot = 0, ybar = sy / n;
  for (int i = 0; i < n; ++i) {
    const double pred = out.intercept + out.slope * lx[i];
    ss_res += (ly[i] - pred) * (ly[i] - pred);
    ss_tot += (ly[i] - ybar) * (ly[i] - ybar);
  }
  out.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return out;
}

}  // namespace fit

namespace rng {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return (next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform(double a, double b) { return a + (b - a) * uniform(); }

}  // namespace rng

}  // namespace wlab
