#include "invlap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "invlap/specfun.hpp"

namespace invlap {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Kernel factors at the axis point r e1, parametrized by 1 - eta_1 so the
// near-pole distance (1-r)^2 + 2r(1-eta_1) is computed without cancellation.
struct AxisKernel {
  double r, om, log_c, log_om, t2, n2t;

  AxisKernel(const ThetaParams& p, double r_)
      : r(r_),
        om((1.0 - r_) * (1.0 + r_)),
        log_c(std::log(p.c_norm)),
        log_om(std::log(om)),
        t2(2.0 * p.theta),
        n2t(p.n + 2.0 * p.theta) {}

  double d2(double one_minus_t) const {
    return (1.0 - r) * (1.0 - r) + 2.0 * r * one_minus_t;
  }
  double value(double one_minus_t) const {
    return std::exp(log_c + (1.0 + t2) * log_om -
                    0.5 * n2t * std::log(d2(one_minus_t)));
  }
  double d1(double one_minus_t) const {
    const double ldd = std::log(d2(one_minus_t));
    const double a =
        -(2.0 + 2.0 * t2) * r * std::exp(log_c + t2 * log_om - 0.5 * n2t * ldd);
    const double b = -n2t * (r - (1.0 - one_minus_t)) *
                     std::exp(log_c + (1.0 + t2) * log_om -
                              0.5 * (n2t + 2.0) * ldd);
    return a + b;
  }
  // d/dx_k P = tang * eta_k for k >= 2.
  double tang(double one_minus_t) const {
    return n2t * std::exp(log_c + (1.0 + t2) * log_om -
                          0.5 * (n2t + 2.0) * std::log(d2(one_minus_t)));
  }
};

bool is_axis_point(const BallPoint& x) {
  double tangential = 0.0;
  for (std::size_t k = 1; k < x.coords.size(); ++k) {
    tangential += x.coords[k] * x.coords[k];
  }
  return tangential == 0.0;
}

// Gauss points over a partition of [0, pi] graded dyadically toward 0, where
// the kernel concentrates as r -> 1.
struct AngleGrid {
  std::vector<double> angle;
  std::vector<double> weight;  // plain quadrature weight, no density
};

AngleGrid graded_angle_grid(double scale, int order) {
  std::vector<double> edges{0.0};
  double e = std::clamp(scale, 1e-7, kPi / 8.0);
  while (e < kPi) {
    edges.push_back(e);
    e *= 2.0;
  }
  edges.push_back(kPi);
  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  AngleGrid grid;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double mid = 0.5 * (edges[p] + edges[p + 1]);
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    for (int q = 0; q < order; ++q) {
      grid.angle.push_back(mid + half * gx[q]);
      grid.weight.push_back(half * gw[q]);
    }
  }
  return grid;
}

// Azimuthal nodes for the inner integral over S^(n-2): abscissa cos(psi)
// with the normalized density sin^(n-3)(psi) on [0, pi] folded into weights.
struct PsiGrid {
  std::vector<double> cos_psi;
  std::vector<double> weight;
};

PsiGrid build_psi_grid(int n, int panels, int order) {
  const double log_norm = 0.5 * std::log(kPi) + log_gamma(0.5 * (n - 2)) -
                          log_gamma(0.5 * (n - 1));
  const double norm = std::exp(log_norm);  // integral of sin^(n-3) over [0,pi]
  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  PsiGrid grid;
  const double h = kPi / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (int q = 0; q < order; ++q) {
      const double psi = mid + 0.5 * h * gx[q];
      const double dens = std::pow(std::sin(psi), n - 3) / norm;
      grid.cos_psi.push_back(std::cos(psi));
      grid.weight.push_back(0.5 * h * gw[q] * dens);
    }
  }
  return grid;
}

struct OffAxisResult {
  double u = 0.0;
  double d1 = 0.0;  // gradient component along e1 in the rotated frame
  double dt = 0.0;  // gradient component along the data axis' tangential part
};

// Evaluation of a zonal boundary profile at an off-axis point, reduced to a
// 2-D integral over (polar angle, azimuthal angle); cos_g is the cosine of
// the angle between x and the data pole e1. Only used for n >= 3.
OffAxisResult integrate_off_axis(const ThetaParams& p, double r, double cos_g,
                                 const std::function<double(double)>& g,
                                 const SolverOptions& opt) {
  const AxisKernel kernel(p, r);
  const double sin_g = std::sqrt(std::max(0.0, 1.0 - cos_g * cos_g));
  const PsiGrid psi = build_psi_grid(p.n, opt.psi_panels, opt.psi_order);
  const AngleGrid alpha = graded_angle_grid(0.25 * (1.0 - r), opt.panel_order);
  const double log_alpha_norm = 0.5 * std::log(kPi) +
                                log_gamma(0.5 * (p.n - 1)) -
                                log_gamma(0.5 * p.n);
  const double alpha_norm = std::exp(log_alpha_norm);
  OffAxisResult out;
  for (std::size_t i = 0; i < alpha.angle.size(); ++i) {
    const double a = alpha.angle[i];
    const double sa = std::sin(a);
    const double ca = std::cos(a);
    const double half = std::sin(0.5 * a);
    const double one_minus_ca = 2.0 * half * half;
    double g_mean = 0.0;
    double g_first = 0.0;
    if (sin_g == 0.0) {
      g_mean = g(std::clamp(ca * cos_g, -1.0, 1.0));
    } else {
      for (std::size_t q = 0; q < psi.cos_psi.size(); ++q) {
        const double s = ca * cos_g + sa * sin_g * psi.cos_psi[q];
        const double gv = g(std::clamp(s, -1.0, 1.0));
        g_mean += psi.weight[q] * gv;
        g_first += psi.weight[q] * psi.cos_psi[q] * gv;
      }
    }
    const double wd =
        alpha.weight[i] * std::pow(sa, p.n - 2) / alpha_norm;
    out.u += wd * kernel.value(one_minus_ca) * g_mean;
    out.d1 += wd * kernel.d1(one_minus_ca) * g_mean;
    out.dt += wd * kernel.tang(one_minus_ca) * sa * g_first;
  }
  return out;
}

double entry(const std::vector<std::vector<double>>& m, std::size_t i,
             std::size_t j) {
  return m[i][j];
}

std::vector<double> apply_matrix(const std::vector<std::vector<double>>& m,
                                 const std::vector<double>& v) {
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      out[i] += entry(m, i, j) * v[j];
    }
  }
  return out;
}

SpherePoint rotated_node(const std::vector<std::vector<double>>& t,
                         const SpherePoint& node) {
  return SpherePoint{apply_matrix(t, node.coords)};
}

const ZonalRule& axis_rule(const SolutionField& s, double r) {
  return cached_zonal_rule(
      s.params.n,
      static_cast<int>(adaptive_size_for(r, s.options.zonal_base,
                                         s.options.zonal_cap)));
}

const SphereRule& circle_rule(const SolutionField& s, double r) {
  // Trapezoid accuracy decays like exp(-m (1-r)), so the adaptive budget
  // with an uncapped-by-16384 ceiling keeps it spectrally convergent.
  const auto size = adaptive_size_for(r, std::max<std::int64_t>(
                                             s.options.zonal_base, 64),
                                      s.options.general_cap);
  return cached_sphere_rule(2, size, std::nullopt);
}

double profile_at(const SolutionField& s, double sgn, double t) {
  return s.phi.profile(sgn * t);
}

}  // namespace

BoundaryFunction boundary_constant(double value) {
  BoundaryFunction b;
  b.eval = [value](const SpherePoint&) { return value; };
  b.profile = [value](double) { return value; };
  b.zonal = true;
  b.lipschitz_constant = 0.0;
  b.name = "constant";
  return b;
}

BoundaryFunction boundary_coordinate() {
  BoundaryFunction b;
  b.eval = [](const SpherePoint& z) { return z.coords[0]; };
  b.profile = [](double t) { return t; };
  b.zonal = true;
  b.lipschitz_constant = 1.0;
  b.name = "coordinate";
  return b;
}

BoundaryFunction boundary_distance_to_pole() {
  BoundaryFunction b;
  b.eval = [](const SpherePoint& z) {
    double acc = (z.coords[0] - 1.0) * (z.coords[0] - 1.0);
    for (std::size_t k = 1; k < z.coords.size(); ++k) {
      acc += z.coords[k] * z.coords[k];
    }
    return std::sqrt(acc);
  };
  b.profile = [](double t) { return std::sqrt(std::max(0.0, 2.0 - 2.0 * t)); };
  b.zonal = true;
  b.lipschitz_constant = 1.0;
  b.name = "distance-to-e1";
  return b;
}

BoundaryFunction boundary_clamped_coordinate() {
  BoundaryFunction b;
  b.eval = [](const SpherePoint& z) { return std::max(0.0, z.coords[0]); };
  b.profile = [](double t) { return std::max(0.0, t); };
  b.zonal = true;
  b.lipschitz_constant = 1.0;
  b.name = "clamped-coordinate";
  return b;
}

BoundaryFunction boundary_from_values(std::vector<SpherePoint> points,
                                      std::vector<double> values) {
  if (points.empty() || points.size() != values.size()) {
    throw std::domain_error(
        "boundary_from_values: need matching, nonempty samples");
  }
  auto pts = std::make_shared<std::vector<SpherePoint>>(std::move(points));
  auto vals = std::make_shared<std::vector<double>>(std::move(values));
  BoundaryFunction b;
  b.eval = [pts, vals](const SpherePoint& z) {
    std::size_t best = 0;
    double best_dot = -2.0;
    for (std::size_t i = 0; i < pts->size(); ++i) {
      const double d = vec_dot((*pts)[i].coords, z.coords);
      if (d > best_dot) {
        best_dot = d;
        best = i;
      }
    }
    return (*vals)[best];
  };
  b.zonal = false;
  b.name = "values-file";
  return b;
}

SolutionField make_solution_field(const ThetaParams& params,
                                  BoundaryFunction phi, SolverOptions options) {
  SolutionField s;
  s.params = params;
  s.phi = std::move(phi);
  s.options = options;
  const int n = params.n;
  const SolverOptions opt = options;
  s.rule_factory = [n, opt](double r) -> const SphereRule& {
    const auto size = adaptive_size_for(r, opt.general_base, opt.general_cap);
    return cached_sphere_rule(
        n, size,
        n >= 4 ? std::optional<std::uint64_t>(opt.seed) : std::nullopt);
  };
  return s;
}

std::vector<std::vector<double>> rotate_to_axis(const BallPoint& x) {
  if (x.r == 0.0) {
    throw std::domain_error(
        "rotate_to_axis: direction undefined at the origin");
  }
  const std::size_t n = x.coords.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = x.coords[i] / x.r;
  v[0] -= 1.0;
  const double vv = vec_dot(v, v);
  std::vector<std::vector<double>> t(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) t[i][i] = 1.0;
  if (vv == 0.0) return t;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      t[i][j] -= 2.0 * v[i] * v[j] / vv;
    }
  }
  return t;
}

double poisson_integral(const SolutionField& s, const BallPoint& x) {
  const ThetaParams& p = s.params;
  if (static_cast<int>(x.coords.size()) != p.n) {
    throw std::domain_error("poisson_integral: dimension mismatch");
  }
  const double r = x.r;
  if (r == 0.0) {
    if (s.phi.zonal) {
      const ZonalRule& rule =
          cached_zonal_rule(p.n, static_cast<int>(s.options.zonal_base));
      return p.c_norm * integrate_zonal(rule, s.phi.profile);
    }
    const SphereRule& rule = s.rule_factory(0.0);
    return p.c_norm * integrate_sphere(rule, s.phi.eval);
  }
  if (s.phi.zonal) {
    if (is_axis_point(x)) {
      const double sgn = x.coords[0] >= 0.0 ? 1.0 : -1.0;
      const AxisKernel kernel(p, r);
      const ZonalRule& rule = axis_rule(s, r);
      double acc = 0.0;
      for (std::size_t i = 0; i < rule.t.size(); ++i) {
        acc += rule.w[i] * kernel.value(1.0 - rule.t[i]) *
               profile_at(s, sgn, rule.t[i]);
      }
      return acc;
    }
    if (p.n == 2) {
      const SphereRule& rule = circle_rule(s, r);
      return integrate_sphere(rule, [&](const SpherePoint& z) {
        return poisson_kernel(p, x, z) * s.phi.eval(z);
      });
    }
    return integrate_off_axis(p, r, x.coords[0] / r, s.phi.profile, s.options)
        .u;
  }
  const auto t = rotate_to_axis(x);
  const SphereRule& rule = s.rule_factory(r);
  std::vector<double> axis_coords(p.n, 0.0);
  axis_coords[0] = r;
  const BallPoint axis_point = make_ball_point(std::move(axis_coords));
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * poisson_kernel(p, axis_point, rule.nodes[i]) *
           s.phi.eval(rotated_node(t, rule.nodes[i]));
  }
  return acc;
}

std::vector<double> solution_gradient(const SolutionField& s,
                                      const BallPoint& x) {
  const ThetaParams& p = s.params;
  if (static_cast<int>(x.coords.size()) != p.n) {
    throw std::domain_error("solution_gradient: dimension mismatch");
  }
  const double r = x.r;
  const double factor = p.n + 2.0 * p.theta;
  if (r == 0.0) {
    std::vector<double> grad(p.n, 0.0);
    if (s.phi.zonal) {
      const ZonalRule& rule =
          cached_zonal_rule(p.n, static_cast<int>(s.options.zonal_base));
      grad[0] = factor * p.c_norm *
                integrate_zonal(rule, [&](double t) {
                  return t * s.phi.profile(t);
                });
      return grad;
    }
    const SphereRule& rule = s.rule_factory(0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double fv = rule.weights[i] * s.phi.eval(rule.nodes[i]);
      for (int k = 0; k < p.n; ++k) {
        grad[k] += fv * rule.nodes[i].coords[k];
      }
    }
    for (double& gk : grad) gk *= factor * p.c_norm;
    return grad;
  }
  if (s.phi.zonal) {
    if (is_axis_point(x)) {
      const double sgn = x.coords[0] >= 0.0 ? 1.0 : -1.0;
      const AxisKernel kernel(p, r);
      const ZonalRule& rule = axis_rule(s, r);
      double d1 = 0.0;
      for (std::size_t i = 0; i < rule.t.size(); ++i) {
        d1 += rule.w[i] * kernel.d1(1.0 - rule.t[i]) *
              profile_at(s, sgn, rule.t[i]);
      }
      std::vector<double> grad(p.n, 0.0);
      grad[0] = sgn * d1;
      return grad;
    }
    if (p.n == 2) {
      const SphereRule& rule = circle_rule(s, r);
      std::vector<double> grad(2, 0.0);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const auto gk = poisson_kernel_gradient(p, x, rule.nodes[i]);
        const double fv = rule.weights[i] * s.phi.eval(rule.nodes[i]);
        grad[0] += fv * gk[0];
        grad[1] += fv * gk[1];
      }
      return grad;
    }
    const OffAxisResult res =
        integrate_off_axis(p, r, x.coords[0] / r, s.phi.profile, s.options);
    // Rotated-frame components: res.d1 along e1, res.dt along the unit
    // tangential part of the data axis w = x/r.
    const auto t = rotate_to_axis(x);
    std::vector<double> local(p.n, 0.0);
    local[0] = res.d1;
    double tang_norm = 0.0;
    for (int k = 1; k < p.n; ++k) {
      tang_norm += (x.coords[k] / r) * (x.coords[k] / r);
    }
    tang_norm = std::sqrt(tang_norm);
    if (tang_norm > 0.0) {
      // e-hat = (w - w1 e1)/|w - w1 e1| expressed in rotated coordinates.
      std::vector<double> w_vec(p.n);
      for (int k = 0; k < p.n; ++k) w_vec[k] = x.coords[k] / r;
      const auto w_rot = apply_matrix(t, w_vec);  // t is an involution
      // w in the rotated frame is t * w; its tangential part carries dt.
      std::vector<double> ehat(p.n, 0.0);
      double ehat_norm = 0.0;
      for (int k = 1; k < p.n; ++k) {
        ehat[k] = w_rot[k];
        ehat_norm += ehat[k] * ehat[k];
      }
      ehat_norm = std::sqrt(ehat_norm);
      if (ehat_norm > 0.0) {
        for (int k = 1; k < p.n; ++k) {
          local[k] = res.dt * ehat[k] / ehat_norm;
        }
      }
    }
    return apply_matrix(t, local);
  }
  const auto t = rotate_to_axis(x);
  const SphereRule& rule = s.rule_factory(r);
  std::vector<double> axis_coords(p.n, 0.0);
  axis_coords[0] = r;
  const BallPoint axis_point = make_ball_point(std::move(axis_coords));
  std::vector<double> local(p.n, 0.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const auto gk = poisson_kernel_gradient(p, axis_point, rule.nodes[i]);
    const double fv =
        rule.weights[i] * s.phi.eval(rotated_node(t, rule.nodes[i]));
    for (int k = 0; k < p.n; ++k) local[k] += fv * gk[k];
  }
  return apply_matrix(t, local);
}

double radial_derivative(const SolutionField& s, double r) {
  if (!(r >= 0.0 && r < 1.0)) {
    throw std::domain_error("radial_derivative: radius must lie in [0, 1)");
  }
  if (r == 0.0) return 0.0;
  std::vector<double> coords(s.params.n, 0.0);
  coords[0] = r;
  const auto grad = solution_gradient(s, make_ball_point(std::move(coords)));
  return r * grad[0];
}

ThetaParams hyperbolic_params(int n) {
  if (n < 3) {
    throw std::domain_error(
        "hyperbolic_params: needs n >= 3 so that theta = n/2 - 1 is positive; "
        "at n = 2 the weight theta = 0 falls in the gradient blow-up regime");
  }
  return make_params(n, 0.5 * n - 1.0);
}

}  // namespace invlap
