#include "invlap/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include "invlap/specfun.hpp"

namespace invlap {

double vec_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double vec_norm(const std::vector<double>& a) {
  return std::sqrt(vec_dot(a, a));
}

ThetaParams make_params(int n, double theta) {
  if (n < 2) {
    throw std::domain_error("make_params: dimension must be at least 2");
  }
  if (!(theta > -0.5)) {
    throw std::domain_error(
        "make_params: theta must exceed -1/2, the solvability threshold of "
        "the Dirichlet problem");
  }
  ThetaParams p;
  p.n = n;
  p.theta = theta;
  const double half_n = 0.5 * n;
  p.c_norm = std::exp(log_gamma(half_n + theta) + log_gamma(1.0 + theta) -
                      log_gamma(half_n) - log_gamma(1.0 + 2.0 * theta));
  p.c_grad = -2.0 * theta * (n - 2.0 - 2.0 * theta) * p.c_norm / n;
  if (p.c_grad == 0.0) p.c_grad = 0.0;  // normalize -0.0
  return p;
}

BallPoint make_ball_point(std::vector<double> coords) {
  if (coords.empty()) {
    throw std::domain_error("make_ball_point: empty coordinate vector");
  }
  BallPoint x;
  x.r = vec_norm(coords);
  if (!(x.r < 1.0)) {
    throw std::domain_error("make_ball_point: point must lie strictly inside "
                            "the unit ball");
  }
  x.coords = std::move(coords);
  return x;
}

SpherePoint make_sphere_point(std::vector<double> coords) {
  if (coords.empty()) {
    throw std::domain_error("make_sphere_point: empty coordinate vector");
  }
  const double nrm = vec_norm(coords);
  if (!(std::abs(nrm - 1.0) <= 1e-8)) {
    throw std::domain_error(
        "make_sphere_point: coordinates deviate from the unit sphere by more "
        "than 1e-8");
  }
  if (nrm != 1.0) {
    for (double& c : coords) c /= nrm;
  }
  return SpherePoint{std::move(coords)};
}

namespace {

double dist_squared(const BallPoint& x, const SpherePoint& zeta) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    const double d = x.coords[i] - zeta.coords[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace

double poisson_kernel(const ThetaParams& p, const BallPoint& x,
                      const SpherePoint& zeta) {
  // (1-r)(1+r) keeps the boundary factor accurate for r near 1; everything
  // is assembled in log space so large exponents cannot overflow.
  const double om = (1.0 - x.r) * (1.0 + x.r);
  const double d2 = dist_squared(x, zeta);
  const double t = 2.0 * p.theta;
  return std::exp(std::log(p.c_norm) + (1.0 + t) * std::log(om) -
                  0.5 * (p.n + t) * std::log(d2));
}

std::vector<double> poisson_kernel_gradient(const ThetaParams& p,
                                            const BallPoint& x,
                                            const SpherePoint& zeta) {
  const double om = (1.0 - x.r) * (1.0 + x.r);
  const double d2 = dist_squared(x, zeta);
  const double t = 2.0 * p.theta;
  const double log_c = std::log(p.c_norm);
  const double log_d2 = std::log(d2);
  const double f1 =
      -(2.0 + 2.0 * t) *
      std::exp(log_c + t * std::log(om) - 0.5 * (p.n + t) * log_d2);
  const double f2 = -(p.n + t) * std::exp(log_c + (1.0 + t) * std::log(om) -
                                          0.5 * (p.n + t + 2.0) * log_d2);
  std::vector<double> grad(x.coords.size());
  for (std::size_t k = 0; k < grad.size(); ++k) {
    grad[k] = f1 * x.coords[k] + f2 * (x.coords[k] - zeta.coords[k]);
  }
  return grad;
}

double apply_delta_theta(const ThetaParams& p, const FieldEvaluator& u,
                         const BallPoint& x, double h) {
  if (!(h > 0.0)) {
    throw std::domain_error("apply_delta_theta: step must be positive");
  }
  if (!(1.0 - x.r > 2.0 * h)) {
    throw std::domain_error(
        "apply_delta_theta: point too close to the boundary for the stencil");
  }
  const double u0 = u(x);
  double lap = 0.0;
  double drift = 0.0;
  std::vector<double> shifted = x.coords;
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    shifted[j] = x.coords[j] + h;
    const double up = u(make_ball_point(shifted));
    shifted[j] = x.coords[j] - h;
    const double um = u(make_ball_point(shifted));
    shifted[j] = x.coords[j];
    lap += up - 2.0 * u0 + um;
    drift += x.coords[j] * (up - um) / (2.0 * h);
  }
  lap /= h * h;
  const double s = (1.0 - x.r) * (1.0 + x.r);
  return s * (0.25 * s * lap + p.theta * drift +
              p.theta * (0.5 * p.n - 1.0 - p.theta) * u0);
}

double default_stencil_step(const BallPoint& x) {
  return std::max(1e-5, 1e-3 * (1.0 - x.r));
}

}  // namespace invlap
