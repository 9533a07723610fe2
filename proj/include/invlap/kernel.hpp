#pragma once

#include <functional>
#include <vector>

namespace invlap {

// Dimension, weight parameter, and the two derived constants: c_norm scales
// the kernel so its boundary integral is hypergeometric-exact, c_grad is the
// constant in front of the gradient-mass identity.
struct ThetaParams {
  int n = 2;
  double theta = 0.0;
  double c_norm = 1.0;
  double c_grad = 0.0;
};

struct BallPoint {
  std::vector<double> coords;
  double r = 0.0;  // cached Euclidean norm, always < 1
};

struct SpherePoint {
  std::vector<double> coords;
};

double vec_dot(const std::vector<double>& a, const std::vector<double>& b);
double vec_norm(const std::vector<double>& a);

// Throws std::domain_error for n < 2 or theta <= -1/2 (below that threshold
// the Dirichlet problem has no solution for general continuous data).
ThetaParams make_params(int n, double theta);

BallPoint make_ball_point(std::vector<double> coords);

// Renormalizes inputs whose norm is within 1e-8 of 1, rejects anything
// further out: tolerate accumulated rotation error without hiding bugs.
SpherePoint make_sphere_point(std::vector<double> coords);

double poisson_kernel(const ThetaParams& p, const BallPoint& x,
                      const SpherePoint& zeta);

std::vector<double> poisson_kernel_gradient(const ThetaParams& p,
                                            const BallPoint& x,
                                            const SpherePoint& zeta);

using FieldEvaluator = std::function<double(const BallPoint&)>;

// Second-order central-difference discretization of the weighted operator
// (1-|x|^2) [ (1-|x|^2)/4 Lap + theta x.grad + theta (n/2-1-theta) ].
// Requires 1 - |x| > 2h so the stencil stays inside the ball.
double apply_delta_theta(const ThetaParams& p, const FieldEvaluator& u,
                         const BallPoint& x, double h);

double default_stencil_step(const BallPoint& x);

}  // namespace invlap
