#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "invlap/kernel.hpp"
#include "invlap/quadrature.hpp"

namespace invlap {

struct BoundaryFunction {
  std::function<double(const SpherePoint&)> eval;
  std::optional<double> lipschitz_constant;
  bool zonal = false;
  // Present iff zonal: eval(zeta) == profile(zeta_1).
  std::function<double(double)> profile;
  std::string name = "custom";
};

BoundaryFunction boundary_constant(double value);
BoundaryFunction boundary_coordinate();          // zeta_1
BoundaryFunction boundary_distance_to_pole();    // |zeta - e1|
BoundaryFunction boundary_clamped_coordinate();  // max(0, zeta_1)
// Nearest-node interpolation of sampled values; no Lipschitz constant.
BoundaryFunction boundary_from_values(std::vector<SpherePoint> points,
                                      std::vector<double> values);

struct SolverOptions {
  std::int64_t zonal_base = 256;
  std::int64_t zonal_cap = 16384;
  std::int64_t general_base = 20000;
  std::int64_t general_cap = 2000000;
  std::uint64_t seed = 1u;
  int panel_order = 16;      // Gauss order per polar panel
  int psi_panels = 16;       // azimuthal panels (off-axis zonal path)
  int psi_order = 8;
};

struct SolutionField {
  ThetaParams params;
  BoundaryFunction phi;
  SolverOptions options;
  // Returns the shared rule used by the general (non-zonal) path at a given
  // evaluation radius.
  std::function<const SphereRule&(double)> rule_factory;
};

SolutionField make_solution_field(const ThetaParams& params,
                                  BoundaryFunction phi,
                                  SolverOptions options = {});

double poisson_integral(const SolutionField& s, const BallPoint& x);

std::vector<double> solution_gradient(const SolutionField& s,
                                      const BallPoint& x);

// Symmetric orthogonal involution T with T e1 = x/|x| (hence T(|x| e1) = x);
// exactly the identity when x lies on the positive e1 axis.
std::vector<std::vector<double>> rotate_to_axis(const BallPoint& x);

// x . grad u at x = r e1, i.e. r times the first gradient component there.
double radial_derivative(const SolutionField& s, double r);

// theta = n/2 - 1, the hyperbolic Laplace-Beltrami weight.
ThetaParams hyperbolic_params(int n);

}  // namespace invlap
