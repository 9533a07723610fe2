#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "invlap/kernel.hpp"

namespace invlap {

enum class RuleKind { circle_trapezoid, product_gauss, monte_carlo };

// Nodes on the unit sphere with weights summing to 1 (the surface measure is
// normalized to total mass 1 throughout).
struct SphereRule {
  int n = 2;
  RuleKind kind = RuleKind::circle_trapezoid;
  std::optional<std::uint64_t> seed;
  std::vector<SpherePoint> nodes;
  std::vector<double> weights;
};

// One-dimensional reduction for integrands depending only on zeta_1: Gauss
// nodes for the weight (1-t^2)^((n-3)/2) on (-1,1), weights summing to 1.
struct ZonalRule {
  int n = 2;
  std::vector<double> t;
  std::vector<double> w;
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// n = 2: equally spaced circle nodes, uniform weights.
// n = 3: Gauss-Legendre in the polar cosine (pole at e1) times uniform
//        azimuth; size is split as n_t * n_phi with n_phi ~ 2 n_t.
// n >= 4: seeded Monte Carlo (normalized Gaussian directions); nodes come in
//         pairs mirrored in coordinates 2..n so tangential parity holds
//         exactly. Requires a seed.
SphereRule build_sphere_rule(int n, std::int64_t size,
                             std::optional<std::uint64_t> seed = std::nullopt);

ZonalRule build_zonal_rule(int n, int m);

// Plain Gauss-Legendre on (-1,1), weights summing to 2.
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w);

double integrate_sphere(const SphereRule& rule,
                        const std::function<double(const SpherePoint&)>& f);

// Same value as integrate_sphere; the standard error is the pair-averaged
// Monte Carlo estimate (0 for deterministic rules).
McEstimate integrate_sphere_error(
    const SphereRule& rule, const std::function<double(const SpherePoint&)>& f);

double integrate_zonal(const ZonalRule& rule,
                       const std::function<double(double)>& g);

// base * ceil(1/(1-r)), capped; grows the node budget like the inverse of the
// distance to the boundary.
std::int64_t adaptive_size_for(double r, std::int64_t base,
                               std::int64_t cap = 2000000);

// Versioned text format, one node and weight per line; round-trips exactly.
void write_sphere_rule(std::ostream& os, const SphereRule& rule);
SphereRule read_sphere_rule(std::istream& is);
void write_zonal_rule(std::ostream& os, const ZonalRule& rule);
ZonalRule read_zonal_rule(std::istream& is);

// Process-wide caches; returned references stay valid for the process
// lifetime and are safe to share across threads.
const ZonalRule& cached_zonal_rule(int n, int m);
const SphereRule& cached_sphere_rule(int n, std::int64_t size,
                                     std::optional<std::uint64_t> seed);

}  // namespace invlap
