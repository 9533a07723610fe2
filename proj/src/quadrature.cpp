#include "invlap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

namespace invlap {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct PolyEval {
  double p;
  double dp;
};

// Symmetric-Jacobi recurrence for the weight (1-x^2)^a: P_0 = 1,
// P_1 = (1+a)x, P_k = A_k x P_{k-1} - B_k P_{k-2}.
PolyEval eval_jacobi(double a, int m, double x) {
  double pm1 = 1.0;
  double p = (1.0 + a) * x;
  for (int k = 2; k <= m; ++k) {
    const double denom = k * (k + 2.0 * a);
    const double ak = (2.0 * k + 2.0 * a - 1.0) * (k + a) / denom;
    const double bk = (k + a - 1.0) * (k + a) / denom;
    const double next = ak * x * p - bk * pm1;
    pm1 = p;
    p = next;
  }
  const double dp = (-m * x * p + (m + a) * pm1) / (1.0 - x * x);
  return {p, dp};
}

// Nodes and weights for the normalized weight prop. to (1-x^2)^a on (-1,1).
void gauss_jacobi(double a, int m, std::vector<double>& x,
                  std::vector<double>& w) {
  x.assign(m, 0.0);
  w.assign(m, 0.0);
  if (a == -0.5) {
    for (int i = 1; i <= m; ++i) {
      x[i - 1] = std::cos((2.0 * i - 1.0) * kPi / (2.0 * m));
      w[i - 1] = 1.0 / m;
    }
  } else if (a == 0.5) {
    double total = 0.0;
    for (int i = 1; i <= m; ++i) {
      const double s = std::sin(i * kPi / (m + 1.0));
      x[i - 1] = std::cos(i * kPi / (m + 1.0));
      w[i - 1] = s * s;
      total += s * s;
    }
    for (double& wi : w) wi /= total;
  } else {
    double total = 0.0;
    const int half = m / 2;
    for (int i = 1; i <= half; ++i) {
      double xi = std::cos(kPi * (i - 0.25 + 0.5 * a) / (m + 0.5 + a));
      for (int iter = 0; iter < 100; ++iter) {
        const PolyEval e = eval_jacobi(a, m, xi);
        const double dx = e.p / e.dp;
        xi -= dx;
        if (std::abs(dx) <= 5e-16) break;
      }
      const PolyEval e = eval_jacobi(a, m, xi);
      const double wi = 1.0 / ((1.0 - xi * xi) * e.dp * e.dp);
      x[i - 1] = xi;
      w[i - 1] = wi;
      x[m - i] = -xi;
      w[m - i] = wi;
      total += 2.0 * wi;
    }
    if (m % 2 == 1) {
      const PolyEval e = eval_jacobi(a, m, 0.0);
      const double wi = 1.0 / (e.dp * e.dp);
      x[half] = 0.0;
      w[half] = wi;
      total += wi;
    }
    for (double& wi : w) wi /= total;
  }
  // Enforce decreasing abscissae regardless of branch.
  if (m >= 2 && x[0] < x[m - 1]) {
    std::reverse(x.begin(), x.end());
    std::reverse(w.begin(), w.end());
  }
}

double canonical_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Hand-rolled Box-Muller: std::normal_distribution is implementation
// defined, which would break byte-identical reproducibility guarantees.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = canonical_uniform(rng_);
    while (u1 <= 0.0) u1 = canonical_uniform(rng_);
    const double u2 = canonical_uniform(rng_);
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return mag * std::cos(2.0 * kPi * u2);
  }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

const char* kind_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::circle_trapezoid: return "circle-trapezoid";
    case RuleKind::product_gauss: return "product-gauss";
    case RuleKind::monte_carlo: return "monte-carlo";
  }
  return "?";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void parse_fail(const std::string& what) {
  throw std::runtime_error("rule parse error: " + what);
}

void expect_token(std::istream& is, const std::string& token) {
  std::string got;
  if (!(is >> got) || got != token) {
    parse_fail("expected '" + token + "'");
  }
}

}  // namespace

SphereRule build_sphere_rule(int n, std::int64_t size,
                             std::optional<std::uint64_t> seed) {
  if (n < 2) throw std::domain_error("build_sphere_rule: n must be >= 2");
  if (size < 2) {
    throw std::domain_error("build_sphere_rule: need at least 2 nodes");
  }
  SphereRule rule;
  rule.n = n;
  if (n == 2) {
    rule.kind = RuleKind::circle_trapezoid;
    rule.nodes.reserve(size);
    const double w = 1.0 / static_cast<double>(size);
    for (std::int64_t i = 0; i < size; ++i) {
      const double phi = 2.0 * kPi * static_cast<double>(i) / size;
      rule.nodes.push_back(SpherePoint{{std::cos(phi), std::sin(phi)}});
      rule.weights.push_back(w);
    }
  } else if (n == 3) {
    rule.kind = RuleKind::product_gauss;
    const auto n_t = std::max<std::int64_t>(
        2, std::llround(std::sqrt(size / 2.0)));
    const auto n_phi = std::max<std::int64_t>(2, (size + n_t - 1) / n_t);
    std::vector<double> t, wt;
    gauss_jacobi(0.0, static_cast<int>(n_t), t, wt);
    rule.nodes.reserve(n_t * n_phi);
    for (std::int64_t j = 0; j < n_t; ++j) {
      const double s = std::sqrt(std::max(0.0, 1.0 - t[j] * t[j]));
      const double w = wt[j] / static_cast<double>(n_phi);
      for (std::int64_t k = 0; k < n_phi; ++k) {
        const double phi = 2.0 * kPi * static_cast<double>(k) / n_phi;
        rule.nodes.push_back(
            SpherePoint{{t[j], s * std::cos(phi), s * std::sin(phi)}});
        rule.weights.push_back(w);
      }
    }
  } else {
    if (!seed.has_value()) {
      throw std::domain_error(
          "build_sphere_rule: Monte Carlo rules (n >= 4) require a seed");
    }
    rule.kind = RuleKind::monte_carlo;
    rule.seed = seed;
    GaussianStream gauss(*seed);
    const std::int64_t pairs = (size + 1) / 2;
    const std::int64_t total = 2 * pairs;
    const double w = 1.0 / static_cast<double>(total);
    rule.nodes.reserve(total);
    std::vector<double> v(n);
    for (std::int64_t i = 0; i < pairs; ++i) {
      double nrm = 0.0;
      do {
        for (double& c : v) c = gauss.next();
        nrm = vec_norm(v);
      } while (nrm < 1e-8);
      std::vector<double> node = v;
      for (double& c : node) c /= nrm;
      std::vector<double> mirror = node;
      for (int k = 1; k < n; ++k) mirror[k] = -mirror[k];
      rule.nodes.push_back(SpherePoint{std::move(node)});
      rule.nodes.push_back(SpherePoint{std::move(mirror)});
      rule.weights.push_back(w);
      rule.weights.push_back(w);
    }
  }
  return rule;
}

ZonalRule build_zonal_rule(int n, int m) {
  if (n < 2) throw std::domain_error("build_zonal_rule: n must be >= 2");
  if (m < 2) throw std::domain_error("build_zonal_rule: need at least 2 nodes");
  ZonalRule rule;
  rule.n = n;
  gauss_jacobi(0.5 * (n - 3), m, rule.t, rule.w);
  return rule;
}

void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  if (m < 1) throw std::domain_error("gauss_legendre: need at least 1 node");
  gauss_jacobi(0.0, m, x, w);
  for (double& wi : w) wi *= 2.0;
}

double integrate_sphere(const SphereRule& rule,
                        const std::function<double(const SpherePoint&)>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(rule.nodes[i]);
  }
  return acc;
}

McEstimate integrate_sphere_error(
    const SphereRule& rule,
    const std::function<double(const SpherePoint&)>& f) {
  if (rule.kind != RuleKind::monte_carlo) {
    return {integrate_sphere(rule, f), 0.0};
  }
  const std::size_t pairs = rule.nodes.size() / 2;
  double mean = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < pairs; ++j) {
    const double y =
        0.5 * (f(rule.nodes[2 * j]) + f(rule.nodes[2 * j + 1]));
    const double delta = y - mean;
    mean += delta / static_cast<double>(j + 1);
    m2 += delta * (y - mean);
  }
  McEstimate est;
  est.value = mean;
  if (pairs > 1) {
    est.std_error =
        std::sqrt(m2 / (static_cast<double>(pairs) *
                        static_cast<double>(pairs - 1)));
  }
  return est;
}

double integrate_zonal(const ZonalRule& rule,
                       const std::function<double(double)>& g) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.t.size(); ++i) {
    acc += rule.w[i] * g(rule.t[i]);
  }
  return acc;
}

std::int64_t adaptive_size_for(double r, std::int64_t base, std::int64_t cap) {
  if (!(r >= 0.0 && r < 1.0)) {
    throw std::domain_error("adaptive_size_for: radius must lie in [0, 1)");
  }
  if (base < 1 || cap < 1) {
    throw std::domain_error("adaptive_size_for: sizes must be positive");
  }
  // Slack absorbs rounding like 1/(1-0.9) = 10.000000000000002.
  const auto k = static_cast<std::int64_t>(
      std::ceil(1.0 / (1.0 - r) - 1e-9));
  if (k >= cap / base + 1) return cap;
  return std::min(base * k, cap);
}

void write_sphere_rule(std::ostream& os, const SphereRule& rule) {
  os << "invlap-rule v1\n";
  os << "kind " << kind_name(rule.kind) << "\n";
  os << "n " << rule.n << "\n";
  if (rule.seed) os << "seed " << *rule.seed << "\n";
  os << "count " << rule.nodes.size() << "\n";
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    for (double c : rule.nodes[i].coords) os << format_double(c) << ' ';
    os << format_double(rule.weights[i]) << "\n";
  }
}

void write_zonal_rule(std::ostream& os, const ZonalRule& rule) {
  os << "invlap-rule v1\n";
  os << "kind zonal-gauss-jacobi\n";
  os << "n " << rule.n << "\n";
  os << "count " << rule.t.size() << "\n";
  for (std::size_t i = 0; i < rule.t.size(); ++i) {
    os << format_double(rule.t[i]) << ' ' << format_double(rule.w[i]) << "\n";
  }
}

namespace {

struct RuleHeader {
  std::string kind;
  int n = 0;
  std::optional<std::uint64_t> seed;
  std::int64_t count = 0;
};

RuleHeader read_header(std::istream& is) {
  expect_token(is, "invlap-rule");
  expect_token(is, "v1");
  RuleHeader h;
  expect_token(is, "kind");
  if (!(is >> h.kind)) parse_fail("missing kind value");
  expect_token(is, "n");
  if (!(is >> h.n) || h.n < 2) parse_fail("bad dimension");
  std::string key;
  if (!(is >> key)) parse_fail("missing count");
  if (key == "seed") {
    std::uint64_t s = 0;
    if (!(is >> s)) parse_fail("bad seed");
    h.seed = s;
    if (!(is >> key)) parse_fail("missing count");
  }
  if (key != "count") parse_fail("expected 'count'");
  if (!(is >> h.count) || h.count < 1) parse_fail("bad node count");
  return h;
}

}  // namespace

SphereRule read_sphere_rule(std::istream& is) {
  const RuleHeader h = read_header(is);
  SphereRule rule;
  rule.n = h.n;
  rule.seed = h.seed;
  if (h.kind == "circle-trapezoid") {
    rule.kind = RuleKind::circle_trapezoid;
  } else if (h.kind == "product-gauss") {
    rule.kind = RuleKind::product_gauss;
  } else if (h.kind == "monte-carlo") {
    rule.kind = RuleKind::monte_carlo;
  } else {
    parse_fail("unknown sphere rule kind '" + h.kind + "'");
  }
  double wsum = 0.0;
  for (std::int64_t i = 0; i < h.count; ++i) {
    std::vector<double> coords(h.n);
    for (double& c : coords) {
      if (!(is >> c)) parse_fail("truncated node list");
    }
    double w = 0.0;
    if (!(is >> w) || !(w > 0.0)) parse_fail("bad weight");
    if (std::abs(vec_norm(coords) - 1.0) > 1e-8) {
      parse_fail("node is off the unit sphere");
    }
    // Keep the parsed bits: renormalizing would break exact round-trips.
    rule.nodes.push_back(SpherePoint{std::move(coords)});
    rule.weights.push_back(w);
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9) parse_fail("weights do not sum to 1");
  return rule;
}

ZonalRule read_zonal_rule(std::istream& is) {
  const RuleHeader h = read_header(is);
  if (h.kind != "zonal-gauss-jacobi") {
    parse_fail("unknown zonal rule kind '" + h.kind + "'");
  }
  ZonalRule rule;
  rule.n = h.n;
  double wsum = 0.0;
  for (std::int64_t i = 0; i < h.count; ++i) {
    double t = 0.0, w = 0.0;
    if (!(is >> t >> w)) parse_fail("truncated node list");
    if (!(t > -1.0 && t < 1.0)) parse_fail("abscissa outside (-1,1)");
    if (!(w > 0.0)) parse_fail("bad weight");
    rule.t.push_back(t);
    rule.w.push_back(w);
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9) parse_fail("weights do not sum to 1");
  return rule;
}

const ZonalRule& cached_zonal_rule(int n, int m) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<ZonalRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, m}];
  if (!slot) slot = std::make_unique<ZonalRule>(build_zonal_rule(n, m));
  return *slot;
}

const SphereRule& cached_sphere_rule(int n, std::int64_t size,
                                     std::optional<std::uint64_t> seed) {
  using Key = std::tuple<int, std::int64_t, bool, std::uint64_t>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<SphereRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, size, seed.has_value(), seed.value_or(0)}];
  if (!slot) slot = std::make_unique<SphereRule>(build_sphere_rule(n, size, seed));
  return *slot;
}

}  // namespace invlap
