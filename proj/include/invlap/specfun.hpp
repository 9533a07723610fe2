#pragma once

#include <cstddef>

namespace invlap {

// Arguments of the Gauss hypergeometric series 2F1(a, b; c; lambda).
// lambda is restricted to [0, 1): every series this library needs lives there.
struct HypParams {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double lambda = 0.0;
};

struct SeriesOptions {
  double tol = 1e-14;
  std::size_t max_terms = 1000000;
  // Switch to the (1-lambda)^(c-a-b) transformed series above this lambda,
  // provided c-a-b > 0. Set to a value >= 1 to force direct summation.
  double euler_threshold = 0.75;
};

struct SeriesResult {
  double value = 0.0;
  std::size_t terms_used = 0;
  double tail_bound = 0.0;
};

// ln Gamma(x) for x > 0; throws std::domain_error otherwise.
double log_gamma(double x);

// Rising factorial a (a+1) ... (a+k-1); (a)_0 = 1.
double pochhammer(double a, unsigned k);

SeriesResult hyp2f1(const HypParams& p, const SeriesOptions& opt = {});

// d/dlambda 2F1(a, b; c; lambda) = (a b / c) 2F1(a+1, b+1; c+1; lambda).
SeriesResult hyp2f1_derivative(const HypParams& p, const SeriesOptions& opt = {});

}  // namespace invlap
