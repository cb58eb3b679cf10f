#pragma once

#include <vector>

namespace bosecool::quadrature {

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

struct RuleExt {
  std::vector<long double> x;
  std::vector<long double> w;
};

// Nodes/weights for integrals of f(x) e^{-x^2} over the real line.
const Rule& gauss_hermite(int n);

// Same rule with nodes Newton-polished in extended precision and weights
// recomputed from the Christoffel identity. Double nodes limit heavily
// cancelling sums to ~1e-12 relative accuracy; this restores ~1e-14.
const RuleExt& gauss_hermite_ext(int n);

// Nodes/weights on [-1, 1].
const Rule& gauss_legendre(int n);

}  // namespace bosecool::quadrature
