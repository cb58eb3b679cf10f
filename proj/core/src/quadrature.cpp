#include "bosecool/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

namespace bosecool::quadrature {

namespace {

Rule make_hermite(int n) {
  gsl_integration_fixed_workspace* ws = gsl_integration_fixed_alloc(
      gsl_integration_fixed_hermite, static_cast<std::size_t>(n),
      /*a=*/0.0, /*b=*/1.0, /*alpha=*/0.0, /*beta=*/0.0);
  if (!ws) throw std::runtime_error("Gauss-Hermite rule allocation failed");
  Rule r;
  r.x.assign(gsl_integration_fixed_nodes(ws),
             gsl_integration_fixed_nodes(ws) + n);
  r.w.assign(gsl_integration_fixed_weights(ws),
             gsl_integration_fixed_weights(ws) + n);
  gsl_integration_fixed_free(ws);
  return r;
}

// Orthonormal Hermite values p_0..p_n at t (weight e^{-t^2}).
void hermite_row(int n, long double t, std::vector<long double>& p) {
  p.resize(n + 1);
  p[0] = 0.7511255444649424828587030047762276930510L;  // pi^{-1/4}
  if (n >= 1) p[1] = std::sqrt(2.0L) * t * p[0];
  for (int k = 1; k < n; ++k)
    p[k + 1] = t * std::sqrt(2.0L / (k + 1)) * p[k] -
               std::sqrt(static_cast<long double>(k) / (k + 1)) * p[k - 1];
}

RuleExt make_hermite_ext(int n) {
  const Rule& base = gauss_hermite(n);
  RuleExt r;
  r.x.resize(n);
  r.w.resize(n);
  std::vector<long double> p;
  for (int i = 0; i < n; ++i) {
    long double t = base.x[i];
    for (int it = 0; it < 3; ++it) {
      hermite_row(n, t, p);
      const long double fp = std::sqrt(2.0L * n) * p[n - 1];
      t -= p[n] / fp;
    }
    hermite_row(n - 1, t, p);
    long double k = 0.0L;
    for (int j = 0; j < n; ++j) k += p[j] * p[j];
    r.x[i] = t;
    r.w[i] = 1.0L / k;
  }
  return r;
}

Rule make_legendre(int n) {
  gsl_integration_glfixed_table* t =
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n));
  if (!t) throw std::runtime_error("Gauss-Legendre rule allocation failed");
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i)
    gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i),
                                  &r.x[i], &r.w[i], t);
  gsl_integration_glfixed_table_free(t);
  return r;
}

}  // namespace

const Rule& gauss_hermite(int n) {
  if (n < 1) throw std::domain_error("quadrature order must be positive");
  static std::map<int, std::unique_ptr<Rule>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule>(make_hermite(n));
  return *slot;
}

const RuleExt& gauss_hermite_ext(int n) {
  if (n < 1) throw std::domain_error("quadrature order must be positive");
  static std::map<int, std::unique_ptr<RuleExt>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RuleExt>(make_hermite_ext(n));
  return *slot;
}

const Rule& gauss_legendre(int n) {
  if (n < 1) throw std::domain_error("quadrature order must be positive");
  static std::map<int, std::unique_ptr<Rule>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule>(make_legendre(n));
  return *slot;
}

}  // namespace bosecool::quadrature
