#include "bosecool/oscillator.hpp"

#include <cmath>
#include <stdexcept>

#include "bosecool/quadrature.hpp"

namespace bosecool::oscillator {

double franck_condon_mod(int l, int m, double x) {
  if (l < 0 || m < 0)
    throw std::domain_error("franck_condon: negative level index");
  if (x == 0.0) return l == m ? 1.0 : 0.0;
  const int d = std::abs(l - m);
  const int mu = std::min(l, m);
  const double x2 = x * x;
  const double lag = std::assoc_laguerre(static_cast<unsigned>(mu),
                                         static_cast<unsigned>(d), x2);
  if (lag == 0.0) return 0.0;
  const double ln_mag = -0.5 * x2 + d * std::log(std::abs(x)) +
                        0.5 * (std::lgamma(mu + 1.0) - std::lgamma(mu + d + 1.0)) +
                        std::log(std::abs(lag));
  double v = std::exp(ln_mag);
  if (v < kZeroCutoff) return 0.0;
  if (lag < 0.0) v = -v;
  if (x < 0.0 && (d & 1)) v = -v;
  return v;
}

cplx franck_condon(int l, int m, double x) {
  const double v = franck_condon_mod(l, m, x);
  switch (std::abs(l - m) & 3) {
    case 0: return {v, 0.0};
    case 1: return {0.0, v};
    case 2: return {-v, 0.0};
    default: return {0.0, -v};
  }
}

double delta_c(int n1, int n2, int n3) {
  if (n1 < 0 || n2 < 0 || n3 < 0)
    throw std::domain_error("delta_c: negative level index");
  const int n4 = n1 + n2 - n3;
  if (n4 < 0)
    throw std::domain_error("delta_c: n3 exceeds n1 + n2");

  // The sum cancels heavily when the overlap is small, so the node loop runs
  // in extended precision.
  const int nmax = std::max(std::max(n1, n2), std::max(n3, n4));
  const auto& rule = quadrature::gauss_hermite_ext(n1 + n2 + 8);
  const long double inv_root2 = 0.70710678118654752440L;
  const long double h0 = std::pow(static_cast<long double>(M_PIl), -0.25L);

  std::vector<long double> h(nmax + 1);
  long double sum = 0.0L;
  for (std::size_t q = 0; q < rule.x.size(); ++q) {
    const long double z = rule.x[q] * inv_root2;
    h[0] = h0;
    if (nmax >= 1) h[1] = std::sqrt(2.0L) * z * h0;
    for (int k = 1; k < nmax; ++k)
      h[k + 1] = z * std::sqrt(2.0L / (k + 1)) * h[k] -
                 std::sqrt(static_cast<long double>(k) / (k + 1)) * h[k - 1];
    sum += rule.w[q] * h[n1] * h[n2] * h[n3] * h[n4];
  }
  const long double j = sum * inv_root2;
  return static_cast<double>(M_PIl * M_PIl * j * j);
}

double FranckCondonTable::unitarity_deficit(int m) const {
  double s = 0.0;
  for (int l = 0; l <= lmax; ++l) s += std::norm(at(l, m));
  return 1.0 - s;
}

FranckCondonTable build_franck_condon_table(int lmax, int mmax, double eta_eff) {
  if (lmax < 0 || mmax < 0)
    throw std::domain_error("franck_condon table: negative extent");
  FranckCondonTable t;
  t.lmax = lmax;
  t.mmax = mmax;
  t.eta_eff = eta_eff;
  t.a.resize(static_cast<std::size_t>(lmax + 1) * (mmax + 1));
  for (int l = 0; l <= lmax; ++l)
    for (int m = 0; m <= mmax; ++m)
      t.a[l * (mmax + 1) + m] = franck_condon(l, m, eta_eff);
  return t;
}

}  // namespace bosecool::oscillator
