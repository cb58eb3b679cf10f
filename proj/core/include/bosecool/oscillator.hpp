#pragma once

#include <vector>

#include "bosecool/common.hpp"

namespace bosecool::oscillator {

// Amplitudes below this magnitude are flushed to exact zero. Columns are
// normalized to 1, so the threshold is absolute; it lets root-of-Laguerre
// dark states compare equal to zero despite floating-point residue.
inline constexpr double kZeroCutoff = 1e-12;

// <l| exp(i x (a + a^dag)/sqrt(2) * sqrt(2)) |m> for the dimensionless kick
// x = eta * kappa: closed form
//   e^{-x^2/2} (i x)^{|l-m|} sqrt(min! / max!) L_min^{(|l-m|)}(x^2),
// prefactors in log domain. Negative indices are rejected.
cplx franck_condon(int l, int m, double x);

// The same amplitude with the i^{|l-m|} phase stripped: a signed real number
// whose square is the transition strength. franck_condon() is this value
// times i^{|l-m|}.
double franck_condon_mod(int l, int m, double x);

// [2^{2(n1+n2)} n1! n2! n3! n4!]^{-1} [ int H_n1 H_n2 H_n3 H_n4 e^{-2z^2} dz ]^2
// with n4 = n1 + n2 - n3, evaluated by Gauss-Hermite quadrature exact for the
// polynomial integrand (n1 + n2 + 8 nodes after rescaling z -> z/sqrt(2)).
// The normalizing prefactor is carried inside the orthonormalized Hermite
// recurrence, never materialized, so no intermediate overflows.
double delta_c(int n1, int n2, int n3);

struct FranckCondonTable {
  int lmax = 0;
  int mmax = 0;
  double eta_eff = 0.0;
  std::vector<cplx> a;  // (lmax+1) x (mmax+1), row-major in l

  const cplx& at(int l, int m) const { return a[l * (mmax + 1) + m]; }
  // 1 - sum_l |a(l,m)|^2 for one column of the truncated table.
  double unitarity_deficit(int m) const;
};

FranckCondonTable build_franck_condon_table(int lmax, int mmax, double eta_eff);

}  // namespace bosecool::oscillator
