#include "bosecool/oscillator.hpp"

#include <cmath>
#include <complex>

#include "doctest.h"
#include "oracles/hermite_rational.hpp"

using namespace bosecool;
using namespace bosecool::oscillator;

TEST_CASE("ground state self-overlap is the Gaussian factor") {
  for (double x : {0.3, 1.0, 2.0, 3.0}) {
    CHECK(franck_condon(0, 0, x).real() == doctest::Approx(std::exp(-x * x / 2)).epsilon(1e-14));
    CHECK(franck_condon(0, 0, x).imag() == 0.0);
  }
}

TEST_CASE("zero kick is the identity") {
  for (int l = 0; l < 12; ++l)
    for (int m = 0; m < 12; ++m) {
      const cplx v = franck_condon(l, m, 0.0);
      CHECK(v == cplx(l == m ? 1.0 : 0.0, 0.0));
    }
}

TEST_CASE("Laguerre-root dark states are exact zeros") {
  // level 1 goes dark against an s = 8 pulse when eta^2 = 9
  CHECK(franck_condon(9, 1, 3.0) == cplx(0.0, 0.0));
  CHECK(franck_condon(1, 9, 3.0) == cplx(0.0, 0.0));
  // elastic element of level 1 vanishes at eta = 1
  CHECK(franck_condon(1, 1, 1.0) == cplx(0.0, 0.0));
}

TEST_CASE("negative index rejected") {
  CHECK_THROWS_AS(franck_condon(-1, 0, 1.0), std::domain_error);
  CHECK_THROWS_AS(franck_condon(0, -2, 1.0), std::domain_error);
}

TEST_CASE("amplitude symmetry under index swap is exact") {
  for (double x : {0.7, 2.0, 3.0})
    for (int l = 0; l <= 30; ++l)
      for (int m = 0; m <= 30; ++m)
        CHECK(franck_condon(l, m, x) == franck_condon(m, l, x));
}

TEST_CASE("phase follows i^{|l-m|}") {
  const double x = 1.3;
  CHECK(franck_condon(1, 0, x).real() == 0.0);
  CHECK(franck_condon(2, 0, x).imag() == 0.0);
  CHECK(franck_condon(3, 0, x).real() == 0.0);
  // opposite kick conjugates the amplitude
  for (int l = 0; l < 8; ++l)
    for (int m = 0; m < 8; ++m)
      CHECK(franck_condon(l, m, -x) == std::conj(franck_condon(l, m, x)));
}

TEST_CASE("columns are unit vectors once the truncation clears the kick") {
  // 80 levels hold all the mass for these kicks; the residual is rounding
  for (double x : {0.6, 1.4, 2.0}) {
    for (int m = 0; m <= 25; ++m) {
      double s = 0.0;
      for (int l = 0; l < 80; ++l) s += std::norm(franck_condon(l, m, x));
      CHECK(std::abs(1.0 - s) < 1e-12);
    }
  }
  for (int m = 0; m <= 18; ++m) {
    double s = 0.0;
    for (int l = 0; l < 80; ++l) s += std::norm(franck_condon(l, m, 3.0));
    CHECK(std::abs(1.0 - s) < 1e-12);
  }
}

TEST_CASE("table builder matches pointwise evaluation and is symmetric") {
  const auto t = build_franck_condon_table(20, 20, 2.0);
  for (int l = 0; l <= 20; ++l)
    for (int m = 0; m <= 20; ++m) {
      CHECK(t.at(l, m) == franck_condon(l, m, 2.0));
      CHECK(std::abs(t.at(l, m)) == std::abs(t.at(m, l)));
    }
  const auto deep = build_franck_condon_table(60, 10, 2.0);
  for (int m = 0; m <= 10; ++m) CHECK(std::abs(deep.unitarity_deficit(m)) < 1e-12);
}

TEST_CASE("four-Hermite overlap: frozen closed-form values") {
  CHECK(delta_c(0, 0, 0) == doctest::Approx(M_PI / 2).epsilon(1e-14));
  CHECK(delta_c(1, 1, 0) == doctest::Approx(M_PI / 64).epsilon(1e-13));
}

TEST_CASE("four-Hermite overlap: argument symmetry") {
  CHECK(delta_c(2, 0, 1) == delta_c(0, 2, 1));
  CHECK(delta_c(1, 1, 0) == delta_c(1, 1, 2));
  CHECK(delta_c(5, 3, 2) == doctest::Approx(delta_c(3, 5, 2)).epsilon(1e-15));
  CHECK(delta_c(5, 3, 2) == doctest::Approx(delta_c(2, 6, 5)).epsilon(1e-13));
  CHECK(delta_c(5, 3, 2) == doctest::Approx(delta_c(6, 2, 3)).epsilon(1e-13));
}

TEST_CASE("four-Hermite overlap: domain errors") {
  CHECK_THROWS_AS(delta_c(0, 0, 1), std::domain_error);
  CHECK_THROWS_AS(delta_c(2, 3, 6), std::domain_error);
  CHECK_THROWS_AS(delta_c(-1, 0, 0), std::domain_error);
}

TEST_CASE("four-Hermite overlap matches the exact rational oracle") {
  int checked = 0;
  for (int n1 = 0; n1 <= 20; ++n1)
    for (int n2 = 0; n1 + n2 <= 20; ++n2)
      for (int n3 = 0; n3 <= n1 + n2; ++n3) {
        const double exact =
            (M_PI / 2) *
            static_cast<double>(oracles::delta_c_rational_factor(n1, n2, n3));
        const double quad = delta_c(n1, n2, n3);
        if (exact == 0.0) {
          CHECK(std::abs(quad) < 1e-25);
        } else {
          CHECK(std::abs(quad - exact) <= 1e-13 * std::abs(exact));
        }
        ++checked;
      }
  CHECK(checked == 3311);
}
