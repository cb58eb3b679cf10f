#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "bosecool/oscillator.hpp"
#include "bosecool/rates1d.hpp"
#include "bosecool/rates3d.hpp"
#include "doctest.h"

using namespace bosecool;
using rates3d::ShellGeometry;

namespace {

std::vector<std::array<int, 3>> compositions(int total) {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a <= total; ++a)
    for (int b = 0; a + b <= total; ++b) out.push_back({a, b, total - a - b});
  return out;
}

}  // namespace

TEST_CASE("shell degeneracies count the states of an isotropic trap") {
  CHECK(rates3d::shell_degeneracy(0) == 1);
  CHECK(rates3d::shell_degeneracy(1) == 3);
  CHECK(rates3d::shell_degeneracy(2) == 6);
  CHECK(rates3d::shell_degeneracy(5) == 21);
  for (int n = 0; n < 20; ++n)
    CHECK(rates3d::shell_degeneracy(n) ==
          static_cast<int>(compositions(n).size()));
  CHECK_THROWS_AS(rates3d::shell_degeneracy(-1), std::domain_error);

  rates3d::ShellModel m;
  m.nmax = 4;
  const auto g = m.degeneracies();
  REQUIRE(g.size() == 5);
  CHECK(g[0] == 1);
  CHECK(g[4] == 15);

  TrapModel trap;
  trap.mode = TrapMode::three_d_ergodic;
  trap.levels = 15;
  trap.Delta = 2e-5;
  const auto mt = rates3d::ShellModel::from_trap(trap);
  CHECK(mt.nmax == 14);
  CHECK(mt.Delta == 2e-5);
}

TEST_CASE("shell collisions conserve energy and count bosonic factors") {
  rates3d::ShellModel m;
  m.nmax = 3;
  m.Delta = 2.5e-4;

  SUBCASE("a two-atom telegraph has one channel each way") {
    const auto up = make_occupation({1, 0, 1, 0});
    CHECK(rates3d::shell_collision_rate(0, 2, 1, 1, up, m) ==
          doctest::Approx(24.0 * m.Delta / 54.0).epsilon(1e-14));
    CHECK(rates3d::shell_collision_rate(2, 0, 1, 1, up, m) ==
          doctest::Approx(24.0 * m.Delta / 54.0).epsilon(1e-14));
    const auto dn = make_occupation({0, 2, 0, 0});
    CHECK(rates3d::shell_collision_rate(1, 1, 0, 2, dn, m) ==
          doctest::Approx(24.0 * m.Delta / 54.0).epsilon(1e-14));
    // the pair in (1,1) cannot scatter elastically into itself
    CHECK(rates3d::shell_collision_rate(1, 1, 1, 1, dn, m) == 0.0);
    // and the up configuration has no atoms to run the down channel
    CHECK(rates3d::shell_collision_rate(1, 1, 0, 2, up, m) == 0.0);
  }

  SUBCASE("energy violation, identity, and depletion give zero") {
    const auto occ = make_occupation({2, 1, 1, 1});
    CHECK(rates3d::shell_collision_rate(0, 1, 1, 1, occ, m) == 0.0);
    CHECK(rates3d::shell_collision_rate(0, 2, 2, 0, occ, m) == 0.0);
    CHECK(rates3d::shell_collision_rate(1, 2, 2, 1, occ, m) == 0.0);
    CHECK(rates3d::shell_collision_rate(3, 3, 2, 3, occ, m) == 0.0);
  }

  SUBCASE("two-in-one-shell sources count ordered pairs") {
    const auto occ = make_occupation({0, 3, 0, 0});
    // N(N-1) = 6 ordered pairs out of shell 1
    const double r = rates3d::shell_collision_rate(1, 1, 0, 2, occ, m);
    const double dst = (0 + 1.0) * (0 + 6.0);
    CHECK(r == doctest::Approx(m.Delta * 2.0 * 6.0 * dst / (3.0 * 3.0 * 1.0 * 6.0))
                   .epsilon(1e-14));
  }

  SUBCASE("random channels are nonnegative and energy conserving") {
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> shell(0, m.nmax);
    std::uniform_int_distribution<int> cnt(0, 3);
    for (int it = 0; it < 400; ++it) {
      std::vector<int> c(m.nmax + 1);
      for (auto& v : c) v = cnt(rng);
      const auto occ = make_occupation(c);
      const int n1 = shell(rng), n2 = shell(rng), n3 = shell(rng),
                n4 = shell(rng);
      const double r = rates3d::shell_collision_rate(n1, n2, n3, n4, occ, m);
      CHECK(r >= 0.0);
      if (r > 0.0) CHECK(n1 + n2 == n3 + n4);
    }
  }

  SUBCASE("shells outside the truncation are rejected") {
    const auto occ = make_occupation({1, 1, 1, 1});
    CHECK_THROWS_AS(rates3d::shell_collision_rate(0, 4, 2, 2, occ, m),
                    std::domain_error);
    CHECK_THROWS_AS(rates3d::shell_collision_rate(-1, 2, 1, 0, occ, m),
                    std::domain_error);
  }
}

TEST_CASE("interference amplitudes null the summed elastic excitation") {
  SUBCASE("the ground state needs minus two on the z laser at any coupling") {
    for (double eta : {0.3, 1.0, 2.0, 3.5}) {
      const cplx a = rates3d::interference_dark_amplitude({0, 0, 0}, eta);
      CHECK(a.real() == doctest::Approx(-2.0).epsilon(1e-14));
      CHECK(a.imag() == 0.0);
    }
  }

  SUBCASE("equal components cancel with minus one in two dimensions") {
    CHECK(rates3d::interference_dark_amplitude_2d(2, 2, 1.7) ==
          doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(rates3d::interference_dark_amplitude_2d(0, 0, 0.4) ==
          doctest::Approx(-1.0).epsilon(1e-14));
  }

  SUBCASE("the amplitude substitutes back to a null elastic sum") {
    std::vector<std::array<int, 3>> targets = {
        {0, 0, 0}, {1, 0, 2}, {2, 2, 1}, {0, 3, 1}, {4, 1, 2}};
    for (const auto& t : targets) {
      const double eta = 1.7;
      const cplx a = rates3d::interference_dark_amplitude(t, eta);
      const cplx ex = oscillator::franck_condon(t[0], t[0], eta);
      const cplx ey = oscillator::franck_condon(t[1], t[1], eta);
      const cplx ez = oscillator::franck_condon(t[2], t[2], eta);
      CHECK(std::abs(ex + ey + a * ez) <= 1e-14 * std::abs(ex));
    }
  }

  SUBCASE("vanishing elastic elements have no finite amplitude") {
    // <1| e^{ikx} |1> = 0 exactly at eta = 1
    CHECK_THROWS_AS(rates3d::interference_dark_amplitude({1, 0, 0}, 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(rates3d::interference_dark_amplitude({0, 0, 1}, 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(rates3d::interference_dark_amplitude_2d(1, 0, 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(rates3d::interference_dark_amplitude({0, 0, -1}, 1.5),
                    std::domain_error);
  }
}

TEST_CASE("the emission geometry integrates to unit weight") {
  const auto geo =
      ShellGeometry::ergodic(4, 1.3, rates1d::EmissionPattern::isotropic, 4);
  CHECK(geo.nshells() == 4);
  CHECK(geo.sdest() == 8);
  CHECK(geo.lmax() >= 10);
  CHECK(geo.emax() == geo.nshells() - 1 + geo.lmax() - 1);
  CHECK_FALSE(geo.is_single_axis());

  const auto dirs = geo.directions();
  REQUIRE(dirs.size() == 256);
  double wsum = 0.0;
  for (const auto& d : dirs) {
    wsum += d.w;
    CHECK(d.ux * d.ux + d.uy * d.uy + d.uz * d.uz ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));

  for (int n = 0; n < geo.nshells(); ++n)
    CHECK(geo.degeneracy(n) == rates3d::shell_degeneracy(n));

  for (int e = 0; e <= geo.emax(); ++e) {
    double tot = 0.0;
    for (int s = 0; s < geo.nshells(); ++s) {
      const double v = geo.shell_emission(e, s);
      CHECK(v >= 0.0);
      tot += v;
    }
    CHECK(tot <= 1.0 + 1e-9);
  }

  const auto sax = ShellGeometry::single_axis(5, 1.3, 5);
  CHECK(sax.is_single_axis());
  CHECK(sax.degeneracy(3) == 1);
  CHECK(sax.directions().size() == 16);
  double swsum = 0.0;
  for (const auto& d : sax.directions()) {
    swsum += d.w;
    CHECK(d.uy == 0.0);
    CHECK(d.uz == 0.0);
  }
  CHECK(swsum == doctest::Approx(1.0).epsilon(1e-13));

  CHECK_THROWS_AS(
      ShellGeometry::ergodic(4, 1.3, rates1d::EmissionPattern::dipole, 4),
      std::invalid_argument);
  CHECK_THROWS_AS(
      ShellGeometry::ergodic(0, 1.3, rates1d::EmissionPattern::isotropic),
      std::invalid_argument);
  CHECK_THROWS_AS(
      ShellGeometry::ergodic(4, -1.0, rates1d::EmissionPattern::isotropic),
      std::invalid_argument);
}

TEST_CASE("shell emission tables match a direct state-space sum") {
  const double eta = 1.3;
  const auto geo =
      ShellGeometry::ergodic(4, eta, rates1d::EmissionPattern::isotropic, 4);
  const auto dirs = geo.directions();
  for (int e : {0, 2, 5}) {
    const auto inter = compositions(e);
    for (int s = 0; s < geo.nshells(); ++s) {
      const auto dest = compositions(s);
      double direct = 0.0;
      for (const auto& d : dirs) {
        const double u[3] = {d.ux, d.uy, d.uz};
        for (const auto& L : inter)
          for (const auto& n : dest) {
            double w = 1.0;
            for (int a = 0; a < 3; ++a)
              w *= std::norm(oscillator::franck_condon(L[a], n[a], eta * u[a]));
            direct += d.w * w;
          }
      }
      direct /= rates3d::shell_degeneracy(e);
      CHECK(geo.shell_emission(e, s) ==
            doctest::Approx(direct).epsilon(1e-11));
    }
  }
}

TEST_CASE("frozen reabsorption factors recompose from the emission table") {
  const auto geo =
      ShellGeometry::ergodic(4, 1.3, rates1d::EmissionPattern::isotropic, 4);
  rates3d::ShellCoolingKernel k(geo, 0.25);
  k.set_pulse(-2.0, {cplx(1, 0), cplx(1, 0), cplx(1, 0)});
  const auto occ = make_occupation({3, 1, 0, 2});
  k.freeze(occ);
  for (int n1 = 0; n1 < geo.nshells(); ++n1)
    for (int e = 0; e <= geo.emax(); ++e) {
      double want = 1.0 - geo.shell_emission(e, n1) / geo.degeneracy(n1);
      for (int s = 0; s < geo.nshells(); ++s)
        want += occ.counts[s] * geo.shell_emission(e, s) / geo.degeneracy(s);
      CHECK(k.rbar(n1, e) == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("the frozen kernel matches a brute-force amplitude sum") {
  const double eta = 1.3, gamma = 0.25, delta = -2.0;
  const std::array<cplx, 3> amps = {cplx(1.0, 0.0), cplx(0.3, 0.7),
                                    cplx(-1.1, 0.2)};
  const auto geo =
      ShellGeometry::ergodic(4, eta, rates1d::EmissionPattern::isotropic, 4);
  rates3d::ShellCoolingKernel k(geo, gamma);
  k.set_pulse(delta, amps);
  const auto occ = make_occupation({3, 1, 0, 2});
  k.freeze(occ);

  const auto dirs = geo.directions();
  const int nd = geo.sdest();
  for (const std::array<int, 3>& src :
       {std::array<int, 3>{0, 0, 0}, {1, 1, 0}, {0, 1, 2}}) {
    const int n1 = src[0] + src[1] + src[2];
    std::vector<double> brute(nd, 0.0);
    for (const auto& d : dirs) {
      const double u[3] = {d.ux, d.uy, d.uz};
      // dressed per-axis rows for this direction
      std::array<std::vector<cplx>, 3> B;
      for (int a = 0; a < 3; ++a) {
        B[a].assign(nd, cplx(0, 0));
        for (int l = 0; l < geo.lmax(); ++l) {
          const cplx kick = oscillator::franck_condon(l, src[a], eta);
          if (kick == cplx(0, 0)) continue;
          const int e = n1 - src[a] + l;
          const cplx den(delta - (l - src[a]), gamma * k.rbar(n1, e));
          for (int n = 0; n < nd; ++n)
            B[a][n] += kick / den *
                       std::conj(oscillator::franck_condon(l, n, eta * u[a]));
        }
      }
      for (int t = 0; t < nd; ++t)
        for (const auto& n : compositions(t)) {
          cplx amp(0, 0);
          for (int a = 0; a < 3; ++a) {
            cplx term = amps[a] * B[a][n[a]];
            for (int o = 0; o < 3; ++o)
              if (o != a)
                term *= std::conj(
                    oscillator::franck_condon(src[o], n[o], eta * u[o]));
            amp += term;
          }
          brute[t] += d.w * gamma * gamma * std::norm(amp);
        }
    }
    const auto row = k.state_row(src);
    for (int t = 0; t < nd; ++t)
      CHECK(row[t] == doctest::Approx(brute[t]).epsilon(1e-11));
  }
}

TEST_CASE("shell strengths average the member-state rows") {
  const auto geo =
      ShellGeometry::ergodic(5, 1.6, rates1d::EmissionPattern::isotropic, 5);
  rates3d::ShellCoolingKernel k(geo, 0.1);
  // equal x and y amplitudes so the mirror fold is active
  k.set_pulse(-3.0, {cplx(1, 0), cplx(1, 0), cplx(0.4, -0.6)});
  const auto occ = make_occupation({4, 2, 1, 0, 1});
  k.freeze(occ);
  for (int n1 : {1, 3, 4}) {
    std::vector<double> mean(geo.sdest(), 0.0);
    for (const auto& st : geo.states(n1)) {
      const auto row = k.state_row(st);
      for (int t = 0; t < geo.sdest(); ++t) mean[t] += row[t];
    }
    for (int t = 0; t < geo.sdest(); ++t) {
      mean[t] /= geo.degeneracy(n1);
      CHECK(k.strength(n1, t) == doctest::Approx(mean[t]).epsilon(1e-11));
    }
  }
}

TEST_CASE("the single-axis kernel reproduces the 1D channel strengths") {
  const int levels = 10;
  const double eta = 1.8, gamma = 0.04, delta = -3.0;
  const auto occ = make_occupation({3, 2, 1, 0, 2, 0, 0, 0, 0, 0});

  // pin the intermediate band to the 1D convention so the sums are identical
  const auto geo = ShellGeometry::single_axis(levels, eta, 10, levels + 10);
  rates3d::ShellCoolingKernel k(geo, gamma);
  k.set_pulse(delta, {cplx(1, 0), cplx(0, 0), cplx(0, 0)});
  k.freeze(occ);

  TrapModel trap;
  trap.mode = TrapMode::one_d;
  trap.eta = eta;
  trap.levels = levels;
  rates1d::CoolingParams cp;
  cp.gamma = gamma;
  cp.delta = delta;
  const auto tabs = rates1d::build_rate_tables(cp, trap);
  rates1d::CoolingWorkspace ws(tabs, cp);
  ws.set_detuning(delta);
  ws.set_occupation(occ);

  REQUIRE(geo.sdest() == tabs.ndest);
  for (int n1 = 0; n1 < levels; ++n1)
    for (int n2 = 0; n2 < tabs.ndest; ++n2) {
      const double b = ws.channel_strength(n1, n2);
      CHECK(k.strength(n1, n2) ==
            doctest::Approx(b).epsilon(1e-12).scale(1e-12));
      // the lone member state carries the whole shell average
      const auto row = k.state_row({n1, 0, 0});
      CHECK(row[n2] == doctest::Approx(b).epsilon(1e-12).scale(1e-12));
    }
}

TEST_CASE("kick axes are interchangeable for an isotropic source") {
  const auto geo =
      ShellGeometry::ergodic(4, 1.4, rates1d::EmissionPattern::isotropic, 6);
  rates3d::ShellCoolingKernel k(geo, 0.08);
  const auto occ = make_occupation({2, 1, 0, 0});

  k.set_pulse(-2.0, {cplx(1, 0), cplx(0, 0), cplx(0, 0)});
  k.freeze(occ);
  const auto rx = k.state_row({0, 0, 0});
  k.set_pulse(-2.0, {cplx(0, 0), cplx(0, 0), cplx(1, 0)});
  k.freeze(occ);
  const auto rz = k.state_row({0, 0, 0});

  // same physical integrand through the polar and azimuthal discretizations
  double peak = 0.0;
  for (double v : rx) peak = std::max(peak, v);
  for (std::size_t t = 0; t < rx.size(); ++t)
    CHECK(rx[t] == doctest::Approx(rz[t]).epsilon(2e-5).scale(1e-9 * peak));
}

TEST_CASE("dark amplitudes suppress the resonant pulse by two orders") {
  const double eta = 2.0;
  const auto geo =
      ShellGeometry::ergodic(8, eta, rates1d::EmissionPattern::isotropic, 8);
  rates3d::ShellCoolingKernel k(geo, 0.04);
  const auto occ = make_occupation({1, 1, 1, 0, 0, 0, 0, 0});

  k.set_pulse(0.0, {cplx(1, 0), cplx(1, 0), cplx(1, 0)});
  k.freeze(occ);
  double undark = 0.0;
  for (int n2 = 1; n2 < geo.sdest(); ++n2) undark += k.strength(0, n2);

  const cplx az = rates3d::interference_dark_amplitude({0, 0, 0}, eta);
  k.set_pulse(0.0, {cplx(1, 0), cplx(1, 0), az});
  k.freeze(occ);
  double dark = 0.0;
  for (int n2 = 1; n2 < geo.sdest(); ++n2) dark += k.strength(0, n2);

  CHECK(dark > 0.0);
  CHECK(undark >= 1e2 * dark);
}

TEST_CASE("shell cooling rates compose strength with bosonic occupancy") {
  const auto geo =
      ShellGeometry::ergodic(4, 1.3, rates1d::EmissionPattern::isotropic, 4);
  const auto occ = make_occupation({3, 1, 0, 2});

  rates1d::CoolingParams p;
  p.gamma = 0.25;
  p.Omega = 0.06;
  p.delta = -2.0;

  rates3d::ShellCoolingKernel k(geo, p.gamma);
  k.set_pulse(p.delta, p.axis_amplitudes);
  k.freeze(occ);

  SUBCASE("the formula carries source count and destination stimulation") {
    const double pref = p.Omega * p.Omega / (2.0 * p.gamma);
    CHECK(rates3d::shell_cooling_rate(3, 0, occ, p, geo) ==
          doctest::Approx(pref * k.strength(3, 0) * 2.0 * (3.0 + 1.0) / 1.0)
              .epsilon(1e-13));
    CHECK(rates3d::shell_cooling_rate(3, 1, occ, p, geo) ==
          doctest::Approx(pref * k.strength(3, 1) * 2.0 * (1.0 + 3.0) / 3.0)
              .epsilon(1e-13));
    // guard-band destinations carry no stimulation
    CHECK(rates3d::shell_cooling_rate(3, 5, occ, p, geo) ==
          doctest::Approx(pref * k.strength(3, 5) * 2.0).epsilon(1e-13));
  }

  SUBCASE("switched-off coupling and empty sources give zero") {
    auto off = p;
    off.Omega = 0.0;
    CHECK(rates3d::shell_cooling_rate(3, 1, occ, off, geo) == 0.0);
    CHECK(rates3d::shell_cooling_rate(2, 1, occ, p, geo) == 0.0);
  }

  SUBCASE("strengths are finite, nonnegative, and occupation dependent") {
    for (int n1 = 0; n1 < geo.nshells(); ++n1)
      for (int n2 = 0; n2 < geo.sdest(); ++n2) {
        CHECK(std::isfinite(k.strength(n1, n2)));
        CHECK(k.strength(n1, n2) >= 0.0);
      }
    rates3d::ShellCoolingKernel k2(geo, p.gamma);
    k2.set_pulse(p.delta, p.axis_amplitudes);
    k2.freeze(make_occupation({9, 0, 0, 0}));
    bool differs = false;
    for (int n2 = 0; n2 < geo.sdest(); ++n2)
      if (k2.strength(3, n2) != k.strength(3, n2)) differs = true;
    CHECK(differs);
  }

  SUBCASE("misuse is rejected") {
    rates3d::ShellCoolingKernel fresh(geo, p.gamma);
    CHECK_THROWS_AS(fresh.strength(0, 0), std::logic_error);
    CHECK_THROWS_AS(fresh.state_row({0, 0, 0}), std::logic_error);
    CHECK_THROWS_AS(k.strength(4, 0), std::domain_error);
    CHECK_THROWS_AS(k.strength(0, 8), std::domain_error);
    CHECK_THROWS_AS(k.state_row({2, 2, 2}), std::domain_error);
    CHECK_THROWS_AS(k.state_row({-1, 0, 0}), std::domain_error);
    CHECK_THROWS_AS(rates3d::shell_cooling_rate(0, 8, occ, p, geo),
                    std::domain_error);
    CHECK_THROWS_AS(rates3d::ShellCoolingKernel(geo, 0.0), std::invalid_argument);
  }
}
