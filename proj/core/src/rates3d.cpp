#include "bosecool/rates3d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>

#include "bosecool/oscillator.hpp"
#include "bosecool/quadrature.hpp"

namespace bosecool::rates3d {

namespace {

int occ_at(const OccupationState& occ, int n) {
  return n < static_cast<int>(occ.counts.size()) ? occ.counts[n] : 0;
}

// collapse key for signed direction components: values closer than ~1.4e-14
// share one Franck-Condon table
long long ukey(double v) { return std::llround(v * 0x1p46); }

}  // namespace

std::vector<int> ShellModel::degeneracies() const {
  std::vector<int> g(nmax + 1);
  for (int n = 0; n <= nmax; ++n) g[n] = shell_degeneracy(n);
  return g;
}

ShellModel ShellModel::from_trap(const TrapModel& trap) {
  if (trap.levels < 1)
    throw std::invalid_argument("shell model: need at least one shell");
  ShellModel m;
  m.nmax = trap.levels - 1;
  m.Delta = trap.Delta;
  return m;
}

int shell_degeneracy(int n) {
  if (n < 0) throw std::domain_error("shell index must be nonnegative");
  return (n + 1) * (n + 2) / 2;
}

double shell_collision_rate(int n1, int n2, int n3, int n4,
                            const OccupationState& occ, const ShellModel& m) {
  for (int n : {n1, n2, n3, n4})
    if (n < 0 || n > m.nmax)
      throw std::domain_error("collision shell outside the truncation");
  if (n1 + n2 != n3 + n4) return 0.0;
  if (std::minmax(n1, n2) == std::minmax(n3, n4)) return 0.0;
  const double src = static_cast<double>(occ_at(occ, n1)) *
                     (occ_at(occ, n2) - (n1 == n2 ? 1 : 0));
  if (src <= 0.0) return 0.0;
  const int nj = std::min(std::min(n1, n2), std::min(n3, n4));
  const double g1 = shell_degeneracy(n1), g2 = shell_degeneracy(n2);
  const double g3 = shell_degeneracy(n3), g4 = shell_degeneracy(n4);
  const double dst =
      (occ_at(occ, n3) + g3) * (occ_at(occ, n4) + g4 + (n3 == n4 ? 1 : 0));
  return m.Delta * (nj + 1) * (nj + 2) * src * dst / (g1 * g2 * g3 * g4);
}

namespace {

cplx elastic_element(int mm, double eta, const char* axis) {
  if (mm < 0) throw std::domain_error("negative target component");
  const cplx e = oscillator::franck_condon(mm, mm, eta);
  if (std::abs(e) <= 1e-10 * std::exp(-eta * eta / 2.0))
    throw std::domain_error(std::string("target's ") + axis +
                            " elastic element vanishes; no finite "
                            "interference amplitude for this state");
  return e;
}

}  // namespace

cplx interference_dark_amplitude(const std::array<int, 3>& target, double eta) {
  const cplx ex = elastic_element(target[0], eta, "x");
  const cplx ey = elastic_element(target[1], eta, "y");
  const cplx ez = elastic_element(target[2], eta, "z");
  return -(ex + ey) / ez;
}

double interference_dark_amplitude_2d(int mx, int my, double eta) {
  const cplx ex = elastic_element(mx, eta, "x");
  const cplx ey = elastic_element(my, eta, "y");
  return -(ex / ey).real();
}

ShellGeometry ShellGeometry::ergodic(int nshells, double eta,
                                     rates1d::EmissionPattern pattern,
                                     int sguard, int lband) {
  if (nshells < 1) throw std::invalid_argument("need at least one shell");
  if (eta <= 0.0)
    throw std::invalid_argument("Lamb-Dicke parameter must be positive");
  if (sguard < 0) throw std::invalid_argument("guard band must be nonnegative");
  if (pattern == rates1d::EmissionPattern::dipole)
    throw std::invalid_argument(
        "dipole emission needs a polarization axis that the three-laser "
        "setup does not single out; use the isotropic pattern in 3D");

  ShellGeometry g;
  g.nshells_ = nshells;
  g.sdest_ = nshells + sguard;
  g.eta_ = eta;
  g.single_axis_ = false;
  g.states_.resize(nshells);
  for (int n = 0; n < nshells; ++n)
    for (int a = 0; a <= n; ++a)
      for (int b = 0; a + b <= n; ++b) g.states_[n].push_back({a, b, n - a - b});

  // Gauss-Legendre polar nodes x uniform azimuth, weights sum to 1
  const auto& gl = quadrature::gauss_legendre(16);
  const int nphi = 16;
  std::map<long long, int> seen;
  auto intern = [&](double v) {
    const long long k = ukey(v);
    auto it = seen.find(k);
    if (it != seen.end()) return it->second;
    const int idx = static_cast<int>(g.uvals_.size());
    g.uvals_.push_back(v);
    seen.emplace(k, idx);
    return idx;
  };
  for (int q = 0; q < 16; ++q) {
    const double ct = gl.x[q];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const int iz = intern(ct);
    for (int j = 0; j < nphi; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / nphi;
      Dir d;
      d.ix = intern(st * std::cos(phi));
      d.iy = intern(st * std::sin(phi));
      d.iz = iz;
      d.w = 0.5 * gl.w[q] / nphi;
      g.dirs_.push_back(d);
    }
  }
  g.build_tables(lband);
  g.build_shell_emission();
  return g;
}

ShellGeometry ShellGeometry::single_axis(int nshells, double eta, int sguard,
                                         int lband) {
  if (nshells < 1) throw std::invalid_argument("need at least one shell");
  if (eta <= 0.0)
    throw std::invalid_argument("Lamb-Dicke parameter must be positive");
  if (sguard < 0) throw std::invalid_argument("guard band must be nonnegative");

  ShellGeometry g;
  g.nshells_ = nshells;
  g.sdest_ = nshells + sguard;
  g.eta_ = eta;
  g.single_axis_ = true;
  g.states_.resize(nshells);
  for (int n = 0; n < nshells; ++n) g.states_[n].push_back({n, 0, 0});

  const auto& gl = quadrature::gauss_legendre(16);
  std::map<long long, int> seen;
  auto intern = [&](double v) {
    const long long k = ukey(v);
    auto it = seen.find(k);
    if (it != seen.end()) return it->second;
    const int idx = static_cast<int>(g.uvals_.size());
    g.uvals_.push_back(v);
    seen.emplace(k, idx);
    return idx;
  };
  const int izero = intern(0.0);
  for (int q = 0; q < 16; ++q) {
    Dir d;
    d.ix = intern(gl.x[q]);
    d.iy = izero;
    d.iz = izero;
    d.w = 0.5 * gl.w[q];
    g.dirs_.push_back(d);
  }
  g.build_tables(lband);
  g.build_shell_emission();
  return g;
}

void ShellGeometry::build_tables(int lband) {
  if (lband > 0) {
    lmax_ = lband;
  } else {
    // size the per-axis intermediate band from the kick tail of the highest
    // retained level
    const int cap = nshells_ + 96 + static_cast<int>(16.0 * eta_ * eta_);
    const int mtop = nshells_ - 1;
    std::vector<double> p2(cap);
    for (int l = 0; l < cap; ++l) {
      const double v = oscillator::franck_condon_mod(l, mtop, eta_);
      p2[l] = v * v;
    }
    double tail = 0.0;
    int lm = cap;
    for (int l = cap - 1; l >= 0; --l) {
      tail += p2[l];
      if (tail >= 1e-9) {
        lm = l + 1;
        break;
      }
    }
    lmax_ = std::max(lm, nshells_ + 6);
  }
  emax_ = nshells_ - 1 + lmax_ - 1;

  ufc_.resize(uvals_.size());
  for (std::size_t t = 0; t < uvals_.size(); ++t) {
    auto tab =
        oscillator::build_franck_condon_table(emax_, sdest_ - 1, eta_ * uvals_[t]);
    ufc_[t] = std::move(tab.a);
  }
  auto kt = oscillator::build_franck_condon_table(emax_, nshells_ - 1, eta_);
  kick_ = std::move(kt.a);
}

void ShellGeometry::build_shell_emission() {
  const int e1 = emax_ + 1;
  ebar_.assign(static_cast<std::size_t>(e1) * nshells_, 0.0);

  if (single_axis_) {
    for (const auto& d : dirs_) {
      const std::vector<cplx>& tx = ufc_[d.ix];
      for (int e = 0; e < e1; ++e)
        for (int s = 0; s < nshells_; ++s)
          ebar_[e * nshells_ + s] += d.w * std::norm(tx[e * sdest_ + s]);
    }
    return;
  }

  // Coefficient of x^E y^s in the product of the three per-axis weight
  // polynomials sum_{l,n} |fc(l,n,eta u_a)|^2 x^l y^n sums the emission
  // weight over every intermediate state of shell E and every destination
  // state of shell s; dividing by the shell size gives the ergodic average.
  const std::size_t msz = static_cast<std::size_t>(e1) * nshells_;
  std::vector<double> fa(msz), fb(msz), t1(msz), t2(msz);
  auto fill = [&](std::vector<double>& f, int uidx) {
    const std::vector<cplx>& tb = ufc_[uidx];
    for (int l = 0; l < e1; ++l)
      for (int n = 0; n < nshells_; ++n)
        f[l * nshells_ + n] = std::norm(tb[l * sdest_ + n]);
  };
  auto conv = [&](const std::vector<double>& a, const std::vector<double>& b,
                  std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (int la = 0; la < e1; ++la)
      for (int na = 0; na < nshells_; ++na) {
        const double v = a[la * nshells_ + na];
        if (v == 0.0) continue;
        double* orow = out.data() + la * nshells_ + na;
        const int lcap = e1 - la, ncap = nshells_ - na;
        for (int lb = 0; lb < lcap; ++lb)
          for (int nb = 0; nb < ncap; ++nb)
            orow[lb * nshells_ + nb] += v * b[lb * nshells_ + nb];
      }
  };
  for (const auto& d : dirs_) {
    fill(fa, d.ix);
    fill(fb, d.iy);
    conv(fa, fb, t1);
    fill(fa, d.iz);
    conv(t1, fa, t2);
    for (std::size_t i = 0; i < msz; ++i) ebar_[i] += d.w * t2[i];
  }
  for (int e = 0; e < e1; ++e) {
    const double gi = 1.0 / shell_degeneracy(e);
    for (int s = 0; s < nshells_; ++s) ebar_[e * nshells_ + s] *= gi;
  }
}

int ShellGeometry::degeneracy(int shell) const {
  return static_cast<int>(states_.at(shell).size());
}

const std::vector<std::array<int, 3>>& ShellGeometry::states(int shell) const {
  return states_.at(shell);
}

double ShellGeometry::shell_emission(int e_int, int s) const {
  if (e_int < 0 || e_int > emax_ || s < 0 || s >= nshells_)
    throw std::domain_error("shell_emission index outside the tables");
  return ebar_[e_int * nshells_ + s];
}

std::vector<ShellGeometry::Direction> ShellGeometry::directions() const {
  std::vector<Direction> out;
  out.reserve(dirs_.size());
  for (const auto& d : dirs_)
    out.push_back({uvals_[d.ix], uvals_[d.iy], uvals_[d.iz], d.w});
  return out;
}

const cplx& ShellGeometry::emisfc(int uidx, int l, int n) const {
  return ufc_[uidx][l * sdest_ + n];
}

const cplx& ShellGeometry::kickfc(int l, int m) const {
  return kick_[l * nshells_ + m];
}

ShellCoolingKernel::ShellCoolingKernel(const ShellGeometry& g, double gamma,
                                       double omega)
    : g_(&g), gamma_(gamma), omega_(omega) {
  if (gamma <= 0.0) throw std::invalid_argument("gamma must be positive");
  if (omega <= 0.0)
    throw std::invalid_argument("trap frequency must be positive");
}

void ShellCoolingKernel::set_pulse(double delta,
                                   const std::array<cplx, 3>& amplitudes) {
  sdim_ = delta / omega_;
  amps_ = amplitudes;
  frozen_ = false;
}

int ShellCoolingKernel::pair_index(int n1, int m) const {
  return n1 * (n1 + 1) / 2 + m;
}

void ShellCoolingKernel::freeze(const OccupationState& occ) {
  const ShellGeometry& g = *g_;
  const int ns = g.nshells();
  const int e1 = g.emax() + 1;
  const int nd = g.sdest();
  const int lmax = g.lmax();

  // reabsorption per source shell and intermediate shell: spontaneous
  // completeness plus per-state bosonic stimulation, the source atom's own
  // shell entering with one atom removed
  rbar_.assign(static_cast<std::size_t>(ns) * e1, 0.0);
  for (int n1 = 0; n1 < ns; ++n1) {
    double* row = rbar_.data() + static_cast<std::size_t>(n1) * e1;
    for (int e = 0; e < e1; ++e)
      row[e] = 1.0 - g.shell_emission(e, n1) / g.degeneracy(n1);
    for (int s = 0; s < ns; ++s) {
      const int nc = occ_at(occ, s);
      if (nc == 0) continue;
      const double f = static_cast<double>(nc) / g.degeneracy(s);
      for (int e = 0; e < e1; ++e) row[e] += f * g.shell_emission(e, s);
    }
  }

  // complex denominators indexed by the kick's energy change
  const int woff = ns - 1;
  const int wdim = lmax + ns - 1;
  invd_.assign(static_cast<std::size_t>(ns) * wdim, cplx(0.0, 0.0));
  for (int n1 = 0; n1 < ns; ++n1)
    for (int dlt = -woff; dlt < lmax; ++dlt) {
      const int e = n1 + dlt;
      if (e < 0 || e >= e1) continue;
      const cplx den(sdim_ - dlt,
                     gamma_ * rbar_[static_cast<std::size_t>(n1) * e1 + e]);
      invd_[static_cast<std::size_t>(n1) * wdim + (dlt + woff)] = 1.0 / den;
    }

  // dressed intermediate rows: kick from component m, propagation through
  // the reabsorption-broadened intermediate, emission along one grid value
  const int nu = g.ucount();
  const int npair = ns * (ns + 1) / 2;
  dressed_.assign(static_cast<std::size_t>(npair) * nu * nd, cplx(0.0, 0.0));
  for (int n1 = 0; n1 < ns; ++n1)
    for (int m = 0; m <= n1; ++m) {
      const cplx* dden = invd_.data() + static_cast<std::size_t>(n1) * wdim;
      for (int t = 0; t < nu; ++t) {
        cplx* out = dressed_.data() +
                    (static_cast<std::size_t>(pair_index(n1, m)) * nu + t) * nd;
        for (int l = 0; l < lmax; ++l) {
          const cplx kd = g.kickfc(l, m) * dden[l - m + woff];
          if (kd == cplx(0.0, 0.0)) continue;
          for (int n = 0; n < nd; ++n)
            out[n] += kd * std::conj(g.emisfc(t, l, n));
        }
      }
    }

  // ergodic strength matrix: average the per-state destination-shell rows
  // over each source shell, folding the x<->y mirror when the amplitudes
  // allow it
  s_.assign(static_cast<std::size_t>(ns) * nd, 0.0);
  const bool fold = !g.is_single_axis() && amps_[0] == amps_[1];
  for (int n1 = 0; n1 < ns; ++n1) {
    double* row = s_.data() + static_cast<std::size_t>(n1) * nd;
    const double gi = 1.0 / g.degeneracy(n1);
    if (fold) {
      for (int c = 0; c <= n1; ++c)
        for (int a = 0; 2 * a <= n1 - c; ++a)
          accumulate_state_row({a, n1 - c - a, c},
                               gi * (2 * a < n1 - c ? 2.0 : 1.0), row);
    } else {
      for (const auto& st : g.states(n1)) accumulate_state_row(st, gi, row);
    }
  }
  frozen_ = true;
}

void ShellCoolingKernel::accumulate_state_row(const std::array<int, 3>& m,
                                              double scale, double* row) const {
  const ShellGeometry& g = *g_;
  const int nd = g.sdest();
  const int nu = g.ucount();
  const int n1 = m[0] + m[1] + m[2];
  const std::size_t stride = static_cast<std::size_t>(nu) * nd;

  std::vector<cplx> mm[3];
  std::vector<double> p[3], pcv[3];
  for (int a = 0; a < 3; ++a) {
    mm[a].assign(nd, cplx(0.0, 0.0));
    p[a].assign(nd, 0.0);
    pcv[a].assign(nd, 0.0);
  }
  std::vector<double> q(nd);
  std::vector<cplx> cf(nd), cg(nd), c1(nd), c2(nd);

  for (const auto& d : g.dirs()) {
    const int ui[3] = {d.ix, d.iy, d.iz};
    const cplx* B[3];
    for (int a = 0; a < 3; ++a) {
      B[a] = dressed_.data() +
             static_cast<std::size_t>(pair_index(n1, m[a])) * stride +
             static_cast<std::size_t>(ui[a]) * nd;
      for (int n = 0; n < nd; ++n) {
        const cplx e = std::conj(g.emisfc(ui[a], m[a], n));
        mm[a][n] = e;
        p[a][n] = std::norm(e);
      }
    }
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3, c = (a + 2) % 3;
      double* out = pcv[a].data();
      std::fill(out, out + nd, 0.0);
      for (int i = 0; i < nd; ++i) {
        const double v = p[b][i];
        if (v == 0.0) continue;
        for (int j = 0; i + j < nd; ++j) out[i + j] += v * p[c][j];
      }
    }
    const double wg = d.w * gamma_ * gamma_ * scale;
    for (int a = 0; a < 3; ++a) {
      const double aa = std::norm(amps_[a]);
      if (aa == 0.0) continue;
      for (int n = 0; n < nd; ++n) q[n] = std::norm(B[a][n]);
      for (int i = 0; i < nd; ++i) {
        if (q[i] == 0.0) continue;
        const double f = wg * aa * q[i];
        for (int j = 0; i + j < nd; ++j) row[i + j] += f * pcv[a][j];
      }
    }
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const cplx ab = amps_[a] * std::conj(amps_[b]);
        if (ab == cplx(0.0, 0.0)) continue;
        const int c = 3 - a - b;
        for (int n = 0; n < nd; ++n) {
          cf[n] = B[a][n] * std::conj(mm[a][n]);
          cg[n] = mm[b][n] * std::conj(B[b][n]);
        }
        std::fill(c1.begin(), c1.end(), cplx(0.0, 0.0));
        for (int i = 0; i < nd; ++i) {
          const cplx v = cf[i];
          if (v == cplx(0.0, 0.0)) continue;
          for (int j = 0; i + j < nd; ++j) c1[i + j] += v * cg[j];
        }
        std::fill(c2.begin(), c2.end(), cplx(0.0, 0.0));
        for (int i = 0; i < nd; ++i) {
          const double v = p[c][i];
          if (v == 0.0) continue;
          for (int j = 0; i + j < nd; ++j) c2[i + j] += v * c1[j];
        }
        for (int t = 0; t < nd; ++t)
          row[t] += wg * 2.0 * (ab * c2[t]).real();
      }
  }
}

double ShellCoolingKernel::strength(int n1, int n2) const {
  if (!frozen_) throw std::logic_error("cooling kernel is not frozen");
  if (n1 < 0 || n1 >= g_->nshells() || n2 < 0 || n2 >= g_->sdest())
    throw std::domain_error("cooling shell outside the truncation");
  return s_[static_cast<std::size_t>(n1) * g_->sdest() + n2];
}

std::vector<double> ShellCoolingKernel::state_row(
    const std::array<int, 3>& source) const {
  if (!frozen_) throw std::logic_error("cooling kernel is not frozen");
  for (int v : source)
    if (v < 0) throw std::domain_error("negative source component");
  const int n1 = source[0] + source[1] + source[2];
  if (n1 >= g_->nshells())
    throw std::domain_error("source state outside the truncation");
  std::vector<double> row(g_->sdest(), 0.0);
  accumulate_state_row(source, 1.0, row.data());
  return row;
}

double ShellCoolingKernel::rbar(int n1, int e_int) const {
  if (!frozen_) throw std::logic_error("cooling kernel is not frozen");
  if (n1 < 0 || n1 >= g_->nshells() || e_int < 0 || e_int > g_->emax())
    throw std::domain_error("reabsorption index outside the tables");
  return rbar_[static_cast<std::size_t>(n1) * (g_->emax() + 1) + e_int];
}

double shell_cooling_rate(int n1, int n2, const OccupationState& occ,
                          const rates1d::CoolingParams& p,
                          const ShellGeometry& g) {
  if (n1 < 0 || n1 >= g.nshells() || n2 < 0 || n2 >= g.sdest())
    throw std::domain_error("cooling shell outside the truncation");
  if (p.Omega == 0.0) return 0.0;
  const int n1c = occ_at(occ, n1);
  if (n1c == 0) return 0.0;
  ShellCoolingKernel k(g, p.gamma);
  k.set_pulse(p.delta, p.axis_amplitudes);
  k.freeze(occ);
  double occfac = 1.0;
  if (n2 < g.nshells()) {
    const double g2 = g.degeneracy(n2);
    occfac = (occ_at(occ, n2) + g2) / g2;
  }
  return (p.Omega * p.Omega / (2.0 * p.gamma)) * k.strength(n1, n2) * n1c *
         occfac;
}

}  // namespace bosecool::rates3d
