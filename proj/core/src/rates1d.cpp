#include "bosecool/rates1d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "bosecool/oscillator.hpp"
#include "bosecool/quadrature.hpp"

namespace bosecool::rates1d {

namespace {

constexpr int kGuard = 10;

std::size_t tri_index(int a, int b) {
  // a <= b
  return static_cast<std::size_t>(b) * (b + 1) / 2 + a;
}

void check_level(int n, int levels, const char* what) {
  if (n < 0 || n >= levels)
    throw std::domain_error(std::string(what) + ": level outside truncation");
}

void check_occ(const OccupationState& occ, int levels, const char* what) {
  if (occ.counts.size() < static_cast<std::size_t>(levels))
    throw std::invalid_argument(std::string(what) +
                                ": occupation vector shorter than truncation");
}

}  // namespace

Collision1DParams Collision1DParams::from_r(double r, double omega) {
  if (r < 0.0) throw std::domain_error("collision params: r must be >= 0");
  Collision1DParams p;
  p.r = r;
  p.xi = 5e-6 * r * r;
  p.omega = omega;
  return p;
}

bool festina_lente(const CoolingParams& p, double omega) {
  return p.gamma * omega < omega;  // gamma is stored in units of omega
}

double RateTables::kernel(int n1, int n2, int n3) const {
  if (n1 < 0 || n2 < 0 || n1 >= levels || n2 >= levels)
    throw std::domain_error("kernel: source level outside truncation");
  const int e = n1 + n2;
  if (n3 < 0 || n3 > e)
    throw std::domain_error("kernel: destination violates energy conservation");
  const int a = std::min(n1, n2), b = std::max(n1, n2);
  const int k = std::min(n3, e - n3);
  return dc[dcoff[tri_index(a, b)] + k];
}

double RateTables::kernel_row_sum(int n1, int n2) const {
  if (n1 < 0 || n2 < 0 || n1 >= levels || n2 >= levels)
    throw std::domain_error("kernel_row_sum: source level outside truncation");
  return sdc[tri_index(std::min(n1, n2), std::max(n1, n2))];
}

RateTables build_rate_tables(const CoolingParams& p, const TrapModel& trap) {
  if (trap.mode != TrapMode::one_d)
    throw std::invalid_argument("rate tables: trap mode must be 1D");
  if (trap.levels < 2)
    throw std::invalid_argument("rate tables: need at least two levels");
  if (trap.eta <= 0.0)
    throw std::invalid_argument("rate tables: Lamb-Dicke parameter must be > 0");

  RateTables t;
  t.trap = trap;
  t.cooling = p;
  t.levels = trap.levels;
  t.lband = trap.levels + kGuard;
  t.ndest = trap.levels + kGuard;
  // emission completeness: the widest kick spreads a level over a band of
  // order eta^2 + few * eta * sqrt(level); the assert below backs the margin
  t.ncut = t.lband + 40 +
           static_cast<int>(std::ceil(trap.eta * trap.eta +
                                      4.0 * trap.eta *
                                          std::sqrt(2.0 * t.lband + 1.0)));

  const auto& gl = quadrature::gauss_legendre(t.nq);
  t.kappa = gl.x;
  t.aw.resize(t.nq);
  for (int q = 0; q < t.nq; ++q) {
    const double k = t.kappa[q];
    const double dens = p.pattern == EmissionPattern::isotropic
                            ? 0.5
                            : 0.75 * (1.0 - k * k);
    t.aw[q] = gl.w[q] * dens;
  }

  t.fl.resize(static_cast<std::size_t>(t.lband) * t.levels);
  for (int l = 0; l < t.lband; ++l)
    for (int n = 0; n < t.levels; ++n)
      t.fl[l * t.levels + n] = oscillator::franck_condon(l, n, trap.eta);

  t.llo.assign(t.levels, 0);
  t.lhi.assign(t.levels, 0);
  for (int n = 0; n < t.levels; ++n) {
    int lo = t.lband, hi = 0;
    for (int l = 0; l < t.lband; ++l)
      if (t.fl[l * t.levels + n] != cplx(0.0, 0.0)) {
        lo = std::min(lo, l);
        hi = std::max(hi, l + 1);
      }
    t.llo[n] = std::min(lo, hi);
    t.lhi[n] = hi;
  }

  t.fe.resize(static_cast<std::size_t>(t.nq) * t.lband * t.ndest);
  for (int q = 0; q < t.nq; ++q) {
    const double x = trap.eta * t.kappa[q];
    for (int l = 0; l < t.lband; ++l)
      for (int n = 0; n < t.ndest; ++n)
        t.fe[(static_cast<std::size_t>(q) * t.lband + l) * t.ndest + n] =
            oscillator::franck_condon(l, n, x);
  }

  t.tavg.assign(static_cast<std::size_t>(t.lband) * (t.ncut + 1), 0.0);
  for (int q = 0; q < t.nq; ++q) {
    const double x = trap.eta * t.kappa[q];
    for (int l = 0; l < t.lband; ++l)
      for (int n = 0; n <= t.ncut; ++n) {
        const double a = oscillator::franck_condon_mod(l, n, x);
        t.tavg[l * (t.ncut + 1) + n] += t.aw[q] * a * a;
      }
  }

  t.usum.assign(t.lband, 0.0);
  t.r0.assign(t.lband, 0.0);
  for (int l = 0; l < t.lband; ++l) {
    double u = 0.0, peak = 0.0;
    for (int n = 0; n <= t.ncut; ++n) {
      u += t.tavg[l * (t.ncut + 1) + n];
      if (n < t.levels) peak = std::max(peak, t.tavg[l * (t.ncut + 1) + n]);
    }
    t.usum[l] = u;
    t.r0[l] = u - peak;
    if (std::abs(1.0 - u) > 1e-9)
      throw std::runtime_error("rate tables: emission completeness cut too low");
  }

  // collision kernel rows per sorted source pair, canonical classes memoized
  std::map<std::array<int, 4>, double> memo;
  const auto class_value = [&](int a, int b, int c, int d) {
    std::array<int, 4> key{a, b, c, d};
    if (std::make_pair(c, d) < std::make_pair(a, b)) key = {c, d, a, b};
    auto it = memo.find(key);
    if (it == memo.end())
      it = memo.emplace(key, oscillator::delta_c(key[0], key[1], key[2])).first;
    return it->second;
  };

  const std::size_t npairs = tri_index(t.levels - 1, t.levels - 1) + 1;
  t.dcoff.assign(npairs, 0);
  t.sdc.assign(npairs, 0.0);
  std::size_t total = 0;
  for (int b = 0; b < t.levels; ++b)
    for (int a = 0; a <= b; ++a) {
      t.dcoff[tri_index(a, b)] = total;
      total += static_cast<std::size_t>((a + b) / 2) + 1;
    }
  t.dc.assign(total, 0.0);
  for (int b = 0; b < t.levels; ++b)
    for (int a = 0; a <= b; ++a) {
      const int e = a + b;
      double row = 0.0;
      for (int k = 0; k <= e / 2; ++k) {
        const double v = class_value(a, b, k, e - k);
        t.dc[t.dcoff[tri_index(a, b)] + k] = v;
        if (!(k == a && e - k == b)) row += v;
      }
      t.sdc[tri_index(a, b)] = row;
    }

  return t;
}

double collision_rate_1d(int n1, int n2, int n3, int n4,
                         const OccupationState& occ,
                         const Collision1DParams& p, const RateTables& t) {
  check_level(n1, t.levels, "collision rate");
  check_level(n2, t.levels, "collision rate");
  check_level(n3, t.levels, "collision rate");
  check_level(n4, t.levels, "collision rate");
  check_occ(occ, t.levels, "collision rate");
  if (n1 + n2 != n3 + n4) return 0.0;
  if (p.xi == 0.0) return 0.0;
  const double src =
      static_cast<double>(occ.counts[n1]) * (occ.counts[n2] - (n1 == n2));
  if (src <= 0.0) return 0.0;
  const double dst = static_cast<double>(occ.counts[n3] + 1) *
                     (occ.counts[n4] + 1 + (n3 == n4));
  return p.xi * p.omega * t.kernel(n1, n2, n3) * src * dst;
}

double r_factor(int n1, int l, const OccupationState& occ,
                const RateTables& t) {
  check_level(n1, t.levels, "r_factor");
  check_occ(occ, t.levels, "r_factor");
  if (l < 0 || l >= t.lband)
    throw std::domain_error("r_factor: intermediate level outside band");
  double g = 0.0;
  const int top = std::min<int>(occ.counts.size(), t.levels);
  for (int n = 0; n < top; ++n)
    if (occ.counts[n]) g += t.emit2(l, n) * occ.counts[n];
  return t.usum[l] + g - t.emit2(l, n1);
}

double cooling_rate_1d(int n1, int n2, const OccupationState& occ,
                       const CoolingParams& p, const RateTables& t) {
  check_level(n1, t.levels, "cooling rate");
  check_level(n2, t.levels, "cooling rate");
  check_occ(occ, t.levels, "cooling rate");
  if (p.Omega == 0.0) return 0.0;
  if (occ.counts[n1] == 0) return 0.0;
  CoolingWorkspace ws(t, p);
  ws.set_detuning(p.delta);
  ws.set_occupation(occ);
  const double strength = ws.channel_strength(n1, n2);
  const double pref = t.trap.omega * p.Omega * p.Omega / (2.0 * p.gamma);
  return pref * strength * occ.counts[n1] * (occ.counts[n2] + 1.0);
}

PulseBounds build_pulse_bounds(const RateTables& t, const CoolingParams& p,
                               double delta) {
  PulseBounds b;
  b.delta = delta;
  b.ndest = t.ndest;
  b.vhat.assign(static_cast<std::size_t>(t.levels) * t.ndest, 0.0);
  const double sdim = delta / t.trap.omega;
  std::vector<double> ph(t.lband);
  for (int n1 = 0; n1 < t.levels; ++n1) {
    double psum = 0.0;
    for (int l = t.llo[n1]; l < t.lhi[n1]; ++l) {
      const double re = sdim - (l - n1);
      const double dmin =
          std::sqrt(re * re + p.gamma * p.gamma * t.r0[l] * t.r0[l]);
      ph[l] = p.gamma * std::abs(t.kick(l, n1)) / dmin;
      psum += ph[l];
    }
    for (int n2 = 0; n2 < t.ndest; ++n2) {
      double s = 0.0;
      for (int l = t.llo[n1]; l < t.lhi[n1]; ++l) s += ph[l] * t.emit2(l, n2);
      b.vhat[static_cast<std::size_t>(n1) * t.ndest + n2] = s * psum;
    }
  }
  return b;
}

CoolingWorkspace::CoolingWorkspace(const RateTables& t, const CoolingParams& p)
    : t_(&t),
      gamma_(p.gamma),
      sdim_(p.delta / t.trap.omega),
      g_(t.lband, 0.0),
      nocc_(t.levels, 0),
      invd_(static_cast<std::size_t>(t.levels) * t.lband),
      c_(t.levels, 0.0) {
  rebuild_denominators();
}

void CoolingWorkspace::set_detuning(double delta) {
  sdim_ = delta / t_->trap.omega;
  rebuild_denominators();
}

void CoolingWorkspace::set_occupation(const OccupationState& occ) {
  std::fill(g_.begin(), g_.end(), 0.0);
  std::fill(nocc_.begin(), nocc_.end(), 0);
  const int top = std::min<int>(occ.counts.size(), t_->levels);
  for (int n = 0; n < top; ++n) {
    nocc_[n] = occ.counts[n];
    if (occ.counts[n])
      for (int l = 0; l < t_->lband; ++l)
        g_[l] += t_->emit2(l, n) * occ.counts[n];
  }
  rebuild_denominators();
}

void CoolingWorkspace::move_atom(int n1, int n2) {
  if (n1 < 0 || n1 >= t_->levels || nocc_[n1] <= 0)
    throw std::logic_error("cooling workspace: moving a missing atom");
  --nocc_[n1];
  for (int l = 0; l < t_->lband; ++l) g_[l] -= t_->emit2(l, n1);
  if (n2 >= 0 && n2 < t_->levels) {
    ++nocc_[n2];
    for (int l = 0; l < t_->lband; ++l) g_[l] += t_->emit2(l, n2);
  }
  rebuild_denominators();
}

void CoolingWorkspace::rebuild_denominators() {
  for (int n1 = 0; n1 < t_->levels; ++n1) {
    double c = 0.0;
    for (int l = t_->llo[n1]; l < t_->lhi[n1]; ++l) {
      const double re = sdim_ - (l - n1);
      const double im =
          gamma_ * (t_->usum[l] + g_[l] - t_->emit2(l, n1));
      const double d2 = re * re + im * im;
      invd_[static_cast<std::size_t>(n1) * t_->lband + l] =
          cplx(re / d2, -im / d2);
      c += std::norm(t_->kick(l, n1)) / d2;
    }
    c_[n1] = gamma_ * gamma_ * c;
  }
}

double CoolingWorkspace::channel_strength(int n1, int n2) const {
  double sum = 0.0;
  const cplx* row = invd_.data() + static_cast<std::size_t>(n1) * t_->lband;
  for (int q = 0; q < t_->nq; ++q) {
    cplx acc(0.0, 0.0);
    for (int l = t_->llo[n1]; l < t_->lhi[n1]; ++l)
      acc += std::conj(t_->emit(q, l, n2)) * t_->kick(l, n1) * row[l];
    sum += t_->aw[q] * std::norm(acc);
  }
  return gamma_ * gamma_ * sum;
}

double CoolingWorkspace::r_value(int n1, int l) const {
  return t_->usum[l] + g_[l] - t_->emit2(l, n1);
}

}  // namespace bosecool::rates1d
