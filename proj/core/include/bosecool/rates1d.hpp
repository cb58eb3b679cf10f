#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "bosecool/common.hpp"

namespace bosecool::rates1d {

struct Collision1DParams {
  double r = 0.0;     // scattering-length ratio; 0 switches collisions off
  double xi = 0.0;    // 5e-6 * r^2, kept in lockstep by from_r
  double omega = 1.0;

  static Collision1DParams from_r(double r, double omega = 1.0);
};

enum class EmissionPattern { isotropic, dipole };

struct CoolingParams {
  double gamma = 0.04;  // spontaneous rate, units of the trap frequency
  double Omega = 0.03;  // effective Rabi frequency, units of the trap frequency
  double delta = 0.0;   // pulse detuning s * omega
  std::array<cplx, 3> axis_amplitudes{cplx(1.0, 0.0), cplx(1.0, 0.0),
                                      cplx(1.0, 0.0)};
  EmissionPattern pattern = EmissionPattern::isotropic;
};

// Festina Lente check: spontaneous decay must stay slower than the trap for
// the rate description to hold. Scenarios warn when violated but still run.
bool festina_lente(const CoolingParams& p, double omega);

// Occupation- and detuning-independent tables for one 1D trap. `levels` is
// the truncation count (indices 0..levels-1). Intermediate excited levels run
// over a wider band and cooling destinations carry an overflow guard band:
// jumps landing there are counted and discarded instead of silently lost.
struct RateTables {
  TrapModel trap;
  CoolingParams cooling;  // pattern and amplitudes are baked into the tables
  int levels = 0;
  int lband = 0;  // intermediate excited levels 0..lband-1
  int ndest = 0;  // cooling destinations incl. guard band
  int ncut = 0;   // completeness cut for emission sums
  int nq = 16;    // emission direction nodes

  std::vector<double> kappa;  // projected emission directions in [-1, 1]
  std::vector<double> aw;     // direction weights, sum to 1

  std::vector<cplx> fl;       // laser-kick amplitudes [l][n1], n1 < levels
  std::vector<cplx> fe;       // emission amplitudes [q][l][n2], n2 < ndest
  std::vector<double> tavg;   // direction-averaged |emission|^2 [l][n<=ncut]
  std::vector<double> usum;   // completeness sum of tavg per l
  std::vector<double> r0;     // occupation-free lower bound on r_factor per l
  std::vector<int> llo, lhi;  // nonzero kick band [llo, lhi) per source level

  // energy-conserving two-body overlap kernel, rows per sorted source pair
  std::vector<double> dc;
  std::vector<std::size_t> dcoff;
  std::vector<double> sdc;  // kernel row sums over distribution-changing
                            // destination classes

  const cplx& kick(int l, int n1) const { return fl[l * levels + n1]; }
  const cplx& emit(int q, int l, int n2) const {
    return fe[(static_cast<std::size_t>(q) * lband + l) * ndest + n2];
  }
  double emit2(int l, int n) const { return tavg[l * (ncut + 1) + n]; }
  double kernel(int n1, int n2, int n3) const;
  double kernel_row_sum(int n1, int n2) const;
};

RateTables build_rate_tables(const CoolingParams& p, const TrapModel& trap);

// Rate of the ordered two-body channel (n1,n2) -> (n3,n4). Zero unless
// n1 + n2 = n3 + n4. Identity channels evaluate like any other; the kinetics
// engine excludes them from its event space since they change nothing.
double collision_rate_1d(int n1, int n2, int n3, int n4,
                         const OccupationState& occ,
                         const Collision1DParams& p, const RateTables& t);

// Direction-averaged strength of reabsorption out of intermediate level l for
// an atom cooled from n1: completeness term plus bosonic stimulation by the
// current occupations, with the source atom's own +1 removed.
double r_factor(int n1, int l, const OccupationState& occ,
                const RateTables& t);

// Rate of the laser-induced jump n1 -> n2 at the current occupations.
double cooling_rate_1d(int n1, int n2, const OccupationState& occ,
                       const CoolingParams& p, const RateTables& t);

// Occupation-free per-channel upper bounds on the dimensionless jump
// strength, valid for every occupation state at this detuning.
struct PulseBounds {
  double delta = 0.0;
  int ndest = 0;
  std::vector<double> vhat;  // [n1 * ndest + n2]

  double at(int n1, int n2) const {
    return vhat[static_cast<std::size_t>(n1) * ndest + n2];
  }
};

PulseBounds build_pulse_bounds(const RateTables& t, const CoolingParams& p,
                               double delta);

// Mutable per-state scratch for fast jump-strength evaluation: keeps the
// stimulated sums, complex denominators, and per-source Cauchy-Schwarz bounds
// in sync with an evolving occupation state.
class CoolingWorkspace {
 public:
  CoolingWorkspace(const RateTables& t, const CoolingParams& p);

  void set_detuning(double delta);
  void set_occupation(const OccupationState& occ);
  void move_atom(int n1, int n2);  // n2 may sit in the guard band

  // exact dimensionless strength of the n1 -> n2 jump; n2 < ndest
  double channel_strength(int n1, int n2) const;
  // Cauchy-Schwarz bound: channel_strength(n1, n2) <= channel_bound(n1)
  double channel_bound(int n1) const { return c_[n1]; }
  double r_value(int n1, int l) const;

 private:
  void rebuild_denominators();

  const RateTables* t_;
  double gamma_;
  double sdim_;  // detuning in units of the trap frequency
  std::vector<double> g_;     // stimulated part per intermediate level
  std::vector<int> nocc_;     // occupation snapshot
  std::vector<cplx> invd_;    // inverse denominators [n1][l]
  std::vector<double> c_;     // per-source bound
};

}  // namespace bosecool::rates1d
