#pragma once

#include <array>
#include <vector>

#include "bosecool/common.hpp"
#include "bosecool/rates1d.hpp"

namespace bosecool::rates3d {

// Isotropic-trap shell model: level n is the energy shell with degeneracy
// (n+1)(n+2)/2, occupations are per shell, and all states inside a shell are
// assumed equally populated (fast intra-shell redistribution).
struct ShellModel {
  int nmax = 14;        // highest shell index kept in the truncation
  double Delta = 1.5e-5;  // collision rate constant, units of the trap frequency

  std::vector<int> degeneracies() const;  // g_0 .. g_nmax
  static ShellModel from_trap(const TrapModel& trap);
};

// (n+1)(n+2)/2
int shell_degeneracy(int n);

// Distribution-changing two-atom collision rate between shells. Zero for
// energy-violating or identity channels (unordered {n3,n4} == {n1,n2}) and
// for depleted sources; throws for shells outside the truncation. The result
// is in units of the trap frequency.
double shell_collision_rate(int n1, int n2, int n3, int n4,
                            const OccupationState& occ, const ShellModel& m);

// The z-axis relative amplitude that nulls the summed elastic excitation
// amplitude eta^x + eta^y + A_z eta^z of a Cartesian target state under
// equal-amplitude x,y lasers at zero detuning. Ground state -> -2 for any
// Lamb-Dicke parameter. Throws when the target's elastic element vanishes on
// any axis (no finite amplitude exists).
cplx interference_dark_amplitude(const std::array<int, 3>& target, double eta);

// Two-laser variant: A = -<mx|e^{ikx}|mx> / <my|e^{iky}|my>.
double interference_dark_amplitude_2d(int mx, int my, double eta);

// Precomputed, occupation-independent scaffolding for shell cooling rates:
// Cartesian state lists, the spontaneous-emission direction grid, Franck-
// Condon tables on that grid, and the shell-to-shell emission table entering
// reabsorption denominators. Built once per (truncation, Lamb-Dicke) pair.
class ShellGeometry {
 public:
  // Full three-dimensional geometry: shell n holds every (nx,ny,nz) with
  // nx+ny+nz = n, emission is averaged over the sphere. Only the isotropic
  // pattern is defined here; the dipole pattern needs a polarization axis
  // that the three-laser setup does not single out, so it is rejected.
  // lband overrides the per-axis intermediate band; 0 sizes it from the kick
  // tail of the highest retained level (mass below 1e-9 dropped).
  static ShellGeometry ergodic(int nshells, double eta,
                               rates1d::EmissionPattern pattern,
                               int sguard = 10, int lband = 0);

  // Degenerate single-axis geometry: shell n holds only (n,0,0) and emission
  // uses the one-dimensional direction marginal. The kernel built on this
  // geometry must reproduce the 1D cooling rate tables; it exists to pin the
  // 3D machinery to the validated 1D limit.
  static ShellGeometry single_axis(int nshells, double eta, int sguard = 10,
                                   int lband = 0);

  int nshells() const { return nshells_; }
  int sdest() const { return sdest_; }     // destination shells kept (incl. overflow band)
  int lmax() const { return lmax_; }       // per-axis intermediate band (exclusive)
  int emax() const { return emax_; }       // highest intermediate shell index
  double eta() const { return eta_; }
  bool is_single_axis() const { return single_axis_; }

  // state count of a shell in this geometry (1 in the single-axis limit)
  int degeneracy(int shell) const;
  const std::vector<std::array<int, 3>>& states(int shell) const;

  // shell-resolved spontaneous-emission weight out of intermediate shell
  // e_int into destination shell s, averaged over the intermediate shell
  double shell_emission(int e_int, int s) const;

  struct Direction {
    double ux = 0.0, uy = 0.0, uz = 0.0;
    double w = 0.0;
  };
  std::vector<Direction> directions() const;

  // implementation surface shared with ShellCoolingKernel
  struct Dir {
    int ix = 0, iy = 0, iz = 0;  // indices into the signed component grid
    double w = 0.0;
  };
  const std::vector<Dir>& dirs() const { return dirs_; }
  int ucount() const { return static_cast<int>(uvals_.size()); }
  // Franck-Condon amplitude <l| kick(eta*u_i) |n> on the component grid
  const cplx& emisfc(int uidx, int l, int n) const;
  const cplx& kickfc(int l, int m) const;  // <l| kick(eta) |m>

 private:
  ShellGeometry() = default;
  void build_tables(int lband);
  void build_shell_emission();

  int nshells_ = 0;
  int sdest_ = 0;
  int lmax_ = 0;
  int emax_ = 0;
  double eta_ = 0.0;
  bool single_axis_ = false;
  std::vector<std::vector<std::array<int, 3>>> states_;
  std::vector<double> uvals_;
  std::vector<Dir> dirs_;
  std::vector<std::vector<cplx>> ufc_;  // per component value: (emax+1) x sdest
  std::vector<cplx> kick_;              // (emax+1) x nshells
  std::vector<double> ebar_;            // (emax+1) x nshells
};

// Ergodic shell-to-shell cooling kernel for one pulse. The strength matrix is
// frozen at the occupation passed to freeze(); occupation factors are
// composed at event time by the caller. Construction cost sits in freeze(),
// which rebuilds reabsorption denominators and dressed intermediate tables.
class ShellCoolingKernel {
 public:
  ShellCoolingKernel(const ShellGeometry& g, double gamma, double omega = 1.0);

  void set_pulse(double delta, const std::array<cplx, 3>& amplitudes);
  void freeze(const OccupationState& occ);
  bool frozen() const { return frozen_; }

  // ergodic source-averaged, destination-shell-summed squared amplitude
  double strength(int n1, int n2) const;
  // destination-shell row of one Cartesian source state (diagnostics/tests)
  std::vector<double> state_row(const std::array<int, 3>& source) const;
  // reabsorption factor of intermediate shell e_int for a source in shell n1
  double rbar(int n1, int e_int) const;

  const ShellGeometry& geometry() const { return *g_; }

 private:
  void accumulate_state_row(const std::array<int, 3>& m, double scale,
                            double* row) const;
  int pair_index(int n1, int m) const;  // m <= n1

  const ShellGeometry* g_;
  double gamma_ = 0.0;
  double omega_ = 1.0;
  double sdim_ = 0.0;
  std::array<cplx, 3> amps_{cplx(1, 0), cplx(1, 0), cplx(1, 0)};
  bool frozen_ = false;
  std::vector<double> rbar_;   // nshells x (emax+1)
  std::vector<cplx> invd_;     // nshells x (lmax + nshells - 1)
  std::vector<cplx> dressed_;  // pairs x ucount x sdest
  std::vector<double> s_;      // nshells x sdest
};

// Rate from shell n1 to shell n2 under one pulse, with the kernel frozen at
// the supplied occupation: (Omega^2 / 2 gamma) * strength * N1 * (N2+g2)/g2.
// Convenience wrapper; simulation engines keep a kernel and freeze per pulse.
double shell_cooling_rate(int n1, int n2, const OccupationState& occ,
                          const rates1d::CoolingParams& p,
                          const ShellGeometry& g);

}  // namespace bosecool::rates3d
