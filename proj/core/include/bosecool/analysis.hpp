#pragma once

#include <cstdint>
#include <vector>

#include "bosecool/common.hpp"
#include "bosecool/kinetics.hpp"
#include "bosecool/rng.hpp"

namespace bosecool::analysis {

// Draws `atoms` independent level indices from the truncated Boltzmann
// weights p_n ~ g_n q^n on n = 0..levels-1, where g_n = 1 in 1D and the
// shell degeneracy (n+1)(n+2)/2 in the ergodic mode. q is calibrated so the
// truncated distribution has mean exactly mean_n (the untruncated geometric
// value mean/(1+mean) is recovered as levels -> inf). Throws domain_error
// when mean_n is not reachable within the truncation.
OccupationState sample_thermal(double mean_n, int atoms, int levels,
                               TrapMode mode, Rng& rng);

struct EquilibrationOptions {
  std::uint64_t window_events = 20000;  // state-changing events per window
  double drift_tolerance = 0.08;        // relative L1 drift between windows
  std::uint64_t max_steps = 4000000;    // hard cap on engine steps
};

struct EquilibrationReport {
  std::uint64_t accepted = 0;  // state-changing events consumed
  std::uint64_t steps = 0;     // all events, overflow no-ops included
  int windows = 0;             // completed averaging windows
  double last_drift = 0.0;     // most recent window-to-window drift
  double elapsed = 0.0;        // simulated time spent equilibrating
};

// Runs collision-only dynamics from `initial` until the per-level means of
// consecutive event windows agree: the L1 norm of their difference, divided
// by the atom number, must fall below drift_tolerance. Returns the state at
// the event that completed the converged window. The 1D overload forces the
// laser off regardless of ch.cooling; the 3D overload never begins a pulse.
// A state with zero total collision rate is stationary and returned as is.
// Throws runtime_error with diagnostics when max_steps is exhausted first.
OccupationState equilibrate_collisions(const OccupationState& initial,
                                       const kinetics::Channels1D& ch,
                                       Rng& rng,
                                       const EquilibrationOptions& opt = {},
                                       EquilibrationReport* report = nullptr);
OccupationState equilibrate_collisions(const OccupationState& initial,
                                       const kinetics::Channels3D& ch,
                                       Rng& rng,
                                       const EquilibrationOptions& opt = {},
                                       EquilibrationReport* report = nullptr);

struct DistributionStats {
  std::vector<double> mean;      // per-level means over the window
  std::vector<double> variance;  // per-level population variances
  double mean_n = 0.0;           // sum n*mean[n] / sum mean[n]
  double condensate_fraction = 0.0;  // mean[target_level] / N
  int target_level = 0;
  std::vector<int> peaks;  // strict local maxima passing the prominence cut
};

// Averages the per-cycle snapshots with indices in [from_cycle, to_cycle]
// (snapshot 0 is the initial state, snapshot c the state after cycle c).
// Requires 0 <= from_cycle < to_cycle <= recorded cycles; the window always
// holds at least two snapshots. Mean quantities are invariant under snapshot
// reordering inside the window.
DistributionStats window_average(const kinetics::Trajectory& traj,
                                 int from_cycle, int to_cycle,
                                 int target_level = 0,
                                 double peak_prominence = 2.0);

// Pearson correlation of the per-cycle populations of two levels over the
// same inclusive window. Pairs are pooled, so the estimate is invariant
// under reordering of cycles; a zero-variance series yields 0.
double level_correlation(const kinetics::Trajectory& traj, int level_a,
                         int level_b, int from_cycle, int to_cycle);

// Strict local maxima of a profile whose topographic prominence (height
// above the higher of the two saddles toward larger values; the global
// maximum is referenced to the global minimum) reaches `prominence`.
std::vector<int> profile_peaks(const std::vector<double>& profile,
                               double prominence);

// Central-density ratio of the Thomas-Fermi cloud to the ideal-gas cloud,
// (15^(2/5) sqrt(pi) / 8) * (N a / a_HO)^(-3/5). Lengths share one unit.
double tf_density_ratio(double atoms, double scattering_length,
                        double oscillator_length);

// Ideal-gas central density N / (pi^(3/2) a_HO^3).
double ideal_central_density(double atoms, double oscillator_length);

// Atom numbers at which the central density reaches n_crit for a trap with
// a_HO = eta * recoil_length: ideal gas, and Thomas-Fermi with scattering
// length a. n_crit carries the inverse cube of the common length unit.
double ideal_loss_threshold(double eta, double n_crit, double recoil_length);
double tf_loss_threshold(double eta, double n_crit, double recoil_length,
                         double scattering_length);

}  // namespace bosecool::analysis
