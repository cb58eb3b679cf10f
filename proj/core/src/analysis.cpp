#include "bosecool/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bosecool::analysis {

namespace {

double level_weight(int n, TrapMode mode) {
  if (mode == TrapMode::three_d_ergodic)
    return 0.5 * (n + 1.0) * (n + 2.0);
  return 1.0;
}

// mean of p_n ~ g_n q^n over n = 0..levels-1
double truncated_mean(double q, int levels, TrapMode mode) {
  double num = 0.0, den = 0.0, qn = 1.0;
  for (int n = 0; n < levels; ++n) {
    const double w = level_weight(n, mode) * qn;
    num += n * w;
    den += w;
    qn *= q;
  }
  return num / den;
}

}  // namespace

OccupationState sample_thermal(double mean_n, int atoms, int levels,
                               TrapMode mode, Rng& rng) {
  if (!(mean_n > 0.0))
    throw std::domain_error("sample_thermal: mean_n must be positive");
  if (atoms < 0)
    throw std::domain_error("sample_thermal: atoms must be nonnegative");
  if (levels < 1)
    throw std::domain_error("sample_thermal: levels must be positive");

  const double top = truncated_mean(1.0, levels, mode);
  if (!(mean_n < top)) {
    std::ostringstream msg;
    msg << "sample_thermal: mean_n = " << mean_n
        << " is not reachable below the flat-distribution mean " << top
        << " of " << levels << " levels";
    throw std::domain_error(msg.str());
  }

  // truncated_mean is strictly increasing in q on (0, 1)
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (truncated_mean(mid, levels, mode) < mean_n ? lo : hi) = mid;
  }
  const double q = 0.5 * (lo + hi);

  std::vector<double> cum(levels);
  double run = 0.0, qn = 1.0;
  for (int n = 0; n < levels; ++n) {
    run += level_weight(n, mode) * qn;
    cum[n] = run;
    qn *= q;
  }

  std::vector<int> counts(levels, 0);
  for (int k = 0; k < atoms; ++k) {
    const double u = rng.uniform() * run;
    const auto it = std::lower_bound(cum.begin(), cum.end(), u);
    ++counts[std::min<int>(levels - 1,
                           static_cast<int>(it - cum.begin()))];
  }
  return make_occupation(std::move(counts));
}

namespace {

template <class Engine>
OccupationState drive_to_stationarity(Engine& eng, Rng& rng,
                                      const EquilibrationOptions& opt,
                                      EquilibrationReport* report) {
  if (opt.window_events == 0)
    throw std::invalid_argument("equilibrate_collisions: empty window");
  const int levels = static_cast<int>(eng.state().counts.size());
  const double atoms = std::max(1.0, static_cast<double>(eng.state().total));
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> acc(levels, 0.0), prev;
  std::uint64_t in_window = 0, accepted = 0, steps = 0;
  int windows = 0;
  double last_drift = 0.0, last_time = eng.time();
  bool converged = false;

  kinetics::Event ev;
  while (steps < opt.max_steps) {
    if (!eng.step(rng, inf, &ev)) {
      converged = true;  // zero total rate: nothing left to relax
      break;
    }
    ++steps;
    last_time = eng.time();
    if (ev.kind != kinetics::EventKind::collision) continue;
    ++accepted;
    const auto& c = eng.state().counts;
    for (int n = 0; n < levels; ++n) acc[n] += c[n];
    if (++in_window < opt.window_events) continue;

    for (double& v : acc) v /= static_cast<double>(opt.window_events);
    ++windows;
    if (!prev.empty()) {
      double l1 = 0.0;
      for (int n = 0; n < levels; ++n) l1 += std::abs(acc[n] - prev[n]);
      last_drift = l1 / atoms;
      if (last_drift < opt.drift_tolerance) {
        converged = true;
        break;
      }
    }
    prev.swap(acc);
    acc.assign(levels, 0.0);
    in_window = 0;
  }

  if (report) {
    report->accepted = accepted;
    report->steps = steps;
    report->windows = windows;
    report->last_drift = last_drift;
    report->elapsed = last_time;
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "equilibrate_collisions: no stationarity after " << steps
        << " steps (" << accepted << " collisions, " << windows
        << " windows of " << opt.window_events << "; last drift "
        << last_drift << " vs tolerance " << opt.drift_tolerance << ")";
    throw std::runtime_error(msg.str());
  }
  return eng.state();
}

}  // namespace

OccupationState equilibrate_collisions(const OccupationState& initial,
                                       const kinetics::Channels1D& ch,
                                       Rng& rng,
                                       const EquilibrationOptions& opt,
                                       EquilibrationReport* report) {
  kinetics::Channels1D quiet = ch;
  quiet.cooling.Omega = 0.0;
  if (quiet.cooling.gamma <= 0.0) quiet.cooling.gamma = 1.0;
  kinetics::Engine1D eng(quiet, initial);
  return drive_to_stationarity(eng, rng, opt, report);
}

OccupationState equilibrate_collisions(const OccupationState& initial,
                                       const kinetics::Channels3D& ch,
                                       Rng& rng,
                                       const EquilibrationOptions& opt,
                                       EquilibrationReport* report) {
  kinetics::Engine3D eng(ch, initial);  // laser stays off: no begin_pulse
  return drive_to_stationarity(eng, rng, opt, report);
}

DistributionStats window_average(const kinetics::Trajectory& traj,
                                 int from_cycle, int to_cycle,
                                 int target_level, double peak_prominence) {
  const int cycles = static_cast<int>(traj.snapshots.size()) - 1;
  if (cycles < 1)
    throw std::invalid_argument(
        "window_average: trajectory records no cycles");
  if (from_cycle < 0 || from_cycle >= to_cycle || to_cycle > cycles) {
    std::ostringstream msg;
    msg << "window_average: window [" << from_cycle << ", " << to_cycle
        << "] is not inside 0 <= from < to <= " << cycles;
    throw std::invalid_argument(msg.str());
  }
  const int levels =
      static_cast<int>(traj.snapshots[from_cycle].counts.size());
  if (target_level < 0 || target_level >= levels)
    throw std::invalid_argument("window_average: target level out of range");
  if (!(peak_prominence >= 0.0))
    throw std::invalid_argument("window_average: prominence must be >= 0");

  const int w = to_cycle - from_cycle + 1;
  DistributionStats st;
  st.target_level = target_level;
  st.mean.assign(levels, 0.0);
  st.variance.assign(levels, 0.0);
  for (int c = from_cycle; c <= to_cycle; ++c) {
    const auto& counts = traj.snapshots[c].counts;
    for (int n = 0; n < levels; ++n) st.mean[n] += counts[n];
  }
  for (double& m : st.mean) m /= w;
  for (int c = from_cycle; c <= to_cycle; ++c) {
    const auto& counts = traj.snapshots[c].counts;
    for (int n = 0; n < levels; ++n)
      st.variance[n] += sq(counts[n] - st.mean[n]);
  }
  for (double& v : st.variance) v /= w;

  double num = 0.0, den = 0.0;
  for (int n = 0; n < levels; ++n) {
    num += n * st.mean[n];
    den += st.mean[n];
  }
  st.mean_n = den > 0.0 ? num / den : 0.0;
  st.condensate_fraction = den > 0.0 ? st.mean[target_level] / den : 0.0;
  st.peaks = profile_peaks(st.mean, peak_prominence);
  return st;
}

double level_correlation(const kinetics::Trajectory& traj, int level_a,
                         int level_b, int from_cycle, int to_cycle) {
  const int cycles = static_cast<int>(traj.snapshots.size()) - 1;
  if (cycles < 1 || from_cycle < 0 || from_cycle >= to_cycle ||
      to_cycle > cycles)
    throw std::invalid_argument("level_correlation: bad window");
  const int levels =
      static_cast<int>(traj.snapshots[from_cycle].counts.size());
  if (level_a < 0 || level_a >= levels || level_b < 0 || level_b >= levels)
    throw std::invalid_argument("level_correlation: level out of range");

  const int w = to_cycle - from_cycle + 1;
  double ma = 0.0, mb = 0.0;
  for (int c = from_cycle; c <= to_cycle; ++c) {
    ma += traj.snapshots[c].counts[level_a];
    mb += traj.snapshots[c].counts[level_b];
  }
  ma /= w;
  mb /= w;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (int c = from_cycle; c <= to_cycle; ++c) {
    const double da = traj.snapshots[c].counts[level_a] - ma;
    const double db = traj.snapshots[c].counts[level_b] - mb;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

std::vector<int> profile_peaks(const std::vector<double>& profile,
                               double prominence) {
  const int levels = static_cast<int>(profile.size());
  std::vector<int> out;
  if (levels == 0) return out;
  const double global_min = *std::min_element(profile.begin(), profile.end());

  // valley floor on the walk toward the first strictly higher sample;
  // an unbounded side (no higher sample) leaves that side unconstrained
  const auto saddle = [&](int i, int step) -> double {
    double valley = profile[i];
    for (int j = i + step; 0 <= j && j < levels; j += step) {
      if (profile[j] > profile[i]) return valley;
      valley = std::min(valley, profile[j]);
    }
    return std::numeric_limits<double>::quiet_NaN();
  };

  for (int i = 0; i < levels; ++i) {
    const bool up_left = i == 0 || profile[i] > profile[i - 1];
    const bool up_right = i == levels - 1 || profile[i] > profile[i + 1];
    if (!up_left || !up_right) continue;
    const double sl = saddle(i, -1);
    const double sr = saddle(i, +1);
    double ref;
    if (std::isnan(sl) && std::isnan(sr))
      ref = global_min;  // global maximum
    else if (std::isnan(sl))
      ref = sr;
    else if (std::isnan(sr))
      ref = sl;
    else
      ref = std::max(sl, sr);
    if (profile[i] - ref >= prominence) out.push_back(i);
  }
  return out;
}

double tf_density_ratio(double atoms, double scattering_length,
                        double oscillator_length) {
  if (!(atoms > 0.0) || !(scattering_length > 0.0) ||
      !(oscillator_length > 0.0))
    throw std::domain_error("tf_density_ratio: arguments must be positive");
  const double x = atoms * scattering_length / oscillator_length;
  const double coeff =
      std::pow(15.0, 0.4) * std::sqrt(std::numbers::pi) / 8.0;
  return coeff * std::pow(x, -0.6);
}

double ideal_central_density(double atoms, double oscillator_length) {
  if (!(atoms > 0.0) || !(oscillator_length > 0.0))
    throw std::domain_error(
        "ideal_central_density: arguments must be positive");
  return atoms / (std::pow(std::numbers::pi, 1.5) *
                  std::pow(oscillator_length, 3.0));
}

double ideal_loss_threshold(double eta, double n_crit, double recoil_length) {
  if (!(eta > 0.0) || !(n_crit > 0.0) || !(recoil_length > 0.0))
    throw std::domain_error(
        "ideal_loss_threshold: arguments must be positive");
  const double aho = eta * recoil_length;
  return n_crit * std::pow(std::numbers::pi, 1.5) * std::pow(aho, 3.0);
}

double tf_loss_threshold(double eta, double n_crit, double recoil_length,
                         double scattering_length) {
  if (!(eta > 0.0) || !(n_crit > 0.0) || !(recoil_length > 0.0) ||
      !(scattering_length > 0.0))
    throw std::domain_error("tf_loss_threshold: arguments must be positive");
  const double aho = eta * recoil_length;
  const double coeff =
      std::pow(15.0, 0.4) * std::sqrt(std::numbers::pi) / 8.0;
  const double base =
      n_crit * std::pow(std::numbers::pi, 1.5) * std::pow(aho, 3.0) / coeff;
  return std::pow(base, 2.5) * std::pow(scattering_length / aho, 1.5);
}

}  // namespace bosecool::analysis
