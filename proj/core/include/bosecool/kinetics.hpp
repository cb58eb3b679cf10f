#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bosecool/common.hpp"
#include "bosecool/rates1d.hpp"
#include "bosecool/rates3d.hpp"
#include "bosecool/rng.hpp"

namespace bosecool::kinetics {

enum class PulseRole {
  confinement,
  dark_state,
  auxiliary,
  pseudo_confining,
  interference_dark
};

struct PulseSpec {
  int s = 0;                                  // detuning index, delta = s*omega
  double duration = 2.0 * 0.04 / (0.03 * 0.03);  // default 2*gamma/Omega^2
  std::array<cplx, 3> axis_amplitudes{cplx(1.0, 0.0), cplx(1.0, 0.0),
                                      cplx(1.0, 0.0)};
  PulseRole role = PulseRole::auxiliary;  // metadata only
};

struct CoolingCycle {
  std::vector<PulseSpec> pulses;
  double period() const;
};

// presets: "fig2_1d", "fig5a_3d", "fig5b_3d"
CoolingCycle standard_cycles(const std::string& name);

enum class EventKind { collision, cooling, collision_overflow, cooling_overflow };

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::cooling;
  int n1 = -1, n2 = -1, n3 = -1, n4 = -1;
};

struct EngineCounters {
  std::uint64_t accepted = 0;   // state-changing events
  std::uint64_t proposals = 0;  // thinning proposals (equals accepted+rejected
                                // +overflow in thinned mode)
  std::uint64_t collision_overflow = 0;
  std::uint64_t cooling_overflow = 0;
};

struct Trajectory {
  std::vector<OccupationState> snapshots;  // initial + one per cycle
  std::vector<Event> events;               // populated only when requested
  std::uint64_t rng_seed = 0;              // effective stream seed
  EngineCounters counters;
};

struct Channels1D {
  const rates1d::RateTables* tables = nullptr;  // caller keeps alive
  rates1d::Collision1DParams collisions;
  rates1d::CoolingParams cooling;  // delta is overridden per pulse
};

// `thinned` proposes from occupation-free channel bounds and accepts with the
// exact-rate ratio; `full` re-enumerates every true rate after each event.
// Both realize the same jump process; `full` is the slow reference.
enum class RefreshPolicy { thinned, full };

class Engine1D {
 public:
  Engine1D(const Channels1D& ch, OccupationState initial,
           RefreshPolicy policy = RefreshPolicy::thinned);

  const OccupationState& state() const { return occ_; }
  void set_state(const OccupationState& occ);
  double time() const { return t_; }
  void set_time(double t) { t_ = t; }

  // selects the detuning of subsequent steps and refreshes bounds
  void begin_pulse(const PulseSpec& pulse);
  // advances to the next accepted event or to tmax, whichever comes first;
  // returns false once tmax is reached (residual waiting time discarded)
  bool step(Rng& rng, double tmax, Event* out);
  // begin_pulse + step loop over the pulse duration
  void run_pulse(const PulseSpec& pulse, Rng& rng, std::vector<Event>* log);

  const EngineCounters& counters() const { return counters_; }
  double total_rate_bound() const { return lam_cool_ + lam_coll_; }

 private:
  void refresh_aggregates();
  bool propose_cooling(Rng& rng, Event* out);
  bool propose_collision(Rng& rng, Event* out);
  bool full_step_rates(Rng& rng, Event* out);
  void apply_event(const Event& ev);

  Channels1D ch_;
  RefreshPolicy policy_;
  OccupationState occ_;
  rates1d::CoolingWorkspace ws_;
  std::map<int, rates1d::PulseBounds> bounds_by_s_;
  const rates1d::PulseBounds* bounds_ = nullptr;
  int pulse_s_ = 0;
  double t_ = 0.0;
  EngineCounters counters_;

  double pref_cool_ = 0.0;  // omega * Omega^2 / (2 gamma)
  double lam_cool_ = 0.0;   // proposal intensity, cooling side
  double lam_coll_ = 0.0;   // proposal intensity, collision side
  std::vector<double> row_bound_;  // per-source summed channel bounds
  std::vector<double> cool_cum_;   // cumulative N1 * row_bound
  std::vector<int> cool_src_;
  std::vector<int> pair_a_, pair_b_;
  std::vector<double> pair_cum_;
  double dfmax_ = 0.0;  // (M1+1)(M1+2) from the largest occupancy
  double lam_full_total_ = 0.0;  // true total rate, full mode only
};

OccupationState simulate_pulse(const OccupationState& state,
                               const PulseSpec& pulse, const Channels1D& ch,
                               Rng& rng);

Trajectory run_cycles(const OccupationState& initial, const CoolingCycle& cycle,
                      int n_cycles, const Channels1D& ch, std::uint64_t seed,
                      int stream = 0, bool record_events = false);

struct Channels3D {
  const rates3d::ShellGeometry* geometry = nullptr;  // caller keeps alive
  rates3d::ShellModel shells;      // Delta = 0 switches collisions off
  rates1d::CoolingParams cooling;  // delta and amplitudes come from the pulse
  double omega = 1.0;
};

// Exact event-driven simulation on energy shells. The cooling kernel is
// frozen at each pulse start (strength matrices are cached across pulses with
// matching detuning, amplitudes, and occupation); occupation factors enter
// at event time and every channel rate is re-enumerated after each event.
// Construction leaves the laser off until the first begin_pulse, so a fresh
// engine steps pure collision kinetics.
class Engine3D {
 public:
  Engine3D(const Channels3D& ch, OccupationState initial);

  const OccupationState& state() const { return occ_; }
  void set_state(const OccupationState& occ);
  double time() const { return t_; }
  void set_time(double t) { t_ = t; }

  void begin_pulse(const PulseSpec& pulse);
  bool step(Rng& rng, double tmax, Event* out);
  void run_pulse(const PulseSpec& pulse, Rng& rng, std::vector<Event>* log);

  const EngineCounters& counters() const { return counters_; }
  double total_rate() const { return lam_; }

 private:
  void freeze_kernel();
  void enumerate_rates();
  void apply_move(const Event& ev);

  Channels3D ch_;
  OccupationState occ_;
  rates3d::ShellCoolingKernel kernel_;
  PulseSpec pulse_;
  bool cooling_on_ = false;
  double pref_cool_ = 0.0;
  double t_ = 0.0;
  EngineCounters counters_;

  double lam_ = 0.0;
  std::vector<double> cum_;  // cumulative channel rates
  std::vector<Event> evs_;

  struct FrozenStrengths {
    std::vector<double> s;
    std::uint64_t age = 0;
  };
  std::map<std::string, FrozenStrengths> cache_;
  std::uint64_t cache_age_ = 0;
  const std::vector<double>* s_ = nullptr;  // active strength matrix
};

OccupationState simulate_pulse(const OccupationState& state,
                               const PulseSpec& pulse, const Channels3D& ch,
                               Rng& rng);

Trajectory run_cycles(const OccupationState& initial, const CoolingCycle& cycle,
                      int n_cycles, const Channels3D& ch, std::uint64_t seed,
                      int stream = 0, bool record_events = false);

}  // namespace bosecool::kinetics
