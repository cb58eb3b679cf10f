#include "bosecool/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bosecool::kinetics {

double CoolingCycle::period() const {
  double p = 0.0;
  for (const auto& pulse : pulses) p += pulse.duration;
  return p;
}

CoolingCycle standard_cycles(const std::string& name) {
  CoolingCycle c;
  const double T = 2.0 * 0.04 / (0.03 * 0.03);
  if (name == "fig2_1d") {
    for (int s : {-9, 8, -10, -3}) {
      PulseSpec p;
      p.s = s;
      p.duration = T;
      c.pulses.push_back(p);
    }
    c.pulses[0].role = PulseRole::confinement;
    c.pulses[1].role = PulseRole::dark_state;
    c.pulses[2].role = PulseRole::auxiliary;
    c.pulses[3].role = PulseRole::pseudo_confining;
    return c;
  }
  if (name == "fig5a_3d" || name == "fig5b_3d") {
    PulseSpec p1;
    p1.s = -4;
    p1.duration = T;
    p1.role = PulseRole::confinement;
    c.pulses.push_back(p1);
    if (name == "fig5a_3d") {
      PulseSpec p2;
      p2.s = 0;
      p2.duration = T;
      p2.axis_amplitudes = {cplx(1.0, 0.0), cplx(1.0, 0.0), cplx(-2.0, 0.0)};
      p2.role = PulseRole::interference_dark;
      c.pulses.push_back(p2);
    }
    return c;
  }
  throw std::invalid_argument("unknown cycle preset: " + name);
}

Engine1D::Engine1D(const Channels1D& ch, OccupationState initial,
                   RefreshPolicy policy)
    : ch_(ch),
      policy_(policy),
      occ_(std::move(initial)),
      ws_(*ch.tables, ch.cooling) {
  const auto& t = *ch_.tables;
  if (occ_.counts.size() != static_cast<std::size_t>(t.levels))
    throw std::invalid_argument("engine: occupation size must equal truncation");
  pref_cool_ = t.trap.omega * ch_.cooling.Omega * ch_.cooling.Omega /
               (2.0 * ch_.cooling.gamma);
  row_bound_.assign(t.levels, 0.0);
  ws_.set_occupation(occ_);
  PulseSpec idle;
  begin_pulse(idle);
}

void Engine1D::set_state(const OccupationState& occ) {
  const auto& t = *ch_.tables;
  if (occ.counts.size() != static_cast<std::size_t>(t.levels))
    throw std::invalid_argument("engine: occupation size must equal truncation");
  occ_ = occ;
  ws_.set_occupation(occ_);
  refresh_aggregates();
}

void Engine1D::begin_pulse(const PulseSpec& pulse) {
  const auto& t = *ch_.tables;
  pulse_s_ = pulse.s;
  const double delta = pulse.s * t.trap.omega;
  rates1d::CoolingParams p = ch_.cooling;
  p.delta = delta;
  ws_.set_detuning(delta);
  auto it = bounds_by_s_.find(pulse.s);
  if (it == bounds_by_s_.end())
    it = bounds_by_s_.emplace(pulse.s, rates1d::build_pulse_bounds(t, p, delta))
             .first;
  bounds_ = &it->second;
  refresh_aggregates();
}

void Engine1D::refresh_aggregates() {
  const auto& t = *ch_.tables;

  // cooling side: per occupied source, bound every destination channel
  cool_src_.clear();
  cool_cum_.clear();
  lam_cool_ = 0.0;
  if (ch_.cooling.Omega > 0.0) {
    for (int n1 = 0; n1 < t.levels; ++n1) {
      if (occ_.counts[n1] == 0) continue;
      const double c = ws_.channel_bound(n1);
      double row = 0.0;
      for (int n2 = 0; n2 < t.ndest; ++n2) {
        if (n2 == n1) continue;
        const double occfac = n2 < t.levels ? occ_.counts[n2] + 1.0 : 1.0;
        row += occfac * std::min(c, bounds_->at(n1, n2));
      }
      row_bound_[n1] = row;
      lam_cool_ += pref_cool_ * occ_.counts[n1] * row;
      cool_src_.push_back(n1);
      cool_cum_.push_back(lam_cool_);
    }
  }

  // collision side: occupied unordered pairs weighted by kernel row sums
  pair_a_.clear();
  pair_b_.clear();
  pair_cum_.clear();
  lam_coll_ = 0.0;
  dfmax_ = 0.0;
  if (ch_.collisions.xi > 0.0) {
    int m1 = 0;
    for (int n = 0; n < t.levels; ++n) m1 = std::max(m1, occ_.counts[n]);
    dfmax_ = (m1 + 1.0) * (m1 + 2.0);
    const double pref = ch_.collisions.xi * ch_.collisions.omega;
    for (int b = 0; b < t.levels; ++b) {
      if (occ_.counts[b] == 0) continue;
      for (int a = 0; a <= b; ++a) {
        const double src =
            a == b ? static_cast<double>(occ_.counts[a]) * (occ_.counts[a] - 1)
                   : static_cast<double>(occ_.counts[a]) * occ_.counts[b];
        if (src <= 0.0) continue;
        const double w = pref * src * t.kernel_row_sum(a, b) * dfmax_;
        if (w <= 0.0) continue;
        lam_coll_ += w;
        pair_a_.push_back(a);
        pair_b_.push_back(b);
        pair_cum_.push_back(lam_coll_);
      }
    }
  }
}

bool Engine1D::propose_cooling(Rng& rng, Event* out) {
  const auto& t = *ch_.tables;
  // source level
  const double u = rng.uniform() * lam_cool_;
  const std::size_t i =
      std::lower_bound(cool_cum_.begin(), cool_cum_.end(), u) -
      cool_cum_.begin();
  const int n1 = cool_src_[std::min(i, cool_src_.size() - 1)];
  // destination within the row, same weights the row bound summed
  const double c = ws_.channel_bound(n1);
  double target = rng.uniform() * row_bound_[n1];
  int n2 = -1;
  double acc = 0.0, w = 0.0;
  for (int cand = 0; cand < t.ndest; ++cand) {
    if (cand == n1) continue;
    const double occfac = cand < t.levels ? occ_.counts[cand] + 1.0 : 1.0;
    w = occfac * std::min(c, bounds_->at(n1, cand));
    acc += w;
    if (target <= acc) {
      n2 = cand;
      break;
    }
  }
  if (n2 < 0) return false;  // cumulative rounding slack: treat as rejection
  const double bound = std::min(c, bounds_->at(n1, n2));
  const double strength = ws_.channel_strength(n1, n2);
  if (rng.uniform() * bound >= strength) return false;
  out->kind = n2 >= t.levels ? EventKind::cooling_overflow : EventKind::cooling;
  out->n1 = n1;
  out->n2 = n2;
  out->n3 = out->n4 = -1;
  return true;
}

bool Engine1D::propose_collision(Rng& rng, Event* out) {
  const auto& t = *ch_.tables;
  const double u = rng.uniform() * lam_coll_;
  const std::size_t i =
      std::lower_bound(pair_cum_.begin(), pair_cum_.end(), u) -
      pair_cum_.begin();
  const std::size_t pi = std::min(i, pair_a_.size() - 1);
  const int a = pair_a_[pi], b = pair_b_[pi];
  const int e = a + b;
  // exact destination-summed pair rate, then a single accept test
  double vals[128];
  double sum = 0.0;
  const int ktop = e / 2;
  for (int k = 0; k <= ktop; ++k) {
    double v = 0.0;
    if (!(k == a && e - k == b)) {
      const int d = e - k;
      const double nc = occ_.counts[k];  // k <= e/2 < levels always
      const double nd = d < t.levels ? occ_.counts[d] : 0.0;
      const double dst = (nc + 1.0) * (nd + 1.0 + (k == d ? 1.0 : 0.0));
      v = t.kernel(a, b, k) * dst;
    }
    vals[k] = v;
    sum += v;
  }
  const double cap = t.kernel_row_sum(a, b) * dfmax_;
  if (rng.uniform() * cap >= sum) return false;
  // destination class, proportional to its exact contribution
  double target = rng.uniform() * sum;
  int k = 0;
  double acc = 0.0;
  for (; k <= ktop; ++k) {
    acc += vals[k];
    if (target <= acc) break;
  }
  k = std::min(k, ktop);
  const int d = e - k;
  out->kind = d >= t.levels ? EventKind::collision_overflow
                            : EventKind::collision;
  out->n1 = a;
  out->n2 = b;
  out->n3 = k;
  out->n4 = d;
  return true;
}

bool Engine1D::full_step_rates(Rng& rng, Event* out) {
  const auto& t = *ch_.tables;
  // enumerate every channel's true rate, then one exact draw
  static thread_local std::vector<double> rates;
  static thread_local std::vector<Event> evs;
  rates.clear();
  evs.clear();
  double total = 0.0;
  if (ch_.cooling.Omega > 0.0) {
    for (int n1 = 0; n1 < t.levels; ++n1) {
      if (occ_.counts[n1] == 0) continue;
      for (int n2 = 0; n2 < t.ndest; ++n2) {
        if (n2 == n1) continue;
        const double occfac = n2 < t.levels ? occ_.counts[n2] + 1.0 : 1.0;
        const double r = pref_cool_ * occ_.counts[n1] * occfac *
                         ws_.channel_strength(n1, n2);
        if (r <= 0.0) continue;
        total += r;
        rates.push_back(total);
        Event ev;
        ev.kind = n2 >= t.levels ? EventKind::cooling_overflow
                                 : EventKind::cooling;
        ev.n1 = n1;
        ev.n2 = n2;
        evs.push_back(ev);
      }
    }
  }
  if (ch_.collisions.xi > 0.0) {
    const double pref = ch_.collisions.xi * ch_.collisions.omega;
    for (int b = 0; b < t.levels; ++b) {
      if (occ_.counts[b] == 0) continue;
      for (int a = 0; a <= b; ++a) {
        const double src =
            a == b ? static_cast<double>(occ_.counts[a]) * (occ_.counts[a] - 1)
                   : static_cast<double>(occ_.counts[a]) * occ_.counts[b];
        if (src <= 0.0) continue;
        const int e = a + b;
        for (int k = 0; k <= e / 2; ++k) {
          if (k == a && e - k == b) continue;
          const int d = e - k;
          const double nd = d < t.levels ? occ_.counts[d] : 0.0;
          const double dst = (occ_.counts[k] + 1.0) *
                             (nd + 1.0 + (k == d ? 1.0 : 0.0));
          const double r = pref * src * t.kernel(a, b, k) * dst;
          if (r <= 0.0) continue;
          total += r;
          rates.push_back(total);
          Event ev;
          ev.kind = d >= t.levels ? EventKind::collision_overflow
                                  : EventKind::collision;
          ev.n1 = a;
          ev.n2 = b;
          ev.n3 = k;
          ev.n4 = d;
          evs.push_back(ev);
        }
      }
    }
  }
  if (total <= 0.0) return false;
  // caller advanced time with the bound intensity; in full mode the bound IS
  // the true total, so store it for the wait draw instead
  lam_full_total_ = total;
  const double u = rng.uniform() * total;
  const std::size_t i =
      std::lower_bound(rates.begin(), rates.end(), u) - rates.begin();
  *out = evs[std::min(i, evs.size() - 1)];
  return true;
}

void Engine1D::apply_event(const Event& ev) {
  auto& c = occ_.counts;
  if (ev.kind == EventKind::cooling) {
    if (c[ev.n1] <= 0) throw std::logic_error("engine: cooling from empty level");
    --c[ev.n1];
    ++c[ev.n2];
    ws_.move_atom(ev.n1, ev.n2);
  } else if (ev.kind == EventKind::collision) {
    if (c[ev.n1] <= 0 || c[ev.n2] <= 0 || (ev.n1 == ev.n2 && c[ev.n1] < 2))
      throw std::logic_error("engine: collision from depleted pair");
    --c[ev.n1];
    --c[ev.n2];
    ++c[ev.n3];
    ++c[ev.n4];
    ws_.move_atom(ev.n1, ev.n3);
    ws_.move_atom(ev.n2, ev.n4);
  } else {
    return;  // overflow events leave the state untouched
  }
  refresh_aggregates();
}

bool Engine1D::step(Rng& rng, double tmax, Event* out) {
  const bool full = policy_ == RefreshPolicy::full;
  for (;;) {
    Event ev;
    bool have = false;
    double lam = 0.0;
    if (full) {
      have = full_step_rates(rng, &ev);
      lam = lam_full_total_;
      if (!have) {
        t_ = tmax;
        return false;
      }
    } else {
      lam = lam_cool_ + lam_coll_;
      if (lam <= 0.0) {
        t_ = tmax;
        return false;
      }
    }
    t_ += rng.exponential(lam);
    if (t_ >= tmax) {
      t_ = tmax;
      return false;
    }
    if (!full) {
      ++counters_.proposals;
      if (rng.uniform() * lam < lam_cool_)
        have = propose_cooling(rng, &ev);
      else
        have = propose_collision(rng, &ev);
      if (!have) continue;  // rejected proposal, clock already advanced
    } else {
      ++counters_.proposals;
    }
    ev.t = t_;
    if (ev.kind == EventKind::cooling_overflow) ++counters_.cooling_overflow;
    if (ev.kind == EventKind::collision_overflow)
      ++counters_.collision_overflow;
    if (ev.kind == EventKind::cooling || ev.kind == EventKind::collision)
      ++counters_.accepted;
    apply_event(ev);
    *out = ev;
    return true;
  }
}

void Engine1D::run_pulse(const PulseSpec& pulse, Rng& rng,
                         std::vector<Event>* log) {
  begin_pulse(pulse);
  const double tend = t_ + pulse.duration;
  Event ev;
  while (step(rng, tend, &ev))
    if (log) log->push_back(ev);
}

OccupationState simulate_pulse(const OccupationState& state,
                               const PulseSpec& pulse, const Channels1D& ch,
                               Rng& rng) {
  Engine1D engine(ch, state);
  engine.run_pulse(pulse, rng, nullptr);
  return engine.state();
}

Trajectory run_cycles(const OccupationState& initial, const CoolingCycle& cycle,
                      int n_cycles, const Channels1D& ch, std::uint64_t seed,
                      int stream, bool record_events) {
  if (cycle.pulses.empty())
    throw std::invalid_argument("run_cycles: cycle has no pulses");
  if (n_cycles < 1) throw std::invalid_argument("run_cycles: need n_cycles >= 1");
  Rng rng = Rng::stream(seed, stream);
  Trajectory traj;
  traj.rng_seed = Rng::stream_seed(seed, stream);
  traj.snapshots.reserve(n_cycles + 1);
  traj.snapshots.push_back(initial);
  Engine1D engine(ch, initial);
  for (int cyc = 0; cyc < n_cycles; ++cyc) {
    for (const auto& pulse : cycle.pulses)
      engine.run_pulse(pulse, rng, record_events ? &traj.events : nullptr);
    traj.snapshots.push_back(engine.state());
  }
  traj.counters = engine.counters();
  return traj;
}

namespace {

const rates3d::ShellGeometry& checked_geometry(const Channels3D& ch) {
  if (ch.geometry == nullptr)
    throw std::invalid_argument("shell engine needs a geometry");
  return *ch.geometry;
}

constexpr std::size_t kKernelCacheCap = 64;

}  // namespace

Engine3D::Engine3D(const Channels3D& ch, OccupationState initial)
    : ch_(ch),
      occ_(std::move(initial)),
      kernel_(checked_geometry(ch), ch.cooling.gamma, ch.omega) {
  const int ns = ch_.geometry->nshells();
  if (static_cast<int>(occ_.counts.size()) != ns)
    throw std::invalid_argument(
        "shell engine: occupation size must match the shell count");
  if (ch_.shells.nmax != ns - 1)
    throw std::invalid_argument(
        "shell engine: collision truncation must match the geometry");
  if (ch_.omega <= 0.0)
    throw std::invalid_argument("shell engine: trap frequency must be positive");
  enumerate_rates();
}

void Engine3D::set_state(const OccupationState& occ) {
  if (occ.counts.size() != occ_.counts.size())
    throw std::invalid_argument(
        "shell engine: occupation size must match the shell count");
  occ_ = occ;
  enumerate_rates();
}

void Engine3D::freeze_kernel() {
  std::string key;
  key.reserve(sizeof(int) + 6 * sizeof(double) +
              occ_.counts.size() * sizeof(int));
  auto put = [&key](const void* p, std::size_t n) {
    key.append(static_cast<const char*>(p), n);
  };
  put(&pulse_.s, sizeof(pulse_.s));
  for (const cplx& a : pulse_.axis_amplitudes) {
    const double re = a.real(), im = a.imag();
    put(&re, sizeof(re));
    put(&im, sizeof(im));
  }
  for (int c : occ_.counts) put(&c, sizeof(c));

  auto it = cache_.find(key);
  if (it == cache_.end()) {
    kernel_.set_pulse(pulse_.s * ch_.omega, pulse_.axis_amplitudes);
    kernel_.freeze(occ_);
    const int ns = ch_.geometry->nshells();
    const int nd = ch_.geometry->sdest();
    FrozenStrengths fs;
    fs.s.resize(static_cast<std::size_t>(ns) * nd);
    for (int n1 = 0; n1 < ns; ++n1)
      for (int n2 = 0; n2 < nd; ++n2)
        fs.s[static_cast<std::size_t>(n1) * nd + n2] = kernel_.strength(n1, n2);
    it = cache_.emplace(std::move(key), std::move(fs)).first;
    if (cache_.size() > kKernelCacheCap) {
      auto oldest = cache_.end();
      for (auto c = cache_.begin(); c != cache_.end(); ++c)
        if (c != it && (oldest == cache_.end() || c->second.age < oldest->second.age))
          oldest = c;
      cache_.erase(oldest);
    }
  }
  it->second.age = ++cache_age_;
  s_ = &it->second.s;
}

void Engine3D::begin_pulse(const PulseSpec& pulse) {
  pulse_ = pulse;
  cooling_on_ = ch_.cooling.Omega > 0.0;
  pref_cool_ =
      ch_.omega * ch_.cooling.Omega * ch_.cooling.Omega / (2.0 * ch_.cooling.gamma);
  if (cooling_on_) freeze_kernel();
  enumerate_rates();
}

void Engine3D::enumerate_rates() {
  const rates3d::ShellGeometry& geo = *ch_.geometry;
  const int ns = geo.nshells();
  const int nd = geo.sdest();
  const int nmax = ch_.shells.nmax;
  cum_.clear();
  evs_.clear();
  double lam = 0.0;
  auto push = [&](double r, const Event& ev) {
    if (r <= 0.0) return;
    lam += r;
    cum_.push_back(lam);
    evs_.push_back(ev);
  };

  if (cooling_on_ && s_ != nullptr) {
    for (int n1 = 0; n1 < ns; ++n1) {
      const int c1 = occ_.counts[n1];
      if (c1 == 0) continue;
      const double* row = s_->data() + static_cast<std::size_t>(n1) * nd;
      for (int n2 = 0; n2 < nd; ++n2) {
        if (n2 == n1) continue;
        double r = pref_cool_ * row[n2] * c1;
        if (n2 < ns) {
          const double g2 = geo.degeneracy(n2);
          r *= (occ_.counts[n2] + g2) / g2;
        }
        Event ev;
        ev.kind = n2 < ns ? EventKind::cooling : EventKind::cooling_overflow;
        ev.n1 = n1;
        ev.n2 = n2;
        push(r, ev);
      }
    }
  }

  if (ch_.shells.Delta > 0.0) {
    for (int a = 0; a < ns; ++a) {
      if (occ_.counts[a] == 0) continue;
      for (int b = a; b < ns; ++b) {
        const double src =
            static_cast<double>(occ_.counts[a]) * (occ_.counts[b] - (a == b));
        if (src <= 0.0) continue;
        const int e = a + b;
        for (int k = 0; 2 * k <= e; ++k) {
          const int d = e - k;
          if (k == a && d == b) continue;
          Event ev;
          ev.n1 = a;
          ev.n2 = b;
          ev.n3 = k;
          ev.n4 = d;
          if (d <= nmax) {
            ev.kind = EventKind::collision;
            push(ch_.omega * rates3d::shell_collision_rate(a, b, k, d, occ_,
                                                           ch_.shells),
                 ev);
          } else {
            // destination above the truncation: counted no-op, rate from the
            // same formula with zero occupancy there
            ev.kind = EventKind::collision_overflow;
            const int nj = std::min(a, k);
            const double g1 = rates3d::shell_degeneracy(a);
            const double g2 = rates3d::shell_degeneracy(b);
            const double g3 = rates3d::shell_degeneracy(k);
            const double g4 = rates3d::shell_degeneracy(d);
            const double dst = (occ_.counts[k] + g3) * (g4 + (k == d ? 1 : 0));
            push(ch_.omega * ch_.shells.Delta * (nj + 1) * (nj + 2) * src * dst /
                     (g1 * g2 * g3 * g4),
                 ev);
          }
        }
      }
    }
  }
  lam_ = lam;
}

void Engine3D::apply_move(const Event& ev) {
  auto& c = occ_.counts;
  if (ev.kind == EventKind::cooling) {
    --c[ev.n1];
    ++c[ev.n2];
  } else if (ev.kind == EventKind::collision) {
    --c[ev.n1];
    --c[ev.n2];
    ++c[ev.n3];
    ++c[ev.n4];
  }
}

bool Engine3D::step(Rng& rng, double tmax, Event* out) {
  if (t_ >= tmax) return false;
  if (lam_ <= 0.0) {
    t_ = tmax;
    return false;
  }
  const double tau = rng.exponential(lam_);
  if (t_ + tau > tmax) {
    t_ = tmax;
    return false;
  }
  t_ += tau;
  const double u = rng.uniform() * lam_;
  const auto pos = std::lower_bound(cum_.begin(), cum_.end(), u);
  const std::size_t idx =
      std::min(static_cast<std::size_t>(pos - cum_.begin()), evs_.size() - 1);
  Event ev = evs_[idx];
  ev.t = t_;
  ++counters_.proposals;
  switch (ev.kind) {
    case EventKind::cooling:
    case EventKind::collision:
      ++counters_.accepted;
      apply_move(ev);
      enumerate_rates();
      break;
    case EventKind::cooling_overflow:
      ++counters_.cooling_overflow;
      break;
    case EventKind::collision_overflow:
      ++counters_.collision_overflow;
      break;
  }
  *out = ev;
  return true;
}

void Engine3D::run_pulse(const PulseSpec& pulse, Rng& rng,
                         std::vector<Event>* log) {
  begin_pulse(pulse);
  const double tend = t_ + pulse.duration;
  Event ev;
  while (step(rng, tend, &ev))
    if (log) log->push_back(ev);
}

OccupationState simulate_pulse(const OccupationState& state,
                               const PulseSpec& pulse, const Channels3D& ch,
                               Rng& rng) {
  Engine3D engine(ch, state);
  engine.run_pulse(pulse, rng, nullptr);
  return engine.state();
}

Trajectory run_cycles(const OccupationState& initial, const CoolingCycle& cycle,
                      int n_cycles, const Channels3D& ch, std::uint64_t seed,
                      int stream, bool record_events) {
  if (cycle.pulses.empty())
    throw std::invalid_argument("run_cycles: cycle has no pulses");
  if (n_cycles < 1) throw std::invalid_argument("run_cycles: need n_cycles >= 1");
  Rng rng = Rng::stream(seed, stream);
  Trajectory traj;
  traj.rng_seed = Rng::stream_seed(seed, stream);
  traj.snapshots.reserve(n_cycles + 1);
  traj.snapshots.push_back(initial);
  Engine3D engine(ch, initial);
  for (int cyc = 0; cyc < n_cycles; ++cyc) {
    for (const auto& pulse : cycle.pulses)
      engine.run_pulse(pulse, rng, record_events ? &traj.events : nullptr);
    traj.snapshots.push_back(engine.state());
  }
  traj.counters = engine.counters();
  return traj;
}

}  // namespace bosecool::kinetics
