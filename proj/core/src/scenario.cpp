#include "bosecool/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bosecool/io.hpp"
#include "bosecool/oscillator.hpp"

namespace bosecool::scenario {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

[[noreturn]] void fail_at(int line, const std::string& msg) {
  fail("line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v, int line) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x))
    fail_at(line, key + ": expected a finite real, got '" + v + "'");
  return x;
}

long long parse_integer(const std::string& key, const std::string& v,
                        int line) {
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size())
    fail_at(line, key + ": expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t parse_seed(const std::string& key, const std::string& v,
                         int line) {
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || v[0] == '-')
    fail_at(line, key + ": expected a nonnegative integer, got '" + v + "'");
  return x;
}

bool parse_onoff(const std::string& key, const std::string& v, int line) {
  if (v == "on") return true;
  if (v == "off") return false;
  fail_at(line, key + ": expected on or off, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    parts.push_back(trim(s.substr(pos, next - pos)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return parts;
}

// duration left NaN when omitted; resolved against gamma and Omega later
std::vector<kinetics::PulseSpec> parse_pulses(const std::string& v, int line) {
  std::vector<kinetics::PulseSpec> pulses;
  for (const std::string& tok : split(v, ';')) {
    if (tok.empty()) fail_at(line, "pulses: empty pulse entry");
    const auto fields = split(tok, ':');
    if (fields.size() > 3)
      fail_at(line, "pulses: expected s[:duration[:ax,ay,az]], got '" + tok +
                        "'");
    kinetics::PulseSpec p;
    p.s = static_cast<int>(parse_integer("pulses", fields[0], line));
    p.duration = std::nan("");
    if (fields.size() >= 2 && !fields[1].empty())
      p.duration = parse_real("pulses", fields[1], line);
    if (fields.size() == 3) {
      const auto amps = split(fields[2], ',');
      if (amps.size() != 3)
        fail_at(line, "pulses: amplitudes need exactly ax,ay,az");
      for (int a = 0; a < 3; ++a)
        p.axis_amplitudes[a] = cplx(parse_real("pulses", amps[a], line), 0.0);
    }
    pulses.push_back(p);
  }
  return pulses;
}

bool known_cycle(const std::string& name) {
  return name == "fig2_1d" || name == "fig5a_3d" || name == "fig5b_3d";
}

void apply_mode_defaults(ScenarioConfig& cfg,
                         const std::set<std::string>& seen) {
  const bool three_d = cfg.mode == TrapMode::three_d_ergodic;
  if (!seen.count("eta")) cfg.eta = three_d ? 2.0 : 3.0;
  if (!seen.count("nmax")) cfg.nmax = three_d ? 15 : 40;
  if (!seen.count("cycle")) cfg.cycle = three_d ? "fig5a_3d" : "fig2_1d";
  if (!seen.count("target")) cfg.target = three_d ? 0 : 1;
  if (!seen.count("equilibrate")) cfg.equilibrate = three_d;
  if (!seen.count("window_to")) cfg.window_to = cfg.cycles;
}

void validate(const ScenarioConfig& cfg) {
  if (!(cfg.eta > 0.0)) fail("eta must be positive");
  if (!(cfg.gamma > 0.0)) fail("gamma must be positive");
  if (!(cfg.Omega >= 0.0)) fail("Omega must be nonnegative");
  if (cfg.atoms < 0) fail("N must be nonnegative");
  if (cfg.nmax < 2) fail("nmax must be at least 2");
  if (!(cfg.r >= 0.0)) fail("r must be nonnegative");
  if (!(cfg.Delta >= 0.0)) fail("Delta must be nonnegative");
  if (!(cfg.mean_n > 0.0)) fail("mean_n must be positive");
  if (cfg.cycle != "none" && !known_cycle(cfg.cycle))
    fail("cycle: unknown cycle '" + cfg.cycle + "'");
  if (cfg.cycle == "none" && cfg.pulses.empty())
    fail("cycle = none requires a pulses line");
  if (cfg.cycle != "none" && !cfg.pulses.empty())
    fail("pulses requires cycle = none");
  if (cfg.cycle == "fig2_1d" && cfg.mode != TrapMode::one_d)
    fail("cycle fig2_1d requires mode = one_d");
  if ((cfg.cycle == "fig5a_3d" || cfg.cycle == "fig5b_3d") &&
      cfg.mode != TrapMode::three_d_ergodic)
    fail("cycle " + cfg.cycle + " requires mode = three_d_ergodic");
  for (const auto& p : cfg.pulses) {
    if (!std::isnan(p.duration) && !(p.duration > 0.0))
      fail("pulses: durations must be positive");
  }
  if (cfg.cycles < 1) fail("cycles must be at least 1");
  if (cfg.warmup < 0) fail("warmup must be nonnegative");
  if (cfg.window_to > cfg.cycles) fail("window_to must not exceed cycles");
  if (cfg.warmup >= cfg.window_to) fail("warmup must be below window_to");
  if (cfg.target < 0 || cfg.target >= cfg.nmax)
    fail("target must lie inside the retained levels");
  if (cfg.emission == rates1d::EmissionPattern::dipole &&
      cfg.mode == TrapMode::three_d_ergodic)
    fail("emission = dipole is undefined in three_d_ergodic mode");
  if (cfg.equil_window < 1) fail("equil_window must be at least 1");
  if (!(cfg.equil_drift > 0.0)) fail("equil_drift must be positive");
  if (cfg.equil_max_steps < 1) fail("equil_max_steps must be at least 1");
}

// omitted durations default to the detuning-independent pulse length
// 2 gamma / Omega^2 of this config; laser-off configs keep the baked length
void resolve_pulse_durations(ScenarioConfig& cfg) {
  for (auto& p : cfg.pulses)
    if (std::isnan(p.duration))
      p.duration = cfg.Omega > 0.0
                       ? 2.0 * cfg.gamma / (cfg.Omega * cfg.Omega)
                       : kinetics::PulseSpec{}.duration;
}

std::string mode_name(TrapMode m) {
  return m == TrapMode::one_d ? "one_d" : "three_d_ergodic";
}

std::string emission_name(rates1d::EmissionPattern p) {
  return p == rates1d::EmissionPattern::isotropic ? "isotropic" : "dipole";
}

std::string onoff(bool b) { return b ? "on" : "off"; }

double real_amp(const cplx& a) {
  if (a.imag() != 0.0)
    fail("pulse amplitudes must be real to serialize a config");
  return a.real();
}

kinetics::CoolingCycle resolve_cycle(const ScenarioConfig& cfg) {
  kinetics::CoolingCycle cyc;
  if (cfg.cycle == "none") {
    cyc.pulses = cfg.pulses;
  } else {
    cyc = kinetics::standard_cycles(cfg.cycle);
    // named cycles bake the default pulse length; rescale to this config
    if (cfg.Omega > 0.0) {
      const double dur = 2.0 * cfg.gamma / (cfg.Omega * cfg.Omega);
      for (auto& p : cyc.pulses) p.duration = dur;
    }
  }
  return cyc;
}

analysis::EquilibrationOptions equil_options(const ScenarioConfig& cfg) {
  analysis::EquilibrationOptions opt;
  opt.window_events = static_cast<std::uint64_t>(cfg.equil_window);
  opt.drift_tolerance = cfg.equil_drift;
  opt.max_steps = cfg.equil_max_steps;
  return opt;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail_at(lineno, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) fail_at(lineno, "missing key before '='");
    if (!seen.insert(key).second)
      fail_at(lineno, "duplicate key '" + key + "'");

    if (key == "mode") {
      if (val == "one_d")
        cfg.mode = TrapMode::one_d;
      else if (val == "three_d_ergodic")
        cfg.mode = TrapMode::three_d_ergodic;
      else
        fail_at(lineno, "mode: expected one_d or three_d_ergodic, got '" +
                            val + "'");
    } else if (key == "eta") {
      cfg.eta = parse_real(key, val, lineno);
    } else if (key == "gamma") {
      cfg.gamma = parse_real(key, val, lineno);
    } else if (key == "Omega") {
      cfg.Omega = parse_real(key, val, lineno);
    } else if (key == "N") {
      cfg.atoms = static_cast<int>(parse_integer(key, val, lineno));
    } else if (key == "nmax") {
      cfg.nmax = static_cast<int>(parse_integer(key, val, lineno));
    } else if (key == "r") {
      cfg.r = parse_real(key, val, lineno);
    } else if (key == "Delta") {
      cfg.Delta = parse_real(key, val, lineno);
    } else if (key == "cycle") {
      if (val != "none" && !known_cycle(val))
        fail_at(lineno, "cycle: unknown cycle '" + val + "'");
      cfg.cycle = val;
    } else if (key == "pulses") {
      cfg.pulses = parse_pulses(val, lineno);
    } else if (key == "cycles") {
      cfg.cycles = static_cast<int>(parse_integer(key, val, lineno));
    } else if (key == "warmup") {
      cfg.warmup = static_cast<int>(parse_integer(key, val, lineno));
    } else if (key == "window_to") {
      cfg.window_to = static_cast<int>(parse_integer(key, val, lineno));
    } else if (key == "target") {
      cfg.target = static_cast<int>(parse_integer(key, val, lineno));
    } else if (key == "seed") {
      cfg.seed = parse_seed(key, val, lineno);
    } else if (key == "collisions") {
      cfg.collisions = parse_onoff(key, val, lineno);
    } else if (key == "event_log") {
      cfg.event_log = parse_onoff(key, val, lineno);
    } else if (key == "emission") {
      if (val == "isotropic")
        cfg.emission = rates1d::EmissionPattern::isotropic;
      else if (val == "dipole")
        cfg.emission = rates1d::EmissionPattern::dipole;
      else
        fail_at(lineno,
                "emission: expected isotropic or dipole, got '" + val + "'");
    } else if (key == "mean_n") {
      cfg.mean_n = parse_real(key, val, lineno);
    } else if (key == "equilibrate") {
      cfg.equilibrate = parse_onoff(key, val, lineno);
    } else if (key == "equil_window") {
      cfg.equil_window = static_cast<int>(parse_integer(key, val, lineno));
    } else if (key == "equil_drift") {
      cfg.equil_drift = parse_real(key, val, lineno);
    } else if (key == "equil_max_steps") {
      cfg.equil_max_steps = parse_seed(key, val, lineno);
    } else if (key == "table_only") {
      cfg.table_only = parse_onoff(key, val, lineno);
    } else {
      fail_at(lineno, "unknown key '" + key + "'");
    }
  }
  apply_mode_defaults(cfg, seen);
  validate(cfg);
  resolve_pulse_durations(cfg);
  return cfg;
}

std::string serialize_config(const ScenarioConfig& cfg) {
  validate(cfg);
  std::ostringstream out;
  const auto real = [](double v) { return io::format_double(v); };
  out << "mode = " << mode_name(cfg.mode) << '\n';
  out << "eta = " << real(cfg.eta) << '\n';
  out << "gamma = " << real(cfg.gamma) << '\n';
  out << "Omega = " << real(cfg.Omega) << '\n';
  out << "N = " << cfg.atoms << '\n';
  out << "nmax = " << cfg.nmax << '\n';
  out << "r = " << real(cfg.r) << '\n';
  out << "Delta = " << real(cfg.Delta) << '\n';
  out << "cycle = " << cfg.cycle << '\n';
  if (cfg.cycle == "none") {
    out << "pulses = ";
    for (std::size_t i = 0; i < cfg.pulses.size(); ++i) {
      const auto& p = cfg.pulses[i];
      if (i) out << "; ";
      out << p.s << ':' << real(p.duration) << ':'
          << real(real_amp(p.axis_amplitudes[0])) << ','
          << real(real_amp(p.axis_amplitudes[1])) << ','
          << real(real_amp(p.axis_amplitudes[2]));
    }
    out << '\n';
  }
  out << "cycles = " << cfg.cycles << '\n';
  out << "warmup = " << cfg.warmup << '\n';
  out << "window_to = " << cfg.window_to << '\n';
  out << "target = " << cfg.target << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "collisions = " << onoff(cfg.collisions) << '\n';
  out << "event_log = " << onoff(cfg.event_log) << '\n';
  out << "emission = " << emission_name(cfg.emission) << '\n';
  out << "mean_n = " << real(cfg.mean_n) << '\n';
  out << "equilibrate = " << onoff(cfg.equilibrate) << '\n';
  out << "equil_window = " << cfg.equil_window << '\n';
  out << "equil_drift = " << real(cfg.equil_drift) << '\n';
  out << "equil_max_steps = " << cfg.equil_max_steps << '\n';
  out << "table_only = " << onoff(cfg.table_only) << '\n';
  return out.str();
}

namespace {

ScenarioConfig preset_1d(double r) {
  ScenarioConfig cfg;  // struct defaults are the canonical 1D parameter set
  cfg.r = r;
  return cfg;
}

ScenarioConfig preset_3d() {
  ScenarioConfig cfg;
  cfg.mode = TrapMode::three_d_ergodic;
  cfg.eta = 2.0;
  cfg.nmax = 15;
  cfg.cycle = "fig5a_3d";
  cfg.cycles = 1200;
  cfg.warmup = 800;
  cfg.window_to = 1200;
  cfg.target = 0;
  cfg.equilibrate = true;
  return cfg;
}

}  // namespace

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig cfg;
  if (name == "fig1") {
    cfg = preset_1d(0.0);
    cfg.table_only = true;
  } else if (name == "fig2a") {
    cfg = preset_1d(0.0);
  } else if (name == "fig2b" || name == "fig3") {
    cfg = preset_1d(0.4);
  } else if (name == "fig2c") {
    cfg = preset_1d(0.8);
  } else if (name == "fig2d") {
    cfg = preset_1d(1.2);
  } else if (name == "fig2e") {
    cfg = preset_1d(5.0);
  } else if (name == "fig4") {
    cfg = preset_3d();
    cfg.Omega = 0.0;
    cfg.cycle = "fig5b_3d";  // one laser-off window per cycle as the cadence
    // the ground-shell autocorrelation spans hundreds of cycles at the
    // default Delta, so the averaging window has to be generous
    cfg.cycles = 3000;
    cfg.warmup = 600;
    cfg.window_to = 3000;
    cfg.equilibrate = false;
  } else if (name == "fig5a" || name == "fig5a_nocoll") {
    cfg = preset_3d();
    cfg.collisions = name == "fig5a";
  } else if (name == "fig5b" || name == "fig5b_nocoll") {
    cfg = preset_3d();
    cfg.cycle = "fig5b_3d";
    cfg.cycles = 2000;
    cfg.warmup = 1400;
    cfg.window_to = 2000;
    cfg.collisions = name == "fig5b";
  } else {
    fail("unknown preset '" + name + "'");
  }
  validate(cfg);
  return cfg;
}

std::vector<std::pair<std::string, std::string>> preset_catalog() {
  return {
      {"fig1",
       "kick strength table |<n+s|e^{ikx}|n>|^2 for s = 8 and s = -3 at eta "
       "= 3; no dynamics"},
      {"fig2a", "1D cooling cycle targeting n = 1, 133 atoms, collisions off "
                "(r = 0)"},
      {"fig2b", "1D cooling with weak collisions (r = 0.4); population "
                "trades between n = 1 and n = 7"},
      {"fig2c", "1D cooling with moderate collisions (r = 0.8)"},
      {"fig2d", "1D cooling with strong collisions (r = 1.2)"},
      {"fig2e", "1D cooling with dominant collisions (r = 5.0); the n = 1 "
                "peak dissolves"},
      {"fig3", "per-cycle trace of the weak-collision run; same parameters "
               "as fig2b"},
      {"fig4", "3D collision-only relaxation to the stationary shell "
               "distribution"},
      {"fig5a", "3D two-pulse cooling cycle after collisional equilibration"},
      {"fig5b", "3D single-pulse cycle; collisions replace the interference "
                "pulse"},
      {"fig5a_nocoll", "fig5a with collisions disabled during cycling"},
      {"fig5b_nocoll", "fig5b with collisions disabled during cycling"},
  };
}

std::string kick_strength_csv(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "n,s,strength\n";
  for (int s : {8, -3}) {
    for (int n = 0; n <= 9; ++n) {
      double strength = 0.0;
      if (n + s >= 0)
        strength = std::norm(oscillator::franck_condon(n + s, n, cfg.eta));
      out << n << ',' << s << ',' << io::format_double(strength) << '\n';
    }
  }
  return out.str();
}

std::string pulse_rates_csv(const ScenarioConfig& cfg) {
  validate(cfg);
  std::ostringstream out;
  out << "pulse,s,n1,n2,rate\n";
  const kinetics::CoolingCycle cycle = resolve_cycle(cfg);
  const double pref = cfg.Omega * cfg.Omega / (2.0 * cfg.gamma);
  if (pref <= 0.0) return out.str();
  const OccupationState empty =
      make_occupation(std::vector<int>(cfg.nmax, 0));

  if (cfg.mode == TrapMode::one_d) {
    TrapModel trap;
    trap.mode = TrapMode::one_d;
    trap.eta = cfg.eta;
    trap.levels = cfg.nmax;
    rates1d::CoolingParams cool;
    cool.gamma = cfg.gamma;
    cool.Omega = cfg.Omega;
    cool.pattern = cfg.emission;
    const rates1d::RateTables tables = rates1d::build_rate_tables(cool, trap);
    rates1d::CoolingWorkspace ws(tables, cool);
    for (std::size_t p = 0; p < cycle.pulses.size(); ++p) {
      ws.set_detuning(cycle.pulses[p].s * 1.0);
      ws.set_occupation(empty);
      for (int n1 = 0; n1 < cfg.nmax; ++n1)
        for (int n2 = 0; n2 < cfg.nmax; ++n2) {
          if (n2 == n1) continue;
          const double rate = pref * ws.channel_strength(n1, n2);
          if (rate > 0.0)
            out << p << ',' << cycle.pulses[p].s << ',' << n1 << ',' << n2
                << ',' << io::format_double(rate) << '\n';
        }
    }
  } else {
    const rates3d::ShellGeometry geo =
        rates3d::ShellGeometry::ergodic(cfg.nmax, cfg.eta, cfg.emission);
    rates3d::ShellCoolingKernel kernel(geo, cfg.gamma, 1.0);
    for (std::size_t p = 0; p < cycle.pulses.size(); ++p) {
      kernel.set_pulse(cycle.pulses[p].s * 1.0,
                       cycle.pulses[p].axis_amplitudes);
      kernel.freeze(empty);
      for (int n1 = 0; n1 < cfg.nmax; ++n1)
        for (int n2 = 0; n2 < cfg.nmax; ++n2) {
          if (n2 == n1) continue;
          const double rate = pref * kernel.strength(n1, n2);
          if (rate > 0.0)
            out << p << ',' << cycle.pulses[p].s << ',' << n1 << ',' << n2
                << ',' << io::format_double(rate) << '\n';
        }
    }
  }
  return out.str();
}

RunArtifacts run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  RunArtifacts art;
  art.config = cfg;
  art.manifest_body = serialize_config(cfg);
  art.manifest_hash = io::fnv1a64(art.manifest_body);
  {
    rates1d::CoolingParams cool;
    cool.gamma = cfg.gamma;
    cool.Omega = cfg.Omega;
    art.festina_lente_ok = rates1d::festina_lente(cool, 1.0);
  }
  if (cfg.table_only) {
    art.table_csv = kick_strength_csv(cfg);
    return art;
  }

  Rng thermal_rng = Rng::stream(cfg.seed, 0);
  OccupationState state = analysis::sample_thermal(cfg.mean_n, cfg.atoms,
                                                   cfg.nmax, cfg.mode,
                                                   thermal_rng);
  const kinetics::CoolingCycle cycle = resolve_cycle(cfg);

  if (cfg.mode == TrapMode::one_d) {
    TrapModel trap;
    trap.mode = TrapMode::one_d;
    trap.eta = cfg.eta;
    trap.levels = cfg.nmax;
    trap.r = cfg.r;
    rates1d::CoolingParams cool;
    cool.gamma = cfg.gamma;
    cool.Omega = cfg.Omega;
    cool.pattern = cfg.emission;
    const rates1d::RateTables tables = rates1d::build_rate_tables(cool, trap);
    kinetics::Channels1D ch;
    ch.tables = &tables;
    ch.cooling = cool;
    ch.collisions = rates1d::Collision1DParams::from_r(cfg.r);
    if (cfg.equilibrate) {
      Rng eq_rng = Rng::stream(cfg.seed, 1);
      state = analysis::equilibrate_collisions(state, ch, eq_rng,
                                               equil_options(cfg),
                                               &art.equilibration);
    }
    if (!cfg.collisions) ch.collisions = rates1d::Collision1DParams{};
    art.trajectory = kinetics::run_cycles(state, cycle, cfg.cycles, ch,
                                          cfg.seed, 2, cfg.event_log);
  } else {
    const rates3d::ShellGeometry geo =
        rates3d::ShellGeometry::ergodic(cfg.nmax, cfg.eta, cfg.emission);
    kinetics::Channels3D ch;
    ch.geometry = &geo;
    ch.shells.nmax = cfg.nmax - 1;
    ch.shells.Delta = cfg.Delta;
    ch.cooling.gamma = cfg.gamma;
    ch.cooling.Omega = cfg.Omega;
    if (cfg.equilibrate) {
      Rng eq_rng = Rng::stream(cfg.seed, 1);
      state = analysis::equilibrate_collisions(state, ch, eq_rng,
                                               equil_options(cfg),
                                               &art.equilibration);
    }
    if (!cfg.collisions) ch.shells.Delta = 0.0;
    art.trajectory = kinetics::run_cycles(state, cycle, cfg.cycles, ch,
                                          cfg.seed, 2, cfg.event_log);
  }
  art.stats = analysis::window_average(art.trajectory, cfg.warmup,
                                       cfg.window_to, cfg.target);
  return art;
}

void write_artifacts(const RunArtifacts& art, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string hash = io::hex64(art.manifest_hash);
  std::vector<std::string> comments{kVersionString, "manifest_hash " + hash};

  std::vector<std::string> manifest = comments;
  manifest.push_back("rng_stream_seed " +
                     std::to_string(art.trajectory.rng_seed));
  const auto& c = art.trajectory.counters;
  manifest.push_back("accepted " + std::to_string(c.accepted));
  manifest.push_back("proposals " + std::to_string(c.proposals));
  manifest.push_back("collision_overflow " +
                     std::to_string(c.collision_overflow));
  manifest.push_back("cooling_overflow " +
                     std::to_string(c.cooling_overflow));
  if (art.config.equilibrate) {
    manifest.push_back("equilibration_steps " +
                       std::to_string(art.equilibration.steps));
    manifest.push_back("equilibration_windows " +
                       std::to_string(art.equilibration.windows));
    manifest.push_back("equilibration_drift " +
                       io::format_double(art.equilibration.last_drift));
  }
  if (!art.festina_lente_ok)
    manifest.push_back(
        "warning: gamma >= omega leaves the festina-lente regime");
  std::ostringstream mtext;
  for (const auto& line : manifest) mtext << "# " << line << '\n';
  mtext << art.manifest_body;
  io::write_text_file((fs::path(out_dir) / "manifest.txt").string(),
                      mtext.str());

  if (art.config.table_only) {
    std::ostringstream t;
    for (const auto& line : comments) t << "# " << line << '\n';
    t << art.table_csv;
    io::write_text_file((fs::path(out_dir) / "rates.csv").string(), t.str());
    return;
  }

  io::write_text_file((fs::path(out_dir) / "trajectory.csv").string(),
                      io::trajectory_csv(art.trajectory, comments));
  io::write_text_file((fs::path(out_dir) / "stats.csv").string(),
                      io::stats_csv(art.stats, comments));
  if (art.config.event_log)
    io::write_text_file((fs::path(out_dir) / "events.csv").string(),
                        io::events_csv(art.trajectory.events, comments));
}

}  // namespace bosecool::scenario
