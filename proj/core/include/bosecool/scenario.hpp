#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bosecool/analysis.hpp"
#include "bosecool/kinetics.hpp"

namespace bosecool::scenario {

// One run, fully described by flat `key = value` lines so the manifest echo
// is bit-exact. Defaults depend on the mode and are resolved by parse_config
// and the preset constructors; a ScenarioConfig in hand is always final.
struct ScenarioConfig {
  TrapMode mode = TrapMode::one_d;
  double eta = 3.0;
  double gamma = 0.04;      // units of the trap frequency
  double Omega = 0.03;      // units of the trap frequency
  int atoms = 133;          // key N
  int nmax = 40;            // retained trap levels (1D) or energy shells (3D)
  double r = 0.0;           // 1D scattering-length ratio
  double Delta = 1.5e-5;    // 3D shell collision constant
  std::string cycle = "fig2_1d";  // named pulse cycle, or "none"
  std::vector<kinetics::PulseSpec> pulses;  // used only when cycle == none
  int cycles = 15000;
  int warmup = 5000;        // averaging window is [warmup, window_to]
  int window_to = 15000;
  int target = 1;           // level whose window mean is the figure of merit
  std::uint64_t seed = 1;
  bool collisions = true;   // off zeroes r (1D) / Delta (3D) during cycling
  bool event_log = false;
  rates1d::EmissionPattern emission = rates1d::EmissionPattern::isotropic;
  double mean_n = 6.0;      // initial thermal mean
  bool equilibrate = false; // collision-only relaxation before cycling
  int equil_window = 20000;
  double equil_drift = 0.08;
  std::uint64_t equil_max_steps = 4000000;
  bool table_only = false;  // dump the kick-strength table, no dynamics
};

// Flat key = value text, one key per line, `#` starts a comment. Unknown or
// duplicate keys, malformed values, and constraint violations throw
// invalid_argument naming the key and line. Missing keys get mode-dependent
// defaults; explicit pulses are written `s[:duration[:ax,ay,az]]` separated
// by semicolons and require cycle = none.
ScenarioConfig parse_config(const std::string& text);

// Canonical echo: fixed key order, every key explicit, reals as %.17g.
// parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const ScenarioConfig& cfg);

// Named parameter sets, one per reproduced figure. Unknown name throws.
ScenarioConfig preset(const std::string& name);

// (id, one-line description) for every preset, in catalog order.
std::vector<std::pair<std::string, std::string>> preset_catalog();

struct RunArtifacts {
  ScenarioConfig config;
  std::string manifest_body;       // canonical config echo
  std::uint64_t manifest_hash = 0; // fnv1a64 of the body
  bool festina_lente_ok = true;    // gamma < omega held for this run
  kinetics::Trajectory trajectory; // empty for table-only configs
  analysis::DistributionStats stats;
  analysis::EquilibrationReport equilibration;  // set when equilibrate is on
  std::string table_csv;           // set for table-only configs
};

// Thermal sample (stream 0) -> optional collision-only equilibration
// (stream 1) -> pulse cycling (stream 2) -> window statistics. Collisions
// stay on during equilibration even when the cycling toggle is off, so the
// no-collision variants start from the same prepared state. Pure in-memory;
// writing is separate.
RunArtifacts run_scenario(const ScenarioConfig& cfg);

// Creates out_dir and writes manifest.txt plus either rates.csv (table-only)
// or trajectory.csv, stats.csv and, when enabled, events.csv. Every file
// carries "# "-comments with the code version and the manifest hash.
void write_artifacts(const RunArtifacts& art, const std::string& out_dir);

// Kick-strength table |<n+s| e^{ikx} |n>|^2 at kappa = 1 for the configured
// eta, s in {8, -3}, n = 0..9. Nonexistent destinations give zero rows.
std::string kick_strength_csv(const ScenarioConfig& cfg);

// One-atom-in-vacuum cooling rates per pulse of the configured cycle:
// rows pulse,s,n1,n2,rate with rate = pref * S(n1, n2) evaluated at empty
// occupation (spontaneous-only reabsorption). Zero-rate rows are skipped.
std::string pulse_rates_csv(const ScenarioConfig& cfg);

}  // namespace bosecool::scenario
