#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bosecool/io.hpp"
#include "bosecool/scenario.hpp"

namespace {

using namespace bosecool;

scenario::ScenarioConfig load_source(const std::string& source,
                                     std::string* default_out) {
  for (const auto& [id, desc] : scenario::preset_catalog())
    if (id == source) {
      *default_out = id;
      return scenario::preset(id);
    }
  const std::string text = io::read_text_file(source);
  *default_out = std::filesystem::path(source).stem().string();
  if (default_out->empty()) *default_out = "run";
  return scenario::parse_config(text);
}

void print_summary(const std::string& dir,
                   const scenario::RunArtifacts& art) {
  std::cout << dir << ": manifest " << io::hex64(art.manifest_hash);
  if (art.config.table_only) {
    std::cout << ", kick strength table\n";
    return;
  }
  std::cout << ", accepted " << art.trajectory.counters.accepted
            << " events, window mean_n = "
            << io::format_double(art.stats.mean_n) << ", N_"
            << art.stats.target_level << " fraction = "
            << io::format_double(art.stats.condensate_fraction) << '\n';
  if (!art.festina_lente_ok)
    std::cerr << "warning: gamma >= omega leaves the festina-lente regime\n";
}

// Mixture over equally weighted members: means average, variances compose
// as mean member variance plus the variance of the member means.
scenario::RunArtifacts pooled_over(
    const std::vector<scenario::RunArtifacts>& members,
    const scenario::ScenarioConfig& base) {
  scenario::RunArtifacts pooled;
  pooled.config = base;
  pooled.manifest_body = scenario::serialize_config(base);
  pooled.manifest_hash = io::fnv1a64(pooled.manifest_body);
  pooled.festina_lente_ok = members.front().festina_lente_ok;
  const std::size_t levels = members.front().stats.mean.size();
  const double k = static_cast<double>(members.size());
  auto& st = pooled.stats;
  st.mean.assign(levels, 0.0);
  st.variance.assign(levels, 0.0);
  for (const auto& m : members)
    for (std::size_t n = 0; n < levels; ++n) {
      st.mean[n] += m.stats.mean[n] / k;
      st.variance[n] += m.stats.variance[n] / k;
    }
  for (const auto& m : members)
    for (std::size_t n = 0; n < levels; ++n) {
      const double d = m.stats.mean[n] - st.mean[n];
      st.variance[n] += d * d / k;
    }
  double num = 0.0, den = 0.0;
  for (std::size_t n = 0; n < levels; ++n) {
    num += static_cast<double>(n) * st.mean[n];
    den += st.mean[n];
  }
  st.mean_n = den > 0.0 ? num / den : 0.0;
  st.target_level = base.target;
  st.condensate_fraction =
      den > 0.0 ? st.mean[static_cast<std::size_t>(base.target)] / den : 0.0;
  st.peaks = analysis::profile_peaks(st.mean, 2.0);
  return pooled;
}

int cmd_simulate(scenario::ScenarioConfig cfg, const std::string& out_dir,
                 int ensemble) {
  namespace fs = std::filesystem;
  if (ensemble <= 1 || cfg.table_only) {
    const scenario::RunArtifacts art = scenario::run_scenario(cfg);
    scenario::write_artifacts(art, out_dir);
    print_summary(out_dir, art);
    return 0;
  }
  std::vector<scenario::RunArtifacts> members;
  members.reserve(ensemble);
  for (int k = 0; k < ensemble; ++k) {
    scenario::ScenarioConfig mc = cfg;
    // stride past the three per-run streams so no member shares a stream;
    // member 0 reproduces the plain single run
    mc.seed = Rng::stream_seed(cfg.seed, 4 * static_cast<std::uint64_t>(k));
    const std::string mdir =
        (fs::path(out_dir) / ("member_" + std::to_string(k))).string();
    members.push_back(scenario::run_scenario(mc));
    scenario::write_artifacts(members.back(), mdir);
    print_summary(mdir, members.back());
  }
  const scenario::RunArtifacts pooled = pooled_over(members, cfg);
  std::vector<std::string> comments{
      kVersionString, "manifest_hash " + io::hex64(pooled.manifest_hash),
      "ensemble " + std::to_string(ensemble)};
  io::write_text_file((fs::path(out_dir) / "stats.csv").string(),
                      io::stats_csv(pooled.stats, comments));
  std::ostringstream mtext;
  for (const auto& line : comments) mtext << "# " << line << '\n';
  mtext << pooled.manifest_body;
  io::write_text_file((fs::path(out_dir) / "manifest.txt").string(),
                      mtext.str());
  std::cout << out_dir << ": pooled over " << ensemble
            << " members, window mean_n = "
            << io::format_double(pooled.stats.mean_n) << ", N_"
            << pooled.stats.target_level << " fraction = "
            << io::format_double(pooled.stats.condensate_fraction) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic laser cooling of trapped bosons"};
  app.require_subcommand(1);

  auto* sim = app.add_subcommand(
      "simulate", "run a preset or config file and write CSV artifacts");
  std::string source;
  sim->add_option("source", source, "preset id or path to a config file")
      ->required();
  std::uint64_t seed = 0;
  auto* seed_opt = sim->add_option("--seed", seed, "override the config seed");
  int ensemble = 1;
  sim->add_option("--ensemble", ensemble,
                  "independent trajectories with derived seeds, pooled stats")
      ->check(CLI::PositiveNumber);
  std::string out_dir;
  auto* out_opt =
      sim->add_option("--out", out_dir, "output directory (default: source name)");

  auto* rates = app.add_subcommand(
      "dump-rates", "print a preset's transition-rate table as CSV");
  std::string rates_source;
  rates->add_option("source", rates_source, "preset id or config file")
      ->required();

  auto* listp =
      app.add_subcommand("list-presets", "list scenario presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      std::string default_out;
      scenario::ScenarioConfig cfg = load_source(source, &default_out);
      if (*seed_opt) cfg.seed = seed;
      return cmd_simulate(cfg, *out_opt ? out_dir : default_out, ensemble);
    }
    if (rates->parsed()) {
      std::string ignored;
      const scenario::ScenarioConfig cfg = load_source(rates_source, &ignored);
      std::cout << (cfg.table_only ? scenario::kick_strength_csv(cfg)
                                   : scenario::pulse_rates_csv(cfg));
      return 0;
    }
    if (listp->parsed()) {
      for (const auto& [id, desc] : scenario::preset_catalog())
        std::cout << id << std::string(14 - id.size(), ' ') << desc << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
