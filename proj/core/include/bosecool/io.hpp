#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bosecool/analysis.hpp"
#include "bosecool/kinetics.hpp"

namespace bosecool::io {

// FNV-1a over the raw bytes; stable across platforms, used to stamp every
// artifact of a run with the hash of its manifest body.
std::uint64_t fnv1a64(std::string_view bytes);

// 16 lowercase hex digits, zero padded
std::string hex64(std::uint64_t v);

// shortest decimal (15 to 17 significant digits) that round-trips exactly
std::string format_double(double v);

const char* event_kind_name(kinetics::EventKind kind);

// CSV builders. Each comment string becomes one "# "-prefixed header line;
// rows use LF endings and "%.17g" for reals.
std::string trajectory_csv(const kinetics::Trajectory& traj,
                           const std::vector<std::string>& comments);
std::string events_csv(const std::vector<kinetics::Event>& events,
                       const std::vector<std::string>& comments);
std::string stats_csv(const analysis::DistributionStats& stats,
                      const std::vector<std::string>& comments);

void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

}  // namespace bosecool::io
