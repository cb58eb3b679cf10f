#include "bosecool/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bosecool::io {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

const char* event_kind_name(kinetics::EventKind kind) {
  switch (kind) {
    case kinetics::EventKind::collision:
      return "collision";
    case kinetics::EventKind::cooling:
      return "cooling";
    case kinetics::EventKind::collision_overflow:
      return "collision_overflow";
    case kinetics::EventKind::cooling_overflow:
      return "cooling_overflow";
  }
  return "unknown";
}

namespace {

void put_comments(std::ostringstream& out,
                  const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
}

}  // namespace

std::string trajectory_csv(const kinetics::Trajectory& traj,
                           const std::vector<std::string>& comments) {
  std::ostringstream out;
  put_comments(out, comments);
  const std::size_t levels =
      traj.snapshots.empty() ? 0 : traj.snapshots[0].counts.size();
  out << "cycle";
  for (std::size_t n = 0; n < levels; ++n) out << ",N_" << n;
  out << '\n';
  for (std::size_t c = 0; c < traj.snapshots.size(); ++c) {
    out << c;
    for (int v : traj.snapshots[c].counts) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

std::string events_csv(const std::vector<kinetics::Event>& events,
                       const std::vector<std::string>& comments) {
  std::ostringstream out;
  put_comments(out, comments);
  out << "t,kind,n1,n2,n3,n4\n";
  for (const auto& ev : events) {
    out << format_double(ev.t) << ',' << event_kind_name(ev.kind) << ','
        << ev.n1 << ',' << ev.n2 << ',' << ev.n3 << ',' << ev.n4 << '\n';
  }
  return out.str();
}

std::string stats_csv(const analysis::DistributionStats& stats,
                      const std::vector<std::string>& comments) {
  std::ostringstream out;
  put_comments(out, comments);
  out << "# summary: mean_n = " << format_double(stats.mean_n)
      << ", condensate_fraction = "
      << format_double(stats.condensate_fraction)
      << ", target_level = " << stats.target_level << ", peaks =";
  if (stats.peaks.empty()) out << " none";
  for (std::size_t i = 0; i < stats.peaks.size(); ++i)
    out << (i ? ";" : " ") << stats.peaks[i];
  out << '\n';
  out << "n,mean,variance\n";
  for (std::size_t n = 0; n < stats.mean.size(); ++n)
    out << n << ',' << format_double(stats.mean[n]) << ','
        << format_double(stats.variance[n]) << '\n';
  return out.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

}  // namespace bosecool::io
