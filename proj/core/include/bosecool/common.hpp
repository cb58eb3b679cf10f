#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bosecool {

inline constexpr const char* kVersionString = "bosecool 0.1.0";

using cplx = std::complex<double>;

inline double sq(double x) { return x * x; }

// Trap geometry and channel strengths. All rates are expressed in units of
// the trap frequency omega, so omega is fixed to 1 internally and times are
// multiples of 1/omega.
enum class TrapMode { one_d, three_d_ergodic };

struct TrapModel {
  TrapMode mode = TrapMode::one_d;
  double eta = 3.0;        // Lamb-Dicke parameter, eta^2 = recoil/trap ratio
  int levels = 40;         // retained trap levels (1D) or energy shells (3D)
  double omega = 1.0;      // time unit
  double r = 0.0;          // 1D scattering-length ratio; xi = 5e-6 r^2
  double Delta = 1.5e-5;   // 3D shell collision constant, units of omega
};

struct OccupationState {
  std::vector<int> counts;
  int total = 0;
};

inline OccupationState make_occupation(std::vector<int> counts) {
  OccupationState s;
  s.total = 0;
  for (int c : counts) {
    if (c < 0) throw std::domain_error("occupation counts must be nonnegative");
    s.total += c;
  }
  s.counts = std::move(counts);
  return s;
}

inline long long total_quanta(const OccupationState& s) {
  long long e = 0;
  for (std::size_t n = 0; n < s.counts.size(); ++n)
    e += static_cast<long long>(n) * s.counts[n];
  return e;
}

}  // namespace bosecool
