#pragma once

// Beam-splitter wiring and the brute-force amplitude oracle.

#include "fockgauge/numerics.hpp"

#include <complex>
#include <string>
#include <vector>

namespace fockgauge::modes {

using Complex = std::complex<double>;

/// Projection of one detector channel onto the two source modes.
struct NetworkRow {
  Complex v_alpha;
  Complex v_beta;
  std::string label;
};

struct ModeNetwork {
  std::vector<NetworkRow> rows;

  std::size_t channel_count() const { return rows.size(); }

  struct Isometry {
    double norm_alpha;     // sum |v_alpha|^2
    double norm_beta;      // sum |v_beta|^2
    Complex overlap;       // sum conj(v_alpha) v_beta
  };
  Isometry isometry_sums() const;
};

struct DoubleFock {
  int n_alpha = 0;
  int n_beta = 0;
  int total() const { return n_alpha + n_beta; }
};

struct DetectionRecord {
  std::vector<int> counts;
  int total() const;
};

/// a1 = (a_alpha + i a_beta)/sqrt2, a2 = (i a_alpha + a_beta)/sqrt2.
ModeNetwork network_single();
/// Two interferometers fed by split halves of both sources; phases zeta and theta.
ModeNetwork network_double(double zeta, double theta);
/// Central 50/50 splitter plus one side counter per source.
ModeNetwork network_po();
/// network_double with every row halved in power and a side counter per source.
ModeNetwork network_double_po(double zeta, double theta);

/// Reduced phase-state factor v_alpha + v_beta e^{i phi}.
Complex phase_state_factor(const NetworkRow& row, double phi);

inline constexpr int kOracleCap = 24;

/// <0| prod a_i^{m_i} / sqrt(prod m_i!) |N_alpha, N_beta> by direct expansion.
Complex amplitude_bruteforce(const ModeNetwork& net, const DoubleFock& src,
                             const DetectionRecord& rec, int cap = kOracleCap);

/// All count vectors of the given length summing to total, lexicographic order.
std::vector<DetectionRecord> enumerate_records(int channels, int total);

} // namespace fockgauge::modes
