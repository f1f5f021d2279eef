#pragma once

// Fields sampled over the (Lambda, lambda) torus and the shared
// angle-integral kernel every probability law reduces to.

#include "fockgauge/numerics.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fockgauge {

using numerics::LogWeight;

/// Values indexed by (Lambda node, lambda node); stored as sign * exp(log).
struct AngleField {
  numerics::PeriodicGrid grid{1, 2};
  std::vector<LogWeight> values;
  std::string meta;

  int size() const { return grid.points_per_axis(); }
  double Lambda(int a) const { return grid.node(a); }
  double lambda(int b) const { return grid.node(b); }
  const LogWeight& at(int a, int b) const { return values[static_cast<std::size_t>(a) * size() + b]; }
  /// Largest log magnitude over the field (-inf for an all-zero field).
  double max_log() const;
  /// Value divided by the largest |value|, so the export peaks at +-1.
  double normalized(int a, int b) const;
};

AngleField sample_field(const numerics::PeriodicGrid& grid,
                        const std::function<LogWeight(double Lambda, double lambda)>& f,
                        std::string meta);

/// One factor [cos Lambda + eta cos(lambda - phase)]^count.
struct ChannelFactor {
  int count = 0;
  double eta = 1.0;
  double phase = 0.0;
};

LogWeight channel_product(double Lambda, double lambda, std::span<const ChannelFactor> factors);

/**
 * (1/2pi)^2 integral of cos(j Lambda) cos^p(Lambda) prod_i [cos Lambda + eta_i cos(lambda - phase_i)]^{m_i}
 * on the smallest uniform grid that is exact for it.
 */
LogWeight angle_integral(int fourier_j, int cos_power, std::span<const ChannelFactor> factors);

} // namespace fockgauge
