#pragma once

// Phase emergence from position measurements, and the three-condensate
// experiment evaluated by a recurrence over remaining quanta.

#include "fockgauge/numerics.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace fockgauge::emergence {

/**
 * Counter-based SplitMix64.  Draw k of stream s under seed is
 * mix(key + (k+1) * gamma) with key = mix(seed ^ mix(s + 1)), so any draw can
 * be regenerated without replaying the stream.  Run r uses stream r; within a
 * run, particle j uses counter j.
 */
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t at(std::uint64_t counter) const;
  /// (u64 >> 11) * 2^-53, in [0, 1).
  double uniform_at(std::uint64_t counter) const;

  static std::uint64_t mix(std::uint64_t z);

private:
  std::uint64_t key_;
};

struct PositionSample {
  std::vector<double> reduced_phases;  // x_i = k r_i reduced to [-pi, pi)
};

struct PosteriorProfile {
  std::vector<double> lambda;
  std::vector<double> values;  // max-normalized
  double lambda0 = 0.0;
  double fwhm = 0.0;
};

/// prod_i [1 + cos(x_i + lambda)] on a uniform lambda grid.
PosteriorProfile posterior_profile(const PositionSample& sample, int resolution = 4096);

inline constexpr int kSamplingGrid = 4096;

/// Sequential draws, each from the density conditioned on all earlier positions.
PositionSample sample_positions(int m, std::uint64_t seed, std::uint64_t stream = 0);
/// The sampler's own running weights as a profile (same draws as sample_positions,
/// no log-space recomputation).
PosteriorProfile sampler_profile(int m, std::uint64_t seed, std::uint64_t stream = 0);

/// Independent draws from (1 + cos(x + lambda_star))/2pi.
PositionSample sample_positions_fixed_phase(int m, double lambda_star, std::uint64_t seed,
                                            std::uint64_t stream = 0);

struct EnsembleRun {
  double lambda0 = 0.0;
  double fwhm = 0.0;
};

/// Run r uses stream r under the common seed.  At the sampling resolution the
/// profile comes from sampler_profile.
std::vector<EnsembleRun> run_ensemble(int runs, int m, std::uint64_t seed, int resolution = 4096);

/// One-sample Kolmogorov-Smirnov distance from uniform on [-pi, pi).
double ks_uniform(std::vector<double> values);

double median(std::vector<double> values);

/// Inverse CDF of a0 + 2 Re(z1 e^{ix}) + 2 Re(z2 e^{2ix}) on [-pi, pi), tabulated on
/// kSamplingGrid cells and interpolated linearly within a cell.
double sample_first_harmonics(double a0, std::complex<double> z1, std::complex<double> z2, double u);

// ---- three sources -------------------------------------------------------

/// Coefficients over remaining (n_alpha, n_beta); n_gamma = remaining - n_alpha - n_beta.
struct ThreeSourceState {
  int n = 0;
  int remaining = 0;
  std::vector<std::complex<double>> c;  // (n+1)^2, row n_alpha
  double log_scale = 0.0;               // true coefficients are c * exp(log_scale)

  std::complex<double>& at(int na, int nb) { return c[static_cast<std::size_t>(na) * (n + 1) + nb]; }
  const std::complex<double>& at(int na, int nb) const {
    return c[static_cast<std::size_t>(na) * (n + 1) + nb];
  }
  double norm2() const;
};

ThreeSourceState three_source_init(int n);

/// Coefficients of e^{ix} a_alpha psi, e^{-ix} a_beta psi and a_gamma psi without the phases.
struct DetectionBranches {
  std::vector<std::complex<double>> a, b, g;
};
DetectionBranches detection_branches(const ThreeSourceState& s);

/// ||(e^{ix} a_alpha + e^{-ix} a_beta + a_gamma) psi||^2 as a0 + 2Re(z1 e^{ix}) + 2Re(z2 e^{2ix}).
struct Intensity {
  double a0 = 0.0;
  std::complex<double> z1, z2;
  double at(double x) const;
};
Intensity detection_intensity(const DetectionBranches& br);

/// Apply the detection operator at x.  Returns the new state (unit-norm table,
/// norm folded into log_scale); likelihood receives ||new||^2 / ||old||^2.
ThreeSourceState three_detect(const ThreeSourceState& s, double x, double* likelihood = nullptr);

struct ThreeMapResult {
  std::vector<double> p;  // (n+1)^2 over (m_alpha, m_beta)
  int n = 0;
  int remaining = 0;
  PositionSample sample;
  double at(int ma, int mb) const { return p[static_cast<std::size_t>(ma) * (n + 1) + mb]; }
};

ThreeMapResult three_population_map(int n, int m_interfere, std::uint64_t seed);

/// Recurrence after a given list of positions; unnormalized |coefficient|^2 for (m_alpha, m_beta).
double three_prob_recurrence(int n, const PositionSample& sample, int m_alpha, int m_beta);

inline constexpr int kThreeOracleCap = 3;

/// Four-angle integral over (lambda_a, lambda_b, lambda_a', lambda_b'), exact uniform grid.
double three_prob_integral(int n, const PositionSample& sample, int m_alpha, int m_beta);

/// Lag-(da, db) autocorrelation of the map's fluctuations over the cells where both are supported.
double directional_autocorrelation(const ThreeMapResult& map, int da, int db);

} // namespace fockgauge::emergence
