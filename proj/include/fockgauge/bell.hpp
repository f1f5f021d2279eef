#pragma once

// Double interferometer: parity correlators and the BCHSH combination.

#include "fockgauge/field.hpp"
#include "fockgauge/modes.hpp"

#include <array>
#include <functional>
#include <vector>

namespace fockgauge::bell {

using modes::DetectionRecord;

/// N_alpha = N_beta = n_total / 2; m_measured of them reach the detectors.
struct BellSettings {
  double zeta = 0.0;
  double theta = 0.0;
  int n_total = 2;
  int m_measured = 2;
};

/// eta = (+1, -1, +1, -1), phases (-zeta, -zeta, theta, theta).
std::array<ChannelFactor, 4> channel_factors(double zeta, double theta, const DetectionRecord& rec);

double prob_bell(const BellSettings& s, const DetectionRecord& rec);

/// cos^{N-M} Lambda prod_i [cos Lambda + eta_i cos(lambda - phi_i)]^{m_i}.
AngleField integrand_field(const BellSettings& s, const DetectionRecord& rec,
                           const numerics::PeriodicGrid& grid);

/// sum over records of (-1)^{m2+m4} P(record).
double correlator(const BellSettings& s);
double correlator_closed_form(int n, double zeta, double theta);

/// Lambda -> 0 law: M!/(4^M prod m!) (1/2pi) int prod [1 + eta_i cos(lambda - phi_i)]^{m_i}.
double prob_bell_classical(int m_total, double zeta, double theta, const DetectionRecord& rec);
/// Record sum of the classical law.
double correlator_classical_sum(int m_total, double zeta, double theta);
/// M!/((M/2)!^2 2^M) cos^M((zeta+theta)/2).
double correlator_classical(int m_total, double zeta, double theta);

/// E(a,b) + E(a,b') + E(a',b) - E(a',b') with E(zeta, theta).
double chsh_combination(const std::function<double(double, double)>& e, double zeta,
                        double zeta_p, double theta, double theta_p);

/// Q = 3 cos^n(xi) - cos^n(3 xi).
double chsh_q(int n, double xi);

struct ChshOptimum {
  double xi_star = 0.0;
  double q_star = 0.0;
};

/// Maximize 3E(xi) - E(3xi) over xi in (0, pi/2).
ChshOptimum maximize_q(const std::function<double(double)>& e, int n_hint);
ChshOptimum maximize_chsh(int n);
/// Same optimization with E taken from the record-sum correlator at M = N - 1.
ChshOptimum maximize_chsh_lossy(int n);

struct NormalizationPoint {
  double l_qu = 0.0;
  double l_cl = 0.0;
};

/// Record sums over M = 2 of prod b_i^{m_i}/m_i!, quantum and classical bases.
NormalizationPoint normalization_diagnostic(int m_total, double zeta, double theta,
                                            double Lambda, double lambda);

} // namespace fockgauge::bell
