#pragma once

// Partial measurements, lost particles, parity selection and the
// two-interferometer population-oscillation device.

#include "fockgauge/field.hpp"
#include "fockgauge/modes.hpp"
#include "fockgauge/poposc.hpp"

#include <array>
#include <vector>

namespace fockgauge::extensions {

using modes::DoubleFock;
using poposc::PoDistribution;
using poposc::PoOutcome;

// ---- no interference measurement ---------------------------------------

/// Sum over m1 + m2 = M of the PO law (direct sum, authoritative).
double prob_no_phase(const DoubleFock& src, int m_total, int m_alpha, int m_beta);
/// Closed form exactly as printed: N_a!N_b!/(m_a!m_b! 2^{N-M}) M!/(p!(N-p)!).
double prob_no_phase_printed(const DoubleFock& src, int m_total, int m_alpha, int m_beta);
/// Re-derived closed form: Binom(N_a, m_a; 1/2) Binom(N_b, m_b; 1/2).
double prob_no_phase_derived(const DoubleFock& src, int m_total, int m_alpha, int m_beta);

// ---- no population measurement -----------------------------------------

double prob_no_population(const DoubleFock& src, int m_total, int m1);

// ---- lost particles ----------------------------------------------------

/// Loss-dressed law for fixed sources, M_L particles lost behind splitters of transmission T.
double loss_dressed_prob(const DoubleFock& src, int lost, double transmission, const PoOutcome& out);

struct LossResult {
  PoDistribution slice;              // unnormalized, summed over M_L and Delta_alpha
  double mean_lost = 0.0;
  std::vector<double> stratum_weight;  // total weight of each M_L, normalized to sum 1
  int strata_used = 0;
};

/// Fluctuating sources N_a = N_D/2 + Delta_a, N_b = N_D/2 + M_L - Delta_a, summed over
/// Delta_a and M_L until the next stratum is below 1e-12 of the accumulated weight.
LossResult po_with_losses(int n_detected, int m1, int m2, double transmission);

/// Safety cap on M_L.
int loss_stratum_cap(int n_detected, double transmission);

// ---- parity selection --------------------------------------------------

enum class Parity { odd, even };

struct ParityResult {
  AngleField landscape;    // sum over m1 of the chosen parity of F/(m1! m2!)
  PoDistribution pattern;  // sum of the PO slices over the same m1
};

ParityResult parity_selected_field(const DoubleFock& src, int m_total, Parity parity,
                                   const numerics::PeriodicGrid& grid);
LogWeight parity_landscape_value(int m_total, Parity parity, double Lambda, double lambda);

// ---- two interferometers plus side counters ----------------------------

using Record4 = std::array<int, 4>;

/// (Lambda, lambda) integral with prefactor N_a!N_b!/(2^{N+M} prod m! m_a! m_b!).
double po_double_integral(const DoubleFock& src, const Record4& rec, int m_alpha, int m_beta,
                          double zeta, double theta);
/// Summation form over (p2, p3, p4) with exact inner brackets.
double po_double_interferometer(const DoubleFock& src, const Record4& rec, int m_alpha, int m_beta,
                                double zeta, double theta);
PoDistribution po_double_slice(const DoubleFock& src, const Record4& rec, double zeta, double theta);

/// prod_i [cos Lambda + eta_i cos(lambda + phi_i)]^{m_i}.
AngleField double_landscape(const Record4& rec, double zeta, double theta,
                            const numerics::PeriodicGrid& grid);
LogWeight double_landscape_value(const Record4& rec, double zeta, double theta, double Lambda,
                                 double lambda);

} // namespace fockgauge::extensions
