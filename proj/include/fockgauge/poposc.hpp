#pragma once

// Population oscillations: a central 50/50 splitter plus one side counter per source.

#include "fockgauge/field.hpp"
#include "fockgauge/modes.hpp"

#include <span>
#include <vector>

namespace fockgauge::poposc {

using modes::DoubleFock;

struct PoOutcome {
  int m1 = 0;
  int m2 = 0;
  int m_alpha = 0;
  int m_beta = 0;
  int total() const { return m1 + m2 + m_alpha + m_beta; }
};

/// Slice of the joint law at fixed (m1, m2), indexed by m_alpha.
struct PoDistribution {
  int m1 = 0;
  int m2 = 0;
  int n_alpha = 0;
  int n_beta = 0;
  std::vector<int> m_alpha;
  std::vector<double> prob;
};

/// The alternating p-sum squared times its factorial prefactor (exact bracket).
double po_prob_sum(const DoubleFock& src, const PoOutcome& out);
/// The same probability as a (Lambda, lambda) integral.
double po_prob_integral(const DoubleFock& src, const PoOutcome& out);

/// m_alpha = 0..N-M at fixed (m1, m2); optionally renormalized to sum 1.
PoDistribution po_slice(const DoubleFock& src, int m1, int m2, bool renormalize = false);

/// F(Lambda, lambda) = [cos Lambda + cos lambda]^{m1} [cos Lambda - cos lambda]^{m2}.
LogWeight f_value(int m1, int m2, double Lambda, double lambda);
AngleField f_field(int m1, int m2, const numerics::PeriodicGrid& grid);

struct PeakPoint {
  double Lambda = 0.0;
  double lambda = 0.0;
  int sign = 1;
};

/// Closed-form extrema of |F| on the lines Lambda = 0, lambda = 0 and lambda = +-pi.
std::vector<PeakPoint> f_peaks(int m1, int m2);

/// True if |F| at p is no smaller than on a (2k+1)^2 stencil of half-width h around it.
bool is_local_max_abs_f(int m1, int m2, const PeakPoint& p, double h, int k = 8);

/// D(Lambda)/2^M at each Lambda in the list (exact lambda quadrature).
std::vector<double> d_of_lambda_profile(int m1, int m_total, std::span<const double> Lambdas);

/// p_class(lambda)/2^M: Lambda restricted to [-pi/2, pi/2], Gauss-Legendre in Lambda.
double p_class_lambda(int m1, int m_total, int n_total, double lambda);
std::vector<double> p_class_profile(int m1, int m_total, int n_total, std::span<const double> lambdas);
/// Largest local maximum of p_class strictly inside (0, pi).
double p_class_peak(int m1, int m_total, int n_total);

/// P(m1, m2) summed over the side counts; Eq. form with the cos^{N-M} Lambda damping.
double marginal_interference(const DoubleFock& src, int m1, int m2);
/// Lambda = 0 law: M!/(m1! m2! 2^M) (1/2pi) int (1 + cos lambda)^{m1} (1 - cos lambda)^{m2}.
double classical_interference(int m1, int m2);

/// T(phi) = cos^{m1}(phi/2) sin^{m2}(phi/2).
double cat_envelope(int m1, int m2, double phi);
/// phi0 = 2 arctan sqrt(m2/m1).
double cat_peak(int m1, int m2);

/// sum_k w_k cos(j Lambda_k): the side-count pattern generated by a quantum-angle distribution.
double cosine_transform(std::span<const double> Lambdas, std::span<const double> weights, int j);

} // namespace fockgauge::poposc
