#pragma once

// Two Fock states on one 50/50 beam splitter.

#include "fockgauge/field.hpp"
#include "fockgauge/modes.hpp"

#include <complex>
#include <vector>

namespace fockgauge::single_splitter {

using modes::DoubleFock;

/// R(phi) = e^{-i N_beta phi} (1 + i e^{i phi})^{m1} (i + e^{i phi})^{m2}.
std::complex<double> r_of_phi(int m1, int m2, int n_beta, double phi);

/// P(m1, N - m1) from the (Lambda, lambda) integral.
double prob_single(const DoubleFock& src, int m1);

/// P(m1) for m1 = 0..N.
std::vector<double> prob_single_distribution(const DoubleFock& src);

/// cos[(N_alpha - N_beta) Lambda] [cos Lambda + cos lambda]^{m1} [cos Lambda - cos lambda]^{m2}.
LogWeight integrand(const DoubleFock& src, int m1, double Lambda, double lambda);

AngleField integrand_field(const DoubleFock& src, int m1, const numerics::PeriodicGrid& grid);

} // namespace fockgauge::single_splitter
