#include "fockgauge/single_splitter.hpp"

#include <cmath>
#include <string>

namespace fockgauge::single_splitter {

using numerics::ln_factorial;

namespace {

void check(const DoubleFock& src, int m1) {
  require(src.n_alpha >= 0 && src.n_beta >= 0, "single splitter: negative source population");
  require(m1 >= 0 && m1 <= src.total(), "single splitter: m1 must lie in [0, N]");
}

} // namespace

std::complex<double> r_of_phi(int m1, int m2, int n_beta, double phi) {
  require(m1 >= 0 && m2 >= 0, "r_of_phi: counts must be nonnegative");
  const std::complex<double> i{0.0, 1.0}, e = std::polar(1.0, phi);
  return std::polar(1.0, -n_beta * phi) * numerics::ipow(1.0 + i * e, m1) * numerics::ipow(i + e, m2);
}

double prob_single(const DoubleFock& src, int m1) {
  check(src, m1);
  const int m2 = src.total() - m1;
  const ChannelFactor f[] = {{m1, +1.0, 0.0}, {m2, -1.0, 0.0}};
  const LogWeight integral = angle_integral(src.n_alpha - src.n_beta, 0, f);
  if (integral.sign <= 0) return 0.0;
  const double log_pref =
      ln_factorial(src.n_alpha) + ln_factorial(src.n_beta) - ln_factorial(m1) - ln_factorial(m2);
  return std::exp(log_pref + integral.log_magnitude);
}

std::vector<double> prob_single_distribution(const DoubleFock& src) {
  std::vector<double> out(src.total() + 1);
  for (int m1 = 0; m1 <= src.total(); ++m1) out[m1] = prob_single(src, m1);
  return out;
}

LogWeight integrand(const DoubleFock& src, int m1, double Lambda, double lambda) {
  const int m2 = src.total() - m1;
  const ChannelFactor f[] = {{m1, +1.0, 0.0}, {m2, -1.0, 0.0}};
  return LogWeight::from_value(std::cos((src.n_alpha - src.n_beta) * Lambda)) *
         channel_product(Lambda, lambda, f);
}

AngleField integrand_field(const DoubleFock& src, int m1, const numerics::PeriodicGrid& grid) {
  check(src, m1);
  const std::string meta = "nalpha=" + std::to_string(src.n_alpha) + " nbeta=" +
                           std::to_string(src.n_beta) + " m1=" + std::to_string(m1) +
                           " m2=" + std::to_string(src.total() - m1);
  return sample_field(grid, [&](double L, double l) { return integrand(src, m1, L, l); }, meta);
}

} // namespace fockgauge::single_splitter
