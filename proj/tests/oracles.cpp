#include "oracles.hpp"

#include <cmath>
#include <map>

namespace oracle {

Complex fock_amplitude(const fockgauge::modes::ModeNetwork& net, int n_alpha, int n_beta,
                       const std::vector<int>& counts) {
  // psi[a] is the coefficient of |a, remaining - a>.
  int remaining = n_alpha + n_beta;
  std::vector<Complex> psi(remaining + 1, 0.0);
  psi[n_alpha] = 1.0;
  double norm = 1.0;
  for (std::size_t ch = 0; ch < counts.size(); ++ch) {
    const auto& row = net.rows[ch];
    for (int k = 0; k < counts[ch]; ++k) {
      std::vector<Complex> next(remaining, 0.0);
      for (int a = 0; a <= remaining; ++a) {
        const int b = remaining - a;
        if (a > 0) next[a - 1] += row.v_alpha * std::sqrt(static_cast<double>(a)) * psi[a];
        if (b > 0) next[a] += row.v_beta * std::sqrt(static_cast<double>(b)) * psi[a];
      }
      psi = std::move(next);
      --remaining;
      norm *= static_cast<double>(k + 1);
    }
  }
  if (remaining != 0) return 0.0;
  return psi[0] / std::sqrt(norm);
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Rational single_splitter_exact(int n_alpha, int n_beta, int m1) {
  const int n = n_alpha + n_beta, m2 = n - m1;
  BigInt s = 0;
  for (int p = 0; p <= n_alpha; ++p) {
    const BigInt t = binomial(n_alpha, p) * binomial(n_beta, m1 - p);
    s += (p % 2 ? -t : t);
  }
  BigInt num = s * s, den = BigInt(1) << n;
  for (int k = 2; k <= m1; ++k) num *= k;
  for (int k = 2; k <= m2; ++k) num *= k;
  for (int k = 2; k <= n_alpha; ++k) den *= k;
  for (int k = 2; k <= n_beta; ++k) den *= k;
  return Rational(num, den);
}

double total_probability(const fockgauge::modes::ModeNetwork& net, int n_alpha, int n_beta) {
  double t = 0.0;
  for (const auto& r : fockgauge::modes::enumerate_records(static_cast<int>(net.rows.size()), n_alpha + n_beta))
    t += std::norm(fock_amplitude(net, n_alpha, n_beta, r.counts));
  return t;
}

double kahan_sum(const std::vector<double>& xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

long double ln_factorial_by_sum(int n) {
  long double s = 0.0L;
  for (int k = 2; k <= n; ++k) s += std::log(static_cast<long double>(k));
  return s;
}

} // namespace oracle
