#include "fockgauge/field.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>

namespace fockgauge {

namespace {

using numerics::BigInt;

// Digits the double sum may lose before the integral is redone exactly.
constexpr double kLogConditionLimit = -6.907755278982137;  // ln 1e-3

/*
 * With every phase 0 and every eta = +-1 the integrand is
 * cos(j L) c^p (c + x)^A (c - x)^B, c = cos Lambda, x = cos lambda.  Expanding in
 * x^k and using mean cos^k = C(k, k/2)/2^k and mean cos(jL) c^q = C(q, (q-j)/2)/2^q
 * gives an integer over 2^(A+B+p).
 */
std::optional<LogWeight> exact_real_lattice(int fourier_j, int cos_power,
                                            std::span<const ChannelFactor> factors) {
  int plus = 0, minus = 0;
  for (const auto& f : factors) {
    if (f.count == 0) continue;
    if (f.phase != 0.0) return std::nullopt;
    if (f.eta == 1.0) plus += f.count;
    else if (f.eta == -1.0) minus += f.count;
    else return std::nullopt;
  }
  const int j = std::abs(fourier_j);
  const int d = plus + minus + cos_power;
  // coefficients of (1 + x)^plus (1 - x)^minus
  std::vector<BigInt> a(plus + minus + 1, BigInt(0));
  a[0] = 1;
  int deg = 0;
  for (int s : {+1, -1})
    for (int r = 0; r < (s > 0 ? plus : minus); ++r) {
      ++deg;
      for (int k = deg; k >= 1; --k) a[k] += s > 0 ? a[k - 1] : BigInt(-a[k - 1]);
    }
  BigInt total = 0, central = 1;  // central = C(k, k/2)
  for (int k = 0; k <= plus + minus; k += 2) {
    if (k > 0) central = central * (k - 1) * k / ((k / 2) * (k / 2));
    const int q = d - k;
    if (q < j || (q - j) % 2 != 0 || a[k] == 0) continue;
    total += a[k] * central * numerics::factorial_exact(q) /
             (numerics::factorial_exact((q - j) / 2) * numerics::factorial_exact((q + j) / 2));
  }
  if (total == 0) return LogWeight::zero();
  return numerics::to_log_weight(numerics::ExactRational(total, BigInt(1) << d));
}

} // namespace

double AngleField::max_log() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& v : values)
    if (v.sign != 0) m = std::max(m, v.log_magnitude);
  return m;
}

double AngleField::normalized(int a, int b) const {
  const auto& v = at(a, b);
  if (v.sign == 0) return 0.0;
  return v.sign * std::exp(v.log_magnitude - max_log());
}

AngleField sample_field(const numerics::PeriodicGrid& grid,
                        const std::function<LogWeight(double, double)>& f, std::string meta) {
  require(grid.axis_count() == 2, "sample_field: grid must be two-dimensional");
  AngleField out{grid, std::vector<LogWeight>(grid.node_count()), std::move(meta)};
  const int n = grid.points_per_axis();
  numerics::parallel_for(n, [&](std::size_t a) {
    for (int b = 0; b < n; ++b)
      out.values[a * n + b] = f(grid.node(static_cast<int>(a)), grid.node(b));
  });
  return out;
}

LogWeight channel_product(double Lambda, double lambda, std::span<const ChannelFactor> factors) {
  const double c = std::cos(Lambda);
  LogWeight out = LogWeight::one();
  for (const auto& f : factors) {
    if (f.count == 0) continue;
    const double base = c + f.eta * std::cos(lambda - f.phase);
    if (base == 0.0) return LogWeight::zero();
    out *= LogWeight::from_value(base).pow(f.count);
  }
  return out;
}

LogWeight angle_integral(int fourier_j, int cos_power, std::span<const ChannelFactor> factors) {
  require(cos_power >= 0, "angle_integral: negative cos power");
  int m = 0;
  for (const auto& f : factors) {
    require(f.count >= 0, "angle_integral: negative count");
    m += f.count;
  }
  const int n_Lambda = std::abs(fourier_j) + cos_power + m + 1;
  const int n_lambda = m + 1;
  double log_abs_mean = 0.0;
  const auto mean = numerics::periodic_log_mean(
      n_Lambda, n_lambda,
      [&](double L, double l) {
        const double c = std::cos(L);
        LogWeight w = LogWeight::from_value(std::cos(fourier_j * L));
        if (cos_power > 0) w *= LogWeight::from_value(c).pow(cos_power);
        if (w.sign == 0) return w;
        return w * channel_product(L, l, factors);
      },
      &log_abs_mean);
  const bool ill = mean.sign == 0 ? std::isfinite(log_abs_mean)
                                  : mean.log_magnitude < log_abs_mean + kLogConditionLimit;
  if (ill)
    if (auto exact = exact_real_lattice(fourier_j, cos_power, factors)) return *exact;
  return mean;
}

} // namespace fockgauge
