#include "fockgauge/poposc.hpp"

#include <cmath>
#include <string>

namespace fockgauge::poposc {

using numerics::ln_factorial;

namespace {

void check(const DoubleFock& src, const PoOutcome& out) {
  require(src.n_alpha >= 0 && src.n_beta >= 0, "po: negative source population");
  require(out.m1 >= 0 && out.m2 >= 0 && out.m_alpha >= 0 && out.m_beta >= 0, "po: negative count");
  require(out.total() == src.total(), "po: m1 + m2 + m_alpha + m_beta must equal N");
}

} // namespace

double po_prob_sum(const DoubleFock& src, const PoOutcome& out) {
  check(src, out);
  const int a = src.n_alpha - out.m_alpha;  // alpha quanta that reach the central splitter
  if (a < 0 || src.n_beta - out.m_beta < 0) return 0.0;
  std::vector<numerics::FactorialTerm> terms;
  for (int p = 0; p <= out.m1; ++p) {
    const std::vector<int> args{p, out.m1 - p, a - p, p + out.m2 - a};
    bool ok = true;
    for (int x : args) ok = ok && x >= 0;
    if (ok) terms.push_back({p % 2 == 0 ? 1 : -1, args});
  }
  if (terms.empty()) return 0.0;
  const auto bracket = numerics::exact_reciprocal_factorial_sum(terms);
  if (bracket == 0) return 0.0;
  const int m = out.m1 + out.m2;
  const double lp = ln_factorial(out.m1) + ln_factorial(out.m2) + ln_factorial(src.n_alpha) +
                    ln_factorial(src.n_beta) - ln_factorial(out.m_alpha) - ln_factorial(out.m_beta) -
                    (m + src.total()) * std::numbers::ln2;
  return std::exp(lp + 2.0 * numerics::log_abs(bracket));
}

double po_prob_integral(const DoubleFock& src, const PoOutcome& out) {
  check(src, out);
  const int j = src.n_alpha - out.m_alpha - src.n_beta + out.m_beta;
  const ChannelFactor f[] = {{out.m1, +1.0, 0.0}, {out.m2, -1.0, 0.0}};
  const LogWeight integral = angle_integral(j, 0, f);
  if (integral.sign == 0) return 0.0;
  const double lp = ln_factorial(src.n_alpha) + ln_factorial(src.n_beta) - ln_factorial(out.m1) -
                    ln_factorial(out.m2) - ln_factorial(out.m_alpha) - ln_factorial(out.m_beta) -
                    src.total() * std::numbers::ln2;
  return integral.sign * std::exp(lp + integral.log_magnitude);
}

PoDistribution po_slice(const DoubleFock& src, int m1, int m2, bool renormalize) {
  require(m1 >= 0 && m2 >= 0 && m1 + m2 <= src.total(), "po_slice: need m1 + m2 <= N");
  const int side = src.total() - m1 - m2;
  PoDistribution d{m1, m2, src.n_alpha, src.n_beta, {}, {}};
  d.m_alpha.resize(side + 1);
  d.prob.resize(side + 1);
  numerics::parallel_for(side + 1, [&](std::size_t k) {
    const int ma = static_cast<int>(k);
    d.m_alpha[k] = ma;
    d.prob[k] = po_prob_sum(src, {m1, m2, ma, side - ma});
  });
  if (renormalize) {
    double s = 0.0;
    for (double p : d.prob) s += p;
    if (s > 0.0)
      for (double& p : d.prob) p /= s;
  }
  return d;
}

LogWeight f_value(int m1, int m2, double Lambda, double lambda) {
  const ChannelFactor f[] = {{m1, +1.0, 0.0}, {m2, -1.0, 0.0}};
  return channel_product(Lambda, lambda, f);
}

AngleField f_field(int m1, int m2, const numerics::PeriodicGrid& grid) {
  require(m1 >= 0 && m2 >= 0, "f_field: counts must be nonnegative");
  return sample_field(grid, [&](double L, double l) { return f_value(m1, m2, L, l); },
                      "m1=" + std::to_string(m1) + " m2=" + std::to_string(m2));
}

std::vector<PeakPoint> f_peaks(int m1, int m2) {
  require(m1 >= 1 && m2 >= 1, "f_peaks: m1 and m2 must both be >= 1");
  const double a = 2.0 * std::atan(std::sqrt(static_cast<double>(m2) / m1));
  const double b = 2.0 * std::atan(std::sqrt(static_cast<double>(m1) / m2));
  const int s_lambda0 = m2 % 2 == 0 ? 1 : -1;
  const int s_lambdapi = m1 % 2 == 0 ? 1 : -1;
  const double pi = numerics::kPi;
  return {{0.0, a, 1},          {0.0, -a, 1},
          {a, 0.0, s_lambda0},  {-a, 0.0, s_lambda0},
          {b, pi, s_lambdapi},  {-b, pi, s_lambdapi},
          {b, -pi, s_lambdapi}, {-b, -pi, s_lambdapi}};
}

bool is_local_max_abs_f(int m1, int m2, const PeakPoint& p, double h, int k) {
  const auto centre = f_value(m1, m2, p.Lambda, p.lambda);
  if (centre.sign != p.sign) return false;
  for (int i = -k; i <= k; ++i)
    for (int j = -k; j <= k; ++j) {
      if (i == 0 && j == 0) continue;
      const auto v = f_value(m1, m2, p.Lambda + h * i / k, p.lambda + h * j / k);
      if (v.sign != 0 && v.log_magnitude > centre.log_magnitude + 1e-12) return false;
    }
  return true;
}

std::vector<double> d_of_lambda_profile(int m1, int m_total, std::span<const double> Lambdas) {
  require(m1 >= 0 && m1 <= m_total, "d_of_lambda_profile: need 0 <= m1 <= M");
  const int m2 = m_total - m1;
  const int n = m_total + 1;
  const numerics::PeriodicGrid g(n, 1);
  std::vector<double> out(Lambdas.size());
  numerics::parallel_for(Lambdas.size(), [&](std::size_t k) {
    const double c = std::cos(Lambdas[k]);
    double s = 0.0;
    for (int b = 0; b < n; ++b) {
      const double d = std::cos(g.node(b));
      s += numerics::ipow(0.5 * (c + d), m1) * numerics::ipow(0.5 * (c - d), m2);
    }
    out[k] = s / n;
  });
  return out;
}

double p_class_lambda(int m1, int m_total, int n_total, double lambda) {
  require(m1 >= 0 && m1 <= m_total && m_total <= n_total, "p_class: need 0 <= m1 <= M <= N");
  static thread_local int cached_n = -1;
  static thread_local numerics::QuadratureRule rule;
  const int n = 2 * n_total + 32;
  if (n != cached_n) {
    rule = numerics::gauss_legendre(n, -numerics::kPi / 2, numerics::kPi / 2);
    cached_n = n;
  }
  const int m2 = m_total - m1;
  const double d = std::cos(lambda);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double c = std::cos(rule.nodes[i]);
    s += rule.weights[i] * numerics::ipow(c, n_total - m_total) * numerics::ipow(0.5 * (c + d), m1) *
         numerics::ipow(0.5 * (c - d), m2);
  }
  return s / numerics::kTwoPi;
}

std::vector<double> p_class_profile(int m1, int m_total, int n_total, std::span<const double> lambdas) {
  std::vector<double> out(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) out[k] = p_class_lambda(m1, m_total, n_total, lambdas[k]);
  return out;
}

double p_class_peak(int m1, int m_total, int n_total) {
  // The quantum-region ridges also lift p_class at lambda = 0 and pi; the phase peak is the
  // largest strictly interior local maximum.
  const int scan = 512;
  const double h = numerics::kPi / scan;
  std::vector<double> v(scan + 1);
  for (int k = 0; k <= scan; ++k) v[k] = p_class_lambda(m1, m_total, n_total, k * h);
  int best = -1;
  for (int k = 1; k < scan; ++k)
    if (v[k] > v[k - 1] && v[k] >= v[k + 1] && (best < 0 || v[k] > v[best])) best = k;
  require(best > 0, "p_class_peak: no interior peak");
  return numerics::maximize_scalar([&](double l) { return p_class_lambda(m1, m_total, n_total, l); },
                                   (best - 1) * h, (best + 1) * h, 1e-10)
      .argmax;
}

double marginal_interference(const DoubleFock& src, int m1, int m2) {
  require(m1 >= 0 && m2 >= 0 && m1 + m2 <= src.total(), "marginal_interference: need m1 + m2 <= N");
  const int m = m1 + m2, side = src.total() - m;
  const ChannelFactor f[] = {{m1, +1.0, 0.0}, {m2, -1.0, 0.0}};
  const LogWeight integral = angle_integral(src.n_alpha - src.n_beta, side, f);
  if (integral.sign == 0) return 0.0;
  const double lp = ln_factorial(src.n_alpha) + ln_factorial(src.n_beta) - ln_factorial(m1) -
                    ln_factorial(m2) - ln_factorial(side) - m * std::numbers::ln2;
  return integral.sign * std::exp(lp + integral.log_magnitude);
}

double classical_interference(int m1, int m2) {
  require(m1 >= 0 && m2 >= 0, "classical_interference: counts must be nonnegative");
  const int m = m1 + m2;
  // (1 + cos)^{m1} (1 - cos)^{m2} / 2^M = cos^{2 m1}(l/2) sin^{2 m2}(l/2).
  const double integral = numerics::integrate_periodic(
      [&](double l) {
        return numerics::ipow(0.5 * (1.0 + std::cos(l)), m1) * numerics::ipow(0.5 * (1.0 - std::cos(l)), m2);
      },
      m);
  return std::exp(numerics::ln_binomial(m, m1)) * integral;
}

double cat_envelope(int m1, int m2, double phi) {
  require(m1 >= 0 && m2 >= 0, "cat_envelope: counts must be nonnegative");
  return numerics::ipow(std::cos(0.5 * phi), m1) * numerics::ipow(std::sin(0.5 * phi), m2);
}

double cat_peak(int m1, int m2) {
  require(m1 >= 0 && m2 >= 0 && m1 + m2 >= 1, "cat_peak: need m1 + m2 >= 1");
  if (m1 == 0) return numerics::kPi;
  return 2.0 * std::atan(std::sqrt(static_cast<double>(m2) / m1));
}

double cosine_transform(std::span<const double> Lambdas, std::span<const double> weights, int j) {
  require(Lambdas.size() == weights.size(), "cosine_transform: size mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < Lambdas.size(); ++k) s += weights[k] * std::cos(j * Lambdas[k]);
  return s;
}

} // namespace fockgauge::poposc
