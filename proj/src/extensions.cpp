#include "fockgauge/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

namespace fockgauge::extensions {

using numerics::ExactRational;
using numerics::FactorialTerm;
using numerics::ln_factorial;
using numerics::LogWeight;

namespace {

void check_side(const DoubleFock& src, int m_total, int m_alpha, int m_beta) {
  require(src.n_alpha >= 0 && src.n_beta >= 0, "negative source population");
  require(m_total >= 0 && m_alpha >= 0 && m_beta >= 0, "negative count");
  require(m_total + m_alpha + m_beta == src.total(), "need M + m_alpha + m_beta = N");
}

} // namespace

double prob_no_phase(const DoubleFock& src, int m_total, int m_alpha, int m_beta) {
  check_side(src, m_total, m_alpha, m_beta);
  double s = 0.0;
  for (int m1 = 0; m1 <= m_total; ++m1)
    s += poposc::po_prob_sum(src, {m1, m_total - m1, m_alpha, m_beta});
  return s;
}

double prob_no_phase_printed(const DoubleFock& src, int m_total, int m_alpha, int m_beta) {
  check_side(src, m_total, m_alpha, m_beta);
  const int two_p = src.n_alpha - m_alpha - src.n_beta + m_beta;
  if (two_p % 2 != 0) return 0.0;
  const int p = two_p / 2, n = src.total();
  if (p < 0 || n - p < 0) return 0.0;
  const double lp = ln_factorial(src.n_alpha) + ln_factorial(src.n_beta) - ln_factorial(m_alpha) -
                    ln_factorial(m_beta) - (n - m_total) * std::numbers::ln2 + ln_factorial(m_total) -
                    ln_factorial(p) - ln_factorial(n - p);
  return std::exp(lp);
}

double prob_no_phase_derived(const DoubleFock& src, int m_total, int m_alpha, int m_beta) {
  check_side(src, m_total, m_alpha, m_beta);
  if (m_alpha > src.n_alpha || m_beta > src.n_beta) return 0.0;
  return std::exp(numerics::ln_binomial(src.n_alpha, m_alpha) + numerics::ln_binomial(src.n_beta, m_beta) -
                  src.total() * std::numbers::ln2);
}

double prob_no_population(const DoubleFock& src, int m_total, int m1) {
  require(m1 >= 0 && m1 <= m_total && m_total <= src.total(), "prob_no_population: need m1 <= M <= N");
  return poposc::marginal_interference(src, m1, m_total - m1);
}

double loss_dressed_prob(const DoubleFock& src, int lost, double transmission, const PoOutcome& out) {
  require(transmission > 0.0 && transmission <= 1.0, "loss: transmission must lie in (0, 1]");
  require(lost >= 0 && out.total() + lost == src.total(), "loss: detected + lost must equal N");
  require(out.m1 >= 0 && out.m2 >= 0 && out.m_alpha >= 0 && out.m_beta >= 0, "loss: negative count");
  const double r = 1.0 - transmission;
  if (lost > 0 && r == 0.0) return 0.0;
  const int n = src.total();
  const int j = src.n_alpha - out.m_alpha - src.n_beta + out.m_beta;
  const ChannelFactor f[] = {{out.m1, +1.0, 0.0}, {out.m2, -1.0, 0.0}};
  const LogWeight integral = angle_integral(j, lost, f);
  if (integral.sign == 0) return 0.0;
  const double lp = ln_factorial(src.n_alpha) + ln_factorial(src.n_beta) +
                    (n - lost) * std::log(transmission) + (lost > 0 ? lost * std::log(r) : 0.0) -
                    ln_factorial(out.m1) - ln_factorial(out.m2) - ln_factorial(out.m_alpha) -
                    ln_factorial(out.m_beta) - (n - 2 * lost) * std::numbers::ln2 - ln_factorial(lost);
  return integral.sign * std::exp(lp + integral.log_magnitude);
}

int loss_stratum_cap(int n_detected, double transmission) {
  return static_cast<int>(std::ceil(10.0 * (1.0 - transmission) * n_detected)) + 64;
}

LossResult po_with_losses(int n_detected, int m1, int m2, double transmission) {
  require(transmission > 0.0 && transmission <= 1.0, "po_with_losses: transmission must lie in (0, 1]");
  require(n_detected >= 0 && n_detected % 2 == 0, "po_with_losses: N_D must be even (equal mean sources)");
  require(m1 >= 0 && m2 >= 0 && m1 + m2 <= n_detected, "po_with_losses: need m1 + m2 <= N_D");
  const double r = 1.0 - transmission;
  const int m = m1 + m2, side = n_detected - m, half = n_detected / 2;
  const int cap = r == 0.0 ? 0 : loss_stratum_cap(n_detected, transmission);

  // One Lambda grid exact for every stratum: degree |j| + M_L + M <= side + 2 cap + M.
  const int n_grid = n_detected + 2 * cap + 1;
  const numerics::PeriodicGrid grid(n_grid, 1);
  const auto nodes = grid.nodes();
  const auto d = poposc::d_of_lambda_profile(m1, m, nodes);  // D(Lambda)/2^M
  std::vector<double> cosl(n_grid);
  for (int k = 0; k < n_grid; ++k) cosl[k] = std::cos(nodes[k]);
  const int j_max = side + cap;
  std::vector<double> cos_table(static_cast<std::size_t>(j_max + 1) * n_grid);
  for (int jj = 0; jj <= j_max; ++jj)
    for (int k = 0; k < n_grid; ++k) cos_table[static_cast<std::size_t>(jj) * n_grid + k] = std::cos(jj * nodes[k]);

  LossResult res;
  res.slice = {m1, m2, half, half, {}, std::vector<double>(side + 1, 0.0)};
  for (int ma = 0; ma <= side; ++ma) res.slice.m_alpha.push_back(ma);
  double total = 0.0, weighted = 0.0;
  std::vector<double> g(n_grid);
  for (int lost = 0; lost <= cap; ++lost) {
    for (int k = 0; k < n_grid; ++k) g[k] = numerics::ipow(cosl[k], lost) * d[k];
    std::vector<double> stratum_slice(side + 1, 0.0);
    numerics::parallel_for(side + 1, [&](std::size_t idx) {
      const int ma = static_cast<int>(idx), mb = side - ma;
      double acc = 0.0;
      for (int da = 0; da <= lost; ++da) {
        const int na = half + da, nb = half + lost - da, n = n_detected + lost;
        if (ma > na || mb > nb) continue;
        const int j = std::abs(na - ma - nb + mb);
        const double* cj = &cos_table[static_cast<std::size_t>(j) * n_grid];
        double s = 0.0;
        for (int k = 0; k < n_grid; ++k) s += cj[k] * g[k];
        s /= n_grid;
        if (s == 0.0) continue;
        const double lp = ln_factorial(na) + ln_factorial(nb) + (n - lost) * std::log(transmission) +
                          (lost > 0 ? lost * std::log(r) : 0.0) - ln_factorial(m1) - ln_factorial(m2) -
                          ln_factorial(ma) - ln_factorial(mb) - (n - 2 * lost) * std::numbers::ln2 -
                          ln_factorial(lost) + m * std::numbers::ln2;
        acc += std::exp(lp) * s;
      }
      stratum_slice[idx] = acc;
    });
    double w = 0.0;
    for (int k = 0; k <= side; ++k) {
      res.slice.prob[k] += stratum_slice[k];
      w += stratum_slice[k];
    }
    res.stratum_weight.push_back(w);
    total += w;
    weighted += lost * w;
    res.strata_used = lost + 1;
    // Stop once past the bulk and the stratum is negligible.
    if (lost > 0 && w < 1e-12 * total && w <= res.stratum_weight[lost - 1]) break;
  }
  res.mean_lost = total > 0.0 ? weighted / total : 0.0;
  for (double& w : res.stratum_weight) w /= total;
  return res;
}

LogWeight parity_landscape_value(int m_total, Parity parity, double Lambda, double lambda) {
  numerics::SignedLogSum sum;
  for (int m1 = (parity == Parity::odd ? 1 : 0); m1 <= m_total; m1 += 2) {
    const int m2 = m_total - m1;
    auto v = poposc::f_value(m1, m2, Lambda, lambda);
    if (v.sign == 0) continue;
    v.log_magnitude -= ln_factorial(m1) + ln_factorial(m2);
    sum.add(v);
  }
  return sum.total();
}

ParityResult parity_selected_field(const DoubleFock& src, int m_total, Parity parity,
                                   const numerics::PeriodicGrid& grid) {
  require(m_total >= 1 && m_total <= src.total(), "parity_selected_field: need 1 <= M <= N");
  ParityResult res;
  res.landscape = sample_field(
      grid, [&](double L, double l) { return parity_landscape_value(m_total, parity, L, l); },
      "M=" + std::to_string(m_total) + (parity == Parity::odd ? " odd" : " even"));
  const int side = src.total() - m_total;
  res.pattern = {-1, -1, src.n_alpha, src.n_beta, {}, std::vector<double>(side + 1, 0.0)};
  for (int ma = 0; ma <= side; ++ma) res.pattern.m_alpha.push_back(ma);
  for (int m1 = (parity == Parity::odd ? 1 : 0); m1 <= m_total; m1 += 2) {
    const auto s = poposc::po_slice(src, m1, m_total - m1);
    for (int k = 0; k <= side; ++k) res.pattern.prob[k] += s.prob[k];
  }
  return res;
}

namespace {

void check_double(const DoubleFock& src, const Record4& rec, int m_alpha, int m_beta) {
  require(src.n_alpha >= 0 && src.n_beta >= 0, "double-po: negative source population");
  int m = 0;
  for (int c : rec) {
    require(c >= 0, "double-po: negative count");
    m += c;
  }
  require(m_alpha >= 0 && m_beta >= 0, "double-po: negative side count");
  require(m + m_alpha + m_beta == src.total(), "double-po: m1+..+m4+m_alpha+m_beta must equal N");
}

std::array<ChannelFactor, 4> double_factors(const Record4& rec, double zeta, double theta) {
  // cos(lambda + phi_i) with phi = (-zeta, -zeta, theta, theta).
  return {{{rec[0], +1.0, zeta}, {rec[1], -1.0, zeta}, {rec[2], +1.0, -theta}, {rec[3], -1.0, -theta}}};
}

} // namespace

LogWeight double_landscape_value(const Record4& rec, double zeta, double theta, double Lambda,
                                 double lambda) {
  const auto f = double_factors(rec, zeta, theta);
  return channel_product(Lambda, lambda, f);
}

AngleField double_landscape(const Record4& rec, double zeta, double theta,
                            const numerics::PeriodicGrid& grid) {
  const auto f = double_factors(rec, zeta, theta);
  return sample_field(grid, [&](double L, double l) { return channel_product(L, l, f); },
                      "m=" + std::to_string(rec[0]) + "," + std::to_string(rec[1]) + "," +
                          std::to_string(rec[2]) + "," + std::to_string(rec[3]));
}

double po_double_integral(const DoubleFock& src, const Record4& rec, int m_alpha, int m_beta,
                          double zeta, double theta) {
  check_double(src, rec, m_alpha, m_beta);
  const auto f = double_factors(rec, zeta, theta);
  const int j = src.n_alpha - src.n_beta - m_alpha + m_beta;
  const LogWeight integral = angle_integral(j, 0, f);
  if (integral.sign == 0) return 0.0;
  const int m = rec[0] + rec[1] + rec[2] + rec[3];
  double lp = ln_factorial(src.n_alpha) + ln_factorial(src.n_beta) - ln_factorial(m_alpha) -
              ln_factorial(m_beta) - (src.total() + m) * std::numbers::ln2;
  for (int c : rec) lp -= ln_factorial(c);
  return integral.sign * std::exp(lp + integral.log_magnitude);
}

double po_double_interferometer(const DoubleFock& src, const Record4& rec, int m_alpha, int m_beta,
                                double zeta, double theta) {
  check_double(src, rec, m_alpha, m_beta);
  const int a = src.n_alpha - m_alpha;  // alpha quanta reaching the interferometers
  if (a < 0 || src.n_beta - m_beta < 0) return 0.0;
  const int m1 = rec[0], m2 = rec[1], m3 = rec[2], m4 = rec[3];
  // S = sum_s e^{-i(zeta+theta)s} c_s B_s, s = p3 + p4; both brackets exact.
  std::vector<LogWeight> t;
  std::vector<int> s_of;
  for (int s = 0; s <= m3 + m4; ++s) {
    std::vector<FactorialTerm> outer, inner;
    for (int p3 = std::max(0, s - m4); p3 <= std::min(m3, s); ++p3) {
      const int p4 = s - p3;
      outer.push_back({p4 % 2 == 0 ? 1 : -1, {p3, m3 - p3, p4, m4 - p4}});
    }
    for (int p2 = 0; p2 <= m2; ++p2) {
      const int k1 = a - s - p2;
      if (k1 < 0 || m1 - k1 < 0) continue;
      inner.push_back({p2 % 2 == 0 ? 1 : -1, {p2, m2 - p2, k1, m1 - k1}});
    }
    if (outer.empty() || inner.empty()) continue;
    const ExactRational c = numerics::exact_reciprocal_factorial_sum(outer) *
                            numerics::exact_reciprocal_factorial_sum(inner);
    if (c == 0) continue;
    t.push_back(numerics::to_log_weight(c));
    s_of.push_back(s);
  }
  if (t.empty()) return 0.0;
  double top = t[0].log_magnitude;
  for (const auto& w : t) top = std::max(top, w.log_magnitude);
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t k = 0; k < t.size(); ++k)
    sum += t[k].sign * std::exp(t[k].log_magnitude - top) * std::polar(1.0, -(zeta + theta) * s_of[k]);
  const double mag2 = std::norm(sum);
  if (mag2 == 0.0) return 0.0;
  const int m = m1 + m2 + m3 + m4;
  double lp = ln_factorial(src.n_alpha) + ln_factorial(src.n_beta) - ln_factorial(m_alpha) -
              ln_factorial(m_beta) - (src.total() + 2 * m) * std::numbers::ln2;
  for (int c : rec) lp += ln_factorial(c);
  return std::exp(lp + 2.0 * top + std::log(mag2));
}

PoDistribution po_double_slice(const DoubleFock& src, const Record4& rec, double zeta, double theta) {
  const int m = rec[0] + rec[1] + rec[2] + rec[3];
  require(m <= src.total(), "po_double_slice: M exceeds N");
  const int side = src.total() - m;
  PoDistribution d{-1, -1, src.n_alpha, src.n_beta, {}, std::vector<double>(side + 1)};
  for (int ma = 0; ma <= side; ++ma) d.m_alpha.push_back(ma);
  numerics::parallel_for(side + 1, [&](std::size_t k) {
    d.prob[k] = po_double_interferometer(src, rec, static_cast<int>(k), side - static_cast<int>(k), zeta, theta);
  });
  return d;
}

} // namespace fockgauge::extensions
