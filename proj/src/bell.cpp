#include "fockgauge/bell.hpp"

#include <cmath>
#include <string>

namespace fockgauge::bell {

using numerics::ln_factorial;

namespace {

constexpr std::array<double, 4> kEta{+1.0, -1.0, +1.0, -1.0};

std::array<double, 4> phases(double zeta, double theta) { return {-zeta, -zeta, theta, theta}; }

void check(const BellSettings& s) {
  require(s.n_total >= 0 && s.n_total % 2 == 0, "bell: N must be even (N_alpha = N_beta = N/2)");
  require(s.m_measured >= 0 && s.m_measured <= s.n_total, "bell: need 0 <= M <= N");
}

void check(const BellSettings& s, const DetectionRecord& rec) {
  check(s);
  require(rec.counts.size() == 4, "bell: record must have four counts");
  for (int c : rec.counts) require(c >= 0, "bell: negative count");
  require(rec.total() == s.m_measured, "bell: counts must sum to M");
}

// log of 2^{N-2M} M! ((N/2)!)^2 / N!, the record-independent part of the prefactor.
double log_common_prefactor(int n, int m) {
  return (n - 2 * m) * std::numbers::ln2 + ln_factorial(m) + 2.0 * ln_factorial(n / 2) -
         ln_factorial(n);
}

// Signed multinomial weight (-1)^{m2+m4} M!/prod m_i! for every record, in enumeration order.
struct RecordTable {
  std::vector<std::array<int, 4>> counts;
  std::vector<double> weight;
};

RecordTable record_table(int m) {
  RecordTable t;
  for (const auto& r : modes::enumerate_records(4, m)) {
    std::array<int, 4> c{r.counts[0], r.counts[1], r.counts[2], r.counts[3]};
    double lw = ln_factorial(m);
    for (int x : c) lw -= ln_factorial(x);
    const double sign = ((c[1] + c[3]) % 2 == 0) ? 1.0 : -1.0;
    t.counts.push_back(c);
    t.weight.push_back(sign * std::exp(lw));
  }
  return t;
}

// sum_records weight * prod_i base_i^{m_i}; bases already scaled into [-1, 1].
double record_sum(const RecordTable& t, const std::array<double, 4>& base, int m,
                  std::vector<double>& scratch) {
  scratch.assign(4 * (m + 1), 1.0);
  for (int i = 0; i < 4; ++i)
    for (int k = 1; k <= m; ++k) scratch[i * (m + 1) + k] = scratch[i * (m + 1) + k - 1] * base[i];
  double sum = 0.0;
  for (std::size_t r = 0; r < t.counts.size(); ++r) {
    const auto& c = t.counts[r];
    sum += t.weight[r] * scratch[c[0]] * scratch[(m + 1) + c[1]] * scratch[2 * (m + 1) + c[2]] *
           scratch[3 * (m + 1) + c[3]];
  }
  return sum;
}

} // namespace

std::array<ChannelFactor, 4> channel_factors(double zeta, double theta, const DetectionRecord& rec) {
  const auto ph = phases(zeta, theta);
  std::array<ChannelFactor, 4> f;
  for (int i = 0; i < 4; ++i) f[i] = {rec.counts[i], kEta[i], ph[i]};
  return f;
}

double prob_bell(const BellSettings& s, const DetectionRecord& rec) {
  check(s, rec);
  const auto f = channel_factors(s.zeta, s.theta, rec);
  const LogWeight integral = angle_integral(0, s.n_total - s.m_measured, f);
  if (integral.sign == 0) return 0.0;
  double lp = log_common_prefactor(s.n_total, s.m_measured);
  for (int c : rec.counts) lp -= ln_factorial(c);
  return integral.sign * std::exp(lp + integral.log_magnitude);
}

AngleField integrand_field(const BellSettings& s, const DetectionRecord& rec,
                           const numerics::PeriodicGrid& grid) {
  check(s, rec);
  const auto f = channel_factors(s.zeta, s.theta, rec);
  std::string meta = "n=" + std::to_string(s.n_total) + " m=" + std::to_string(s.m_measured);
  for (int i = 0; i < 4; ++i) meta += " m" + std::to_string(i + 1) + "=" + std::to_string(rec.counts[i]);
  const int p = s.n_total - s.m_measured;
  return sample_field(
      grid,
      [&](double L, double l) {
        return LogWeight::from_value(std::cos(L)).pow(p) * channel_product(L, l, f);
      },
      meta);
}

double correlator(const BellSettings& s) {
  check(s);
  const int n = s.n_total, m = s.m_measured;
  const auto table = record_table(m);
  const auto ph = phases(s.zeta, s.theta);
  const int n_Lambda = n + 1, n_lambda = m + 1;
  const numerics::PeriodicGrid gL(n_Lambda, 1), gl(n_lambda, 1);
  std::vector<double> rows(n_Lambda);
  numerics::parallel_for(n_Lambda, [&](std::size_t a) {
    std::vector<double> scratch;
    const double c = std::cos(gL.node(static_cast<int>(a)));
    const double damp = numerics::ipow(c, n - m);
    double row = 0.0;
    for (int b = 0; b < n_lambda; ++b) {
      std::array<double, 4> base;
      for (int i = 0; i < 4; ++i) base[i] = 0.5 * (c + kEta[i] * std::cos(gl.node(b) - ph[i]));
      row += record_sum(table, base, m, scratch);
    }
    rows[a] = damp * row;
  });
  double sum = 0.0;
  for (double r : rows) sum += r;
  const double mean = sum / (static_cast<double>(n_Lambda) * n_lambda);
  // Scaling the bases by 1/2 removed 2^M; M! is inside the record weights.
  const double lp = log_common_prefactor(n, m) + m * std::numbers::ln2 - ln_factorial(m);
  return std::exp(lp) * mean;
}

double correlator_closed_form(int n, double zeta, double theta) {
  return numerics::ipow(std::cos(0.5 * (zeta + theta)), n);
}

double prob_bell_classical(int m_total, double zeta, double theta, const DetectionRecord& rec) {
  require(rec.counts.size() == 4 && rec.total() == m_total, "bell classical: counts must sum to M");
  const auto f = channel_factors(zeta, theta, rec);
  const double integral = numerics::integrate_periodic(
      [&](double l) { return channel_product(0.0, l, f).value(); }, m_total);
  double lp = ln_factorial(m_total) - m_total * std::log(4.0);
  for (int c : rec.counts) lp -= ln_factorial(c);
  return std::exp(lp) * integral;
}

double correlator_classical_sum(int m_total, double zeta, double theta) {
  require(m_total >= 0, "bell classical: negative M");
  const auto table = record_table(m_total);
  const auto ph = phases(zeta, theta);
  std::vector<double> scratch;
  const double mean = numerics::integrate_periodic(
      [&](double l) {
        std::array<double, 4> base;
        for (int i = 0; i < 4; ++i) base[i] = 0.5 * (1.0 + kEta[i] * std::cos(l - ph[i]));
        return record_sum(table, base, m_total, scratch);
      },
      m_total);
  // M!/4^M prod 1/m! with bases scaled by 1/2: the record weights carry M!/prod m!.
  return std::exp(-m_total * std::numbers::ln2) * mean;
}

double correlator_classical(int m_total, double zeta, double theta) {
  require(m_total >= 0 && m_total % 2 == 0, "correlator_classical: M must be even");
  const double lp = ln_factorial(m_total) - 2.0 * ln_factorial(m_total / 2) - m_total * std::numbers::ln2;
  return std::exp(lp) * numerics::ipow(std::cos(0.5 * (zeta + theta)), m_total);
}

double chsh_combination(const std::function<double(double, double)>& e, double zeta,
                        double zeta_p, double theta, double theta_p) {
  return e(zeta, theta) + e(zeta, theta_p) + e(zeta_p, theta) - e(zeta_p, theta_p);
}

double chsh_q(int n, double xi) {
  require(n >= 1, "chsh_q: n must be >= 1");
  return 3.0 * numerics::ipow(std::cos(xi), n) - numerics::ipow(std::cos(3.0 * xi), n);
}

ChshOptimum maximize_q(const std::function<double(double)>& e, int n_hint) {
  const int scan = std::max(64, 16 * static_cast<int>(std::ceil(std::sqrt(std::max(1, n_hint)))));
  const auto r = numerics::maximize_scalar([&](double xi) { return 3.0 * e(xi) - e(3.0 * xi); },
                                           0.0, numerics::kPi / 2, 1e-8, scan);
  return {r.argmax, r.max};
}

ChshOptimum maximize_chsh(int n) {
  require(n >= 1, "maximize_chsh: n must be >= 1");
  return maximize_q([n](double xi) { return numerics::ipow(std::cos(xi), n); }, n);
}

ChshOptimum maximize_chsh_lossy(int n) {
  require(n >= 2 && n % 2 == 0, "maximize_chsh_lossy: N must be even and >= 2");
  // phi_a - phi_b = (zeta + theta)/2, so E(xi) is the correlator at zeta = 2 xi, theta = 0.
  return maximize_q([n](double xi) { return correlator({2.0 * xi, 0.0, n, n - 1}); }, n);
}

NormalizationPoint normalization_diagnostic(int m_total, double zeta, double theta, double Lambda,
                                            double lambda) {
  require(m_total == 2, "normalization_diagnostic: only M = 2 is defined");
  const auto ph = phases(zeta, theta);
  const double c = std::cos(Lambda);
  NormalizationPoint out;
  for (const auto& r : modes::enumerate_records(4, m_total)) {
    double qu = 1.0, cl = 1.0, fact = 1.0;
    for (int i = 0; i < 4; ++i) {
      const double d = kEta[i] * std::cos(lambda - ph[i]);
      qu *= numerics::ipow(c + d, r.counts[i]);
      cl *= numerics::ipow(1.0 + d, r.counts[i]);
      fact *= std::tgamma(r.counts[i] + 1.0);
    }
    out.l_qu += qu / fact;
    out.l_cl += cl / fact;
  }
  return out;
}

} // namespace fockgauge::bell
