#include "fockgauge/modes.hpp"

#include <cmath>

namespace fockgauge::modes {

using numerics::ln_binomial;
using numerics::ipow;
using numerics::ln_factorial;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const Complex kI{0.0, 1.0};
} // namespace

ModeNetwork::Isometry ModeNetwork::isometry_sums() const {
  Isometry s{0.0, 0.0, {0.0, 0.0}};
  for (const auto& r : rows) {
    s.norm_alpha += std::norm(r.v_alpha);
    s.norm_beta += std::norm(r.v_beta);
    s.overlap += std::conj(r.v_alpha) * r.v_beta;
  }
  return s;
}

int DetectionRecord::total() const {
  int t = 0;
  for (int c : counts) t += c;
  return t;
}

ModeNetwork network_single() {
  return {{{kInvSqrt2, kI * kInvSqrt2, "a1"}, {kI * kInvSqrt2, kInvSqrt2, "a2"}}};
}

ModeNetwork network_double(double zeta, double theta) {
  const Complex ez = std::polar(1.0, zeta), et = std::polar(1.0, theta);
  return {{{0.5 * kI * ez, 0.5 * kI, "a1"},
           {-0.5 * ez, 0.5, "a2"},
           {0.5 * kI, 0.5 * kI * et, "a3"},
           {0.5, -0.5 * et, "a4"}}};
}

ModeNetwork network_po() {
  return {{{0.5, 0.5 * kI, "a1"},
           {0.5 * kI, 0.5, "a2"},
           {kInvSqrt2, 0.0, "a_alpha"},
           {0.0, kInvSqrt2, "a_beta"}}};
}

ModeNetwork network_double_po(double zeta, double theta) {
  auto net = network_double(zeta, theta);
  for (auto& r : net.rows) {
    r.v_alpha *= kInvSqrt2;
    r.v_beta *= kInvSqrt2;
  }
  net.rows.push_back({kInvSqrt2, 0.0, "a_alpha"});
  net.rows.push_back({0.0, kInvSqrt2, "a_beta"});
  return net;
}

Complex phase_state_factor(const NetworkRow& row, double phi) {
  return row.v_alpha + row.v_beta * std::polar(1.0, phi);
}

namespace {

// Sum over k_i in [0, m_i] with sum k_i == target of prod C(m_i,k_i) va^k vb^(m-k).
Complex expand(const ModeNetwork& net, const std::vector<int>& m, std::size_t i, int target) {
  if (i == m.size()) return target == 0 ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
  int rest = 0;
  for (std::size_t j = i + 1; j < m.size(); ++j) rest += m[j];
  Complex sum{0.0, 0.0};
  const auto& row = net.rows[i];
  for (int k = std::max(0, target - rest); k <= std::min(m[i], target); ++k) {
    const Complex sub = expand(net, m, i + 1, target - k);
    if (sub == Complex{0.0, 0.0}) continue;
    const double binom = std::exp(ln_binomial(m[i], k));
    sum += binom * ipow(row.v_alpha, k) * ipow(row.v_beta, m[i] - k) * sub;
  }
  return sum;
}

} // namespace

Complex amplitude_bruteforce(const ModeNetwork& net, const DoubleFock& src,
                             const DetectionRecord& rec, int cap) {
  require(src.n_alpha >= 0 && src.n_beta >= 0, "amplitude_bruteforce: negative source population");
  require(rec.counts.size() == net.channel_count(),
          "amplitude_bruteforce: record length must match network channels");
  for (int c : rec.counts) require(c >= 0, "amplitude_bruteforce: negative count");
  require(rec.total() == src.total(), "amplitude_bruteforce: sum of counts must equal N");
  require(src.total() <= cap, "amplitude_bruteforce: N exceeds oracle cap");
  double log_pref = ln_factorial(src.n_alpha) + ln_factorial(src.n_beta);
  for (int c : rec.counts) log_pref -= ln_factorial(c);
  return std::exp(0.5 * log_pref) * expand(net, rec.counts, 0, src.n_alpha);
}

std::vector<DetectionRecord> enumerate_records(int channels, int total) {
  require(channels >= 1, "enumerate_records: need at least one channel");
  require(total >= 0, "enumerate_records: negative total");
  std::vector<DetectionRecord> out;
  std::vector<int> cur(channels, 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == channels - 1) {
      cur[i] = left;
      out.push_back({cur});
      return;
    }
    for (int c = 0; c <= left; ++c) {
      cur[i] = c;
      self(self, i + 1, left - c);
    }
  };
  rec(rec, 0, total);
  return out;
}

} // namespace fockgauge::modes
