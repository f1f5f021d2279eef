#include "fockgauge/extensions.hpp"
#include "fockgauge/single_splitter.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace fockgauge;
using namespace fockgauge::extensions;
using numerics::kPi;

namespace {

// PO network behind a source-side splitter of transmission t; rows 5 and 6 collect the losses.
modes::ModeNetwork lossy_po(double t) {
  auto net = modes::network_po();
  for (auto& r : net.rows) {
    r.v_alpha *= std::sqrt(t);
    r.v_beta *= std::sqrt(t);
  }
  net.rows.push_back({std::sqrt(1 - t), 0.0, "a5"});
  net.rows.push_back({0.0, std::sqrt(1 - t), "a6"});
  return net;
}

double routed(const modes::ModeNetwork& net, modes::DoubleFock src, int lost, const PoOutcome& o) {
  double s = 0.0;
  for (int m5 = 0; m5 <= lost; ++m5)
    s += std::norm(oracle::fock_amplitude(net, src.n_alpha, src.n_beta, {o.m1, o.m2, o.m_alpha, o.m_beta, m5, lost - m5}));
  return s;
}

int local_minima(const std::vector<double>& p, std::size_t lo, std::size_t hi) {
  int n = 0;
  for (std::size_t k = lo; k <= hi; ++k)
    if (p[k] < p[k - 1] && p[k] < p[k + 1]) ++n;
  return n;
}

} // namespace

TEST_SUITE("extensions") {

TEST_CASE("no-phase examples") {
  CHECK(prob_no_phase({1, 1}, 0, 1, 1) == doctest::Approx(0.25));
  CHECK(prob_no_phase({1, 1}, 2, 0, 0) == doctest::Approx(0.25));
  CHECK(prob_no_phase_printed({1, 1}, 0, 1, 1) == doctest::Approx(0.125));
  CHECK_THROWS_AS(prob_no_phase({1, 1}, 1, 0, 0), PreconditionError);
}

TEST_CASE("no-phase law factorizes into two binomials") {
  for (int na = 0; na <= 6; ++na)
    for (int nb = 0; nb <= 6; ++nb)
      for (int ma = 0; ma <= na; ++ma)
        for (int mb = 0; mb <= nb; ++mb) {
          const int m = na + nb - ma - mb;
          const double binoms = std::exp(numerics::ln_binomial(na, ma) + numerics::ln_binomial(nb, mb) -
                                         (na + nb) * std::log(2.0));
          CHECK(std::abs(prob_no_phase({na, nb}, m, ma, mb) - binoms) <= 1e-12);
          CHECK(std::abs(prob_no_phase_derived({na, nb}, m, ma, mb) - binoms) <= 1e-12);
        }
}

TEST_CASE("no-population law") {
  for (auto src : std::vector<modes::DoubleFock>{{10, 10}, {6, 9}})
    for (int m = 1; m <= 8; ++m)
      for (int m1 = 0; m1 <= m; ++m1)
        CHECK(std::abs(prob_no_population(src, m, m1) - poposc::marginal_interference(src, m1, m - m1)) <= 1e-12);
  const modes::DoubleFock src{5, 6};
  for (int m1 = 0; m1 <= 11; ++m1)
    CHECK(prob_no_population(src, 11, m1) ==
          doctest::Approx(std::ldexp(single_splitter::prob_single(src, m1), -11)).epsilon(1e-10));
}

TEST_CASE("many undetected particles pinch Lambda to zero") {
  // outer lobe of |D| against the centre, after (cos Lambda)^200
  const double Ls[] = {0.0, 1.42};
  const auto d = poposc::d_of_lambda_profile(17, 40, Ls);
  const double ratio = std::abs(d[1]) * std::pow(std::cos(1.42), 200) / std::abs(d[0]);
  CHECK(ratio < 1e-6);
}

TEST_CASE("loss-dressed law matches per-particle routing") {
  for (double t : {0.7, 0.95})
    for (auto src : std::vector<modes::DoubleFock>{{2, 3}, {4, 4}}) {
      const auto net = lossy_po(t);
      for (int lost = 0; lost <= 3 && lost <= src.total(); ++lost)
        for (const auto& r : modes::enumerate_records(4, src.total() - lost)) {
          const PoOutcome o{r.counts[0], r.counts[1], r.counts[2], r.counts[3]};
          CHECK(std::abs(loss_dressed_prob(src, lost, t, o) - routed(net, src, lost, o)) <= 1e-12);
        }
    }
}

TEST_CASE("loss-dressed law is complete") {
  for (auto src : std::vector<modes::DoubleFock>{{8, 8}, {5, 9}}) {
    double total = 0.0;
    for (int lost = 0; lost <= src.total(); ++lost)
      for (const auto& r : modes::enumerate_records(4, src.total() - lost))
        total += loss_dressed_prob(src, lost, 0.8, {r.counts[0], r.counts[1], r.counts[2], r.counts[3]});
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("loss sum without losses is the plain slice") {
  const auto a = po_with_losses(40, 7, 13, 1.0);
  const auto b = poposc::po_slice({20, 20}, 7, 13);
  REQUIRE(a.slice.prob.size() == b.prob.size());
  for (std::size_t k = 0; k < b.prob.size(); ++k) CHECK(a.slice.prob[k] == doctest::Approx(b.prob[k]).epsilon(1e-10));
  CHECK(a.mean_lost == 0.0);
  CHECK_THROWS_AS(po_with_losses(40, 7, 13, 0.0), PreconditionError);
}

TEST_CASE("fast loss sum agrees with stratum-by-stratum evaluation") {
  const int nd = 20, m1 = 3, m2 = 5;
  const double t = 0.9;
  const auto fast = po_with_losses(nd, m1, m2, t);
  const int side = nd - m1 - m2;
  std::vector<double> slow(side + 1, 0.0);
  double total = 0.0, weighted = 0.0;
  for (int lost = 0; lost < fast.strata_used; ++lost) {
    double w = 0.0;
    for (int da = 0; da <= lost; ++da) {
      const modes::DoubleFock src{nd / 2 + da, nd / 2 + lost - da};
      for (int ma = 0; ma <= side; ++ma) {
        const int mb = side - ma;
        if (ma > src.n_alpha || mb > src.n_beta) continue;
        const double p = loss_dressed_prob(src, lost, t, {m1, m2, ma, mb});
        slow[ma] += p;
        w += p;
      }
    }
    total += w;
    weighted += lost * w;
  }
  for (int ma = 0; ma <= side; ++ma) CHECK(fast.slice.prob[ma] == doctest::Approx(slow[ma]).epsilon(1e-9));
  CHECK(fast.mean_lost == doctest::Approx(weighted / total).epsilon(1e-9));
}

TEST_CASE("loss visibility at 200 detected particles") {
  const auto erased = po_with_losses(200, 17, 83, 0.98);
  const auto& p = erased.slice.prob;
  CHECK(p[50] > p[49]);
  CHECK(p[50] > p[51]);
  CHECK(local_minima(p, 40, 60) == 0);

  const auto residual = po_with_losses(200, 17, 83, 0.99);
  CHECK(residual.slice.prob[50] < residual.slice.prob[49]);
  CHECK(residual.slice.prob[50] < residual.slice.prob[51]);

  const auto fine = po_with_losses(200, 17, 83, 0.997);
  CHECK(fine.slice.prob[50] < fine.slice.prob[49]);
  CHECK(local_minima(fine.slice.prob, 40, 60) >= 3);
}

TEST_CASE("parity-selected landscape has the binomial closed form") {
  for (int m : {5, 8, 20})
    for (double L : {0.0, 0.4, 1.3, 2.7})
      for (double l : {-2.2, 0.0, 0.9, 3.0}) {
        const double closed =
            (std::pow(2 * std::cos(L), m) - std::pow(-2 * std::cos(l), m)) / (2 * std::tgamma(m + 1.0));
        const double got = parity_landscape_value(m, Parity::odd, L, l).value();
        CHECK(got == doctest::Approx(closed).epsilon(1e-10).scale(std::pow(2.0, m) / std::tgamma(m + 1.0)));
        const double even = parity_landscape_value(m, Parity::even, L, l).value();
        CHECK(got + even == doctest::Approx(std::pow(2 * std::cos(L), m) / std::tgamma(m + 1.0))
                                .epsilon(1e-10)
                                .scale(std::pow(2.0, m) / std::tgamma(m + 1.0)));
      }
}

TEST_CASE("odd and even patterns partition the unconditioned distribution") {
  const modes::DoubleFock src{10, 10};
  const numerics::PeriodicGrid grid(8, 2);
  const auto odd = parity_selected_field(src, 10, Parity::odd, grid);
  const auto even = parity_selected_field(src, 10, Parity::even, grid);
  for (std::size_t k = 0; k < odd.pattern.prob.size(); ++k) {
    const int ma = odd.pattern.m_alpha[k];
    CHECK(odd.pattern.prob[k] + even.pattern.prob[k] ==
          doctest::Approx(prob_no_phase(src, 10, ma, 10 - ma)).epsilon(1e-10));
  }
}

TEST_CASE("odd parity selection: dark central fringe and a delocalized ridge") {
  const modes::DoubleFock src{20, 20};
  const numerics::PeriodicGrid grid(128, 2);
  const auto res = parity_selected_field(src, 20, Parity::odd, grid);
  const auto& p = res.pattern.prob;
  REQUIRE(p.size() == 21);
  CHECK(p[10] / p[9] < 1e-6);
  CHECK(p[10] / p[11] < 1e-6);
  // along Lambda = 0 the two classical peaks become a flat ridge
  const auto& f = res.landscape;
  const int a0 = grid.points_per_axis() / 2;
  REQUIRE(f.Lambda(a0) == 0.0);
  double top = 0.0;
  for (int b = 0; b < f.size(); ++b) top = std::max(top, std::abs(f.normalized(a0, b)));
  for (int b = 0; b < f.size(); ++b)
    if (std::abs(f.lambda(b)) > 0.5 && std::abs(f.lambda(b)) < kPi - 0.5) CHECK(std::abs(f.normalized(a0, b)) > 0.5 * top);
  // quantum-region support survives
  double quantum = 0.0;
  for (int a = 0; a < f.size(); ++a)
    if (std::abs(f.Lambda(a)) > kPi / 4)
      for (int b = 0; b < f.size(); ++b) quantum = std::max(quantum, std::abs(f.normalized(a, b)));
  CHECK(quantum > 0.1);
}

TEST_CASE("two-interferometer sum and integral forms agree with the oracle") {
  for (auto [z, t] : std::vector<std::pair<double, double>>{{0.0, 0.0}, {0.3, 2.9}, {-1.1, 0.6}}) {
    const auto net = modes::network_double_po(z, t);
    for (auto src : std::vector<modes::DoubleFock>{{2, 2}, {3, 2}, {3, 3}})
      for (const auto& r : modes::enumerate_records(6, src.total())) {
        const Record4 rec{r.counts[0], r.counts[1], r.counts[2], r.counts[3]};
        const double ref = std::norm(oracle::fock_amplitude(net, src.n_alpha, src.n_beta, r.counts));
        CHECK(std::abs(po_double_interferometer(src, rec, r.counts[4], r.counts[5], z, t) - ref) <= 1e-12);
        CHECK(std::abs(po_double_integral(src, rec, r.counts[4], r.counts[5], z, t) - ref) <= 1e-12);
      }
  }
}

TEST_CASE("two-interferometer forms agree up to N = 16") {
  const modes::DoubleFock src{8, 8};
  for (const auto& rec : std::vector<Record4>{{2, 3, 1, 2}, {1, 4, 0, 3}, {0, 0, 5, 3}, {2, 2, 2, 2}})
    for (double t : {0.0, 1.3, 2.9}) {
      const int side = 16 - (rec[0] + rec[1] + rec[2] + rec[3]);
      for (int ma = 0; ma <= side; ++ma) {
        const double s = po_double_interferometer(src, rec, ma, side - ma, 0.4, t);
        const double i = po_double_integral(src, rec, ma, side - ma, 0.4, t);
        CHECK(std::abs(s - i) <= 1e-9);
      }
    }
}

TEST_CASE("two-interferometer pattern for {2, 8, 1, 9}") {
  const modes::DoubleFock src{20, 20};
  const Record4 rec{2, 8, 1, 9};
  const auto dark = po_double_slice(src, rec, 0.0, 0.0);
  const std::size_t c = dark.prob.size() / 2;
  CHECK(dark.prob[c] <= 1e-14 * *std::max_element(dark.prob.begin(), dark.prob.end()));
  const auto dent = po_double_slice(src, rec, 0.0, 2.9);
  CHECK(dent.prob[c] > 1e-3 * dent.prob[c - 1]);
  CHECK(dent.prob[c] < dent.prob[c - 1]);
  CHECK(dent.prob[c] < dent.prob[c + 1]);
  const auto peak = po_double_slice(src, rec, 0.0, 2.5);
  CHECK(peak.prob[c] > peak.prob[c - 1]);
  CHECK(peak.prob[c] > peak.prob[c + 1]);
}

TEST_CASE("minority classical peak is second order in the quantum peak") {
  const Record4 rec{2, 8, 1, 9};
  std::vector<double> lx, ly;
  for (double t = 2.55; t <= 3.05 + 1e-9; t += 0.05) {
    // classical line Lambda = 0
    std::vector<double> line(4096);
    for (int k = 0; k < 4096; ++k) line[k] = double_landscape_value(rec, 0.0, t, 0.0, -kPi + 2 * kPi * k / 4096).value();
    std::vector<double> peaks;
    for (int k = 0; k < 4096; ++k) {
      const double a = line[(k + 4095) % 4096], b = line[k], d = line[(k + 1) % 4096];
      if (b > a && b >= d) peaks.push_back(b);
    }
    std::sort(peaks.rbegin(), peaks.rend());
    REQUIRE(peaks.size() >= 2);
    double quantum = 0.0;
    for (int a = 0; a < 200; ++a) {
      const double L = 0.3 + (kPi / 2 - 0.3) * a / 199;
      for (int k = 0; k < 512; ++k)
        quantum = std::min(quantum, double_landscape_value(rec, 0.0, t, L, -kPi + 2 * kPi * k / 512).value());
    }
    lx.push_back(std::log(-quantum / peaks[0]));
    ly.push_back(std::log(peaks[1] / peaks[0]));
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  // classical ~ w^2 against quantum ~ w: slopes 2 and 1
  CHECK(std::abs((slope - 1.0) - 1.0) <= 0.2);
}

}
