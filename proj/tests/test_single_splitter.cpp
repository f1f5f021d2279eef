#include "fockgauge/single_splitter.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace fockgauge;
using namespace fockgauge::single_splitter;
using numerics::kPi;

TEST_SUITE("single_splitter") {

TEST_CASE("r_of_phi examples") {
  CHECK(std::abs(r_of_phi(0, 0, 0, 1.234) - std::complex<double>(1.0, 0.0)) < 1e-15);
  for (double phi : {-2.0, 0.3, 1.9})
    CHECK(std::norm(r_of_phi(4, 7, 3, phi + 2 * kPi)) == doctest::Approx(std::norm(r_of_phi(4, 7, 3, phi))));
}

TEST_CASE("|R|^2 for (9, 23) peaks at pi/2 +- 1.12") {
  auto r2 = [](double phi) { return std::norm(r_of_phi(9, 23, 16, phi)); };
  const auto hi = numerics::maximize_scalar(r2, kPi / 2, 3 * kPi / 2, 1e-10);
  const auto lo = numerics::maximize_scalar(r2, -kPi / 2, kPi / 2, 1e-10);
  CHECK(hi.argmax - kPi / 2 == doctest::Approx(1.12).epsilon(0.01 / 1.12));
  CHECK(kPi / 2 - lo.argmax == doctest::Approx(1.12).epsilon(0.01 / 1.12));
  CHECK(hi.max == doctest::Approx(lo.max).epsilon(1e-10));
}

TEST_CASE("probability examples") {
  CHECK(prob_single({1, 1}, 1) == 0.0);
  CHECK(prob_single({1, 0}, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(prob_single({2, 2}, 5), PreconditionError);
  CHECK_THROWS_AS(prob_single({2, 2}, -1), PreconditionError);
}

TEST_CASE("agrees with the exact Krawtchouk law for N <= 12") {
  double worst = 0.0;
  for (int na = 0; na <= 6; ++na)
    for (int nb = 0; nb <= 6; ++nb)
      for (int m1 = 0; m1 <= na + nb; ++m1) {
        const double exact = oracle::single_splitter_exact(na, nb, m1).convert_to<double>();
        worst = std::max(worst, std::abs(prob_single({na, nb}, m1) - exact));
      }
  CHECK(worst <= 1e-10);
}

TEST_CASE("agrees with the Fock-space oracle") {
  const auto net = modes::network_single();
  for (int na = 0; na <= 6; ++na)
    for (int nb = 0; nb <= 6; ++nb)
      for (int m1 = 0; m1 <= na + nb; ++m1)
        CHECK(std::abs(prob_single({na, nb}, m1) -
                       std::norm(oracle::fock_amplitude(net, na, nb, {m1, na + nb - m1}))) <= 1e-10);
}

TEST_CASE("normalization up to N = 60") {
  for (auto src : std::vector<modes::DoubleFock>{{26, 24}, {30, 30}, {1, 59}, {0, 17}, {13, 2}}) {
    double t = 0.0;
    for (double p : prob_single_distribution(src)) {
      CHECK(p >= 0.0);
      t += p;
    }
    CHECK(t == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("(26, 24) distribution matches the exact law") {
  const auto d = prob_single_distribution({26, 24});
  for (int m1 = 0; m1 <= 50; ++m1)
    CHECK(std::abs(d[m1] - oracle::single_splitter_exact(26, 24, m1).convert_to<double>()) <= 1e-12);
}

TEST_CASE("strongly imbalanced sources match the exact law") {
  // far beyond what the double-precision node sum resolves on its own
  for (auto [na, nb] : std::vector<std::pair<int, int>>{{1, 59}, {3, 40}, {0, 24}})
    for (int m1 = 0; m1 <= na + nb; m1 += 3) {
      const double exact = oracle::single_splitter_exact(na, nb, m1).convert_to<double>();
      CHECK(prob_single({na, nb}, m1) == doctest::Approx(exact).epsilon(1e-10));
    }
}

TEST_CASE("field symmetries and sign structure") {
  const numerics::PeriodicGrid grid(64, 2);
  const auto f = integrand_field({16, 16}, 9, grid);
  const int n = f.size();
  for (int a = 1; a < n; ++a)
    for (int b = 1; b < n; ++b) {
      CHECK(f.normalized(a, b) == doctest::Approx(f.normalized(n - a, b)).epsilon(1e-12));
      CHECK(f.normalized(a, b) == doctest::Approx(f.normalized(a, n - b)).epsilon(1e-12));
    }
  bool negative_off_axis = false;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const double L = std::abs(f.Lambda(a));
      if (L > 0.2 && L < kPi - 0.2 && f.normalized(a, b) < -1e-3) negative_off_axis = true;
    }
  CHECK(negative_off_axis);
}

TEST_CASE("sign on the lambda = 0 axis is (-1)^m2") {
  for (int m1 = 0; m1 <= 12; ++m1) {
    const int m2 = 12 - m1;
    for (double L : {0.1, 0.7, 1.3, 2.0, 2.9}) {
      const auto v = integrand({6, 6}, m1, L, 0.0);
      if (v.is_zero()) continue;
      CHECK(v.sign == (m2 % 2 ? -1 : 1));
    }
  }
}

TEST_CASE("local maximum along Lambda = 0 at cos lambda = (m1 - m2)/N") {
  for (auto [m1, m2] : std::vector<std::pair<int, int>>{{9, 23}, {20, 12}, {16, 16}}) {
    const modes::DoubleFock src{(m1 + m2) / 2, (m1 + m2) - (m1 + m2) / 2};
    const double l0 = std::acos(static_cast<double>(m1 - m2) / (m1 + m2));
    auto f = [&](double l) { return integrand(src, m1, 0.0, l).value(); };
    CHECK(std::abs(f(l0)) >= std::abs(f(l0 + 1e-3)));
    CHECK(std::abs(f(l0)) >= std::abs(f(l0 - 1e-3)));
  }
}

TEST_CASE("classical half of the Lambda range carries half the integral") {
  for (int m1 : {3, 8, 11}) {
    const modes::DoubleFock src{7, 7};
    const int deg = 15;
    double full = 0.0, half = 0.0;
    const auto gl = numerics::gauss_legendre(60, -kPi / 2, kPi / 2);
    const numerics::PeriodicGrid g(deg + 1, 1);
    for (double l : g.nodes())
      for (std::size_t k = 0; k < gl.nodes.size(); ++k) half += gl.weights[k] * integrand(src, m1, gl.nodes[k], l).value();
    half /= (2 * kPi) * g.points_per_axis();
    for (double L : g.nodes())
      for (double l : g.nodes()) full += integrand(src, m1, L, l).value();
    full /= g.points_per_axis() * g.points_per_axis();
    CHECK(2 * half == doctest::Approx(full).epsilon(1e-9));
  }
}

}
