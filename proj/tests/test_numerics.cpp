#include "fockgauge/numerics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <random>

using namespace fockgauge;
using namespace fockgauge::numerics;

namespace {

// ln of a big integer from its leading 60 bits.
double ln_big(const oracle::BigInt& x) {
  const unsigned msb = boost::multiprecision::msb(x);
  const unsigned shift = msb > 60 ? msb - 60 : 0;
  const oracle::BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

double central_binomial_mean(int power) {
  // mean of cos^power over a period
  if (power % 2) return 0.0;
  return oracle::binomial(power, power / 2).convert_to<double>() / std::ldexp(1.0, power);
}

} // namespace

TEST_SUITE("numerics") {

TEST_CASE("ln_factorial small values") {
  CHECK(ln_factorial(0) == 0.0);
  CHECK(ln_factorial(1) == 0.0);
  CHECK(ln_factorial(5) == doctest::Approx(std::log(120.0)).epsilon(1e-15));
}

TEST_CASE("ln_factorial(100) matches the big-integer product") {
  oracle::BigInt f = 1;
  for (int k = 2; k <= 100; ++k) f *= k;
  CHECK(ln_factorial(100) == doctest::Approx(ln_big(f)).epsilon(1e-14));
  CHECK(ln_factorial(100) == doctest::Approx(363.739375556).epsilon(1e-11));
}

TEST_CASE("ln_factorial relative error against a long double sum") {
  for (int n : {10, 500, 2047, 2048, 2049, 5000, 100000, 1000000}) {
    const double ref = static_cast<double>(oracle::ln_factorial_by_sum(n));
    CHECK(std::abs(ln_factorial(n) - ref) <= 1e-13 * ref);
  }
}

TEST_CASE("ln_factorial increments are ln n") {
  for (int n = 1; n <= 100000; n += (n < 3000 ? 1 : 97)) {
    const double d = ln_factorial(n) - ln_factorial(n - 1);
    // the difference inherits the rounding of ln n! itself
    CHECK(std::abs(d - std::log(static_cast<double>(n))) <= 4 * 2.220446049250313e-16 * std::max(1.0, ln_factorial(n)));
  }
}

TEST_CASE("ln_factorial rejects negative input") { CHECK_THROWS_AS(ln_factorial(-1), PreconditionError); }

TEST_CASE("LogWeight algebra") {
  const auto a = LogWeight::from_value(-3.0), b = LogWeight::from_value(0.5);
  CHECK((a * b).value() == doctest::Approx(-1.5));
  CHECK((a / b).value() == doctest::Approx(-6.0));
  CHECK(a.pow(3).value() == doctest::Approx(-27.0));
  CHECK(a.pow(0).value() == 1.0);
  CHECK(LogWeight::from_value(0.0).is_zero());
  CHECK((LogWeight::zero() * a).is_zero());
  CHECK(LogWeight::from_value(0.0).pow(0).value() == 1.0);
}

TEST_CASE("SignedLogSum handles magnitudes beyond double range") {
  SignedLogSum s;
  s.add({1000.0, 1});
  s.add({1000.0 + std::log(0.25), -1});
  const auto t = s.total();
  CHECK(t.sign == 1);
  CHECK(t.log_magnitude == doctest::Approx(1000.0 + std::log(0.75)));
  SignedLogSum z;
  z.add({5.0, 1});
  z.add({5.0, -1});
  CHECK(z.total().is_zero());
}

TEST_CASE("exact reciprocal factorial sums") {
  const std::vector<FactorialTerm> unit = {{1, {0, 0, 0, 0}}};
  CHECK(exact_reciprocal_factorial_sum(unit) == 1);
  const std::vector<FactorialTerm> hom = {{1, {0, 1, 1, 0}}, {-1, {1, 0, 0, 1}}};
  CHECK(exact_reciprocal_factorial_sum(hom) == 0);
  const std::vector<FactorialTerm> halves = {{1, {2, 0}}, {1, {0, 2}}};
  CHECK(exact_reciprocal_factorial_sum(halves) == 1);
  const std::vector<FactorialTerm> bad = {{1, {2, -1}}};
  CHECK_THROWS_AS(exact_reciprocal_factorial_sum(bad), PreconditionError);
}

TEST_CASE("exact sums agree with Kahan summation when cancellation is mild") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> len(1, 8), arg(0, 12), nargs(1, 4), sgn(0, 1);
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<FactorialTerm> terms(len(rng));
    std::vector<double> floats;
    double largest = 0.0;
    for (auto& t : terms) {
      t.sign = sgn(rng) ? 1 : -1;
      t.args.resize(nargs(rng));
      double v = t.sign;
      for (int& a : t.args) {
        a = arg(rng);
        v /= std::tgamma(a + 1.0);
      }
      floats.push_back(v);
      largest = std::max(largest, std::abs(v));
    }
    const double k = oracle::kahan_sum(floats);
    if (std::abs(k) <= 1e-6 * largest) continue;
    ++compared;
    const double exact = exact_reciprocal_factorial_sum(terms).convert_to<double>();
    CHECK(exact == doctest::Approx(k).epsilon(1e-9));
  }
  CHECK(compared > 500);
}

TEST_CASE("uniform-node quadrature basics") {
  CHECK(integrate_periodic([](double) { return 1.0; }, 0) == doctest::Approx(1.0));
  CHECK(std::abs(integrate_periodic([](double L) { return std::cos(L); }, 1)) < 1e-15);
  CHECK(integrate_periodic([](double l) { return std::cos(l) * std::cos(l); }, 2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(integrate_periodic([](double) { return 1.0; }, -1), PreconditionError);
}

TEST_CASE("quadrature is exact on cos^a lambda cos^b Lambda") {
  for (int deg = 0; deg <= 24; ++deg)
    for (int a = 0; a <= deg; ++a) {
      const int b = deg - a;
      const double got = integrate_periodic(
          [&](double L, double l) { return std::pow(std::cos(l), a) * std::pow(std::cos(L), b); }, deg);
      CHECK(std::abs(got - central_binomial_mean(a) * central_binomial_mean(b)) <= 1e-12);
    }
}

TEST_CASE("one node short of the degree bound is not exact") {
  // cos^2 on a 2-node grid gives 1 instead of 1/2
  const PeriodicGrid g(2, 1);
  double mean = 0.0;
  for (double x : g.nodes()) mean += std::cos(x) * std::cos(x) / 2;
  CHECK(mean == doctest::Approx(1.0));
}

TEST_CASE("maximize_scalar examples") {
  auto q = maximize_scalar([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-6);
  CHECK(q.argmax == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(q.max == doctest::Approx(0.0));
  auto c = maximize_scalar([](double x) { return std::cos(x); }, -1.0, 1.0, 1e-8);
  CHECK(std::abs(c.argmax) < 1e-7);
  CHECK(c.max == doctest::Approx(1.0));
  CHECK(c.max == std::cos(c.argmax));
  CHECK_THROWS_AS(maximize_scalar([](double x) { return x; }, 1.0, 0.0, 1e-6), PreconditionError);
}

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1") {
  const auto rule = gauss_legendre(6, -1.0, 2.0);
  for (int p = 0; p <= 11; ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], p);
    const double exact = (std::pow(2.0, p + 1) - std::pow(-1.0, p + 1)) / (p + 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("periodic_log_mean is independent of the worker count") {
  auto f = [](double L, double l) { return LogWeight::from_value(std::cos(3 * L) * std::pow(1 + std::cos(l), 7)); };
  set_worker_count(1);
  const auto one = periodic_log_mean(33, 17, f);
  set_worker_count(4);
  const auto four = periodic_log_mean(33, 17, f);
  set_worker_count(0);
  CHECK(one.sign == four.sign);
  CHECK(one.log_magnitude == four.log_magnitude);
}

TEST_CASE("periodic_log_mean returns an exact zero on full cancellation") {
  const auto z = periodic_log_mean(8, 8, [](double L, double) { return LogWeight::from_value(std::cos(L)); });
  CHECK(z.is_zero());
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw PreconditionError("boom");
                  }),
                  PreconditionError);
}

TEST_CASE("ipow keeps 0^0 = 1 for complex") {
  CHECK(ipow(std::complex<double>(0.0, 0.0), 0) == std::complex<double>(1.0, 0.0));
  CHECK(std::abs(ipow(std::complex<double>(0.0, 1.0), 3) - std::complex<double>(0.0, -1.0)) < 1e-15);
}

}
