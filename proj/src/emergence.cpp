#include "fockgauge/emergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fockgauge::emergence {

using numerics::kPi;
using numerics::kTwoPi;
using Complex = std::complex<double>;

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

double wrap(double x) {
  x = std::fmod(x + kPi, kTwoPi);
  if (x < 0) x += kTwoPi;
  return x - kPi;
}

} // namespace

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 1))) {}

std::uint64_t CounterRng::at(std::uint64_t counter) const { return mix(key_ + (counter + 1) * kGamma); }

double CounterRng::uniform_at(std::uint64_t counter) const {
  return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
}

namespace {

// lambda0 by a parabola through the top node and its neighbours; FWHM from
// linearly interpolated half-maximum crossings (2 pi when there are none).
void locate_peak(PosteriorProfile& out) {
  const int n = static_cast<int>(out.values.size());
  const int kmax = static_cast<int>(std::max_element(out.values.begin(), out.values.end()) - out.values.begin());
  const auto v = [&](int k) { return out.values[((k % n) + n) % n]; };
  const double h = kTwoPi / n;
  const double vm = v(kmax - 1), v0 = v(kmax), vp = v(kmax + 1);
  const double denom = vm - 2.0 * v0 + vp;
  const double delta = denom != 0.0 ? 0.5 * (vm - vp) / denom : 0.0;
  out.lambda0 = wrap(out.lambda[kmax] + delta * h);

  // Half-maximum crossings on each side, linear interpolation between nodes.
  double right = -1.0, left = -1.0;
  for (int s = 1; s < n; ++s)
    if (v(kmax + s) < 0.5) {
      const double a = v(kmax + s - 1), b = v(kmax + s);
      right = (s - 1 + (a - 0.5) / (a - b)) * h;
      break;
    }
  for (int s = 1; s < n; ++s)
    if (v(kmax - s) < 0.5) {
      const double a = v(kmax - s + 1), b = v(kmax - s);
      left = (s - 1 + (a - 0.5) / (a - b)) * h;
      break;
    }
  out.fwhm = (right < 0 || left < 0) ? kTwoPi : std::min(kTwoPi, left + right);
}

// Sequential sampler; w ends as prod_i [1 + cos(x_i + lambda_k)] on the sampling grid, max-normalized.
PositionSample sample_with_weights(int m, std::uint64_t seed, std::uint64_t stream, std::vector<double>& w);

} // namespace

PosteriorProfile posterior_profile(const PositionSample& sample, int resolution) {
  require(!sample.reduced_phases.empty(), "posterior_profile: sample must be nonempty");
  require(resolution >= 8, "posterior_profile: resolution must be >= 8");
  const int n = resolution;
  const numerics::PeriodicGrid grid(n, 1);
  PosteriorProfile out;
  out.lambda = grid.nodes();
  std::vector<double> logs(n, 0.0);
  for (int k = 0; k < n; ++k)
    for (double x : sample.reduced_phases) logs[k] += std::log1p(std::cos(x + out.lambda[k]));
  const double top = *std::max_element(logs.begin(), logs.end());
  out.values.resize(n);
  for (int k = 0; k < n; ++k) out.values[k] = std::exp(logs[k] - top);
  locate_peak(out);
  return out;
}

double sample_first_harmonics(double a0, Complex z1, Complex z2, double u) {
  require(a0 > 0.0, "sample_first_harmonics: need a0 > 0");
  const double r1 = std::abs(z1), p1 = std::arg(z1), r2 = std::abs(z2), p2 = std::arg(z2);
  const auto cdf = [&](double x) {
    return a0 * (x + kPi) + 2.0 * r1 * (std::sin(x + p1) - std::sin(-kPi + p1)) +
           r2 * (std::sin(2.0 * x + p2) - std::sin(-kTwoPi + p2));
  };
  const int g = kSamplingGrid;
  const auto edge = [&](int k) { return -kPi + kTwoPi * k / g; };
  const double target = u * kTwoPi * a0;
  int lo = 0, hi = g;  // cdf(edge(lo)) <= target < cdf(edge(hi))
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (cdf(edge(mid)) <= target) lo = mid; else hi = mid;
  }
  const double f0 = cdf(edge(lo)), f1 = cdf(edge(hi));
  const double t = f1 > f0 ? (target - f0) / (f1 - f0) : 0.5;
  return wrap(edge(lo) + std::clamp(t, 0.0, 1.0) * (edge(hi) - edge(lo)));
}

namespace {

PositionSample sample_with_weights(int m, std::uint64_t seed, std::uint64_t stream, std::vector<double>& w) {
  require(m >= 1, "sample_positions: m must be >= 1");
  const CounterRng rng(seed, stream);
  const int g = kSamplingGrid;
  const numerics::PeriodicGrid grid(g, 1);
  std::vector<double> cl(g), sl(g);
  w.assign(g, 1.0);
  for (int k = 0; k < g; ++k) {
    cl[k] = std::cos(grid.node(k));
    sl[k] = std::sin(grid.node(k));
  }
  PositionSample out;
  out.reduced_phases.reserve(m);
  for (int j = 0; j < m; ++j) {
    // Conditional density of x is mean_lambda W(lambda)[1 + cos(x + lambda)], first harmonic only.
    double w0 = 0.0, re = 0.0, im = 0.0;
    for (int k = 0; k < g; ++k) {
      w0 += w[k];
      re += w[k] * cl[k];
      im += w[k] * sl[k];
    }
    const Complex w1{re / g, im / g};
    const double x = sample_first_harmonics(w0 / g, 0.5 * w1, 0.0, rng.uniform_at(j));
    out.reduced_phases.push_back(x);
    const double cx = std::cos(x), sx = std::sin(x);
    double top = 0.0;
    for (int k = 0; k < g; ++k) {
      w[k] *= 1.0 + cx * cl[k] - sx * sl[k];
      top = std::max(top, w[k]);
    }
    for (double& v : w) v /= top;
  }
  return out;
}

} // namespace

PositionSample sample_positions(int m, std::uint64_t seed, std::uint64_t stream) {
  std::vector<double> w;
  return sample_with_weights(m, seed, stream, w);
}

PosteriorProfile sampler_profile(int m, std::uint64_t seed, std::uint64_t stream) {
  PosteriorProfile out;
  sample_with_weights(m, seed, stream, out.values);
  out.lambda = numerics::PeriodicGrid(kSamplingGrid, 1).nodes();
  locate_peak(out);
  return out;
}

PositionSample sample_positions_fixed_phase(int m, double lambda_star, std::uint64_t seed,
                                            std::uint64_t stream) {
  require(m >= 1, "sample_positions_fixed_phase: m must be >= 1");
  const CounterRng rng(seed, stream);
  PositionSample out;
  for (int j = 0; j < m; ++j)
    out.reduced_phases.push_back(sample_first_harmonics(1.0, 0.5 * std::polar(1.0, lambda_star), 0.0, rng.uniform_at(j)));
  return out;
}

std::vector<EnsembleRun> run_ensemble(int runs, int m, std::uint64_t seed, int resolution) {
  require(runs >= 1, "run_ensemble: runs must be >= 1");
  std::vector<EnsembleRun> out(runs);
  numerics::parallel_for(runs, [&](std::size_t r) {
    const auto p = resolution == kSamplingGrid ? sampler_profile(m, seed, r)
                                               : posterior_profile(sample_positions(m, seed, r), resolution);
    out[r] = {p.lambda0, p.fwhm};
  });
  return out;
}

double ks_uniform(std::vector<double> values) {
  require(!values.empty(), "ks_uniform: no values");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = std::clamp((values[i] + kPi) / kTwoPi, 0.0, 1.0);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double median(std::vector<double> values) {
  require(!values.empty(), "median: no values");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// ---- three sources -------------------------------------------------------

double ThreeSourceState::norm2() const {
  double s = 0.0;
  for (const auto& v : c) s += std::norm(v);
  return s;
}

ThreeSourceState three_source_init(int n) {
  require(n >= 1, "three_source_init: n must be >= 1");
  ThreeSourceState s;
  s.n = n;
  s.remaining = 3 * n;
  s.c.assign(static_cast<std::size_t>(n + 1) * (n + 1), Complex{0.0, 0.0});
  s.at(n, n) = 1.0;
  return s;
}

DetectionBranches detection_branches(const ThreeSourceState& s) {
  require(s.remaining >= 1, "three_detect: no quanta left to detect");
  const int n = s.n;
  const std::size_t size = static_cast<std::size_t>(n + 1) * (n + 1);
  DetectionBranches br{std::vector<Complex>(size), std::vector<Complex>(size), std::vector<Complex>(size)};
  for (int na = 0; na <= n; ++na)
    for (int nb = 0; nb <= n; ++nb) {
      const int ng = s.remaining - 1 - na - nb;  // gamma quanta after the detection
      if (ng < 0 || ng > n) continue;
      const std::size_t idx = static_cast<std::size_t>(na) * (n + 1) + nb;
      if (na < n) br.a[idx] = std::sqrt(na + 1.0) * s.at(na + 1, nb);
      if (nb < n) br.b[idx] = std::sqrt(nb + 1.0) * s.at(na, nb + 1);
      if (ng + 1 <= n) br.g[idx] = std::sqrt(ng + 1.0) * s.at(na, nb);
    }
  return br;
}

double Intensity::at(double x) const {
  return a0 + 2.0 * std::real(z1 * std::polar(1.0, x)) + 2.0 * std::real(z2 * std::polar(1.0, 2.0 * x));
}

Intensity detection_intensity(const DetectionBranches& br) {
  Intensity I;
  for (std::size_t k = 0; k < br.a.size(); ++k) {
    I.a0 += std::norm(br.a[k]) + std::norm(br.b[k]) + std::norm(br.g[k]);
    I.z2 += br.a[k] * std::conj(br.b[k]);
    I.z1 += br.a[k] * std::conj(br.g[k]) + br.g[k] * std::conj(br.b[k]);
  }
  return I;
}

namespace {

ThreeSourceState apply(const ThreeSourceState& s, const DetectionBranches& br, double x, double* likelihood) {
  ThreeSourceState out;
  out.n = s.n;
  out.remaining = s.remaining - 1;
  out.c.resize(br.a.size());
  const Complex ea = std::polar(1.0, x), eb = std::polar(1.0, -x);
  double norm2 = 0.0;
  for (std::size_t k = 0; k < br.a.size(); ++k) {
    out.c[k] = ea * br.a[k] + eb * br.b[k] + br.g[k];
    norm2 += std::norm(out.c[k]);
  }
  const double before = s.norm2();
  if (likelihood) *likelihood = before > 0.0 ? norm2 / before : 0.0;
  out.log_scale = s.log_scale;
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : out.c) v *= inv;
    out.log_scale += 0.5 * std::log(norm2);
  }
  return out;
}

} // namespace

ThreeSourceState three_detect(const ThreeSourceState& s, double x, double* likelihood) {
  return apply(s, detection_branches(s), x, likelihood);
}

ThreeMapResult three_population_map(int n, int m_interfere, std::uint64_t seed) {
  require(n >= 1, "three_population_map: n must be >= 1");
  require(m_interfere >= 0 && m_interfere <= 3 * n, "three_population_map: need m_interfere <= 3n");
  const CounterRng rng(seed, 0);
  auto s = three_source_init(n);
  ThreeMapResult res;
  for (int j = 0; j < m_interfere; ++j) {
    const auto br = detection_branches(s);
    const auto I = detection_intensity(br);
    const double x = sample_first_harmonics(I.a0, I.z1, I.z2, rng.uniform_at(j));
    res.sample.reduced_phases.push_back(x);
    s = apply(s, br, x, nullptr);
  }
  res.n = n;
  res.remaining = s.remaining;
  res.p.resize(s.c.size());
  const double total = s.norm2();
  for (std::size_t k = 0; k < s.c.size(); ++k) res.p[k] = std::norm(s.c[k]) / total;
  return res;
}

double three_prob_recurrence(int n, const PositionSample& sample, int m_alpha, int m_beta) {
  auto s = three_source_init(n);
  for (double x : sample.reduced_phases) s = three_detect(s, x);
  const int mg = s.remaining - m_alpha - m_beta;
  require(m_alpha >= 0 && m_beta >= 0 && m_alpha <= n && m_beta <= n && mg >= 0 && mg <= n,
          "three_prob_recurrence: side counts violate 3N = M + m_alpha + m_beta + m_gamma");
  return std::norm(s.at(m_alpha, m_beta)) * std::exp(2.0 * s.log_scale);
}

double three_prob_integral(int n, const PositionSample& sample, int m_alpha, int m_beta) {
  require(n >= 1 && n <= kThreeOracleCap, "three_prob_integral: n beyond oracle cap");
  const int m = static_cast<int>(sample.reduced_phases.size());
  const int mg = 3 * n - m - m_alpha - m_beta;
  require(m_alpha >= 0 && m_beta >= 0 && m_alpha <= n && m_beta <= n && mg >= 0 && mg <= n,
          "three_prob_integral: counts violate 3N = M + m_alpha + m_beta + m_gamma");
  const int ka = n - m_alpha, kb = n - m_beta;
  const int g = m + 1;
  const numerics::PeriodicGrid grid(g, 1);
  // Amplitude factor at (lambda_a, lambda_b), tabulated once per node pair.
  std::vector<Complex> amp(static_cast<std::size_t>(g) * g);
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) {
      const double la = grid.node(a), lb = grid.node(b);
      Complex prod = std::polar(1.0, -ka * la - kb * lb);
      for (double x : sample.reduced_phases) prod *= std::polar(1.0, x + la) + std::polar(1.0, -x + lb) + 1.0;
      amp[static_cast<std::size_t>(a) * g + b] = prod;
    }
  // Four-angle mean of amp(la, lb) conj(amp(la', lb')).
  Complex sum{0.0, 0.0};
  for (std::size_t p = 0; p < amp.size(); ++p)
    for (std::size_t q = 0; q < amp.size(); ++q) sum += amp[p] * std::conj(amp[q]);
  const double mean = std::real(sum) / std::pow(static_cast<double>(g), 4);
  const double lp = 3.0 * numerics::ln_factorial(n) - numerics::ln_factorial(m_alpha) -
                    numerics::ln_factorial(m_beta) - numerics::ln_factorial(mg);
  return std::exp(lp) * mean;
}

double directional_autocorrelation(const ThreeMapResult& map, int da, int db) {
  const int n = map.n;
  const auto valid = [&](int a, int b) {
    if (a < 0 || b < 0 || a > n || b > n) return false;
    const int g = map.remaining - a - b;
    return g >= 0 && g <= n && map.at(a, b) > 0.0;
  };
  double mean = 0.0;
  int count = 0;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      if (valid(a, b)) {
        mean += map.at(a, b);
        ++count;
      }
  require(count > 0, "directional_autocorrelation: empty map");
  mean /= count;
  double num = 0.0, den = 0.0;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      if (!valid(a, b)) continue;
      const double x = map.at(a, b) - mean;
      den += x * x;
      if (valid(a + da, b + db)) num += x * (map.at(a + da, b + db) - mean);
    }
  return den > 0.0 ? num / den : 0.0;
}

} // namespace fockgauge::emergence
