#include "fockgauge/numerics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace fockgauge::numerics {

namespace {

constexpr std::int64_t kTableSize = 2048;

const std::array<long double, kTableSize + 1>& ln_factorial_table() {
  static const auto table = [] {
    std::array<long double, kTableSize + 1> t{};
    long double acc = 0.0L;
    t[0] = 0.0L;
    for (std::int64_t k = 1; k <= kTableSize; ++k) {
      acc += std::log(static_cast<long double>(k));
      t[k] = acc;
    }
    return t;
  }();
  return table;
}

double log_big(const BigInt& x) {
  // x > 0.  Keep the top 60 bits, count the rest as a power of two.
  const auto msb = static_cast<long>(boost::multiprecision::msb(x));
  const long shift = std::max(0L, msb - 60);
  const BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}

} // namespace

LogWeight LogWeight::from_value(double x) {
  if (x == 0.0) return zero();
  return {std::log(std::abs(x)), x > 0 ? 1 : -1};
}

LogWeight LogWeight::operator*(const LogWeight& o) const {
  if (sign == 0 || o.sign == 0) return zero();
  return {log_magnitude + o.log_magnitude, sign * o.sign};
}

LogWeight LogWeight::operator/(const LogWeight& o) const {
  require(o.sign != 0, "LogWeight division by zero");
  if (sign == 0) return zero();
  return {log_magnitude - o.log_magnitude, sign * o.sign};
}

LogWeight LogWeight::pow(int exponent) const {
  if (exponent == 0) return one();
  if (sign == 0) {
    require(exponent > 0, "LogWeight: zero to a negative power");
    return zero();
  }
  const int s = (sign < 0 && (exponent % 2 != 0)) ? -1 : 1;
  return {log_magnitude * exponent, s};
}

void SignedLogSum::add(const LogWeight& term) {
  if (term.sign == 0) return;
  if (empty_) {
    scale_ = term.log_magnitude;
    sum_ = term.sign;
    empty_ = false;
    return;
  }
  if (term.log_magnitude > scale_) {
    sum_ = sum_ * std::exp(scale_ - term.log_magnitude) + term.sign;
    scale_ = term.log_magnitude;
  } else {
    sum_ += term.sign * std::exp(term.log_magnitude - scale_);
  }
}

void SignedLogSum::add(const SignedLogSum& other) {
  if (other.empty_ || other.sum_ == 0.0) return;
  add(LogWeight{other.scale_ + std::log(std::abs(other.sum_)), other.sum_ > 0 ? 1 : -1});
}

LogWeight SignedLogSum::total() const {
  if (empty_ || sum_ == 0.0) return LogWeight::zero();
  return {scale_ + std::log(std::abs(sum_)), sum_ > 0 ? 1 : -1};
}

double ln_factorial(std::int64_t n) {
  require(n >= 0, "ln_factorial: n must be nonnegative");
  if (n <= kTableSize) return static_cast<double>(ln_factorial_table()[n]);
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double ln_binomial(std::int64_t n, std::int64_t k) {
  require(n >= 0 && k >= 0 && k <= n, "ln_binomial: need 0 <= k <= n");
  return ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k);
}

BigInt factorial_exact(unsigned n) {
  static std::mutex mutex;
  static std::vector<BigInt> cache{BigInt(1)};
  std::lock_guard lock(mutex);
  while (cache.size() <= n) cache.push_back(cache.back() * BigInt(cache.size()));
  return cache[n];
}

double log_abs(const ExactRational& q) {
  if (q == 0) return -std::numeric_limits<double>::infinity();
  BigInt num = boost::multiprecision::numerator(q);
  if (num < 0) num = -num;
  return log_big(num) - log_big(boost::multiprecision::denominator(q));
}

int sign_of(const ExactRational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

LogWeight to_log_weight(const ExactRational& q) {
  const int s = sign_of(q);
  if (s == 0) return LogWeight::zero();
  return {log_abs(q), s};
}

ExactRational exact_reciprocal_factorial_sum(std::span<const FactorialTerm> terms) {
  // Common denominator prod_j (max_j)!; each term contributes the integer
  // prod_j max_j!/arg_j!, a product of rising runs.
  std::vector<int> max_arg;
  for (const auto& t : terms) {
    require(t.sign == 1 || t.sign == -1, "exact_reciprocal_factorial_sum: sign must be +-1");
    if (t.args.size() > max_arg.size()) max_arg.resize(t.args.size(), 0);
    for (std::size_t j = 0; j < t.args.size(); ++j) {
      require(t.args[j] >= 0, "exact_reciprocal_factorial_sum: negative factorial argument");
      max_arg[j] = std::max(max_arg[j], t.args[j]);
    }
  }
  BigInt numerator = 0;
  for (const auto& t : terms) {
    BigInt term = 1;
    for (std::size_t j = 0; j < max_arg.size(); ++j) {
      const int a = j < t.args.size() ? t.args[j] : 0;
      for (int k = a + 1; k <= max_arg[j]; ++k) term *= k;
    }
    if (t.sign > 0) numerator += term; else numerator -= term;
  }
  BigInt denominator = 1;
  for (int a : max_arg) denominator *= factorial_exact(static_cast<unsigned>(a));
  return ExactRational(numerator, denominator);
}

PeriodicGrid::PeriodicGrid(int points_per_axis, int axis_count)
    : n_(points_per_axis), axes_(axis_count) {
  require(points_per_axis >= 1, "PeriodicGrid: need at least one point per axis");
  require(axis_count == 1 || axis_count == 2, "PeriodicGrid: axis_count must be 1 or 2");
}

PeriodicGrid PeriodicGrid::for_degree(int degree_bound, int axis_count) {
  require(degree_bound >= 0, "PeriodicGrid: degree_bound must be nonnegative");
  return PeriodicGrid(degree_bound + 1, axis_count);
}

std::size_t PeriodicGrid::node_count() const {
  return axes_ == 1 ? static_cast<std::size_t>(n_)
                    : static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
}

std::vector<double> PeriodicGrid::nodes() const {
  std::vector<double> out(n_);
  for (int k = 0; k < n_; ++k) out[k] = node(k);
  return out;
}

double integrate_periodic(const std::function<double(double)>& f, int degree_bound) {
  const auto grid = PeriodicGrid::for_degree(degree_bound, 1);
  double sum = 0.0;
  for (int k = 0; k < grid.points_per_axis(); ++k) sum += f(grid.node(k));
  return sum / grid.points_per_axis();
}

double integrate_periodic(const std::function<double(double, double)>& f, int degree_bound) {
  const auto grid = PeriodicGrid::for_degree(degree_bound, 2);
  const int n = grid.points_per_axis();
  std::vector<double> rows(n);
  parallel_for(n, [&](std::size_t a) {
    double s = 0.0;
    for (int b = 0; b < n; ++b) s += f(grid.node(static_cast<int>(a)), grid.node(b));
    rows[a] = s;
  });
  double sum = 0.0;
  for (double r : rows) sum += r;
  return sum / (static_cast<double>(n) * n);
}

LogWeight periodic_log_mean(int n_outer, int n_inner,
                            const std::function<LogWeight(double, double)>& f, double* log_abs_mean) {
  require(n_outer >= 1 && n_inner >= 1, "periodic_log_mean: empty grid");
  const PeriodicGrid go(n_outer, 1), gi(n_inner, 1);
  std::vector<SignedLogSum> rows(n_outer), mags(n_outer);
  parallel_for(n_outer, [&](std::size_t a) {
    const double outer = go.node(static_cast<int>(a));
    for (int b = 0; b < n_inner; ++b) {
      const auto v = f(outer, gi.node(b));
      rows[a].add(v);
      mags[a].add({v.log_magnitude, v.sign == 0 ? 0 : 1});
    }
  });
  SignedLogSum all, mag;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    all.add(rows[a]);
    mag.add(mags[a]);
  }
  auto t = all.total();
  // Cancellation down to round-off of the summed magnitudes is an exact zero.
  const auto m = mag.total();
  const double log_nodes = std::log(static_cast<double>(n_outer)) + std::log(static_cast<double>(n_inner));
  if (log_abs_mean) *log_abs_mean = m.log_magnitude - log_nodes;
  if (t.sign != 0 && t.log_magnitude < m.log_magnitude + std::log(kCancellationFloor)) return LogWeight::zero();
  if (t.sign != 0) t.log_magnitude -= log_nodes;
  return t;
}

LogWeight log_power_product(std::span<const double> bases, std::span<const int> exponents) {
  require(bases.size() == exponents.size(), "log_power_product: size mismatch");
  LogWeight out = LogWeight::one();
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (exponents[i] == 0) continue;
    if (bases[i] == 0.0) return LogWeight::zero();
    out *= LogWeight::from_value(bases[i]).pow(exponents[i]);
  }
  return out;
}

ScalarMax maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          double tol, int scan_samples) {
  require(lo < hi, "maximize_scalar: need lo < hi");
  require(tol > 0.0, "maximize_scalar: need tol > 0");
  const int s = std::max(scan_samples, 64);
  const double h = (hi - lo) / (s - 1);
  int best = 0;
  double best_val = f(lo);
  for (int k = 1; k < s; ++k) {
    const double v = f(lo + h * k);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  double a = lo + h * std::max(0, best - 1);
  double b = lo + h * std::min(s - 1, best + 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double fx = f(x);
  if (best_val > fx) return {lo + h * best, best_val};
  return {x, fx};
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  require(n >= 1, "gauss_legendre: need n >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

namespace {
std::atomic<unsigned> g_workers{1};
}

void set_worker_count(unsigned count) { g_workers = std::max(1u, count); }
unsigned worker_count() { return g_workers; }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(g_workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

} // namespace fockgauge::numerics
