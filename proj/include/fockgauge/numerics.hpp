#pragma once

/**
 * @file numerics.hpp
 * @brief Shared numerical kernels.
 *
 * Everything downstream of this header integrates trigonometric polynomials
 * over one or two angles and multiplies them by ratios of factorials.  The
 * two facts that make the library work are:
 *
 *   - the mean over n uniform nodes on [-pi, pi) is exact for a trigonometric
 *     polynomial of degree < n, so no integral below carries quadrature error;
 *   - factorial prefactors and 2^N scalings are carried as (log|x|, sign)
 *     pairs, so nothing overflows for N in the hundreds.
 *
 * Exact rational arithmetic is used only where an alternating sum would
 * otherwise cancel catastrophically.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fockgauge {

/// Raised when a caller violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool condition, const std::string& what) {
  if (!condition) throw PreconditionError(what);
}

} // namespace fockgauge

namespace fockgauge::numerics {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A real number stored as sign * exp(log_magnitude).  sign == 0 is zero.
struct LogWeight {
  double log_magnitude = 0.0;
  int sign = 1;

  static LogWeight zero() { return {0.0, 0}; }
  static LogWeight one() { return {0.0, 1}; }
  static LogWeight from_value(double x);

  bool is_zero() const { return sign == 0; }
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }

  LogWeight operator*(const LogWeight& o) const;
  LogWeight operator/(const LogWeight& o) const;
  LogWeight& operator*=(const LogWeight& o) { return *this = *this * o; }
  LogWeight pow(int exponent) const;
};

/// Streaming signed sum of LogWeight terms, rescaled to the running maximum.
class SignedLogSum {
public:
  void add(const LogWeight& term);
  void add(const SignedLogSum& other);
  LogWeight total() const;

private:
  double scale_ = 0.0;
  double sum_ = 0.0;
  bool empty_ = true;
};

double ln_factorial(std::int64_t n);
double ln_binomial(std::int64_t n, std::int64_t k);

using BigInt = boost::multiprecision::cpp_int;
using ExactRational = boost::multiprecision::cpp_rational;

/// n! as an exact integer (memoised, thread safe).
BigInt factorial_exact(unsigned n);

/// ln|q| for a nonzero rational of any size; -inf for zero.
double log_abs(const ExactRational& q);
int sign_of(const ExactRational& q);
LogWeight to_log_weight(const ExactRational& q);

/// One term sign / prod(args[i]!) of a reciprocal-factorial sum.
struct FactorialTerm {
  int sign = 1;
  std::vector<int> args;
};

/// Sum of sign / prod(arg!) over all terms, exactly.  Rejects negative arguments.
ExactRational exact_reciprocal_factorial_sum(std::span<const FactorialTerm> terms);

/// Uniform nodes on [-pi, pi) for one or two periodic axes.
class PeriodicGrid {
public:
  explicit PeriodicGrid(int points_per_axis, int axis_count = 2);

  /// Smallest grid that integrates degree <= degree_bound exactly.
  static PeriodicGrid for_degree(int degree_bound, int axis_count = 2);

  int points_per_axis() const { return n_; }
  int axis_count() const { return axes_; }
  std::size_t node_count() const;
  double node(int k) const { return -kPi + kTwoPi * k / n_; }
  std::vector<double> nodes() const;
  /// Weight of one node along one axis.
  double weight() const { return 1.0 / n_; }

private:
  int n_;
  int axes_;
};

/// Normalised integral (1/2pi) of a 1-D trigonometric polynomial.
double integrate_periodic(const std::function<double(double)>& f, int degree_bound);
/// Normalised integral (1/2pi)^2 of a 2-D trigonometric polynomial f(Lambda, lambda).
double integrate_periodic(const std::function<double(double, double)>& f, int degree_bound);

/**
 * Mean over an n_outer x n_inner uniform grid of a field given in log form.
 * Rows are evaluated in parallel and combined in row order.  A mean whose
 * magnitude is below kCancellationFloor times the mean of |f| is returned as
 * exactly zero.  log_abs_mean, when given, receives ln of the mean of |f|.
 */
inline constexpr double kCancellationFloor = 64 * 2.220446049250313e-16;

LogWeight periodic_log_mean(int n_outer, int n_inner,
                            const std::function<LogWeight(double outer, double inner)>& f,
                            double* log_abs_mean = nullptr);

/// z^k for k >= 0 by repeated squaring (0^0 == 1, unlike std::pow on complex).
template <class T>
T ipow(T z, int k) {
  T r{1};
  for (; k > 0; k >>= 1, z *= z)
    if (k & 1) r *= z;
  return r;
}

/// prod_i base_i^exponent_i as a LogWeight (0^0 == 1).
LogWeight log_power_product(std::span<const double> bases, std::span<const int> exponents);

struct ScalarMax {
  double argmax = 0.0;
  double max = 0.0;
};

/// Coarse scan followed by golden-section refinement to bracket width <= tol.
ScalarMax maximize_scalar(const std::function<double(double)>& f, double lo, double hi,
                          double tol, int scan_samples = 64);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points mapped onto [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

// Worker pool size used by parallel_for.  Results never depend on it.
void set_worker_count(unsigned count);
unsigned worker_count();
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace fockgauge::numerics
