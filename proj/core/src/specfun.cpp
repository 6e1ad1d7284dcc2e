#include "npl/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "npl/errors.hpp"

namespace npl::specfun {
namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

void check_order(double nu, const char* fn) {
  if (!(nu > -1.0 && nu <= 3.0)) {
    std::ostringstream os;
    os << fn << ": order nu=" << nu << " outside (-1, 3]";
    throw DomainError(os.str());
  }
}

void check_argument(double x, const char* fn) {
  if (!(x >= 0.0)) {
    std::ostringstream os;
    os << fn << ": argument x=" << x << " must be >= 0";
    throw DomainError(os.str());
  }
}

// Value at x = 0 shared by J and I: 1 for nu = 0, 0 for nu > 0, pole below.
double value_at_origin(double nu) {
  if (nu == 0.0) return 1.0;
  if (nu > 0.0) return 0.0;
  return std::numeric_limits<double>::infinity();
}

// (x/2)^nu / Gamma(nu + 1)
double leading_factor(double nu, double x) {
  return std::exp(nu * std::log(0.5 * x) - ln_gamma(nu + 1.0));
}

}  // namespace

void SeriesPolicy::validate() const {
  if (max_terms < 20) throw DomainError("SeriesPolicy: max_terms must be >= 20");
  if (!(switch_point > 0.0))
    throw DomainError("SeriesPolicy: switch_point must be > 0");
  if (!(target_eps >= 1e-16 && target_eps <= 1e-8))
    throw DomainError("SeriesPolicy: target_eps must lie in [1e-16, 1e-8]");
}

double ln_gamma(double x) {
  if (!(x > 0.0)) {
    std::ostringstream os;
    os << "ln_gamma: argument x=" << x << " must be > 0";
    throw DomainError(os.str());
  }
  if (x < 0.5) {
    // Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    return std::log(kPi / std::sin(kPi * x)) - ln_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

PathResult bessel_j_series(double nu, double x, const SeriesPolicy& policy) {
  check_order(nu, "bessel_j_series");
  check_argument(x, "bessel_j_series");
  if (x == 0.0) return {value_at_origin(nu), true, 0};

  // Alternating terms cancel; long double keeps the loss at x ~ 18 (about
  // six digits) below the double-precision result.
  const long double half = 0.5L * x;
  const long double q = half * half;
  const long double eps = std::numeric_limits<long double>::epsilon();
  long double term = 1.0L;
  long double sum = 1.0L;
  long double largest = 1.0L;
  for (int k = 1; k <= policy.max_terms; ++k) {
    term *= -q / (static_cast<long double>(k) * (k + static_cast<long double>(nu)));
    sum += term;
    const long double mag = std::fabs(term);
    if (mag > largest) largest = mag;
    if (k > half && (mag <= policy.target_eps * std::fabs(sum) || mag <= eps * largest)) {
      return {leading_factor(nu, x) * static_cast<double>(sum), true, k + 1};
    }
  }
  return {leading_factor(nu, x) * static_cast<double>(sum), false, policy.max_terms + 1};
}

PathResult bessel_j_asymptotic(double nu, double x, const SeriesPolicy& policy) {
  check_order(nu, "bessel_j_asymptotic");
  check_argument(x, "bessel_j_asymptotic");
  if (x == 0.0) return {value_at_origin(nu), false, 0};

  // Hankel expansion: J = sqrt(2/(pi x)) (P cos chi - Q sin chi),
  // a_k = a_{k-1} (4 nu^2 - (2k-1)^2) / (8 k x).
  const double mu4 = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double a = 1.0;
  double previous = 1.0;
  bool converged = false;
  int k = 1;
  for (; k <= policy.max_terms; ++k) {
    const double odd = 2.0 * k - 1.0;
    a *= (mu4 - odd * odd) / (8.0 * k * x);
    const double mag = std::fabs(a);
    if (k > 1 && mag > previous) break;  // past the smallest term
    const int quarter = (k % 4);
    // Signs: k=1 -> +Q, k=2 -> -P, k=3 -> -Q, k=4 -> +P, ...
    switch (quarter) {
      case 1: q += a; break;
      case 2: p -= a; break;
      case 3: q -= a; break;
      default: p += a; break;
    }
    previous = mag;
    if (mag <= policy.target_eps) {
      converged = true;
      break;
    }
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  const double value = std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
  return {value, converged, k};
}

double bessel_j(double nu, double x, const SeriesPolicy& policy) {
  policy.validate();
  check_order(nu, "bessel_j");
  check_argument(x, "bessel_j");
  if (x == 0.0) return value_at_origin(nu);

  const bool series_first = x <= policy.switch_point;
  const auto first = series_first ? bessel_j_series(nu, x, policy)
                                  : bessel_j_asymptotic(nu, x, policy);
  if (first.converged) return first.value;
  const auto second = series_first ? bessel_j_asymptotic(nu, x, policy)
                                   : bessel_j_series(nu, x, policy);
  if (second.converged) return second.value;

  std::ostringstream os;
  os << "bessel_j: neither series nor asymptotic path reached eps="
     << policy.target_eps << " at nu=" << nu << ", x=" << x;
  throw ConvergenceError(os.str());
}

double bessel_i(double nu, double x, const SeriesPolicy& policy) {
  policy.validate();
  check_order(nu, "bessel_i");
  check_argument(x, "bessel_i");
  if (x == 0.0) return value_at_origin(nu);

  const double half = 0.5 * x;
  const double q = half * half;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= policy.max_terms; ++k) {
    term *= q / (k * (k + nu));
    sum += term;
    if (k > half && term <= policy.target_eps * sum) {
      return leading_factor(nu, x) * sum;
    }
  }
  std::ostringstream os;
  os << "bessel_i: series did not converge in " << policy.max_terms
     << " terms at nu=" << nu << ", x=" << x;
  throw ConvergenceError(os.str());
}

double bessel_j_prime(double nu, double x, const SeriesPolicy& policy) {
  if (!(nu >= 0.0 && nu <= 2.0)) {
    std::ostringstream os;
    os << "bessel_j_prime: order nu=" << nu << " outside [0, 2]";
    throw DomainError(os.str());
  }
  if (!(x > 0.0)) {
    std::ostringstream os;
    os << "bessel_j_prime: argument x=" << x << " must be > 0";
    throw DomainError(os.str());
  }
  if (nu == 0.0) return -bessel_j(1.0, x, policy);
  return 0.5 * (bessel_j(nu - 1.0, x, policy) - bessel_j(nu + 1.0, x, policy));
}

}  // namespace npl::specfun
