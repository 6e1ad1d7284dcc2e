#include "npl/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "npl/errors.hpp"

namespace npl::roots {
namespace {

using specfun::bessel_j;
using specfun::bessel_j_prime;
using specfun::SeriesPolicy;

constexpr double kPi = std::numbers::pi;

struct Bracket {
  double lo;
  double hi;
};

bool sign_change(double flo, double fhi) {
  return (flo < 0.0 && fhi > 0.0) || (flo > 0.0 && fhi < 0.0);
}

// Forward scan from `start` in steps of pi/8 until J changes sign.
bool scan_forward(double nu, double start, const SeriesPolicy& policy,
                  Bracket& out) {
  const double step = kPi / 8.0;
  double a = start;
  double fa = bessel_j(nu, a, policy);
  for (int i = 0; i < 64; ++i) {
    const double b = a + step;
    const double fb = bessel_j(nu, b, policy);
    if (fb == 0.0) {
      out = {b, b};
      return true;
    }
    if (sign_change(fa, fb)) {
      out = {a, b};
      return true;
    }
    a = b;
    fa = fb;
  }
  return false;
}

double bisect(double nu, Bracket br, const SeriesPolicy& policy) {
  double lo = br.lo;
  double hi = br.hi;
  double flo = bessel_j(nu, lo, policy);
  for (int i = 0; i < 200 && hi - lo > 1e-10 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = bessel_j(nu, mid, policy);
    if (fmid == 0.0) return mid;
    if (sign_change(flo, fmid)) {
      hi = mid;
    } else {
      lo = mid;
      flo = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double refine_zero(double nu, double guess, const SeriesPolicy& policy) {
  double z = guess;
  for (int i = 0; i < 20; ++i) {
    const double f = bessel_j(nu, z, policy);
    const double df = bessel_j_prime(nu, z, policy);
    if (df == 0.0) break;
    const double step = f / df;
    z -= step;
    if (std::fabs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * z) break;
  }
  return z;
}

ZeroTable bessel_j_zeros(double nu, int count, const SeriesPolicy& policy) {
  if (!(nu >= 0.0 && nu <= 2.0)) {
    std::ostringstream os;
    os << "bessel_j_zeros: order nu=" << nu << " outside [0, 2]";
    throw DomainError(os.str());
  }
  if (count < 1 || count > kMaxZeroCount) {
    std::ostringstream os;
    os << "bessel_j_zeros: count=" << count << " outside [1, " << kMaxZeroCount << "]";
    throw DomainError(os.str());
  }
  policy.validate();

  ZeroTable table;
  table.nu = nu;
  table.zeros.reserve(count);
  table.residuals.reserve(count);

  double previous = 0.0;
  for (int k = 1; k <= count; ++k) {
    const double mcmahon = (k + 0.5 * nu - 0.25) * kPi;
    // Start strictly past the previous zero (J_nu(0) = 0 for nu > 0).
    const double floor = previous + 1e-6 * std::max(1.0, previous);
    Bracket br{std::max(mcmahon - 0.5 * kPi, floor), mcmahon + 0.5 * kPi};
    bool ok = br.lo < br.hi &&
              sign_change(bessel_j(nu, br.lo, policy), bessel_j(nu, br.hi, policy));
    if (!ok) ok = scan_forward(nu, floor, policy, br);
    if (!ok) {
      std::ostringstream os;
      os << "bessel_j_zeros: no sign change of J_" << nu << " near zero k=" << k;
      throw BracketError(nu, k, os.str());
    }

    double z = bisect(nu, br, policy);
    const double polished = refine_zero(nu, z, policy);
    // Newton must stay inside the bracket; otherwise keep the bisection value.
    if (polished >= br.lo && polished <= br.hi) z = polished;

    const double delta = 1e-6 * z;
    if (!sign_change(bessel_j(nu, z - delta, policy), bessel_j(nu, z + delta, policy)) ||
        z <= previous) {
      std::ostringstream os;
      os << "bessel_j_zeros: refined zero of J_" << nu << " for k=" << k
         << " is not an isolated sign change";
      throw BracketError(nu, k, os.str());
    }
    const double residual = std::fabs(bessel_j(nu, z, policy));
    if (residual > kZeroResidualTarget) {
      std::ostringstream os;
      os << "bessel_j_zeros: residual " << residual << " above target at nu=" << nu
         << ", k=" << k;
      throw ConvergenceError(os.str());
    }
    table.zeros.push_back(z);
    table.residuals.push_back(residual);
    previous = z;
  }
  return table;
}

double eigenvalue_mu(double zero, double exponent) {
  if (!(zero > 0.0) || !(exponent > 0.0)) {
    std::ostringstream os;
    os << "eigenvalue_mu: zero=" << zero << " and exponent=" << exponent
       << " must both be > 0";
    throw DomainError(os.str());
  }
  const double scaled = 0.5 * (exponent + 2.0) * zero;
  return scaled * scaled;
}

}  // namespace npl::roots
