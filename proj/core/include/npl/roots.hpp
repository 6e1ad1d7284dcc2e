#pragma once

#include <vector>

#include "npl/specfun.hpp"

namespace npl::roots {

/// The first positive zeros of J_nu together with |J_nu(zero)|.
struct ZeroTable {
  double nu = 0.0;
  std::vector<double> zeros;
  std::vector<double> residuals;

  std::size_t size() const { return zeros.size(); }
};

inline constexpr int kMaxZeroCount = 200;
inline constexpr double kZeroResidualTarget = 1e-12;

/// First `count` positive zeros of J_nu, nu in [0, 2], count in
/// [1, kMaxZeroCount]. Each zero is bracketed around McMahon's estimate
/// (k + nu/2 - 1/4) pi +- pi/2, falling back to a forward scan from the
/// previous zero when that bracket shows no sign change, then refined by
/// bisection and Newton. Throws BracketError naming nu and k when no sign
/// change can be found.
ZeroTable bessel_j_zeros(double nu, int count,
                         const specfun::SeriesPolicy& policy = {});

/// Newton iteration on J_nu started from `guess`.
double refine_zero(double nu, double guess,
                   const specfun::SeriesPolicy& policy = {});

/// mu = ((exponent + 2) / 2 * zero)^2: the eigenvalue of
/// X'' + mu x^exponent X = 0, X(0) = X(1) = 0 attached to a zero of
/// J_{1/(exponent+2)}.
double eigenvalue_mu(double zero, double exponent);

}  // namespace npl::roots
