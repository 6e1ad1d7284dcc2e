#pragma once

namespace npl::specfun {

/// Controls the two evaluation paths of bessel_j: the ascending power series
/// for x <= switch_point and the Hankel large-argument expansion beyond it.
struct SeriesPolicy {
  int max_terms = 120;
  double switch_point = 18.0;
  double target_eps = 1e-15;

  /// Throws DomainError unless max_terms >= 20, switch_point > 0 and
  /// target_eps lies in [1e-16, 1e-8].
  void validate() const;
};

/// Outcome of a single evaluation path; `converged` is false when the path
/// ran out of terms (series) or started diverging (asymptotic expansion)
/// before reaching the policy's target_eps.
struct PathResult {
  double value = 0.0;
  bool converged = false;
  int terms = 0;
};

/// ln Gamma(x) for x > 0 (Lanczos, g = 7, nine coefficients; reflection below
/// x = 1/2).
double ln_gamma(double x);

/// Bessel function of the first kind J_nu(x), nu in (-1, 3], x >= 0.
/// Uses the power series up to policy.switch_point and the asymptotic
/// expansion above it; either path falls back to the other when it cannot
/// reach target_eps. Throws ConvergenceError when neither does.
double bessel_j(double nu, double x, const SeriesPolicy& policy = {});

/// Modified Bessel function I_nu(x), nu in (-1, 3], x >= 0, from the
/// ascending series.
double bessel_i(double nu, double x, const SeriesPolicy& policy = {});

/// dJ_nu/dx = (J_{nu-1}(x) - J_{nu+1}(x)) / 2 for nu in [0, 2], x > 0
/// (J_0' = -J_1).
double bessel_j_prime(double nu, double x, const SeriesPolicy& policy = {});

// Individual paths, exposed for path-consistency checks.
PathResult bessel_j_series(double nu, double x, const SeriesPolicy& policy = {});
PathResult bessel_j_asymptotic(double nu, double x,
                               const SeriesPolicy& policy = {});

}  // namespace npl::specfun
