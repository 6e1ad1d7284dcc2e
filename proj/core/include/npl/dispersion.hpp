#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "npl/field.hpp"

namespace npl::dispersion {

/// Coupling coefficients k1..k6 of the two non-local side conditions
///   k1 u_x(-1,y) + k2 u(-1,y) = k3 u_x(1,y),
///   k4 u_x(1,y)  + k5 u(1,y)  = k6 u_x(-1,y),
/// the weight of u(x,0) = alpha u(x,1) and the branch index s of the
/// temporal exponent.
struct TransmissionProblem {
  std::array<double, 6> k{};
  double alpha = 1.0;
  int s = 0;

  void validate() const;
};

/// sigma = -Log(alpha) + 2 pi i s, so that exp(sigma) alpha = 1.
cplx sigma_branch(cplx alpha, int s);

using Matrix4 = Eigen::Matrix4cd;
using Vector4 = Eigen::Vector4cd;

/// Linear system for u = e^{sigma y} phi(x) with phi'' = (lambda + sigma) phi
/// on x > 0 and phi'' = (lambda - sigma) phi on x < 0. Rows: continuity of
/// phi and phi' at 0, then the two side conditions. Columns: exp(+w x),
/// exp(-w x) on x > 0, then on x < 0, with w^2 = lambda +- sigma (principal
/// roots). The pair becomes {1, x} on a side where |lambda -+ sigma| < 1e-10.
Matrix4 dispersion_matrix(cplx lambda, const TransmissionProblem& problem);
cplx dispersion_determinant(cplx lambda, const TransmissionProblem& problem);

/// The same system in {cosh(w x), sinh(w x)/w} per side, entire in lambda.
/// Away from the switch, dispersion_determinant = 4 w_+ w_- times this
/// value, so this one has no zeros at lambda = +-sigma and no sign flip
/// across the branch cuts of w. Root scanning uses it.
Matrix4 dispersion_matrix_entire(cplx lambda, const TransmissionProblem& problem);
cplx dispersion_determinant_entire(cplx lambda, const TransmissionProblem& problem);

/// Closed rectangle in the lambda plane; a zero-height rectangle is a real
/// segment.
struct Region {
  double re_min = 0.0;
  double re_max = 1.0;
  double im_min = 0.0;
  double im_max = 0.0;

  bool contains(cplx z, double tol = 0.0) const;
};

struct Density {
  int re = 64;
  int im = 64;
};

inline constexpr int kMaxDensity = 512;

/// Separated solution rebuilt from a null vector of dispersion_matrix.
struct ModeShape {
  cplx lambda{};
  cplx sigma{};
  Vector4 coeffs = Vector4::Zero();  // (a, b) for x > 0, (c, d) for x < 0

  cplx phi(double x) const;
  cplx dphi(double x) const;
  cplx u(double x, double y) const;
};

struct VerificationReport {
  cplx lambda{};
  double abs_det = 0.0;
  /// smallest / largest singular value of the dispersion matrix
  double condition = 0.0;
  bool null_space_reliable = false;
  double pde_residual = 0.0;       // u_xx - sign(x) u_y - lambda u, 200 points per half
  double side_condition_1 = 0.0;   // k1 u_x(-1) + k2 u(-1) - k3 u_x(1)
  double side_condition_2 = 0.0;   // k4 u_x(1) + k5 u(1) - k6 u_x(-1)
  double nonlocal_residual = 0.0;  // u(x,0) - alpha u(x,1)
  double c1_mismatch = 0.0;        // jump of phi, phi' at x = 0
  ModeShape shape;

  double max_residual() const;
  bool passed(double tol) const { return null_space_reliable && max_residual() <= tol; }
};

/// Rebuilds u from the unit-norm right singular vector (entire basis) of the smallest
/// singular value and checks every condition pointwise. All residuals are
/// relative to the largest term of the checked expression. A
/// smallest/largest singular value ratio above 1e-8 marks the null space as
/// unreliable (lambda is not a root).
VerificationReport verify_candidate(cplx lambda, const TransmissionProblem& problem);

struct ScanOptions {
  /// Seeds are local minima of |det| at or below this value; a negative value
  /// selects the median of the samples.
  double seed_threshold = -1.0;
  int max_newton_iterations = 60;
  double det_tolerance = 1e-9;
  double dedup_distance = 1e-6;
  double verify_tolerance = 1e-7;
  unsigned threads = 0;
};

struct Candidate {
  cplx lambda{};
  double abs_det = 0.0;
  VerificationReport verification;
};

struct SeedFailure {
  cplx seed{};
  std::string reason;
};

struct DispersionScan {
  Region region;
  Density density;
  std::vector<double> samples;  // |det| (entire basis), row-major over (im index, re index)
  std::vector<Candidate> candidates;
  std::vector<SeedFailure> failures;
  std::size_t seeds = 0;

  cplx sample_point(int re_index, int im_index) const;
  double min_abs_det() const;
};

/// Samples |dispersion_determinant_entire| over the region (cell-centred along each axis with more
/// than one sample), seeds damped Newton iterations from local minima,
/// keeps converged roots inside the region with |det| <= det_tolerance,
/// removes duplicates and verifies each survivor.
DispersionScan scan_roots(const Region& region, const Density& density,
                          const TransmissionProblem& problem,
                          const ScanOptions& options = {});

}  // namespace npl::dispersion
