#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "npl/field.hpp"

namespace npl::modes {

enum class Variant { problem1, problem2, problem3 };

/// `corrected` evaluates the eigenvalue and temporal factor that satisfy the
/// separated ODE and the non-local condition; `paper_literal` evaluates the
/// printed formulas (arctan branch with +s*pi, +mu in the temporal exponent,
/// +mu_k in the Problem-1 eigenvalue) for comparison only.
enum class Convention { corrected, paper_literal };

/// Radial kernel of the spatial factor. Only bessel_j yields X(1) = 0 with
/// mu taken from zeros of J; bessel_i is kept for the literal Problem-1 form.
enum class Kernel { bessel_j, bessel_i };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

struct ProblemSpec {
  double m = 1.0;  // y-degeneracy exponent
  double n = 1.0;  // x-degeneracy exponent
  cplx alpha{0.5, 0.0};
  cplx lambda{0.0, 0.0};
  Variant variant = Variant::problem2;

  /// Throws DomainError unless m > 0, n > 0 and alpha != 0.
  void validate() const;
};

struct EigenMode {
  int k = 1;
  int p = 1;
  int s = 0;
  double mu1 = 0.0;
  std::optional<double> mu2;
  double mu = 0.0;
  cplx lambda{};
  cplx coeff{1.0, 0.0};
};

/// Separated factor sqrt(x) J_nu(c x^q) (scaled as in the closed-form
/// eigenfunction with unit amplitude), nu = 1/(exponent+2), q = (exponent+2)/2,
/// c = 2 sqrt(mu)/(exponent+2). Solves X'' + mu x^exponent X = 0, X(0) = X(1) = 0.
class SpatialFactor {
 public:
  struct Derivatives {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
  };

  SpatialFactor(int index, double exponent, Kernel kernel = Kernel::bessel_j);

  int index() const { return index_; }
  double exponent() const { return exponent_; }
  double order() const { return nu_; }
  double zero() const { return zero_; }
  double mu() const { return mu_; }

  double value(double x) const;
  /// Second derivative from Bessel recurrences (J_{nu-1}, J_nu, J_{nu+1}),
  /// not from the ODE it is supposed to satisfy.
  Derivatives derivatives(double x) const;

 private:
  int index_;
  double exponent_;
  Kernel kernel_;
  double nu_;
  double q_;
  double zero_;
  double mu_;
  double c_;
  double scale_;
};

double mode_x(int k, double n, double x);
double mode_y(int p, double m, double y);

/// lambda = -mu + ln|alpha| + i (Arg alpha + 2 pi s).
cplx lambda_problem2(double mu, cplx alpha, int s,
                     Convention convention = Convention::corrected);

/// Exponent r of the temporal factor T(t) = coeff * exp(r t).
cplx temporal_rate(const EigenMode& mode, cplx alpha,
                   Convention convention = Convention::corrected);

/// T(t) = coeff * exp(-(lambda + mu) t); T(0) = alpha T(1).
cplx mode_t(double t, const EigenMode& mode, cplx alpha,
            Convention convention = Convention::corrected);

/// Separated eigenmode X_k(x) Y_p(y) T(t) of the three-dimensional problem.
class Problem2Mode {
 public:
  Problem2Mode(int k, int p, int s, const ProblemSpec& spec,
               Convention convention = Convention::corrected);

  const EigenMode& mode() const { return mode_; }
  /// The problem with lambda replaced by this mode's eigenvalue.
  const ProblemSpec& spec() const { return spec_; }
  const SpatialFactor& x_factor() const { return x_; }
  const SpatialFactor& y_factor() const { return y_; }

  cplx value(double x, double y, double t) const;
  Jet3 jet(double x, double y, double t) const;
  Field3 field() const;

 private:
  ProblemSpec spec_;
  SpatialFactor x_;
  SpatialFactor y_;
  EigenMode mode_;
  cplx rate_;
};

cplx mode_problem2(double x, double y, double t, int k, int p, int s,
                   const ProblemSpec& spec);

/// lambda = -mu + (m+1) ln|alpha| + i (m+1) p pi. Throws ParityError unless
/// (-1)^p = sign(alpha).
cplx lambda_problem1(double mu, double alpha, int p, double m,
                     Convention convention = Convention::corrected);

/// Eigenmode X_k(x) exp((-ln|alpha| - i p pi) y^(m+1)) of the two-dimensional
/// problem. Requires real alpha.
class Problem1Mode {
 public:
  Problem1Mode(int k, int p, const ProblemSpec& spec,
               Convention convention = Convention::corrected,
               Kernel kernel = Kernel::bessel_j);

  const EigenMode& mode() const { return mode_; }
  const ProblemSpec& spec() const { return spec_; }

  cplx value(double x, double y) const;
  /// u_yy is left at zero on y = 0.
  Jet2 jet(double x, double y) const;
  Field2 field() const;

 private:
  ProblemSpec spec_;
  SpatialFactor x_;
  EigenMode mode_;
  cplx exponent_;
};

cplx mode_problem1(double x, double y, int k, int p, const ProblemSpec& spec);

struct TheoremCheck {
  std::string theorem;
  bool guaranteed = false;
  std::vector<std::string> violated;
};

/// Evaluates the sufficient uniqueness conditions attached to the problem
/// variant. k_coeffs must be given exactly when the variant is problem3.
TheoremCheck check_uniqueness_conditions(
    const ProblemSpec& spec,
    const std::optional<std::array<double, 6>>& k_coeffs = std::nullopt);

}  // namespace npl::modes
