#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "npl/field.hpp"
#include "npl/modes.hpp"

namespace npl::energy {

struct Term {
  std::string name;
  double value = 0.0;
};

/// Both sides of the Green identity obtained by multiplying the degenerate
/// equation by conj(u) and integrating over the unit cube:
///   S1 + S2 - S3 - S4 + S5 - S6
///     = int (y^m |u_x|^2 + x^n |u_y|^2 + lambda_1 x^n y^m |u|^2),
/// with face terms  S1/S6 = 1/2 int x^n y^m |u|^2 at t = 0 / t = 1,
/// S2/S4 = int y^m Re[u conj(u_x)] at x = 1 / x = 0 and
/// S3/S5 = int x^n Re[u conj(u_y)] at y = 0 / y = 1.
struct IdentityReport {
  double surface_terms = 0.0;
  double volume_terms = 0.0;
  double defect = 0.0;  // |surface_terms - volume_terms|
  int quad_order = 0;
  /// Quadrature accuracy budget: 1e-10 * scale when both exponents are
  /// integers, otherwise scale * order^-(2 min(n, m) + 2) (the weights x^n,
  /// y^m are integrable but not smooth at the origin).
  double tolerance = 0.0;
  std::vector<Term> terms;

  bool within_tolerance() const { return defect <= tolerance; }
};

/// Value of a functional together with its individual addends.
struct FunctionalReport {
  double value = 0.0;
  int quad_order = 0;
  std::vector<Term> terms;
  std::vector<std::string> warnings;

  double term(const std::string& name) const;
};

/// Tolerance model documented on IdentityReport.
double quadrature_tolerance(double n, double m, int quad_order, double scale);

/// Evaluates both sides of the identity for u using only first partials
/// (analytic when u provides them). Convention::paper_literal replaces
/// |u|^2 by |u| in the lambda_1 volume term.
IdentityReport energy_identity_problem2(
    const Field3& u, const modes::ProblemSpec& spec, int quad_order,
    modes::Convention convention = modes::Convention::corrected);

/// int Re[conj(u) (x^n y^m u_t - y^m u_xx - x^n u_yy + lambda x^n y^m u)]
/// over the cube. For any smooth u this equals volume - surface of the
/// identity above; it vanishes for solutions.
double interior_residual_integral(const Field3& u, const modes::ProblemSpec& spec,
                                  int quad_order);

/// 1/2 (1 - |alpha|^2) int x^n y^m |u(x,y,1)|^2
///   + int (y^m |u_x|^2 + x^n |u_y|^2 + lambda_1 x^n y^m |u|^2),
/// which is zero for solutions satisfying the lateral and non-local
/// conditions. Those conditions are sampled first; violations are recorded
/// as warnings, not thrown. paper_literal uses |u| in place of |u|^2 in the
/// first and last addends.
FunctionalReport energy_functional_problem2(
    const Field3& u, const modes::ProblemSpec& spec, int quad_order,
    modes::Convention convention = modes::Convention::corrected);

/// Real field on [-1, 1] x [0, 1] for the transmission problem. When u_x is
/// empty it is taken by finite differences.
struct RealField2 {
  std::function<double(double, double)> value;
  std::function<double(double, double)> u_x;

  double dx(double x, double y) const;
};

/// k3/k2 - k6/k5.
double cross_term_coefficient(const std::array<double, 6>& k);

/// Sum that the a-b-c argument for the transmission problem sets to zero:
///   (a^2-1)/2 int_{-1}^0 u^2(x,1) + (1-a^2)/2 int_0^1 u^2(x,1)
///   + int [k4/k5 u_x^2(1,y) - k1/k2 u_x^2(-1,y)]
///   + (k3/k2 - k6/k5) int u_x(-1,y) u_x(1,y)
///   + int_{D1} (u_x^2 + lambda u^2) + int_{D2} (u_x^2 + lambda u^2).
/// paper_literal uses u(-1,y) u_x(1,y) in the cross term.
/// Throws DomainError when k2 or k5 is zero.
FunctionalReport energy_functional_problem3(
    const RealField2& u, const std::array<double, 6>& k, double alpha,
    double lambda, int quad_order,
    modes::Convention convention = modes::Convention::corrected);

}  // namespace npl::energy
