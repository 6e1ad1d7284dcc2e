#include "npl/modes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "npl/errors.hpp"
#include "npl/roots.hpp"
#include "npl/specfun.hpp"

namespace npl::modes {
namespace {

constexpr double kPi = std::numbers::pi;

// Relative tolerance for the equality clauses of the uniqueness conditions.
constexpr double kClauseTol = 1e-12;

bool nearly_equal(double a, double b) {
  return std::fabs(a - b) <= kClauseTol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::problem1: return "problem1";
    case Variant::problem2: return "problem2";
    case Variant::problem3: return "problem3";
  }
  return "unknown";
}

Variant parse_variant(std::string_view text) {
  if (text == "problem1") return Variant::problem1;
  if (text == "problem2") return Variant::problem2;
  if (text == "problem3") return Variant::problem3;
  throw DomainError("unknown problem variant '" + std::string(text) + "'");
}

void ProblemSpec::validate() const {
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("ProblemSpec: m must be > 0");
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("ProblemSpec: n must be > 0");
  if (!(std::abs(alpha) > 0.0) || !std::isfinite(std::abs(alpha)))
    throw DomainError("ProblemSpec: alpha must be non-zero");
}

// --- spatial factor -------------------------------------------------------

SpatialFactor::SpatialFactor(int index, double exponent, Kernel kernel)
    : index_(index), exponent_(exponent), kernel_(kernel) {
  if (index < 1) throw DomainError("SpatialFactor: index must be >= 1");
  if (!(exponent > 0.0)) throw DomainError("SpatialFactor: exponent must be > 0");
  nu_ = 1.0 / (exponent + 2.0);
  q_ = 0.5 * (exponent + 2.0);
  zero_ = roots::bessel_j_zeros(nu_, index).zeros.back();
  mu_ = roots::eigenvalue_mu(zero_, exponent);
  c_ = 2.0 * std::sqrt(mu_) / (exponent + 2.0);
  scale_ = std::pow(2.0 / (exponent + 2.0), nu_) * std::pow(mu_, 0.5 * nu_);
}

double SpatialFactor::value(double x) const {
  if (x <= 0.0) return 0.0;
  const double z = c_ * std::pow(x, q_);
  const double kernel = kernel_ == Kernel::bessel_j ? specfun::bessel_j(nu_, z)
                                                    : specfun::bessel_i(nu_, z);
  return scale_ * std::sqrt(x) * kernel;
}

SpatialFactor::Derivatives SpatialFactor::derivatives(double x) const {
  if (x <= 0.0) {
    // X ~ scale (c/2)^nu x / Gamma(nu + 1) near the origin.
    const double slope =
        scale_ * std::exp(nu_ * std::log(0.5 * c_) - specfun::ln_gamma(nu_ + 1.0));
    return {0.0, slope, 0.0};
  }
  const double z = c_ * std::pow(x, q_);
  double f = 0.0;
  double fp = 0.0;
  double z2fpp = 0.0;
  if (kernel_ == Kernel::bessel_j) {
    f = specfun::bessel_j(nu_, z);
    const double f_up = specfun::bessel_j(nu_ + 1.0, z);
    fp = 0.5 * (specfun::bessel_j(nu_ - 1.0, z) - f_up);
    // J'' = -nu/z^2 J + (nu/z) J' - J'_{nu+1},  J'_{nu+1} = J - (nu+1)/z J_{nu+1}
    z2fpp = -nu_ * f + nu_ * z * fp - z * z * f + (nu_ + 1.0) * z * f_up;
  } else {
    f = specfun::bessel_i(nu_, z);
    fp = 0.5 * (specfun::bessel_i(nu_ - 1.0, z) + specfun::bessel_i(nu_ + 1.0, z));
    z2fpp = -z * fp + (z * z + nu_ * nu_) * f;
  }
  const double rx = std::sqrt(x);
  const double value = scale_ * rx * f;
  const double first = scale_ / rx * (0.5 * f + q_ * z * fp);
  const double second =
      scale_ / (x * rx) * (-0.25 * f + q_ * q_ * z * fp + q_ * q_ * z2fpp);
  return {value, first, second};
}

double mode_x(int k, double n, double x) {
  if (x < 0.0 || x > 1.0) throw DomainError("mode_x: x outside [0, 1]");
  return SpatialFactor(k, n).value(x);
}

double mode_y(int p, double m, double y) {
  if (y < 0.0 || y > 1.0) throw DomainError("mode_y: y outside [0, 1]");
  return SpatialFactor(p, m).value(y);
}

// --- temporal factor and eigenvalues ---------------------------------------

cplx lambda_problem2(double mu, cplx alpha, int s, Convention convention) {
  if (!(std::abs(alpha) > 0.0)) throw DomainError("lambda_problem2: alpha must be non-zero");
  const double re = -mu + std::log(std::abs(alpha));
  if (convention == Convention::paper_literal) {
    return {re, std::atan(alpha.imag() / alpha.real()) + s * kPi};
  }
  return {re, std::arg(alpha) + 2.0 * kPi * s};
}

cplx temporal_rate(const EigenMode& mode, cplx alpha, Convention convention) {
  if (convention == Convention::paper_literal) {
    const double arg = std::atan(alpha.imag() / alpha.real()) + mode.s * kPi;
    return {mode.mu - std::log(std::abs(alpha)), -arg};
  }
  return -(mode.lambda + mode.mu);
}

cplx mode_t(double t, const EigenMode& mode, cplx alpha, Convention convention) {
  return mode.coeff * std::exp(temporal_rate(mode, alpha, convention) * t);
}

// --- problem 2 ---------------------------------------------------------------

Problem2Mode::Problem2Mode(int k, int p, int s, const ProblemSpec& spec,
                           Convention convention)
    : spec_(spec), x_(k, spec.n), y_(p, spec.m) {
  spec_.validate();
  mode_.k = k;
  mode_.p = p;
  mode_.s = s;
  mode_.mu1 = x_.mu();
  mode_.mu2 = y_.mu();
  mode_.mu = mode_.mu1 + *mode_.mu2;
  mode_.lambda = lambda_problem2(mode_.mu, spec.alpha, s, convention);
  spec_.lambda = mode_.lambda;
  spec_.variant = Variant::problem2;
  rate_ = temporal_rate(mode_, spec.alpha, convention);
}

cplx Problem2Mode::value(double x, double y, double t) const {
  return mode_.coeff * x_.value(x) * y_.value(y) * std::exp(rate_ * t);
}

Jet3 Problem2Mode::jet(double x, double y, double t) const {
  const auto dx = x_.derivatives(x);
  const auto dy = y_.derivatives(y);
  const cplx T = mode_.coeff * std::exp(rate_ * t);
  Jet3 j;
  j.u = dx.value * dy.value * T;
  j.u_x = dx.first * dy.value * T;
  j.u_y = dx.value * dy.first * T;
  j.u_t = rate_ * j.u;
  j.u_xx = dx.second * dy.value * T;
  j.u_yy = dx.value * dy.second * T;
  return j;
}

Field3 Problem2Mode::field() const {
  Field3 f;
  f.value = [self = *this](double x, double y, double t) { return self.value(x, y, t); };
  f.jet = [self = *this](double x, double y, double t) { return self.jet(x, y, t); };
  return f;
}

cplx mode_problem2(double x, double y, double t, int k, int p, int s,
                   const ProblemSpec& spec) {
  if (spec.variant != Variant::problem2)
    throw DomainError("mode_problem2: spec.variant must be problem2");
  return Problem2Mode(k, p, s, spec).value(x, y, t);
}

// --- problem 1 ---------------------------------------------------------------

cplx lambda_problem1(double mu, double alpha, int p, double m, Convention convention) {
  if (alpha == 0.0) throw DomainError("lambda_problem1: alpha must be non-zero");
  if (p < 0) throw DomainError("lambda_problem1: p must be >= 0");
  const bool even = p % 2 == 0;
  if (even != (alpha > 0.0)) {
    std::ostringstream os;
    os << "lambda_problem1: (-1)^p must equal sign(alpha); got p=" << p
       << ", alpha=" << alpha;
    throw ParityError(os.str());
  }
  const double sign = convention == Convention::paper_literal ? 1.0 : -1.0;
  return {sign * mu + (m + 1.0) * std::log(std::fabs(alpha)), (m + 1.0) * p * kPi};
}

Problem1Mode::Problem1Mode(int k, int p, const ProblemSpec& spec,
                           Convention convention, Kernel kernel)
    : spec_(spec), x_(k, spec.n, kernel) {
  spec_.validate();
  if (spec.alpha.imag() != 0.0)
    throw DomainError("Problem1Mode: alpha must be real for problem 1");
  const double alpha = spec.alpha.real();
  mode_.k = k;
  mode_.p = p;
  mode_.s = 0;
  mode_.mu1 = x_.mu();
  mode_.mu = mode_.mu1;
  mode_.lambda = lambda_problem1(mode_.mu, alpha, p, spec.m, convention);
  spec_.lambda = mode_.lambda;
  spec_.variant = Variant::problem1;
  exponent_ = cplx(-std::log(std::fabs(alpha)), -p * kPi);
}

cplx Problem1Mode::value(double x, double y) const {
  return mode_.coeff * x_.value(x) * std::exp(exponent_ * std::pow(y, spec_.m + 1.0));
}

Jet2 Problem1Mode::jet(double x, double y) const {
  const double m = spec_.m;
  const auto dx = x_.derivatives(x);
  const cplx E = mode_.coeff * std::exp(exponent_ * std::pow(y, m + 1.0));
  const cplx g = (m + 1.0) * exponent_;  // d/dy of the exponent is g y^m
  Jet2 j;
  j.u = dx.value * E;
  j.u_x = dx.first * E;
  j.u_xx = dx.second * E;
  j.u_y = g * std::pow(y, m) * j.u;
  if (y > 0.0) {
    j.u_yy = (g * g * std::pow(y, 2.0 * m) + g * m * std::pow(y, m - 1.0)) * j.u;
  }
  return j;
}

Field2 Problem1Mode::field() const {
  Field2 f;
  f.value = [self = *this](double x, double y) { return self.value(x, y); };
  f.jet = [self = *this](double x, double y) { return self.jet(x, y); };
  return f;
}

cplx mode_problem1(double x, double y, int k, int p, const ProblemSpec& spec) {
  if (spec.variant != Variant::problem1)
    throw DomainError("mode_problem1: spec.variant must be problem1");
  return Problem1Mode(k, p, spec).value(x, y);
}

// --- uniqueness conditions ---------------------------------------------------

TheoremCheck check_uniqueness_conditions(
    const ProblemSpec& spec, const std::optional<std::array<double, 6>>& k_coeffs) {
  const bool needs_k = spec.variant == Variant::problem3;
  if (needs_k && !k_coeffs)
    throw DomainError("check_uniqueness_conditions: problem3 requires k_coeffs");
  if (!needs_k && k_coeffs)
    throw DomainError("check_uniqueness_conditions: k_coeffs apply to problem3 only");

  TheoremCheck out;
  const cplx a = spec.alpha;
  const cplx l = spec.lambda;
  switch (spec.variant) {
    case Variant::problem1: {
      out.theorem = "theorem1";
      const bool real_alpha = a.imag() == 0.0;
      if (!(real_alpha && a.real() != 0.0 && std::fabs(a.real()) <= 1.0))
        out.violated.emplace_back("alpha in [-1,0) U (0,1]");
      if (!(l.real() >= 0.0)) out.violated.emplace_back("Re lambda >= 0");
      break;
    }
    case Variant::problem2: {
      out.theorem = "theorem2";
      if (!(std::norm(a) < 1.0)) out.violated.emplace_back("alpha1^2 + alpha2^2 < 1");
      if (!(l.real() >= 0.0)) out.violated.emplace_back("lambda1 >= 0");
      break;
    }
    case Variant::problem3: {
      out.theorem = "theorem3";
      const auto& k = *k_coeffs;
      if (!nearly_equal(std::abs(a), 1.0)) out.violated.emplace_back("|alpha| = 1");
      if (!(l.imag() == 0.0 && l.real() > 0.0)) out.violated.emplace_back("lambda > 0");
      if (!nearly_equal(k[2] * k[4], k[1] * k[5])) out.violated.emplace_back("k3*k5 = k2*k6");
      if (!(k[0] * k[1] < 0.0)) out.violated.emplace_back("k1*k2 < 0");
      if (!(k[3] * k[4] > 0.0)) out.violated.emplace_back("k4*k5 > 0");
      break;
    }
  }
  out.guaranteed = out.violated.empty();
  return out;
}

}  // namespace npl::modes
