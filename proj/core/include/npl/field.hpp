#pragma once

#include <array>
#include <complex>
#include <functional>

namespace npl {

using cplx = std::complex<double>;

/// Value and partials of a field of (x, y).
struct Jet2 {
  cplx u{};
  cplx u_x{};
  cplx u_y{};
  cplx u_xx{};
  cplx u_yy{};
};

/// Value and partials of a field of (x, y, t).
struct Jet3 {
  cplx u{};
  cplx u_x{};
  cplx u_y{};
  cplx u_t{};
  cplx u_xx{};
  cplx u_yy{};
};

/// A field on an axis-aligned rectangle. When `jet` is empty, partials are
/// taken by fourth-order finite differences of `value`; stencils turn
/// one-sided near the edges of [lo, hi] so the field is never sampled outside.
struct Field2 {
  std::function<cplx(double, double)> value;
  std::function<Jet2(double, double)> jet;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};

  bool has_analytic_partials() const { return static_cast<bool>(jet); }
  Jet2 at(double x, double y) const;
};

/// Same as Field2 on a box in (x, y, t).
struct Field3 {
  std::function<cplx(double, double, double)> value;
  std::function<Jet3(double, double, double)> jet;
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{1.0, 1.0, 1.0};

  bool has_analytic_partials() const { return static_cast<bool>(jet); }
  Jet3 at(double x, double y, double t) const;
};

/// Drops the analytic partials so every derivative goes through finite
/// differences.
Field2 without_partials(Field2 f);
Field3 without_partials(Field3 f);

namespace fd {

inline constexpr double kDefaultStep = 1e-4;

struct Derivatives {
  cplx first{};
  cplx second{};
};

/// Fourth-order first and second derivatives of a univariate function at x,
/// restricted to samples in [lo, hi].
Derivatives derivatives(const std::function<cplx(double)>& f, double x,
                        double lo, double hi, double h = kDefaultStep);

}  // namespace fd
}  // namespace npl
