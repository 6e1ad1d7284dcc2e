#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace npl::quadrature {

inline constexpr int kMinOrder = 2;
inline constexpr int kMaxOrder = 64;

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Throws DomainError unless order lies in [kMinOrder, kMaxOrder].
GaussRule gauss_legendre(int order);

/// Axis-aligned box of dimension 1 to 3. Unused axes are ignored.
struct Box {
  int dim = 1;
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{1.0, 1.0, 1.0};

  static Box interval(double a, double b);
  static Box rectangle(double x0, double x1, double y0, double y1);
  static Box cuboid(double x0, double x1, double y0, double y1, double z0, double z1);
};

/// Tensor-product rule mapped onto a box: points[i][0..dim) and weights[i].
struct TensorRule {
  int dim = 1;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

TensorRule tensor_rule(const Box& box, int order);

/// Integral of a callable over the box; exact for polynomials of degree
/// <= 2 order - 1 in each variable.
double gauss_quad(const std::function<double(std::span<const double>)>& f,
                  const Box& box, int order);

/// Integral from values sampled at tensor_rule(box, order).points.
double integrate_samples(std::span<const double> values, const TensorRule& rule);

}  // namespace npl::quadrature
