#include "npl/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "npl/errors.hpp"

namespace npl::quadrature {

GaussRule gauss_legendre(int order) {
  if (order < kMinOrder || order > kMaxOrder) {
    std::ostringstream os;
    os << "gauss_legendre: order " << order << " outside [" << kMinOrder << ", "
       << kMaxOrder << "]";
    throw DomainError(os.str());
  }
  const int n = order;
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton on P_n from the Tricomi estimate; roots are symmetric.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = z;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

Box Box::interval(double a, double b) { return {1, {a, 0.0, 0.0}, {b, 0.0, 0.0}}; }

Box Box::rectangle(double x0, double x1, double y0, double y1) {
  return {2, {x0, y0, 0.0}, {x1, y1, 0.0}};
}

Box Box::cuboid(double x0, double x1, double y0, double y1, double z0, double z1) {
  return {3, {x0, y0, z0}, {x1, y1, z1}};
}

TensorRule tensor_rule(const Box& box, int order) {
  if (box.dim < 1 || box.dim > 3) {
    std::ostringstream os;
    os << "tensor_rule: dimension " << box.dim << " outside [1, 3]";
    throw DomainError(os.str());
  }
  const GaussRule g = gauss_legendre(order);
  const int n = order;
  std::size_t total = 1;
  for (int d = 0; d < box.dim; ++d) total *= static_cast<std::size_t>(n);

  TensorRule rule;
  rule.dim = box.dim;
  rule.points.resize(total);
  rule.weights.resize(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    double w = 1.0;
    std::array<double, 3> pt{0.0, 0.0, 0.0};
    for (int d = box.dim - 1; d >= 0; --d) {
      const std::size_t i = rest % n;
      rest /= n;
      const double half = 0.5 * (box.hi[d] - box.lo[d]);
      const double mid = 0.5 * (box.hi[d] + box.lo[d]);
      pt[d] = mid + half * g.nodes[i];
      w *= half * g.weights[i];
    }
    rule.points[idx] = pt;
    rule.weights[idx] = w;
  }
  return rule;
}

double gauss_quad(const std::function<double(std::span<const double>)>& f,
                  const Box& box, int order) {
  const TensorRule rule = tensor_rule(box, order);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    sum += rule.weights[i] *
           f(std::span<const double>(rule.points[i].data(), static_cast<std::size_t>(rule.dim)));
  }
  return sum;
}

double integrate_samples(std::span<const double> values, const TensorRule& rule) {
  if (values.size() != rule.weights.size())
    throw DomainError("integrate_samples: sample count does not match the rule");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += rule.weights[i] * values[i];
  return sum;
}

}  // namespace npl::quadrature
