#include "npl/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "npl/errors.hpp"
#include "npl/quadrature.hpp"

namespace npl::energy {
namespace {

using modes::Convention;
using modes::ProblemSpec;
using quadrature::Box;
using quadrature::tensor_rule;

// Relative size of a boundary/non-local violation that triggers a warning.
constexpr double kPrecheckTol = 1e-8;
constexpr int kPrecheckSamples = 5;

bool is_integer(double v) { return v == std::floor(v); }

// Re[u conj(v)]
double re_dot(cplx u, cplx v) { return u.real() * v.real() + u.imag() * v.imag(); }

template <class F>
double integrate(const Box& box, int order, F&& f) {
  const auto rule = tensor_rule(box, order);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    const auto& p = rule.points[i];
    sum += rule.weights[i] * f(p[0], p[1], p[2]);
  }
  return sum;
}

double weight(const ProblemSpec& spec, double x, double y) {
  return std::pow(x, spec.n) * std::pow(y, spec.m);
}

double magnitude(cplx u, Convention c) {
  return c == Convention::paper_literal ? std::abs(u) : std::norm(u);
}

struct VolumeParts {
  double gradient_x = 0.0;
  double gradient_y = 0.0;
  double potential = 0.0;
};

VolumeParts volume_parts(const Field3& u, const ProblemSpec& spec, int order,
                         Convention convention) {
  const auto rule = tensor_rule(Box::cuboid(0, 1, 0, 1, 0, 1), order);
  VolumeParts v;
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    const auto& p = rule.points[i];
    const double w = rule.weights[i];
    const Jet3 j = u.at(p[0], p[1], p[2]);
    v.gradient_x += w * std::pow(p[1], spec.m) * std::norm(j.u_x);
    v.gradient_y += w * std::pow(p[0], spec.n) * std::norm(j.u_y);
    v.potential += w * weight(spec, p[0], p[1]) * magnitude(j.u, convention);
  }
  v.potential *= spec.lambda.real();
  return v;
}

}  // namespace

double FunctionalReport::term(const std::string& name) const {
  const auto it = std::find_if(terms.begin(), terms.end(),
                               [&](const Term& t) { return t.name == name; });
  if (it == terms.end()) throw DomainError("FunctionalReport: no term named " + name);
  return it->value;
}

double quadrature_tolerance(double n, double m, int quad_order, double scale) {
  const double s = std::max(1.0, scale);
  if (is_integer(n) && is_integer(m)) return 1e-10 * s;
  const double rate = 2.0 * std::min(n, m) + 2.0;
  return s * std::max(1e-10, std::pow(static_cast<double>(quad_order), -rate));
}

IdentityReport energy_identity_problem2(const Field3& u, const ProblemSpec& spec,
                                        int quad_order, Convention convention) {
  spec.validate();
  const int q = quad_order;
  const Box face = Box::rectangle(0, 1, 0, 1);

  const double s1 = integrate(face, q, [&](double x, double y, double) {
    return 0.5 * weight(spec, x, y) * std::norm(u.value(x, y, 0.0));
  });
  const double s6 = integrate(face, q, [&](double x, double y, double) {
    return 0.5 * weight(spec, x, y) * std::norm(u.value(x, y, 1.0));
  });
  // (y, t) faces
  const double s2 = integrate(face, q, [&](double y, double t, double) {
    const Jet3 j = u.at(1.0, y, t);
    return std::pow(y, spec.m) * re_dot(j.u, j.u_x);
  });
  const double s4 = integrate(face, q, [&](double y, double t, double) {
    const Jet3 j = u.at(0.0, y, t);
    return std::pow(y, spec.m) * re_dot(j.u, j.u_x);
  });
  // (x, t) faces
  const double s3 = integrate(face, q, [&](double x, double t, double) {
    const Jet3 j = u.at(x, 0.0, t);
    return std::pow(x, spec.n) * re_dot(j.u, j.u_y);
  });
  const double s5 = integrate(face, q, [&](double x, double t, double) {
    const Jet3 j = u.at(x, 1.0, t);
    return std::pow(x, spec.n) * re_dot(j.u, j.u_y);
  });

  const VolumeParts v = volume_parts(u, spec, q, convention);

  IdentityReport r;
  r.quad_order = q;
  r.surface_terms = s1 + s2 - s3 - s4 + s5 - s6;
  r.volume_terms = v.gradient_x + v.gradient_y + v.potential;
  r.defect = std::fabs(r.surface_terms - r.volume_terms);
  r.terms = {{"S1_t0", s1},         {"S2_x1", s2},          {"S3_y0", -s3},
             {"S4_x0", -s4},        {"S5_y1", s5},          {"S6_t1", -s6},
             {"volume_grad_x", v.gradient_x}, {"volume_grad_y", v.gradient_y},
             {"volume_potential", v.potential}};
  double scale = 0.0;
  for (const auto& t : r.terms) scale = std::max(scale, std::fabs(t.value));
  r.tolerance = quadrature_tolerance(spec.n, spec.m, q, scale);
  return r;
}

double interior_residual_integral(const Field3& u, const ProblemSpec& spec, int quad_order) {
  spec.validate();
  return integrate(Box::cuboid(0, 1, 0, 1, 0, 1), quad_order,
                   [&](double x, double y, double t) {
                     const Jet3 j = u.at(x, y, t);
                     const double xn = std::pow(x, spec.n);
                     const double ym = std::pow(y, spec.m);
                     const cplx lu = xn * ym * j.u_t - ym * j.u_xx - xn * j.u_yy +
                                     spec.lambda * xn * ym * j.u;
                     return re_dot(lu, j.u);
                   });
}

FunctionalReport energy_functional_problem2(const Field3& u, const ProblemSpec& spec,
                                            int quad_order, Convention convention) {
  spec.validate();
  FunctionalReport r;
  r.quad_order = quad_order;

  // Precheck of the lateral and non-local conditions on a coarse lattice.
  double scale = 0.0;
  double lateral[4] = {0.0, 0.0, 0.0, 0.0};  // x=0, x=1, y=0, y=1
  double nonlocal = 0.0;
  for (int a = 0; a < kPrecheckSamples; ++a) {
    for (int b = 0; b < kPrecheckSamples; ++b) {
      const double s = (a + 0.5) / kPrecheckSamples;
      const double t = (b + 0.5) / kPrecheckSamples;
      lateral[0] = std::max(lateral[0], std::abs(u.value(0.0, s, t)));
      lateral[1] = std::max(lateral[1], std::abs(u.value(1.0, s, t)));
      lateral[2] = std::max(lateral[2], std::abs(u.value(s, 0.0, t)));
      lateral[3] = std::max(lateral[3], std::abs(u.value(s, 1.0, t)));
      const cplx u0 = u.value(s, t, 0.0);
      const cplx u1 = u.value(s, t, 1.0);
      nonlocal = std::max(nonlocal, std::abs(u0 - spec.alpha * u1));
      scale = std::max({scale, std::abs(u0), std::abs(u1), std::abs(u.value(s, t, 0.5))});
    }
  }
  const double limit = kPrecheckTol * std::max(scale, 1e-300);
  const char* faces[4] = {"x=0", "x=1", "y=0", "y=1"};
  for (int f = 0; f < 4; ++f) {
    if (lateral[f] > limit) {
      std::ostringstream os;
      os << "lateral boundary condition violated on " << faces[f] << " (max |u| = "
         << lateral[f] << ")";
      r.warnings.push_back(os.str());
    }
  }
  if (nonlocal > limit) {
    std::ostringstream os;
    os << "non-local condition u(x,y,0) = alpha u(x,y,1) violated (max defect = "
       << nonlocal << ")";
    r.warnings.push_back(os.str());
  }

  const double top = integrate(Box::rectangle(0, 1, 0, 1), quad_order,
                               [&](double x, double y, double) {
                                 return weight(spec, x, y) *
                                        magnitude(u.value(x, y, 1.0), convention);
                               });
  const double boundary = 0.5 * (1.0 - std::norm(spec.alpha)) * top;
  const VolumeParts v = volume_parts(u, spec, quad_order, convention);
  r.terms = {{"nonlocal_boundary", boundary},
             {"gradient_x", v.gradient_x},
             {"gradient_y", v.gradient_y},
             {"potential", v.potential}};
  r.value = boundary + v.gradient_x + v.gradient_y + v.potential;
  return r;
}

double RealField2::dx(double x, double y) const {
  if (u_x) return u_x(x, y);
  const auto d = fd::derivatives([&](double s) { return cplx(value(s, y), 0.0); }, x,
                                 -1.0, 1.0);
  return d.first.real();
}

double cross_term_coefficient(const std::array<double, 6>& k) {
  if (k[1] == 0.0 || k[4] == 0.0)
    throw DomainError("cross_term_coefficient: k2 and k5 must be non-zero");
  return k[2] / k[1] - k[5] / k[4];
}

FunctionalReport energy_functional_problem3(const RealField2& u,
                                            const std::array<double, 6>& k,
                                            double alpha, double lambda,
                                            int quad_order, Convention convention) {
  if (k[1] == 0.0 || k[4] == 0.0)
    throw DomainError("energy_functional_problem3: k2 and k5 must be non-zero");
  const int q = quad_order;
  const double a2 = alpha * alpha;

  const double top_left = integrate(Box::interval(-1, 0), q, [&](double x, double, double) {
    const double v = u.value(x, 1.0);
    return v * v;
  });
  const double top_right = integrate(Box::interval(0, 1), q, [&](double x, double, double) {
    const double v = u.value(x, 1.0);
    return v * v;
  });
  double flux_right = 0.0;
  double flux_left = 0.0;
  double cross = 0.0;
  const auto rule = tensor_rule(Box::interval(0, 1), q);
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    const double y = rule.points[i][0];
    const double w = rule.weights[i];
    const double ux_right = u.dx(1.0, y);
    const double ux_left = u.dx(-1.0, y);
    flux_right += w * ux_right * ux_right;
    flux_left += w * ux_left * ux_left;
    const double partner =
        convention == Convention::paper_literal ? u.value(-1.0, y) : ux_left;
    cross += w * partner * ux_right;
  }
  auto volume = [&](double x0, double x1) {
    return integrate(Box::rectangle(x0, x1, 0, 1), q, [&](double x, double y, double) {
      const double ux = u.dx(x, y);
      const double v = u.value(x, y);
      return ux * ux + lambda * v * v;
    });
  };

  FunctionalReport r;
  r.quad_order = q;
  r.terms = {{"nonlocal_left", 0.5 * (a2 - 1.0) * top_left},
             {"nonlocal_right", 0.5 * (1.0 - a2) * top_right},
             {"flux_right", k[3] / k[4] * flux_right},
             {"flux_left", -k[0] / k[1] * flux_left},
             {"cross", cross_term_coefficient(k) * cross},
             {"volume_left", volume(-1.0, 0.0)},
             {"volume_right", volume(0.0, 1.0)}};
  for (const auto& t : r.terms) r.value += t.value;
  return r;
}

}  // namespace npl::energy
