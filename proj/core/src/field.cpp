#include "npl/field.hpp"

namespace npl {
namespace fd {

Derivatives derivatives(const std::function<cplx(double)>& f, double x,
                        double lo, double hi, double h) {
  if (x - 2.0 * h >= lo && x + 2.0 * h <= hi) {
    const cplx fm2 = f(x - 2.0 * h);
    const cplx fm1 = f(x - h);
    const cplx f0 = f(x);
    const cplx fp1 = f(x + h);
    const cplx fp2 = f(x + 2.0 * h);
    return {(fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h),
            (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)};
  }
  // One-sided stencils, mirrored at the upper edge.
  const double dir = (x - 2.0 * h < lo) ? 1.0 : -1.0;
  const double s = dir * h;
  cplx v[6];
  for (int i = 0; i < 6; ++i) v[i] = f(x + i * s);
  const cplx d1 = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] -
                   3.0 * v[4]) /
                  (12.0 * s);
  const cplx d2 = (45.0 * v[0] - 154.0 * v[1] + 214.0 * v[2] - 156.0 * v[3] +
                   61.0 * v[4] - 10.0 * v[5]) /
                  (12.0 * h * h);
  return {d1, d2};
}

}  // namespace fd

Jet2 Field2::at(double x, double y) const {
  if (jet) return jet(x, y);
  const auto dx = fd::derivatives([&](double s) { return value(s, y); }, x,
                                  lo[0], hi[0]);
  const auto dy = fd::derivatives([&](double s) { return value(x, s); }, y,
                                  lo[1], hi[1]);
  return {value(x, y), dx.first, dy.first, dx.second, dy.second};
}

Jet3 Field3::at(double x, double y, double t) const {
  if (jet) return jet(x, y, t);
  const auto dx = fd::derivatives([&](double s) { return value(s, y, t); }, x,
                                  lo[0], hi[0]);
  const auto dy = fd::derivatives([&](double s) { return value(x, s, t); }, y,
                                  lo[1], hi[1]);
  const auto dt = fd::derivatives([&](double s) { return value(x, y, s); }, t,
                                  lo[2], hi[2]);
  return {value(x, y, t), dx.first, dy.first, dt.first, dx.second, dy.second};
}

Field2 without_partials(Field2 f) {
  f.jet = nullptr;
  return f;
}

Field3 without_partials(Field3 f) {
  f.jet = nullptr;
  return f;
}

}  // namespace npl
