#include "npl/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "npl/errors.hpp"
#include "npl/parallel.hpp"

namespace npl::dispersion {

namespace {

constexpr double kDegenerate = 1e-10;

// Value and slope of the two basis functions of one side at a point.
struct Pair {
  cplx f0, d0;  // first function
  cplx f1, d1;  // second function
};

Pair exponential_pair(cplx z, double x) {
  if (std::abs(z) < kDegenerate) return {1.0, 0.0, x, 1.0};
  const cplx w = std::sqrt(z);
  const cplx ep = std::exp(w * x);
  const cplx em = std::exp(-w * x);
  return {ep, w * ep, em, -w * em};
}

// cosh(w x) and sinh(w x)/w with their x-derivatives z sinh(w x)/w, cosh(w x).
Pair entire_pair(cplx z, double x) {
  const cplx w = std::sqrt(z);
  cplx c, s;
  if (std::abs(w * x) < 1e-3) {
    const cplx t = z * x * x;
    c = 1.0 + t / 2.0 * (1.0 + t / 12.0 * (1.0 + t / 30.0));
    s = x * (1.0 + t / 6.0 * (1.0 + t / 20.0 * (1.0 + t / 42.0)));
  } else {
    c = std::cosh(w * x);
    s = std::sinh(w * x) / w;
  }
  return {c, z * s, s, c};
}

template <class Basis>
Matrix4 assemble(cplx lambda, const TransmissionProblem& pb, Basis basis) {
  const cplx sigma = sigma_branch(pb.alpha, pb.s);
  const cplx zp = lambda + sigma;
  const cplx zm = lambda - sigma;
  const Pair p0 = basis(zp, 0.0), p1 = basis(zp, 1.0);
  const Pair n0 = basis(zm, 0.0), n1 = basis(zm, -1.0);
  const auto& k = pb.k;

  Matrix4 a;
  a << p0.f0, p0.f1, -n0.f0, -n0.f1,
       p0.d0, p0.d1, -n0.d0, -n0.d1,
       -k[2] * p1.d0, -k[2] * p1.d1, k[0] * n1.d0 + k[1] * n1.f0, k[0] * n1.d1 + k[1] * n1.f1,
       k[3] * p1.d0 + k[4] * p1.f0, k[3] * p1.d1 + k[4] * p1.f1, -k[5] * n1.d0, -k[5] * n1.d1;
  return a;
}

// Cell-centred samples; a single sample sits at the midpoint.
double axis_point(double lo, double hi, int count, int i) {
  return lo + (i + 0.5) * (hi - lo) / count;
}

struct NewtonOutcome {
  bool ok = false;
  cplx lambda{};
  double abs_det = 0.0;
  std::string reason;
};

NewtonOutcome newton(cplx seed, const TransmissionProblem& pb, const ScanOptions& opt) {
  auto f = [&](cplx z) { return dispersion_determinant_entire(z, pb); };
  cplx z = seed;
  cplx fz = f(z);
  for (int it = 0; it < opt.max_newton_iterations; ++it) {
    if (!std::isfinite(std::abs(fz))) return {false, z, std::abs(fz), "non-finite determinant"};
    // Analytic function: a real-direction central difference gives f'.
    const double h = 1e-6 * std::max(1.0, std::abs(z));
    const cplx df = (f(z + h) - f(z - h)) / (2.0 * h);
    if (df == cplx{}) return {false, z, std::abs(fz), "zero derivative"};
    cplx step = fz / df;
    double damping = 1.0;
    cplx trial = z - step;
    cplx ft = f(trial);
    int halvings = 0;
    while (!(std::abs(ft) < std::abs(fz)) && halvings < 30) {
      damping *= 0.5;
      trial = z - damping * step;
      ft = f(trial);
      ++halvings;
    }
    if (!(std::abs(ft) < std::abs(fz))) {
      if (std::abs(fz) <= opt.det_tolerance) return {true, z, std::abs(fz), {}};
      return {false, z, std::abs(fz), "damped step failed to decrease |det|"};
    }
    const double moved = std::abs(trial - z);
    z = trial;
    fz = ft;
    if (moved <= 1e-14 * std::max(1.0, std::abs(z))) break;
  }
  if (std::abs(fz) <= opt.det_tolerance) return {true, z, std::abs(fz), {}};
  return {false, z, std::abs(fz), "no convergence to |det| <= tolerance"};
}

double relative(double defect, double scale) { return scale > 0.0 ? defect / scale : defect; }

}  // namespace

void TransmissionProblem::validate() const {
  if (alpha == 0.0 || !std::isfinite(alpha)) throw DomainError("TransmissionProblem: alpha must be finite and nonzero");
  for (double v : k)
    if (!std::isfinite(v)) throw DomainError("TransmissionProblem: k_i must be finite");
}

cplx sigma_branch(cplx alpha, int s) {
  if (std::abs(alpha) == 0.0) throw DomainError("sigma_branch: alpha must be nonzero");
  return -std::log(alpha) + cplx(0.0, 2.0 * std::numbers::pi * s);
}

Matrix4 dispersion_matrix(cplx lambda, const TransmissionProblem& problem) {
  return assemble(lambda, problem, exponential_pair);
}

cplx dispersion_determinant(cplx lambda, const TransmissionProblem& problem) {
  return dispersion_matrix(lambda, problem).determinant();
}

Matrix4 dispersion_matrix_entire(cplx lambda, const TransmissionProblem& problem) {
  return assemble(lambda, problem, entire_pair);
}

cplx dispersion_determinant_entire(cplx lambda, const TransmissionProblem& problem) {
  return dispersion_matrix_entire(lambda, problem).determinant();
}

bool Region::contains(cplx z, double tol) const {
  return z.real() >= re_min - tol && z.real() <= re_max + tol && z.imag() >= im_min - tol &&
         z.imag() <= im_max + tol;
}

cplx ModeShape::phi(double x) const {
  if (x >= 0.0) {
    const Pair p = entire_pair(lambda + sigma, x);
    return coeffs(0) * p.f0 + coeffs(1) * p.f1;
  }
  const Pair p = entire_pair(lambda - sigma, x);
  return coeffs(2) * p.f0 + coeffs(3) * p.f1;
}

cplx ModeShape::dphi(double x) const {
  if (x >= 0.0) {
    const Pair p = entire_pair(lambda + sigma, x);
    return coeffs(0) * p.d0 + coeffs(1) * p.d1;
  }
  const Pair p = entire_pair(lambda - sigma, x);
  return coeffs(2) * p.d0 + coeffs(3) * p.d1;
}

cplx ModeShape::u(double x, double y) const { return std::exp(sigma * y) * phi(x); }

double VerificationReport::max_residual() const {
  return std::max({pde_residual, side_condition_1, side_condition_2, nonlocal_residual, c1_mismatch});
}

VerificationReport verify_candidate(cplx lambda, const TransmissionProblem& problem) {
  problem.validate();
  VerificationReport r;
  r.lambda = lambda;
  const Matrix4 a = dispersion_matrix_entire(lambda, problem);
  r.abs_det = std::abs(a.determinant());
  Eigen::JacobiSVD<Matrix4> svd(a, Eigen::ComputeFullV);
  const auto sv = svd.singularValues();
  r.condition = sv(0) > 0.0 ? sv(3) / sv(0) : 1.0;
  r.null_space_reliable = r.condition <= 1e-8;

  ModeShape& m = r.shape;
  m.lambda = lambda;
  m.sigma = sigma_branch(problem.alpha, problem.s);
  m.coeffs = svd.matrixV().col(3);
  m.coeffs /= m.coeffs.norm();

  // Eq. (19) on each half: u_xx - sign(x) u_y - lambda u, partials by
  // fourth-order central differences, 10 x 20 points per half.
  const double h = 1e-3;
  double worst = 0.0, scale = 0.0;
  for (int side : {1, -1}) {
    for (int i = 0; i < 10; ++i) {
      const double x = side * (i + 0.5) / 10.0;
      for (int j = 0; j < 20; ++j) {
        const double y = (j + 0.5) / 20.0;
        const cplx u = m.u(x, y);
        const cplx uxx = (-m.u(x + 2 * h, y) + 16.0 * m.u(x + h, y) - 30.0 * u + 16.0 * m.u(x - h, y) -
                          m.u(x - 2 * h, y)) / (12.0 * h * h);
        const cplx uy = (-m.u(x, y + 2 * h) + 8.0 * m.u(x, y + h) - 8.0 * m.u(x, y - h) + m.u(x, y - 2 * h)) /
                        (12.0 * h);
        worst = std::max(worst, std::abs(uxx - double(side) * uy - lambda * u));
        scale = std::max({scale, std::abs(uxx), std::abs(uy), std::abs(lambda * u)});
      }
    }
  }
  r.pde_residual = relative(worst, scale);

  const auto& k = problem.k;
  double w1 = 0.0, s1 = 0.0, w2 = 0.0, s2 = 0.0;
  for (int j = 0; j <= 20; ++j) {
    const double y = j / 20.0;
    const cplx e = std::exp(m.sigma * y);
    const cplx ul = e * m.phi(-1.0), uxl = e * m.dphi(-1.0);
    const cplx ur = e * m.phi(1.0), uxr = e * m.dphi(1.0);
    w1 = std::max(w1, std::abs(k[0] * uxl + k[1] * ul - k[2] * uxr));
    s1 = std::max(s1, std::abs(k[0] * uxl) + std::abs(k[1] * ul) + std::abs(k[2] * uxr));
    w2 = std::max(w2, std::abs(k[3] * uxr + k[4] * ur - k[5] * uxl));
    s2 = std::max(s2, std::abs(k[3] * uxr) + std::abs(k[4] * ur) + std::abs(k[5] * uxl));
  }
  r.side_condition_1 = relative(w1, s1);
  r.side_condition_2 = relative(w2, s2);

  double wn = 0.0, sn = 0.0, pmax = 0.0, dmax = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double x = -1.0 + i / 20.0;
    const cplx u0 = m.u(x, 0.0);
    wn = std::max(wn, std::abs(u0 - problem.alpha * m.u(x, 1.0)));
    sn = std::max(sn, std::abs(u0));
    pmax = std::max(pmax, std::abs(m.phi(x)));
    dmax = std::max(dmax, std::abs(m.dphi(x)));
  }
  r.nonlocal_residual = relative(wn, sn);

  // phi(0-) from the left basis evaluated at -0.
  const Pair l0 = entire_pair(lambda - m.sigma, -0.0);
  const cplx left = m.coeffs(2) * l0.f0 + m.coeffs(3) * l0.f1;
  const cplx dleft = m.coeffs(2) * l0.d0 + m.coeffs(3) * l0.d1;
  r.c1_mismatch = std::max(relative(std::abs(m.phi(0.0) - left), pmax),
                           relative(std::abs(m.dphi(0.0) - dleft), dmax));
  return r;
}

cplx DispersionScan::sample_point(int re_index, int im_index) const {
  return {axis_point(region.re_min, region.re_max, density.re, re_index),
          axis_point(region.im_min, region.im_max, density.im, im_index)};
}

double DispersionScan::min_abs_det() const {
  return samples.empty() ? 0.0 : *std::min_element(samples.begin(), samples.end());
}

DispersionScan scan_roots(const Region& region, const Density& density, const TransmissionProblem& problem,
                          const ScanOptions& options) {
  problem.validate();
  if (!(region.re_min <= region.re_max && region.im_min <= region.im_max) || !std::isfinite(region.re_min) ||
      !std::isfinite(region.re_max) || !std::isfinite(region.im_min) || !std::isfinite(region.im_max))
    throw DomainError("scan_roots: region must be a bounded rectangle");
  if (density.re < 1 || density.im < 1 || density.re > kMaxDensity || density.im > kMaxDensity)
    throw DomainError("scan_roots: density must lie in [1, 512] per axis");

  DispersionScan scan;
  scan.region = region;
  scan.density = density;
  const int nr = density.re, ni = density.im;
  scan.samples.assign(static_cast<std::size_t>(nr) * ni, 0.0);
  parallel_for(static_cast<std::size_t>(ni), options.threads, [&](std::size_t j) {
    for (int i = 0; i < nr; ++i)
      scan.samples[j * nr + i] = std::abs(dispersion_determinant_entire(scan.sample_point(i, int(j)), problem));
  });

  double threshold = options.seed_threshold;
  if (threshold < 0.0) {
    std::vector<double> sorted = scan.samples;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    threshold = sorted[sorted.size() / 2];
  }

  std::vector<cplx> seeds;
  for (int j = 0; j < ni; ++j) {
    for (int i = 0; i < nr; ++i) {
      const double v = scan.samples[std::size_t(j) * nr + i];
      if (!(v <= threshold)) continue;
      bool minimum = true, strict = false;
      for (int dj = -1; dj <= 1 && minimum; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= nr || jj >= ni) continue;
          const double w = scan.samples[std::size_t(jj) * nr + ii];
          if (w < v) { minimum = false; break; }
          if (w > v) strict = true;
        }
      }
      if (minimum && (strict || nr * ni == 1)) seeds.push_back(scan.sample_point(i, j));
    }
  }
  scan.seeds = seeds.size();

  std::vector<NewtonOutcome> outcomes(seeds.size());
  parallel_for(seeds.size(), options.threads, [&](std::size_t s) { outcomes[s] = newton(seeds[s], problem, options); });

  const double span = std::max({1.0, std::abs(region.re_max - region.re_min), std::abs(region.im_max - region.im_min)});
  std::vector<Candidate> found;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const NewtonOutcome& o = outcomes[s];
    if (!o.ok) {
      scan.failures.push_back({seeds[s], o.reason});
      continue;
    }
    if (!region.contains(o.lambda, 1e-9 * span)) {
      scan.failures.push_back({seeds[s], "converged outside region"});
      continue;
    }
    bool duplicate = false;
    for (const Candidate& c : found)
      if (std::abs(c.lambda - o.lambda) < options.dedup_distance) duplicate = true;
    if (!duplicate) found.push_back({o.lambda, o.abs_det, {}});
  }
  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    return a.lambda.real() != b.lambda.real() ? a.lambda.real() < b.lambda.real() : a.lambda.imag() < b.lambda.imag();
  });
  parallel_for(found.size(), options.threads,
               [&](std::size_t c) { found[c].verification = verify_candidate(found[c].lambda, problem); });
  scan.candidates = std::move(found);
  return scan;
}

}  // namespace npl::dispersion
