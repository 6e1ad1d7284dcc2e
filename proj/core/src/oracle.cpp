#include "npl/oracle.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "npl/errors.hpp"

namespace npl::oracle {
namespace {

using modes::ProblemSpec;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Vec = Eigen::VectorXcd;

void check_interior(double x, double y) {
  if (!(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0)) {
    std::ostringstream os;
    os << "pde_residual_collocation: point (" << x << ", " << y
       << ") is not strictly inside the unit square";
    throw DomainError(os.str());
  }
}

template <class Point>
std::vector<Point> uniform_points(std::size_t count, std::uint64_t seed, double margin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> space(margin, 1.0 - margin);
  std::uniform_real_distribution<double> time(0.0, 1.0);
  std::vector<Point> out(count);
  for (auto& p : out) {
    p.x = space(rng);
    p.y = space(rng);
    if constexpr (requires { p.t; }) p.t = time(rng);
  }
  return out;
}

Vec to_vec(const GridFunction& g) {
  return Eigen::Map<const Vec>(g.values.data(), static_cast<Eigen::Index>(g.values.size()));
}

}  // namespace

void GridSpec::validate() const {
  if (!cell_centered) throw DomainError("GridSpec: only cell-centred grids are supported");
  if (nx < 8 || ny < 8) throw DomainError("GridSpec: nx and ny must be >= 8");
  if (nt < 8) throw DomainError("GridSpec: nt must be >= 8");
  if (!(t_end > 0.0)) throw DomainError("GridSpec: t_end must be > 0");
}

GridFunction GridFunction::zeros(const GridSpec& grid) {
  GridFunction g;
  g.grid = grid;
  g.values.assign(grid.size(), cplx{});
  return g;
}

GridFunction GridFunction::sample(const GridSpec& grid,
                                  const std::function<cplx(double, double)>& f) {
  GridFunction g = zeros(grid);
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j) g(i, j) = f(grid.x(i), grid.y(j));
  return g;
}

double GridFunction::l2_norm() const {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return std::sqrt(sum / (static_cast<double>(grid.nx) * grid.ny));
}

double GridFunction::weighted_norm(double n, double m) const {
  double sum = 0.0;
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j)
      sum += std::pow(grid.x(i), n) * std::pow(grid.y(j), m) * std::norm((*this)(i, j));
  return std::sqrt(sum / (static_cast<double>(grid.nx) * grid.ny));
}

// --- collocation residuals ----------------------------------------------------

ResidualReport pde_residual_collocation(const Field2& u, const ProblemSpec& spec,
                                        std::span<const Point2> points) {
  spec.validate();
  ResidualReport r;
  r.points = points.size();
  r.analytic_partials = u.has_analytic_partials();
  double largest_term = 0.0;
  for (const auto& p : points) {
    check_interior(p.x, p.y);
    const Jet2 j = u.at(p.x, p.y);
    const double xn = std::pow(p.x, spec.n);
    const double ym = std::pow(p.y, spec.m);
    const cplx a = ym * j.u_xx;
    const cplx b = xn * j.u_y;
    const cplx c = spec.lambda * xn * ym * j.u;
    const double res = std::abs(a - b - c);
    largest_term = std::max({largest_term, std::abs(a), std::abs(b), std::abs(c)});
    if (res >= r.max_abs) {
      r.max_abs = res;
      r.argmax = {p.x, p.y, 0.0};
    }
  }
  r.max_rel = largest_term > 0.0 ? r.max_abs / largest_term : 0.0;
  return r;
}

ResidualReport pde_residual_collocation(const Field3& u, const ProblemSpec& spec,
                                        std::span<const Point3> points) {
  spec.validate();
  ResidualReport r;
  r.points = points.size();
  r.analytic_partials = u.has_analytic_partials();
  double largest_term = 0.0;
  for (const auto& p : points) {
    check_interior(p.x, p.y);
    if (!(p.t >= 0.0 && p.t <= 1.0))
      throw DomainError("pde_residual_collocation: t outside [0, 1]");
    const Jet3 j = u.at(p.x, p.y, p.t);
    const double xn = std::pow(p.x, spec.n);
    const double ym = std::pow(p.y, spec.m);
    const cplx a = xn * ym * j.u_t;
    const cplx b = ym * j.u_xx;
    const cplx c = xn * j.u_yy;
    const cplx d = spec.lambda * xn * ym * j.u;
    const double res = std::abs(a - b - c + d);
    largest_term =
        std::max({largest_term, std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (res >= r.max_abs) {
      r.max_abs = res;
      r.argmax = {p.x, p.y, p.t};
    }
  }
  r.max_rel = largest_term > 0.0 ? r.max_abs / largest_term : 0.0;
  return r;
}

std::vector<Point2> random_points2(std::size_t count, std::uint64_t seed, double margin) {
  return uniform_points<Point2>(count, seed, margin);
}

std::vector<Point3> random_points3(std::size_t count, std::uint64_t seed, double margin) {
  return uniform_points<Point3>(count, seed, margin);
}

// --- implicit solver ------------------------------------------------------------

SolveResult solve_degenerate_parabolic(const ProblemSpec& spec, const GridFunction& u0,
                                       const GridSpec& grid, const Source& source,
                                       const SolveOptions& options) {
  spec.validate();
  grid.validate();
  if (u0.values.size() != grid.size() || u0.grid.nx != grid.nx || u0.grid.ny != grid.ny)
    throw DomainError("solve_degenerate_parabolic: u0 does not match the grid");

  const int nx = grid.nx;
  const int ny = grid.ny;
  const double hx2 = 1.0 / (static_cast<double>(nx) * nx);
  const double hy2 = 1.0 / (static_cast<double>(ny) * ny);
  const double dt = grid.dt();
  const auto idx = [ny](int i, int j) { return static_cast<Eigen::Index>(i) * ny + j; };

  std::vector<double> xn(nx);
  std::vector<double> ym(ny);
  for (int i = 0; i < nx; ++i) xn[i] = std::pow(grid.x(i), spec.n);
  for (int j = 0; j < ny; ++j) ym[j] = std::pow(grid.y(j), spec.m);

  // x^n y^m (1/dt + lambda) u - y^m D_xx u - x^n D_yy u, where the odd ghost
  // value u_{-1} = -u_0 turns the boundary diagonal from -2 into -3.
  const Eigen::Index size = static_cast<Eigen::Index>(grid.size());
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(static_cast<std::size_t>(size) * 5);
  Vec weight(size);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const Eigen::Index row = idx(i, j);
      const double w = xn[i] * ym[j];
      weight[row] = w;
      const double cx = ym[j] / hx2;
      const double cy = xn[i] / hy2;
      const double diag_x = (i == 0 || i == nx - 1) ? 3.0 : 2.0;
      const double diag_y = (j == 0 || j == ny - 1) ? 3.0 : 2.0;
      entries.emplace_back(row, row, w * (1.0 / dt + spec.lambda) + diag_x * cx + diag_y * cy);
      if (i > 0) entries.emplace_back(row, idx(i - 1, j), -cx);
      if (i < nx - 1) entries.emplace_back(row, idx(i + 1, j), -cx);
      if (j > 0) entries.emplace_back(row, idx(i, j - 1), -cy);
      if (j < ny - 1) entries.emplace_back(row, idx(i, j + 1), -cy);
    }
  }
  SpMat system(size, size);
  system.setFromTriplets(entries.begin(), entries.end());
  system.makeCompressed();

  Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<cplx>> solver;
  solver.setTolerance(options.tolerance);
  solver.setMaxIterations(options.max_iterations);
  solver.preconditioner().setDroptol(1e-6);
  solver.compute(system);
  if (solver.info() != Eigen::Success)
    throw SolverError("solve_degenerate_parabolic: preconditioner setup failed", 0, 0.0);

  SolveResult out;
  GridFunction current = u0;
  current.grid = grid;
  current.time = 0.0;
  out.snapshots.push_back(current);

  Vec u = to_vec(current);
  Vec rhs(size);
  for (int step = 1; step <= grid.nt; ++step) {
    const double t = step * dt;
    rhs = weight.cwiseProduct(u) / dt;
    if (source) {
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
          rhs[idx(i, j)] += weight[idx(i, j)] * source(grid.x(i), grid.y(j), t);
    }
    const double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0) {
      u.setZero();
    } else {
      Vec next = solver.solveWithGuess(rhs, u);
      const double residual = (system * next - rhs).norm() / rhs_norm;
      out.iterations += solver.iterations();
      out.max_residual = std::max(out.max_residual, residual);
      if (solver.info() != Eigen::Success || residual > 10.0 * options.tolerance) {
        std::ostringstream os;
        os << "solve_degenerate_parabolic: BiCGSTAB stopped at step " << step
           << " with relative residual " << residual << " after " << solver.iterations()
           << " iterations";
        throw SolverError(os.str(), solver.iterations(), residual);
      }
      u = std::move(next);
    }
    const bool keep = step == grid.nt ||
                      (options.snapshot_every > 0 && step % options.snapshot_every == 0);
    if (keep) {
      GridFunction snap = GridFunction::zeros(grid);
      snap.time = t;
      std::copy(u.data(), u.data() + size, snap.values.begin());
      out.snapshots.push_back(std::move(snap));
    }
  }
  return out;
}

// --- verification drivers -------------------------------------------------------

LevelError compare_evolution(const ProblemSpec& spec, const GridFunction& u0, cplx factor,
                             const GridSpec& grid) {
  const SolveResult run = solve_degenerate_parabolic(spec, u0, grid);
  const GridFunction& last = run.snapshots.back();
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < u0.values.size(); ++i) {
    const cplx expected = factor * u0.values[i];
    diff += std::norm(last.values[i] - expected);
    ref += std::norm(expected);
  }
  LevelError e;
  e.grid = grid;
  e.iterations = run.iterations;
  e.error_l2 = ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
  return e;
}

DecayReport decay_check(int k, int p, int s, const ProblemSpec& spec, const GridSpec& grid,
                        int refinements, Refinement kind) {
  grid.validate();
  if (refinements < 0) throw DomainError("decay_check: refinements must be >= 0");
  const modes::Problem2Mode mode(k, p, s, spec);
  const cplx factor = modes::mode_t(grid.t_end, mode.mode(), spec.alpha) /
                      modes::mode_t(0.0, mode.mode(), spec.alpha);

  DecayReport report;
  GridSpec g = grid;
  for (int level = 0; level <= refinements; ++level) {
    const GridFunction u0 = GridFunction::sample(
        g, [&](double x, double y) { return mode.value(x, y, 0.0); });
    report.levels.push_back(compare_evolution(mode.spec(), u0, factor, g));
    report.iterations += report.levels.back().iterations;
    if (kind == Refinement::time) {
      g.nt *= 2;
    } else {
      g.nx *= 2;
      g.ny *= 2;
    }
  }
  report.error_l2 = report.levels.front().error_l2;
  for (std::size_t i = 0; i + 1 < report.levels.size(); ++i) {
    const double next = report.levels[i + 1].error_l2;
    report.ratios.push_back(next > 0.0 ? report.levels[i].error_l2 / next : 0.0);
  }
  if (!report.ratios.empty() && report.ratios.back() > 0.0)
    report.order_estimate = std::log2(report.ratios.back());
  return report;
}

MmsReport mms_check(const ProblemSpec& spec, int base_cells, int levels, double t_end) {
  spec.validate();
  if (levels < 2) throw DomainError("mms_check: at least two levels are needed");
  const double n = spec.n;
  const double m = spec.m;
  const cplx lambda = spec.lambda;
  const auto shape = [](double x, double y) { return x * (1.0 - x) * y * (1.0 - y); };
  // f = u_t - x^-n u_xx - y^-m u_yy + lambda u for u = e^-t x(1-x) y(1-y)
  const Source source = [=](double x, double y, double t) {
    const double et = std::exp(-t);
    const double p = shape(x, y);
    const double uxx = -2.0 * y * (1.0 - y);
    const double uyy = -2.0 * x * (1.0 - x);
    return et * ((lambda - 1.0) * p - std::pow(x, -n) * uxx - std::pow(y, -m) * uyy);
  };

  MmsReport report;
  for (int level = 0; level < levels; ++level) {
    GridSpec g;
    g.nx = g.ny = base_cells << level;
    g.nt = std::max(8, g.nx * g.nx / 4);
    g.t_end = t_end;
    const GridFunction u0 =
        GridFunction::sample(g, [&](double x, double y) { return cplx(shape(x, y), 0.0); });
    const SolveResult run = solve_degenerate_parabolic(spec, u0, g, source);
    const GridFunction& last = run.snapshots.back();
    double diff = 0.0;
    double ref = 0.0;
    const double decay = std::exp(-t_end);
    for (int i = 0; i < g.nx; ++i) {
      for (int j = 0; j < g.ny; ++j) {
        const double exact = decay * shape(g.x(i), g.y(j));
        diff += std::norm(last(i, j) - exact);
        ref += exact * exact;
      }
    }
    LevelError e;
    e.grid = g;
    e.iterations = run.iterations;
    e.error_l2 = std::sqrt(diff / ref);
    report.levels.push_back(e);
    report.iterations += run.iterations;
  }
  for (std::size_t i = 0; i + 1 < report.levels.size(); ++i)
    report.orders.push_back(
        std::log2(report.levels[i].error_l2 / report.levels[i + 1].error_l2));
  report.order_estimate = report.orders.back();
  return report;
}

}  // namespace npl::oracle
