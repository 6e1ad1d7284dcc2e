#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "npl/field.hpp"
#include "npl/modes.hpp"

namespace npl::oracle {

/// Cell-centred grid on the unit square plus uniform time steps on
/// [0, t_end]. Nodes sit at x_i = (i + 1/2)/nx, so the degenerate
/// reciprocal coefficients x^-n, y^-m are finite at every node.
struct GridSpec {
  int nx = 16;
  int ny = 16;
  int nt = 32;
  double t_end = 1.0;
  bool cell_centered = true;

  /// Throws DomainError unless nx, ny, nt >= 8, t_end > 0 and the grid is
  /// cell-centred.
  void validate() const;
  double x(int i) const { return (i + 0.5) / nx; }
  double y(int j) const { return (j + 0.5) / ny; }
  double dt() const { return t_end / nt; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
};

/// Complex values on a GridSpec, stored row-major as values[i * ny + j].
struct GridFunction {
  GridSpec grid;
  double time = 0.0;
  std::vector<cplx> values;

  static GridFunction zeros(const GridSpec& grid);
  static GridFunction sample(const GridSpec& grid,
                             const std::function<cplx(double, double)>& f);

  cplx& operator()(int i, int j) { return values[static_cast<std::size_t>(i) * grid.ny + j]; }
  cplx operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.ny + j]; }

  /// sqrt(h_x h_y sum |u|^2)
  double l2_norm() const;
  /// sqrt(h_x h_y sum x^n y^m |u|^2): the norm in which the implicit scheme
  /// is contractive for real lambda >= 0.
  double weighted_norm(double n, double m) const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
};

struct ResidualReport {
  double max_abs = 0.0;
  /// max |residual| divided by the largest individual operator term seen
  /// over all points.
  double max_rel = 0.0;
  std::array<double, 3> argmax{0.0, 0.0, 0.0};
  std::size_t points = 0;
  bool analytic_partials = false;
};

/// Residual y^m u_xx - x^n u_y - lambda x^n y^m u of the two-dimensional
/// degenerate equation. Points must satisfy 0 < x, y < 1.
ResidualReport pde_residual_collocation(const Field2& u, const modes::ProblemSpec& spec,
                                        std::span<const Point2> points);

/// Residual x^n y^m u_t - y^m u_xx - x^n u_yy + lambda x^n y^m u of the
/// three-dimensional degenerate equation. Points must satisfy 0 < x, y < 1
/// and 0 <= t <= 1.
ResidualReport pde_residual_collocation(const Field3& u, const modes::ProblemSpec& spec,
                                        std::span<const Point3> points);

/// Uniform points in [margin, 1 - margin]^2 (t uniform in [0, 1]).
std::vector<Point2> random_points2(std::size_t count, std::uint64_t seed,
                                   double margin = 0.02);
std::vector<Point3> random_points3(std::size_t count, std::uint64_t seed,
                                   double margin = 0.02);

struct SolveOptions {
  double tolerance = 1e-12;
  int max_iterations = 5000;
  /// Keep every k-th step in the output (0: initial and final only).
  int snapshot_every = 0;
};

struct SolveResult {
  std::vector<GridFunction> snapshots;
  long iterations = 0;
  double max_residual = 0.0;
};

/// Source term f(x, y, t) added to the right-hand side.
using Source = std::function<cplx(double, double, double)>;

/// Forward evolution of u_t = x^-n u_xx + y^-m u_yy - lambda u + f with
/// homogeneous Dirichlet data on all four faces: backward Euler in time,
/// three-point differences on the cell-centred grid with odd ghost
/// reflection. Each step solves the x^n y^m-scaled (complex symmetric)
/// system with BiCGSTAB/ILUT to the requested relative residual; throws
/// SolverError otherwise. The non-local condition is not imposed.
SolveResult solve_degenerate_parabolic(const modes::ProblemSpec& spec,
                                       const GridFunction& u0, const GridSpec& grid,
                                       const Source& source = {},
                                       const SolveOptions& options = {});

struct LevelError {
  GridSpec grid;
  double error_l2 = 0.0;
  long iterations = 0;
};

/// Evolves u0 to t_end and returns ||u_h - factor u0|| / ||factor u0||
/// (zero when both vanish).
LevelError compare_evolution(const modes::ProblemSpec& spec, const GridFunction& u0,
                             cplx factor, const GridSpec& grid);

enum class Refinement { time, space };

struct DecayReport {
  std::vector<LevelError> levels;
  std::vector<double> ratios;  // error[i] / error[i + 1]
  double error_l2 = 0.0;       // error on the requested grid
  double order_estimate = 0.0; // log2 of the last ratio
  long iterations = 0;
};

/// Evolves the (k, p, s) eigenmode's initial slice and compares against
/// T(t_end) times that slice on `grid` and `refinements` successively
/// doubled grids (nt, or nx and ny).
DecayReport decay_check(int k, int p, int s, const modes::ProblemSpec& spec,
                        const GridSpec& grid, int refinements = 2,
                        Refinement kind = Refinement::time);

struct MmsReport {
  std::vector<LevelError> levels;
  std::vector<double> orders;   // log2(error[i] / error[i + 1])
  double order_estimate = 0.0;  // last entry of orders
  long iterations = 0;
};

/// Manufactured solution u* = e^-t x(1-x) y(1-y) with its matching source on
/// nx = ny = base_cells * 2^l, l < levels, and nt = max(8, nx^2 / 4) so the
/// first-order time error shrinks with the spatial one.
MmsReport mms_check(const modes::ProblemSpec& spec, int base_cells = 16, int levels = 3,
                    double t_end = 1.0);

}  // namespace npl::oracle
