#include <gtest/gtest.h>

#include <cmath>

#include "npl/errors.hpp"
#include "npl/modes.hpp"
#include "npl/oracle.hpp"

using namespace npl;
using namespace npl::oracle;

namespace {
modes::ProblemSpec spec(double m, double n, cplx alpha, cplx lambda = 0.0) {
  modes::ProblemSpec s;
  s.m = m;
  s.n = n;
  s.alpha = alpha;
  s.lambda = lambda;
  return s;
}

GridSpec grid(int nx, int ny, int nt) {
  GridSpec g;
  g.nx = nx;
  g.ny = ny;
  g.nt = nt;
  return g;
}
}  // namespace

TEST(Collocation, ZeroField) {
  Field3 zero;
  zero.value = [](double, double, double) { return cplx{}; };
  const auto pts = random_points3(50, 1);
  const auto r = pde_residual_collocation(zero, spec(1, 1, 0.5), pts);
  EXPECT_EQ(r.max_abs, 0.0);
  EXPECT_EQ(r.points, 50u);
  EXPECT_FALSE(r.analytic_partials);
}

TEST(Collocation, ModeWithAnalyticAndFdPartials) {
  modes::Problem2Mode md(1, 1, 0, spec(1, 1, 0.5));
  const auto pts = random_points3(200, 2);
  const auto a = pde_residual_collocation(md.field(), md.spec(), pts);
  EXPECT_TRUE(a.analytic_partials);
  EXPECT_LE(a.max_rel, 1e-8);
  const auto f = pde_residual_collocation(without_partials(md.field()), md.spec(), pts);
  EXPECT_LE(f.max_rel, 1e-6);
}

TEST(Collocation, WrongLambdaIsDetected) {
  modes::Problem2Mode md(1, 1, 0, spec(1, 1, 0.5));
  auto s = md.spec();
  s.lambda += 1.0;
  EXPECT_GT(pde_residual_collocation(md.field(), s, random_points3(50, 3)).max_rel, 1e-3);
}

TEST(Collocation, PaperLiteralProblem1SignIsOrderOne) {
  modes::ProblemSpec s = spec(1, 1, 0.5);
  s.variant = modes::Variant::problem1;
  modes::Problem1Mode md(1, 0, s, modes::Convention::paper_literal);
  EXPECT_GT(pde_residual_collocation(md.field(), md.spec(), random_points2(100, 4)).max_rel, 0.1);
}

TEST(Collocation, RejectsPointsOnDegeneracyLines) {
  modes::Problem2Mode md(1, 1, 0, spec(1, 1, 0.5));
  const std::vector<Point3> on_x0{{0.0, 0.5, 0.5}};
  const std::vector<Point3> on_y0{{0.5, 0.0, 0.5}};
  const std::vector<Point3> late{{0.5, 0.5, 1.5}};
  EXPECT_THROW(pde_residual_collocation(md.field(), md.spec(), on_x0), DomainError);
  EXPECT_THROW(pde_residual_collocation(md.field(), md.spec(), on_y0), DomainError);
  EXPECT_THROW(pde_residual_collocation(md.field(), md.spec(), late), DomainError);
}

TEST(RandomPoints, DeterministicAndInterior) {
  const auto a = random_points3(100, 9, 0.1), b = random_points3(100, 9, 0.1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].t, b[i].t);
    EXPECT_GE(a[i].x, 0.1);
    EXPECT_LE(a[i].y, 0.9);
  }
  EXPECT_NE(random_points2(1, 1)[0].x, random_points2(1, 2)[0].x);
}

TEST(Grid, ValidationAndCellCentring) {
  EXPECT_NO_THROW(grid(8, 8, 8).validate());
  EXPECT_THROW(grid(4, 8, 8).validate(), DomainError);
  EXPECT_THROW(grid(8, 7, 8).validate(), DomainError);
  EXPECT_THROW(grid(8, 8, 4).validate(), DomainError);
  auto g = grid(16, 16, 8);
  g.cell_centered = false;
  EXPECT_THROW(g.validate(), DomainError);
  g = grid(16, 20, 8);
  EXPECT_GT(g.x(0), 0.0);
  EXPECT_GT(g.y(0), 0.0);
  EXPECT_LT(g.x(15), 1.0);
  EXPECT_DOUBLE_EQ(g.x(0), 1.0 / 32.0);
}

TEST(Solver, ZeroDataStaysZero) {
  const auto g = grid(16, 16, 8);
  SolveOptions opt;
  opt.snapshot_every = 2;
  const auto r = solve_degenerate_parabolic(spec(1, 1, 0.5), GridFunction::zeros(g), g, {}, opt);
  EXPECT_EQ(r.snapshots.size(), 5u);
  for (const auto& s : r.snapshots) EXPECT_EQ(s.l2_norm(), 0.0);
}

TEST(Solver, ZeroModeComparisonHasZeroError) {
  const auto g = grid(16, 16, 8);
  EXPECT_EQ(compare_evolution(spec(1, 1, 0.5), GridFunction::zeros(g), 2.0, g).error_l2, 0.0);
}

TEST(Solver, ForwardEvolutionIsNonExpansiveForPositiveLambda) {
  const auto g = grid(16, 16, 16);
  const auto s = spec(1.0, 0.5, 0.5, 0.7);
  const auto u0 = GridFunction::sample(g, [](double x, double y) { return cplx(x * (1 - x) * y, y * (1 - y)); });
  SolveOptions opt;
  opt.snapshot_every = 1;
  const auto r = solve_degenerate_parabolic(s, u0, g, {}, opt);
  ASSERT_EQ(r.snapshots.size(), 17u);
  for (std::size_t i = 1; i < r.snapshots.size(); ++i)
    EXPECT_LE(r.snapshots[i].weighted_norm(s.n, s.m), r.snapshots[i - 1].weighted_norm(s.n, s.m) * (1 + 1e-12));
  EXPECT_LE(r.max_residual, 1e-11);
}

TEST(Solver, ReportsNonConvergence) {
  const auto g = grid(32, 32, 8);
  SolveOptions opt;
  opt.max_iterations = 1;
  opt.tolerance = 1e-15;
  const auto u0 = GridFunction::sample(g, [](double x, double y) { return cplx(std::sin(7 * x) * y * (1 - y)); });
  try {
    solve_degenerate_parabolic(spec(1, 1, 0.5, 1.0), u0, g, {}, opt);
    FAIL() << "expected SolverError";
  } catch (const SolverError& e) {
    EXPECT_GT(e.residual(), 1e-14);
    EXPECT_LE(e.iterations(), 1);
  }
}

TEST(Solver, GridMismatchRejected) {
  EXPECT_THROW(solve_degenerate_parabolic(spec(1, 1, 0.5), GridFunction::zeros(grid(8, 8, 8)), grid(16, 16, 8)),
               DomainError);
}

TEST(Decay, TimeRefinementIsFirstOrderOnFineSpatialGrid) {
  const auto d = decay_check(1, 1, 0, spec(1, 1, 0.5), grid(128, 128, 8), 1, Refinement::time);
  ASSERT_EQ(d.ratios.size(), 1u);
  EXPECT_GE(d.ratios[0], 1.6);
  EXPECT_LE(d.ratios[0], 2.4);
}

TEST(Decay, SpatialRefinementReducesError) {
  const auto d = decay_check(1, 1, 0, spec(1, 1, 0.5), grid(16, 16, 256), 1, Refinement::space);
  ASSERT_EQ(d.levels.size(), 2u);
  EXPECT_LT(d.levels[1].error_l2, d.levels[0].error_l2);
}

TEST(Mms, SpatialOrderNearTwo) {
  for (auto [m, n] : {std::pair{1.0, 1.0}, {0.5, 2.0}}) {
    const auto r = mms_check(spec(m, n, 0.5), 8, 3);
    ASSERT_EQ(r.orders.size(), 2u);
    EXPECT_GE(r.order_estimate, 1.7);
    EXPECT_LE(r.order_estimate, 2.3);
  }
  EXPECT_THROW(mms_check(spec(1, 1, 0.5), 8, 1), DomainError);
}
