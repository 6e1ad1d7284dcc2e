#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mp_bessel.hpp"
#include "npl/errors.hpp"
#include "npl/modes.hpp"
#include "npl/oracle.hpp"
#include "npl/roots.hpp"

using namespace npl;
using namespace npl::modes;

namespace {
constexpr double kPi = std::numbers::pi;

// Eq. (15) with A_k = 1 evaluated through the extended-precision series.
double oracle_mode(int k, double n, double x) {
  const double nu = 1.0 / (n + 2.0);
  const double z = roots::bessel_j_zeros(nu, k).zeros.back();
  const double mu = std::pow(0.5 * (n + 2.0) * z, 2);
  const double c = 2.0 * std::sqrt(mu) / (n + 2.0);
  return std::pow(2.0 / (n + 2.0), nu) * std::pow(mu, 0.5 * nu) * std::sqrt(x) *
         test::mp_bessel_j(nu, c * std::pow(x, 0.5 * (n + 2.0)));
}

ProblemSpec spec2(double m, double n, cplx alpha) {
  ProblemSpec s;
  s.m = m;
  s.n = n;
  s.alpha = alpha;
  return s;
}
}  // namespace

TEST(ModeX, EndpointsAndOracle) {
  for (int k = 1; k <= 4; ++k)
    for (double n : {0.5, 1.0, 2.0}) {
      EXPECT_EQ(mode_x(k, n, 0.0), 0.0);
      EXPECT_NEAR(mode_x(k, n, 1.0), 0.0, 1e-10);
    }
  EXPECT_NEAR(mode_x(1, 1.0, 0.5), oracle_mode(1, 1.0, 0.5), 1e-13);
  EXPECT_NEAR(mode_y(2, 0.5, 0.3), oracle_mode(2, 0.5, 0.3), 1e-13);
  EXPECT_EQ(mode_y(1, 1.0, 0.0), 0.0);
  EXPECT_NEAR(mode_y(3, 2.0, 1.0), 0.0, 1e-10);
}

TEST(ModeX, DerivativesMatchFiniteDifferences) {
  for (double n : {0.5, 1.0, 2.0}) {
    const SpatialFactor f(2, n);
    for (double x = 0.1; x < 0.95; x += 0.1) {
      const double h = 1e-4;
      const auto d = f.derivatives(x);
      auto central = [&](double s) { return (f.value(x + s) - f.value(x - s)) / (2 * s); };
      const double fd1 = (4 * central(h / 2) - central(h)) / 3;  // Richardson
      const double fd2 = (f.value(x + h) - 2 * f.value(x) + f.value(x - h)) / (h * h);
      EXPECT_NEAR(d.first, fd1, 1e-7 * std::max(1.0, std::fabs(fd1)));
      EXPECT_NEAR(d.second, fd2, 1e-4 * std::max(1.0, std::fabs(fd2)));
      // X'' = -mu x^n X
      EXPECT_NEAR(d.second, -f.mu() * std::pow(x, n) * d.value, 1e-10 * f.mu());
    }
  }
}

TEST(LambdaProblem2, Examples) {
  const cplx a = lambda_problem2(10.0, 0.5, 0);
  EXPECT_NEAR(a.real(), -10.6931472, 1e-7);
  EXPECT_NEAR(a.imag(), 0.0, 1e-15);
  const cplx b = lambda_problem2(1.0, cplx(0.0, 1.0), 0);
  EXPECT_NEAR(b.real(), -1.0, 1e-15);
  EXPECT_NEAR(b.imag(), kPi / 2, 1e-15);
  const cplx c = lambda_problem2(1.0, 1.0, 1);
  EXPECT_NEAR(c.real(), -1.0, 1e-15);
  EXPECT_NEAR(c.imag(), 2 * kPi, 1e-15);
}

TEST(LambdaProblem2, SolvabilityCondition) {
  for (cplx alpha : {cplx(0.5), cplx(-0.8), cplx(0.3, 0.4), cplx(2.0, -1.0), cplx(-1.0), cplx(0.0, -0.2)})
    for (int s = -3; s <= 3; ++s) {
      const double mu = 7.3;
      const cplx l = lambda_problem2(mu, alpha, s);
      EXPECT_LE(std::abs(std::exp(l + mu) - alpha), 1e-12 * std::abs(alpha));
    }
}

TEST(LambdaProblem2, PaperLiteralBranchFailsForOddS) {
  const double mu = 3.0;
  const cplx alpha(0.5, 0.2);
  const cplx l = lambda_problem2(mu, alpha, 1, Convention::paper_literal);
  EXPECT_GT(std::abs(std::exp(l + mu) - alpha), 0.1);
}

TEST(ModeT, Examples) {
  EigenMode m;
  m.mu = 10.0;
  m.lambda = lambda_problem2(m.mu, 0.5, 0);
  EXPECT_NEAR(std::abs(modes::mode_t(0.0, m, 0.5) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(modes::mode_t(1.0, m, 0.5) - 2.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(modes::mode_t(0.3, m, 0.5) - std::pow(2.0, 0.3)), 0.0, 1e-12);
  m.lambda = lambda_problem2(m.mu, -1.0, 0);
  EXPECT_NEAR(std::abs(modes::mode_t(1.0, m, -1.0) - cplx(-1.0)), 0.0, 1e-12);
}

TEST(ModeT, PaperLiteralExponentBreaksNonlocalCondition) {
  EigenMode m;
  m.mu = 10.0;
  m.lambda = lambda_problem2(m.mu, 0.5, 0);
  const cplx t0 = modes::mode_t(0.0, m, 0.5, Convention::paper_literal);
  const cplx t1 = modes::mode_t(1.0, m, 0.5, Convention::paper_literal);
  EXPECT_GT(std::abs(t0 - 0.5 * t1), 1.0);
}

TEST(ModeT, ClosureAndOde) {
  for (cplx alpha : {cplx(0.5), cplx(-0.8), cplx(0.3, 0.4), cplx(1.7), cplx(-2.0, 0.5)})
    for (int s = -1; s <= 1; ++s) {
      Problem2Mode md(1, 2, s, spec2(1.0, 0.5, alpha));
      const auto& m = md.mode();
      EXPECT_LE(std::abs(modes::mode_t(0.0, m, alpha) - alpha * modes::mode_t(1.0, m, alpha)), 1e-12);
      for (int i = 0; i < 50; ++i) {
        const double t = i / 49.0;
        const cplx T = modes::mode_t(t, m, alpha);
        const cplx dT = -(m.lambda + m.mu) * T;  // exact derivative of the exponential
        EXPECT_LE(std::abs(dT + (m.lambda + m.mu) * T), 1e-12 * std::abs(T));
        const double h = 1e-6;
        const cplx fd = (modes::mode_t(t + h, m, alpha) - modes::mode_t(t - h, m, alpha)) / (2 * h);
        EXPECT_LE(std::abs(fd - dT), 1e-6 * std::max(1.0, std::abs(dT)));
      }
    }
}

TEST(Problem2, BoundaryTracesAndNonlocal) {
  Problem2Mode md(2, 1, 0, spec2(1.0, 1.0, cplx(0.3, 0.4)));
  for (double s = 0.0; s <= 1.0; s += 0.1)
    for (double t : {0.0, 0.4, 1.0}) {
      EXPECT_EQ(md.value(0.0, s, t), cplx{});
      EXPECT_EQ(md.value(s, 0.0, t), cplx{});
      EXPECT_LE(std::abs(md.value(1.0, s, t)), 1e-10);
      EXPECT_LE(std::abs(md.value(s, 1.0, t)), 1e-10);
    }
  const auto pts = oracle::random_points3(100, 5);
  for (const auto& p : pts)
    EXPECT_LE(std::abs(md.value(p.x, p.y, 0.0) - cplx(0.3, 0.4) * md.value(p.x, p.y, 1.0)), 1e-10);
  EXPECT_EQ(mode_problem2(0.4, 0.6, 0.2, 2, 1, 0, spec2(1.0, 1.0, cplx(0.3, 0.4))), md.value(0.4, 0.6, 0.2));
}

TEST(Problem2, Remark1NegativeRealPart) {
  for (cplx alpha : {cplx(0.5), cplx(-0.8), cplx(0.3, 0.4), cplx(0.0, 0.99)})
    for (int k = 1; k <= 5; ++k)
      for (int p = 1; p <= 5; ++p)
        for (int s = -1; s <= 1; ++s) {
          Problem2Mode md(k, p, s, spec2(0.5, 2.0, alpha));
          EXPECT_LT(md.mode().lambda.real(), 0.0);
          EXPECT_NEAR(md.mode().mu, md.mode().mu1 + *md.mode().mu2, 1e-12 * md.mode().mu);
          EXPECT_LE(std::abs(std::exp(md.mode().lambda + md.mode().mu) - alpha), 1e-12);
        }
}

TEST(Problem2, ResidualAnalyticAndFiniteDifference) {
  const auto pts = oracle::random_points3(60, 11, 0.05);
  for (double m : {0.5, 1.0, 2.0})
    for (double n : {0.5, 1.0, 2.0}) {
      Problem2Mode md(2, 3, 1, spec2(m, n, cplx(0.3, 0.4)));
      EXPECT_LE(oracle::pde_residual_collocation(md.field(), md.spec(), pts).max_rel, 1e-8);
      EXPECT_LE(oracle::pde_residual_collocation(without_partials(md.field()), md.spec(), pts).max_rel, 1e-6);
    }
}

TEST(LambdaProblem1, Examples) {
  const cplx a = lambda_problem1(10.0, 1.0, 0, 1.0);
  EXPECT_NEAR(a.real(), -10.0, 1e-14);
  const cplx b = lambda_problem1(10.0, 0.5, 0, 1.0);
  EXPECT_NEAR(b.real(), -11.3862944, 1e-7);
  EXPECT_NEAR(b.imag(), 0.0, 1e-15);
  const cplx c = lambda_problem1(10.0, -1.0, 1, 1.0);
  EXPECT_NEAR(c.real(), -10.0, 1e-14);
  EXPECT_NEAR(c.imag(), 2 * kPi, 1e-14);
  EXPECT_THROW(lambda_problem1(10.0, -1.0, 2, 1.0), ParityError);
  EXPECT_THROW(lambda_problem1(10.0, 0.5, 1, 1.0), ParityError);
  EXPECT_NEAR(lambda_problem1(10.0, 1.0, 0, 1.0, Convention::paper_literal).real(), 10.0, 1e-14);
}

TEST(Problem1, ModeConditionsAndResidual) {
  const auto pts = oracle::random_points2(200, 3);
  for (double alpha : {0.5, -0.7, 1.0, -1.0}) {
    for (int p : {0, 1, 2, 3}) {
      ProblemSpec s;
      s.variant = Variant::problem1;
      s.alpha = alpha;
      s.m = 1.5;
      s.n = 0.5;
      if ((p % 2 == 0) != (alpha > 0)) {
        EXPECT_THROW(Problem1Mode(1, p, s), ParityError);
        continue;
      }
      Problem1Mode md(2, p, s);
      for (double y = 0.0; y <= 1.0; y += 0.1) {
        EXPECT_EQ(md.value(0.0, y), cplx{});
        EXPECT_LE(std::abs(md.value(1.0, y)), 1e-10);
      }
      for (double x = 0.05; x < 1.0; x += 0.1)
        EXPECT_LE(std::abs(md.value(x, 0.0) - alpha * md.value(x, 1.0)), 1e-10);
      EXPECT_LE(oracle::pde_residual_collocation(md.field(), md.spec(), pts).max_rel, 1e-8);
      Problem1Mode literal(2, p, s, Convention::paper_literal);
      EXPECT_GT(oracle::pde_residual_collocation(literal.field(), literal.spec(), pts).max_rel, 0.1);
    }
  }
  EXPECT_EQ(mode_problem1(0.3, 0.2, 1, 0, [] {
              ProblemSpec s;
              s.variant = Variant::problem1;
              return s;
            }()),
            Problem1Mode(1, 0, [] {
              ProblemSpec s;
              s.variant = Variant::problem1;
              return s;
            }()).value(0.3, 0.2));
}

TEST(Problem1, ComplexAlphaRejected) {
  ProblemSpec s;
  s.variant = Variant::problem1;
  s.alpha = cplx(0.5, 0.1);
  EXPECT_THROW(Problem1Mode(1, 0, s), DomainError);
}

TEST(Kernel, ModifiedBesselHasNoAdmissibleZero) {
  // I_nu > 0 on the positive axis, so the literal Corollary-1 condition has
  // no root; the J kernel is the one with a zero table.
  EXPECT_GT(specfun::bessel_i(1.0 / 3.0, 2.0 * std::sqrt(10.0) / 3.0), 0.0);
}

TEST(Spec, Validation) {
  ProblemSpec s;
  EXPECT_NO_THROW(s.validate());
  s.alpha = 0.0;
  EXPECT_THROW(s.validate(), DomainError);
  s = {};
  s.m = 0.0;
  EXPECT_THROW(s.validate(), DomainError);
  s = {};
  s.n = -1.0;
  EXPECT_THROW(s.validate(), DomainError);
  EXPECT_EQ(parse_variant("problem3"), Variant::problem3);
  EXPECT_EQ(to_string(Variant::problem1), "problem1");
  EXPECT_THROW(parse_variant("problem4"), DomainError);
}

TEST(Uniqueness, Examples) {
  ProblemSpec s;
  s.alpha = 0.5;
  s.lambda = 1.0;
  auto c = check_uniqueness_conditions(s);
  EXPECT_EQ(c.theorem, "theorem2");
  EXPECT_TRUE(c.violated.empty());

  s.alpha = 1.0;
  c = check_uniqueness_conditions(s);
  ASSERT_EQ(c.violated.size(), 1u);
  EXPECT_EQ(c.violated[0], "alpha1^2 + alpha2^2 < 1");

  s.variant = Variant::problem3;
  s.lambda = 2.0;
  c = check_uniqueness_conditions(s, std::array<double, 6>{1, -1, 1, 1, 1, -1});
  EXPECT_EQ(c.theorem, "theorem3");
  EXPECT_TRUE(c.violated.empty());
  EXPECT_TRUE(c.guaranteed);

  c = check_uniqueness_conditions(s, std::array<double, 6>{1, 1, 1, 1, 1, -1});
  EXPECT_FALSE(c.guaranteed);
  EXPECT_EQ(c.violated, (std::vector<std::string>{"k3*k5 = k2*k6", "k1*k2 < 0"}));

  EXPECT_THROW(check_uniqueness_conditions(s), DomainError);
  s.variant = Variant::problem2;
  EXPECT_THROW(check_uniqueness_conditions(s, std::array<double, 6>{}), DomainError);

  s.variant = Variant::problem1;
  s.alpha = -1.0;
  s.lambda = 0.0;
  EXPECT_TRUE(check_uniqueness_conditions(s).violated.empty());
  s.alpha = 1.5;
  s.lambda = -1.0;
  EXPECT_EQ(check_uniqueness_conditions(s).violated,
            (std::vector<std::string>{"alpha in [-1,0) U (0,1]", "Re lambda >= 0"}));
}
