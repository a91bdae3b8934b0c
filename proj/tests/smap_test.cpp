#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "freestate/errors.hpp"
#include "freestate/smap.hpp"
#include "support/oracles.hpp"

namespace fs = freestate;

namespace {

const double kSqrt73 = std::sqrt(73.0);

std::vector<double> random_x(std::mt19937& rng, int n, double lo = 0.01, double hi = 10.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = u(rng);
  return x;
}

std::vector<std::vector<double>> to_rows(const Eigen::MatrixXd& m) {
  std::vector<std::vector<double>> r(static_cast<std::size_t>(m.rows()),
                                     std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    }
  }
  return r;
}

}  // namespace

TEST(SMap, ApplyExamples) {
  auto s = fs::apply_s(fs::OrthantPoint({1, 1}));
  EXPECT_DOUBLE_EQ(s.s(0), 1.0);
  EXPECT_DOUBLE_EQ(s.s(1), 1.0);
  s = fs::apply_s(fs::OrthantPoint({1, 2}));
  EXPECT_NEAR(s.s(0), 1.0, 1e-15);
  EXPECT_NEAR(s.s(1), 4.0 / 3.0, 1e-15);
  s = fs::apply_s(fs::OrthantPoint({1, (5 + kSqrt73) / 6, (7 + kSqrt73) / 2}));
  EXPECT_NEAR(s.s(0), 1.0, 1e-13);
  EXPECT_NEAR(s.s(1), 2.0, 1e-13);
  EXPECT_NEAR(s.s(2), 3.0, 1e-13);
}

TEST(SMap, RejectsBadPoints) {
  EXPECT_THROW(fs::OrthantPoint({1, 0}), fs::DomainError);
  EXPECT_THROW(fs::OrthantPoint({1, -1}), fs::DomainError);
  EXPECT_THROW(fs::OrthantPoint({}), fs::DomainError);
  EXPECT_THROW(fs::TargetPoint({1, NAN}), fs::DomainError);
}

TEST(SMap, DomainMembership) {
  EXPECT_TRUE(fs::in_dn(fs::TargetPoint({1, 1})));
  EXPECT_FALSE(fs::in_dn(fs::TargetPoint({0.4, 0.4})));
  EXPECT_FALSE(fs::in_dn(fs::TargetPoint({3, 0.5})));
  EXPECT_FALSE(fs::in_dn(fs::TargetPoint({2, 1})));  // s_1 = 1 + s_2 is excluded
}

TEST(SMap, RangeProperty) {
  std::mt19937 rng(3);
  for (int k = 0; k < 1000; ++k) {
    const int n = 2 + k % 5;
    ASSERT_TRUE(fs::in_dn(fs::apply_s(fs::OrthantPoint(random_x(rng, n)))));
  }
}

TEST(SMap, JacobianExamples) {
  auto J = fs::jacobian_s(fs::OrthantPoint({1, 1}));
  EXPECT_NEAR(J(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(J(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(J(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(J(1, 1), 0.5, 1e-15);
  J = fs::jacobian_s(fs::OrthantPoint({1, 2}));
  EXPECT_NEAR(J(0, 0), 2.0 / 3, 1e-15);
  EXPECT_NEAR(J(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(J(1, 0), 2.0 / 9, 1e-15);
  EXPECT_NEAR(J(1, 1), 2.0 / 9, 1e-15);
  for (auto x : {std::vector<double>{1, 1}, std::vector<double>{1, 2}}) {
    const auto fd = oracle::fd_jacobian(x, 1e-6);
    const auto Jx = fs::jacobian_s(fs::OrthantPoint(x));
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) EXPECT_NEAR(Jx(i, j), fd[i][j], 1e-6);
    }
  }
}

TEST(SMap, JacobianMatchesFiniteDifferences) {
  std::mt19937 rng(5);
  for (int k = 0; k < 300; ++k) {
    const int n = 2 + k % 5;
    const auto x = random_x(rng, n, 0.1, 10.0);
    const auto J = fs::jacobian_s(fs::OrthantPoint(x));
    const auto fd = oracle::fd_jacobian(x, 1e-6);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) ASSERT_NEAR(J(i, j), fd[i][j], 1e-5);
    }
  }
}

TEST(SMap, ColumnSumsArePositive) {
  std::mt19937 rng(7);
  for (int k = 0; k < 300; ++k) {
    const int n = 2 + k % 5;
    const fs::OrthantPoint p(random_x(rng, n));
    const auto J = fs::jacobian_s(p);
    const double t2 = p.t() * p.t();
    for (int i = 0; i < n; ++i) {
      double expect = p.y(i) * p.y(i) + p.y(i);
      for (int j = 0; j < n; ++j) {
        if (j != i) expect += p.x(j) * p.x(j) - p.x(j);
      }
      const double sum = t2 * J.col(i).sum();
      ASSERT_NEAR(sum, expect, 1e-9 * std::max(1.0, std::abs(expect)));
      ASSERT_GT(sum, 0.0);
    }
  }
}

TEST(SMap, ArrowDeterminantExamples) {
  EXPECT_NEAR(fs::det_arrow_matrix(std::vector<double>{3, 5}, std::vector<double>{1, 2}), 13.0,
              1e-14);
  EXPECT_NEAR(fs::det_arrow_matrix(std::vector<double>{2, 3, 4}, std::vector<double>{0, 0, 0}),
              24.0, 1e-14);
  // Diagonal 1 + y_i, off-diagonal -x_i at x = (1, 1): (1 + t)^{n-1} = 3.
  EXPECT_NEAR(fs::det_arrow_matrix(std::vector<double>{2, 2}, std::vector<double>{-1, -1}), 3.0,
              1e-14);
}

TEST(SMap, ArrowDeterminantMatchesElimination) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = 1 + static_cast<std::size_t>(k % 8);
    std::vector<double> r(n), p(n);
    for (auto& v : r) v = u(rng);
    for (auto& v : p) v = u(rng);
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m[i][j] = i == j ? r[i] : p[i];
    }
    const double direct = oracle::determinant(m);
    const double fast = fs::det_arrow_matrix(r, p);
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) scale *= std::abs(r[i]) + std::abs(p[i]) * static_cast<double>(n);
    ASSERT_NEAR(fast, direct, 1e-10 * std::max(std::abs(direct), 1e-3 * scale)) << "n=" << n;
  }
}

TEST(SMap, ArrowIdentityOnOrthant) {
  std::mt19937 rng(13);
  for (int k = 0; k < 500; ++k) {
    const int n = 2 + k % 7;
    const fs::OrthantPoint p(random_x(rng, n));
    std::vector<double> r(static_cast<std::size_t>(n)), q(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> m(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n)));
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] = 1 + p.y(i);
      q[i] = -p.x(i);
      for (std::size_t j = 0; j < r.size(); ++j) m[i][j] = i == j ? r[i] : q[i];
    }
    const double expect = std::pow(1 + p.t(), n - 1);
    ASSERT_NEAR(fs::det_arrow_matrix(r, q) / expect, 1.0, 1e-10);
    ASSERT_NEAR(oracle::determinant(m) / expect, 1.0, 1e-10);
  }
}

TEST(SMap, DetJacobianExamples) {
  EXPECT_NEAR(fs::det_jacobian(fs::OrthantPoint({1, 1})), 0.25, 1e-15);
  EXPECT_NEAR(fs::det_jacobian(fs::OrthantPoint({1, 2})), 4.0 / 27, 1e-15);
}

TEST(SMap, DetJacobianMatchesEliminationAndIsPositive) {
  std::mt19937 rng(17);
  for (int k = 0; k < 500; ++k) {
    const int n = 2 + k % 5;
    const fs::OrthantPoint p(random_x(rng, n, 0.001, 10.0));
    const double d = fs::det_jacobian(p);
    ASSERT_GT(d, 0.0);
    ASSERT_NEAR(d / oracle::determinant(to_rows(fs::jacobian_s(p))), 1.0, 1e-10);
  }
}

TEST(SMap, InvertExamples) {
  auto x = fs::invert_s(fs::TargetPoint({1, 1}));
  EXPECT_NEAR(x.x(0), 1.0, 1e-10);
  EXPECT_NEAR(x.x(1), 1.0, 1e-10);
  x = fs::invert_s(fs::TargetPoint({1, 2, 3}));
  EXPECT_NEAR(x.x(0), 1.0, 1e-10);
  EXPECT_NEAR(x.x(1), (5 + kSqrt73) / 6, 1e-10);
  EXPECT_NEAR(x.x(2), (7 + kSqrt73) / 2, 1e-10);
  x = fs::invert_s(fs::TargetPoint({1, 4.0 / 3}));
  EXPECT_NEAR(x.x(0), 1.0, 1e-10);
  EXPECT_NEAR(x.x(1), 2.0, 1e-10);
}

TEST(SMap, InvertRejectsOutsideDomain) {
  EXPECT_THROW(fs::invert_s(fs::TargetPoint({0.4, 0.4})), fs::DomainError);
  EXPECT_THROW(fs::invert_s(fs::TargetPoint({3, 0.5})), fs::DomainError);
}

TEST(SMap, InvertReportsConvergenceFailure) {
  // A bracketing bound far too small to reach the root must surface as an
  // error, never as a silently wrong point.
  fs::InvertOptions opts;
  opts.t_max = 1.5;
  EXPECT_THROW(fs::invert_s(fs::TargetPoint({1, 2, 3}), opts), fs::ConvergenceError);
}

TEST(SMap, ClosedFormForTwoGenerators) {
  auto x = fs::invert_s_n2(fs::TargetPoint({1, 1}));
  EXPECT_DOUBLE_EQ(x.x(0), 1.0);
  EXPECT_DOUBLE_EQ(x.x(1), 1.0);
  x = fs::invert_s_n2(fs::TargetPoint({1, 4.0 / 3}));
  EXPECT_NEAR(x.x(0), 1.0, 1e-15);
  EXPECT_NEAR(x.x(1), 2.0, 1e-15);
  EXPECT_THROW(fs::invert_s_n2(fs::TargetPoint({2, 0.5})), fs::DomainError);
  EXPECT_THROW(fs::invert_s_n2(fs::TargetPoint({1, 1, 1})), fs::PreconditionError);
  std::mt19937 rng(19);
  for (int k = 0; k < 200; ++k) {
    const auto x0 = random_x(rng, 2);
    const auto q = fs::apply_s(fs::OrthantPoint(x0));
    const auto back = fs::apply_s(fs::invert_s_n2(q));
    ASSERT_NEAR(back.s(0), q.s(0), 1e-12 * std::max(1.0, q.s(0)));
    ASSERT_NEAR(back.s(1), q.s(1), 1e-12 * std::max(1.0, q.s(1)));
    const auto generic = fs::invert_s(q);
    ASSERT_NEAR(generic.x(0), x0[0], 1e-8);
    ASSERT_NEAR(generic.x(1), x0[1], 1e-8);
  }
}

TEST(SMap, RoundTripProperty) {
  std::mt19937 rng(23);
  for (int n = 2; n <= 6; ++n) {
    for (int k = 0; k < 200; ++k) {
      const auto x = random_x(rng, n);
      const auto back = fs::invert_s(fs::apply_s(fs::OrthantPoint(x)));
      for (int j = 0; j < n; ++j) ASSERT_NEAR(back.x(j), x[static_cast<std::size_t>(j)], 1e-8);
    }
  }
}

TEST(SMap, InvertOnRandomDomainPoints) {
  // Points drawn directly in D_n rather than as images of the orthant.
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  int tested = 0;
  while (tested < 300) {
    const int n = 2 + tested % 4;
    std::vector<double> s(static_cast<std::size_t>(n));
    for (auto& v : s) v = u(rng);
    if (!fs::in_dn(s)) continue;
    const auto x = fs::invert_s(fs::TargetPoint(s));
    const auto back = oracle::s_map(x.x());
    for (int j = 0; j < n; ++j) ASSERT_NEAR(back[static_cast<std::size_t>(j)], s[static_cast<std::size_t>(j)], 1e-10);
    ++tested;
  }
}

TEST(SMap, GridOracleAgrees) {
  for (auto q : {std::vector<double>{1, 1}, std::vector<double>{1, 2, 3},
                 std::vector<double>{1, 4.0 / 3}}) {
    const auto o = fs::oracle_invert_s(fs::TargetPoint(q));
    const auto x = fs::invert_s(fs::TargetPoint(q));
    EXPECT_LT(o.residual, 1e-9);
    for (std::size_t j = 0; j < q.size(); ++j) EXPECT_NEAR(o.x[j], x.x(j), 1e-6);
  }
}

TEST(SMap, NoSecondPreimage) {
  // Search boxes that exclude the known preimage; the best residual found
  // there must stay well above zero.
  for (auto q : {std::vector<double>{1, 2, 3}, std::vector<double>{1.5, 0.7, 1.2}}) {
    const auto x = fs::invert_s(fs::TargetPoint(q));
    const std::size_t n = q.size();
    for (std::size_t j = 0; j < n; ++j) {
      for (int side : {-1, 1}) {
        fs::OracleBox box{std::vector<double>(n, 1e-4), std::vector<double>(n, 1e4)};
        if (side < 0) {
          box.hi[j] = x.x(j) * 0.8;
        } else {
          box.lo[j] = x.x(j) * 1.25;
        }
        const auto o = fs::oracle_invert_s(fs::TargetPoint(q), box, 15);
        EXPECT_GT(o.residual, 1e-6) << "coordinate " << j << " side " << side;
      }
    }
  }
}
