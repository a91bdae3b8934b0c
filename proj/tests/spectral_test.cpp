#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "freestate/errors.hpp"
#include "freestate/spectral.hpp"
#include "support/oracles.hpp"

namespace fs = freestate;

namespace {

fs::Word W(int n, std::vector<int> t) { return fs::Word::from_tokens(n, t); }

double max_gap(const fs::GroupFunction& f, const fs::GroupFunction& g) {
  double worst = 0;
  for (const auto& [w, v] : f.terms()) worst = std::max(worst, std::abs(v - g.at(w)));
  for (const auto& [w, v] : g.terms()) worst = std::max(worst, std::abs(v - f.at(w)));
  return worst;
}

// Convolution straight from the definition on token vectors.
std::map<oracle::Tokens, double> naive_convolve(const fs::GroupFunction& f,
                                                const fs::GroupFunction& g) {
  std::map<oracle::Tokens, double> out;
  for (const auto& [a, x] : f.terms()) {
    for (const auto& [b, y] : g.terms()) {
      oracle::Tokens ta, tb;
      for (const auto& l : a.letters()) ta.push_back(l.token());
      for (const auto& l : b.letters()) tb.push_back(l.token());
      out[oracle::concat(ta, tb)] += x * y;
    }
  }
  return out;
}

fs::GroupFunction random_function(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> size(1, 8), len(0, 3);
  std::uniform_real_distribution<double> coeff(-2, 2);
  fs::GroupFunction f(n);
  const int k = size(rng);
  for (int i = 0; i < k; ++i) f.add(W(n, oracle::random_reduced(rng, n, len(rng))), coeff(rng));
  return f;
}

}  // namespace

TEST(Convolution, Examples) {
  const auto one = fs::GroupFunction::delta(fs::Word(2));
  std::mt19937 rng(51);
  const auto f = random_function(rng, 2);
  EXPECT_EQ(max_gap(one * f, f), 0.0);
  EXPECT_EQ(max_gap(f * one, f), 0.0);
  const auto p = fs::GroupFunction::delta(W(2, {1})) * fs::GroupFunction::delta(W(2, {-1}));
  EXPECT_EQ(p.support_size(), 1u);
  EXPECT_DOUBLE_EQ(p.at(fs::Word(2)), 1.0);
  const auto x = fs::GroupFunction::linear(std::vector<double>{1, 1});
  const auto x2 = x * x;
  EXPECT_EQ(x2.support_size(), 4u);
  for (const auto& w : fs::enumerate_positive(2, 2)) EXPECT_DOUBLE_EQ(x2.at(w), 1.0);
  EXPECT_THROW(fs::convolve(x, fs::GroupFunction::linear(std::vector<double>{1, 1, 1})),
               fs::PreconditionError);
}

TEST(Convolution, MatchesDefinition) {
  std::mt19937 rng(53);
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + k % 2;
    const auto f = random_function(rng, n), g = random_function(rng, n);
    const auto h = f * g;
    const auto ref = naive_convolve(f, g);
    for (const auto& [t, v] : ref) ASSERT_NEAR(h.at(W(n, t)), v, 1e-12);
    for (const auto& [w, v] : h.terms()) {
      oracle::Tokens t;
      for (const auto& l : w.letters()) t.push_back(l.token());
      ASSERT_TRUE(ref.contains(t));
    }
  }
}

TEST(Convolution, Associativity) {
  std::mt19937 rng(57);
  for (int k = 0; k < 300; ++k) {
    const int n = 2 + k % 2;
    const auto a = random_function(rng, n), b = random_function(rng, n), c = random_function(rng, n);
    ASSERT_LE(max_gap((a * b) * c, a * (b * c)), 1e-12);
  }
}

TEST(Convolution, SupportCap) {
  const auto x = fs::GroupFunction::linear(std::vector<double>{1, 1, 1});
  EXPECT_THROW(fs::power(x, 4, 50), fs::PreconditionError);
  EXPECT_NO_THROW(fs::power(x, 3, 50));
}

TEST(Norms, Examples) {
  EXPECT_DOUBLE_EQ(fs::l2_norm(fs::GroupFunction::delta(fs::Word(3))), 1.0);
  const std::vector<double> c{1, 1};
  EXPECT_NEAR(fs::l2_norm(fs::GroupFunction::linear(c)), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(fs::l2_norm(fs::power(fs::GroupFunction::linear(c), 3)), std::pow(2.0, 1.5), 1e-14);
  auto [lo, hi] = fs::power_norm_bounds(c, 1);
  EXPECT_NEAR(lo, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(hi, 2 * std::sqrt(2.0), 1e-15);
  std::tie(lo, hi) = fs::power_norm_bounds(c, 3);
  EXPECT_NEAR(lo, std::pow(2.0, 1.5), 1e-14);
  EXPECT_NEAR(hi, 4 * std::pow(2.0, 1.5), 1e-13);
  std::tie(lo, hi) = fs::power_norm_bounds(std::vector<double>{2, 1}, 2);
  EXPECT_NEAR(lo, 5.0, 1e-14);
  EXPECT_NEAR(hi, 15.0, 1e-13);
}

TEST(Norms, PowersHaveFullPositiveSupport) {
  std::mt19937 rng(59);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> c(static_cast<std::size_t>(n));
      double sq = 0;
      for (auto& v : c) sq += (v = u(rng)) * v;
      const auto x = fs::GroupFunction::linear(c);
      auto xk = fs::GroupFunction::delta(fs::Word(n));
      for (int k = 1; k <= 6; ++k) {
        xk = xk * x;
        ASSERT_EQ(xk.support_size(), static_cast<std::size_t>(std::pow(n, k)));
        for (const auto& [w, v] : xk.terms()) ASSERT_TRUE(w.is_positive() && w.size() == static_cast<std::size_t>(k));
        ASSERT_NEAR(fs::l2_norm(xk) / std::pow(sq, k / 2.0), 1.0, 1e-12);
      }
    }
  }
}

TEST(GeometricInverse, Examples) {
  const std::vector<double> zero{0, 0};
  const auto f0 = fs::geometric_inverse(2.0, zero, 3);
  EXPECT_EQ(f0.support_size(), 1u);
  EXPECT_DOUBLE_EQ(f0.at(fs::Word(2)), 0.5);

  const std::vector<double> d{1, 0};
  const auto f = fs::geometric_inverse(2.0, d, 4);
  for (int j = 0; j <= 4; ++j) {
    std::vector<int> t(static_cast<std::size_t>(j), 1);
    EXPECT_NEAR(f.at(W(2, t)), std::pow(-1.0, j) / std::pow(2.0, j + 1), 1e-15);
  }
  auto r = fs::affine_element(2.0, d) * f;
  r.add(fs::Word(2), -1.0);
  EXPECT_NEAR(fs::l2_norm(r), 1.0 / 32, 1e-15);
  EXPECT_NEAR(fs::geometric_inverse_tail(2.0, d, 4), 1.0 / 32, 1e-15);
  EXPECT_THROW(fs::geometric_inverse(1.0, std::vector<double>{1, 0}, 2), fs::DomainError);
}

TEST(GeometricInverse, TailMatchesAndDecays) {
  for (auto [d0, d] : {std::pair{2.0, std::vector<double>{1, 1}},
                       std::pair{-3.0, std::vector<double>{1, 2}},
                       std::pair{4.0, std::vector<double>{1, -1, 2}}}) {
    const int n = static_cast<int>(d.size());
    const auto y = fs::affine_element(d0, d);
    double prev = INFINITY;
    std::vector<double> res;
    for (int m = 0; m <= 7; ++m) {
      auto r = y * fs::geometric_inverse(d0, d, m);
      r.add(fs::Word(n), -1.0);
      const double v = fs::l2_norm(r);
      EXPECT_NEAR(v, fs::geometric_inverse_tail(d0, d, m), 1e-12);
      EXPECT_LT(v, prev);
      prev = v;
      res.push_back(v);
    }
    double dd = 0;
    for (double v : d) dd += v * v;
    for (int m = 0; m + 2 < static_cast<int>(res.size()); ++m) {
      EXPECT_NEAR(res[static_cast<std::size_t>(m) + 2] / res[static_cast<std::size_t>(m)], dd / (d0 * d0), 1e-10);
    }
  }
}
