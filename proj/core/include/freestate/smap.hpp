#pragma once

// The rational map S on the positive orthant,
//
//   S(x)_j = x_j (1 + y_j) / t,   t = sum_i x_i,   y_j = t - x_j,
//
// which carries R^n_+ bijectively onto the open region
//
//   D_n = { s > 0 : sum_i s_i > 1, s_j < 1 + sum_{i != j} s_i for all j }.
//
// Inverting S is how the eigenstate parameters x are obtained from the
// normalised squared coefficients c_j^2 / lambda^2.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace freestate {

class OrthantPoint {
 public:
  // Throws DomainError unless every coordinate is finite and > 0.
  explicit OrthantPoint(std::vector<double> x);

  std::size_t size() const { return x_.size(); }
  const std::vector<double>& x() const { return x_; }
  double x(std::size_t j) const { return x_[j]; }
  double t() const { return t_; }
  double y(std::size_t j) const { return y_[j]; }
  const std::vector<double>& y() const { return y_; }
  double theta(std::size_t j) const { return 1.0 + y_[j] - x_[j]; }

 private:
  std::vector<double> x_;
  double t_;
  std::vector<double> y_;
};

class TargetPoint {
 public:
  // Throws DomainError unless every coordinate is finite and > 0.
  explicit TargetPoint(std::vector<double> s);

  std::size_t size() const { return s_.size(); }
  const std::vector<double>& s() const { return s_; }
  double s(std::size_t j) const { return s_[j]; }

 private:
  std::vector<double> s_;
};

TargetPoint apply_s(const OrthantPoint& p);
// Raw evaluation for points that may have left the orthant during a solve.
std::vector<double> apply_s_raw(std::span<const double> x);

bool in_dn(const TargetPoint& q);
bool in_dn(std::span<const double> s);

// S'_{ij} = (x_i^2 - x_i)/t^2 for i != j, S'_{ii} = (y_i^2 + y_i)/t^2.
Eigen::MatrixXd jacobian_s(const OrthantPoint& p);

// Determinant of the "arrow" matrix with diagonal r_i and row-constant
// off-diagonal entries p_i:  prod q + sum_j p_j prod_{i != j} q_i, q = r - p.
double det_arrow_matrix(std::span<const double> r, std::span<const double> p);

// det S' = P / t^{n+1} with P = sum_j x_j y_j prod_{i != j} theta_i.
double det_jacobian(const OrthantPoint& p);

struct InvertOptions {
  double tol = 1e-10;             // accepted ||S(x) - q||_inf
  double t_root_tol = 1e-12;      // relative bisection width in t
  double t_max = 1e9;             // give up bracketing beyond this t
  double disc_clamp = 1e-14;      // discriminants in (-clamp, 0) read as 0
  int samples_per_interval = 512; // log-spaced sign-change scan
  int newton_max_iter = 60;
};

// Inverse of S on D_n. Throws DomainError for q outside D_n and
// ConvergenceError when no candidate meets opts.tol.
OrthantPoint invert_s(const TargetPoint& q, const InvertOptions& opts = {});

// Closed form for n = 2:
//   x = ((s1+s2-1)/(1+s2-s1), (s1+s2-1)/(1+s1-s2)).
OrthantPoint invert_s_n2(const TargetPoint& q);

struct OracleSolution {
  std::vector<double> x;
  double residual;  // ||S(x) - q||_inf
};

struct OracleBox {
  std::vector<double> lo;  // per-coordinate bounds, lo > 0
  std::vector<double> hi;
};

// Brute-force inverse by nested log-grid refinement. Independent of the
// scalar-t reduction; intended as a test oracle for n <= 3.
OracleSolution oracle_invert_s(const TargetPoint& q, int grid = 21);
OracleSolution oracle_invert_s(const TargetPoint& q, const OracleBox& box, int grid = 21);

}  // namespace freestate
