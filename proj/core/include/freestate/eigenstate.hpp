#pragma once

// Positive definite functions phi_{B,c} on the free group and the canonical
// reduced pure lambda-eigenstate of X = sum_i c_i u_i.
//
// For a unit-diagonal PSD matrix B and positive c, with lambda^2 = Bc.c and
// a = Bc / lambda,
//
//   phi(s) = prod_i a_i^{|s|_i - sum_j gamma_ij(s)} prod_{i>j} b_ij^{gamma_ij(s)}
//
// (0^0 read as 1). The canonical state for an interior lambda takes
// x = S^{-1}(c^2 / lambda^2), a_i = sqrt(x_i / (t (1 + y_i))) and
// b_ij = -t a_i a_j, which collapses the formula to
//
//   phi(s) = (-t)^{gamma(s)} prod_i a_i^{|s|_i}.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "freestate/smap.hpp"
#include "freestate/words.hpp"

namespace freestate {

using PhiFunction = std::function<double(const Word&)>;

class CoefficientVector {
 public:
  // Throws DomainError unless all c_i > 0 and lambda > 0.
  CoefficientVector(std::vector<double> c, double lambda);

  std::size_t size() const { return c_.size(); }
  const std::vector<double>& c() const { return c_; }
  double c(std::size_t i) const { return c_[i]; }
  double lambda() const { return lambda_; }
  // c_i^2 / lambda^2, the point of D_n to invert.
  std::vector<double> normalized_squares() const;

 private:
  std::vector<double> c_;
  double lambda_;
};

struct AnnulusSpectrum {
  double inner_radius;
  double outer_radius;
};

// Reduced spectrum of sum c_i u_i from the coefficient moduli:
// outer = (sum |c_i|^2)^{1/2}, inner^2 = max(0, max_i |c_i|^2 - sum_{j!=i} |c_j|^2).
AnnulusSpectrum reduced_spectrum(std::span<const double> moduli);
AnnulusSpectrum reduced_spectrum(std::span<const std::complex<double>> c);
// Annulus valid for every unitary representation:
// outer = sum c_i, inner = max(0, 2 max c_i - sum c_i).
AnnulusSpectrum universal_spectrum(std::span<const double> c);

// 2 max c_i^2 - sum c_i^2 < lambda^2 < sum c_i^2.
bool interior_check(const CoefficientVector& cv);

// When |c_j|^2 > sum_{i!=j} |c_i|^2 and lambda sits on the inner circle, the
// eigenproblem is equivalent to an outer-boundary one for
// lambda u_j^{-1} - sum_{i!=j} c_i u_j^{-1} u_i with eigenvalue c_j.
struct InnerBoundaryReduction {
  std::size_t dominant;                // j (0-based)
  double inner_lambda;                 // (c_j^2 - sum_{i!=j} c_i^2)^{1/2}
  std::vector<double> moduli;          // (lambda, c_i for i != j)
  double eigenvalue;                   // c_j; the outer radius of `moduli`
};
// Throws DomainError when no coefficient dominates strictly.
InnerBoundaryReduction inner_boundary_reduction(std::span<const double> moduli);

class CanonicalParams;
CanonicalParams canonical_params(const CoefficientVector& cv, const InvertOptions& opts);

class GeneralStateParams {
 public:
  const Eigen::MatrixXd& B() const { return b_; }
  const Eigen::VectorXd& c() const { return c_; }
  const Eigen::VectorXd& a() const { return a_; }
  double lambda() const { return lambda_; }
  int rank() const { return static_cast<int>(c_.size()); }

 private:
  friend GeneralStateParams general_params(const Eigen::MatrixXd& B, const Eigen::VectorXd& c);
  friend class CanonicalParams;
  friend CanonicalParams canonical_params(const CoefficientVector&, const InvertOptions&);
  GeneralStateParams(Eigen::MatrixXd b, Eigen::VectorXd c, double lambda, Eigen::VectorXd a)
      : b_(std::move(b)), c_(std::move(c)), a_(std::move(a)), lambda_(lambda) {}

  Eigen::MatrixXd b_;
  Eigen::VectorXd c_;
  Eigen::VectorXd a_;
  double lambda_;
};

// Validates B (symmetric to 1e-12, unit diagonal, min eigenvalue >= -1e-8)
// and Bc.c > 0; computes lambda = sqrt(Bc.c) and a = Bc / lambda.
GeneralStateParams general_params(const Eigen::MatrixXd& B, const Eigen::VectorXd& c);

class CanonicalParams {
 public:
  const CoefficientVector& coefficients() const { return cv_; }
  const OrthantPoint& x() const { return x_; }
  double t() const { return x_.t(); }
  int rank() const { return static_cast<int>(cv_.size()); }
  double lambda() const { return cv_.lambda(); }
  const Eigen::VectorXd& a() const { return state_.a(); }
  double a(std::size_t i) const { return state_.a()(static_cast<Eigen::Index>(i)); }
  const Eigen::MatrixXd& B() const { return state_.B(); }
  double b(std::size_t i, std::size_t j) const {
    return state_.B()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  // The same data viewed as phi_{B,c}, with a and lambda as given (not
  // recomputed from B).
  const GeneralStateParams& as_general() const { return state_; }

 private:
  friend CanonicalParams canonical_params(const CoefficientVector&, const InvertOptions&);
  CanonicalParams(CoefficientVector cv, OrthantPoint x, GeneralStateParams state)
      : cv_(std::move(cv)), x_(std::move(x)), state_(std::move(state)) {}

  CoefficientVector cv_;
  OrthantPoint x_;
  GeneralStateParams state_;
};

// Throws DomainError when lambda is not strictly inside the annulus;
// inversion failures propagate as ConvergenceError.
CanonicalParams canonical_params(const CoefficientVector& cv, const InvertOptions& opts = {});

// Largest violation of the CanonicalParams invariants: S(x) = c^2/lambda^2,
// b_ij = -t a_i a_j, Bc = lambda a, Bc.c = lambda^2.
double canonical_invariant_residual(const CanonicalParams& p);

double phi_eval(const GeneralStateParams& p, const Word& w);
double phi_eval(const CanonicalParams& p, const Word& w);
// Outer-boundary state, lambda = ||c||: prod (c_i/lambda)^{|s|_i} if
// gamma(s) = 0, else 0. Requires c >= 0, c != 0.
double phi_outer_boundary(std::span<const double> c, const Word& w);

PhiFunction phi_function(const GeneralStateParams& p);
PhiFunction phi_function(const CanonicalParams& p);
PhiFunction outer_boundary_function(std::vector<double> c);

// max_{|s| <= L} |sum_i c_i phi(s u_i) - lambda phi(s)|.
double eigenstate_residual(const PhiFunction& phi, std::span<const double> c, double lambda,
                           int rank, int max_len);
double eigenstate_residual(const GeneralStateParams& p, int max_len);
double eigenstate_residual(const CanonicalParams& p, int max_len);

// Largest violation over |s| <= L of
//   phi(1) = 1, phi(s) = phi(s^-1),
//   phi(u_i s) = a_i phi(s)          (s not beginning with u_i^{-1}),
//   phi(s u_i) = a_i phi(s)          (s not ending in an inverse letter),
//   phi(s u_j^{-1} u_i) = b_ij phi(s) (s not ending in u_j, i != j).
double algebraic_property_residual(const PhiFunction& phi, const Eigen::VectorXd& a,
                                   const Eigen::MatrixXd& B, int max_len);

// max over s, t in G+_k of |lambda^-2 sum_ij c_i c_j phi(u_j^-1 t^-1 s u_i) - phi(t^-1 s)|.
double isometry_residual(const PhiFunction& phi, std::span<const double> c, double lambda,
                         int rank, int k);

constexpr std::size_t kDefaultGramCap = 4096;

struct GramMatrix {
  int k;
  Eigen::MatrixXd entries;  // indexed by enumerate_positive(rank, k)
};

// (s, t) entry phi(s^{-1} t) over G+_k. Throws PreconditionError when n^k > cap.
GramMatrix gram_direct(const PhiFunction& phi, int rank, int k,
                       std::size_t cap = kDefaultGramCap);
// A_{k+1} = I (x) A_k + (B - I) (x) X_k with X_{k+1} = X_1 (x) X_k, where the
// outer Kronecker factor is the first letter of the word.
GramMatrix gram_recursive(const GeneralStateParams& p, int k,
                          std::size_t cap = kDefaultGramCap);
// X_1 = a a^T.
Eigen::MatrixXd rank_one_x1(const GeneralStateParams& p);

struct PsdReport {
  double min_eigenvalue;
  bool pass;
};

constexpr double kPsdTolerance = 1e-9;

// Throws PreconditionError when max |m - m^T| > 1e-12.
PsdReport psd_report(const Eigen::MatrixXd& m, double tol = kPsdTolerance);

}  // namespace freestate
