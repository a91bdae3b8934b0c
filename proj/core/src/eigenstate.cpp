#include "freestate/eigenstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "freestate/errors.hpp"

namespace freestate {

namespace {

// Integer power with 0^0 = 1.
double ipow(double base, int e) {
  double out = 1.0;
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

void check_rank(const Word& w, int rank) {
  if (w.rank() != rank) {
    throw PreconditionError("word rank " + std::to_string(w.rank()) +
                            " does not match state rank " + std::to_string(rank));
  }
}

}  // namespace

CoefficientVector::CoefficientVector(std::vector<double> c, double lambda)
    : c_(std::move(c)), lambda_(lambda) {
  if (c_.empty()) throw DomainError("coefficient vector is empty");
  for (double v : c_) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("coefficients must be positive");
  }
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw DomainError("lambda must be positive");
}

std::vector<double> CoefficientVector::normalized_squares() const {
  std::vector<double> out(c_.size());
  const double l2 = lambda_ * lambda_;
  for (std::size_t i = 0; i < c_.size(); ++i) out[i] = c_[i] * c_[i] / l2;
  return out;
}

AnnulusSpectrum reduced_spectrum(std::span<const double> moduli) {
  double total = 0.0, biggest = 0.0;
  for (double m : moduli) {
    const double sq = m * m;
    total += sq;
    biggest = std::max(biggest, sq);
  }
  if (!(total > 0.0)) throw DomainError("reduced spectrum of the zero element");
  // max_i |c_i|^2 - sum_{j != i} |c_j|^2 = 2 max |c_i|^2 - sum |c_j|^2
  const double inner_sq = std::max(0.0, 2.0 * biggest - total);
  return {std::sqrt(inner_sq), std::sqrt(total)};
}

AnnulusSpectrum reduced_spectrum(std::span<const std::complex<double>> c) {
  std::vector<double> moduli(c.size());
  std::transform(c.begin(), c.end(), moduli.begin(), [](auto z) { return std::abs(z); });
  return reduced_spectrum(moduli);
}

AnnulusSpectrum universal_spectrum(std::span<const double> c) {
  const double total = std::accumulate(c.begin(), c.end(), 0.0);
  const double biggest = c.empty() ? 0.0 : *std::max_element(c.begin(), c.end());
  return {std::max(0.0, 2.0 * biggest - total), total};
}

bool interior_check(const CoefficientVector& cv) {
  double total = 0.0, biggest = 0.0;
  for (double v : cv.c()) {
    total += v * v;
    biggest = std::max(biggest, v * v);
  }
  const double l2 = cv.lambda() * cv.lambda();
  return 2.0 * biggest - total < l2 && l2 < total;
}

InnerBoundaryReduction inner_boundary_reduction(std::span<const double> moduli) {
  if (moduli.empty()) throw DomainError("empty coefficient vector");
  const auto it = std::max_element(moduli.begin(), moduli.end(),
                                   [](double x, double y) { return std::abs(x) < std::abs(y); });
  const std::size_t j = static_cast<std::size_t>(it - moduli.begin());
  double rest = 0.0;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (i != j) rest += moduli[i] * moduli[i];
  }
  const double cj = std::abs(moduli[j]);
  if (!(cj * cj > rest)) throw DomainError("no coefficient strictly dominates; inner radius is 0");

  InnerBoundaryReduction out{j, std::sqrt(cj * cj - rest), {}, cj};
  out.moduli.push_back(out.inner_lambda);
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (i != j) out.moduli.push_back(std::abs(moduli[i]));
  }
  return out;
}

GeneralStateParams general_params(const Eigen::MatrixXd& B, const Eigen::VectorXd& c) {
  const Eigen::Index n = c.size();
  if (n == 0 || B.rows() != n || B.cols() != n) {
    throw PreconditionError("B must be n x n for n = len(c) > 0");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(c(i) > 0.0)) throw DomainError("coefficients must be positive");
  }
  if ((B - B.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DomainError("B is not symmetric");
  }
  if ((B.diagonal().array() - 1.0).abs().maxCoeff() > 1e-12) {
    throw DomainError("B must have unit diagonal");
  }
  const Eigen::MatrixXd sym = 0.5 * (B + B.transpose());
  const double min_eig =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();
  if (min_eig < -1e-8) {
    throw DomainError("B is not positive semidefinite (min eigenvalue " +
                      std::to_string(min_eig) + ")");
  }
  const Eigen::VectorXd bc = sym * c;
  const double quad = bc.dot(c);
  if (!(quad > 0.0)) throw DomainError("Bc.c must be positive");
  const double lambda = std::sqrt(quad);
  return GeneralStateParams(sym, c, lambda, bc / lambda);
}

CanonicalParams canonical_params(const CoefficientVector& cv, const InvertOptions& opts) {
  if (!interior_check(cv)) {
    throw DomainError("lambda is not strictly inside the reduced spectrum annulus");
  }
  OrthantPoint x = invert_s(TargetPoint(cv.normalized_squares()), opts);
  const std::size_t n = cv.size();
  const auto en = static_cast<Eigen::Index>(n);

  Eigen::VectorXd a(en);
  for (std::size_t i = 0; i < n; ++i) {
    a(static_cast<Eigen::Index>(i)) = std::sqrt(x.x(i) / (x.t() * (1.0 + x.y(i))));
  }
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(en, en);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          -std::sqrt(x.x(i) * x.x(j) / ((1.0 + x.y(i)) * (1.0 + x.y(j))));
    }
  }
  Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(cv.c().data(), en);
  GeneralStateParams state(std::move(b), std::move(c), cv.lambda(), std::move(a));
  return CanonicalParams(cv, std::move(x), std::move(state));
}

double canonical_invariant_residual(const CanonicalParams& p) {
  const std::vector<double> target = p.coefficients().normalized_squares();
  const TargetPoint s = apply_s(p.x());
  double worst = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    worst = std::max(worst, std::abs(s.s(i) - target[i]));
  }
  const std::size_t n = target.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      worst = std::max(worst, std::abs(p.b(i, j) + p.t() * p.a(i) * p.a(j)));
    }
  }
  const auto& g = p.as_general();
  const Eigen::VectorXd bc = g.B() * g.c();
  worst = std::max(worst, (bc - p.lambda() * g.a()).cwiseAbs().maxCoeff());
  worst = std::max(worst, std::abs(bc.dot(g.c()) - p.lambda() * p.lambda()));
  return worst;
}

double phi_eval(const GeneralStateParams& p, const Word& w) {
  const int n = p.rank();
  check_rank(w, n);
  if (w.empty()) return 1.0;

  std::vector<int> a_exp(static_cast<std::size_t>(n), 0);
  std::vector<int> gamma(static_cast<std::size_t>(n * n), 0);
  const auto& ls = w.letters();
  for (std::size_t k = 0; k < ls.size(); ++k) {
    ++a_exp[static_cast<std::size_t>(ls[k].index() - 1)];
    if (k > 0 && !ls[k - 1].positive() && ls[k].positive()) {
      const int i = std::max(ls[k - 1].index(), ls[k].index()) - 1;
      const int j = std::min(ls[k - 1].index(), ls[k].index()) - 1;
      ++gamma[static_cast<std::size_t>(i * n + j)];
      // one occurrence each of u_i and u_j is absorbed into b_ij
      --a_exp[static_cast<std::size_t>(i)];
      --a_exp[static_cast<std::size_t>(j)];
    }
  }
  double value = 1.0;
  for (int i = 0; i < n; ++i) value *= ipow(p.a()(i), a_exp[static_cast<std::size_t>(i)]);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      const int g = gamma[static_cast<std::size_t>(i * n + j)];
      if (g > 0) value *= ipow(p.B()(i, j), g);
    }
  }
  return value;
}

double phi_eval(const CanonicalParams& p, const Word& w) {
  check_rank(w, p.rank());
  double value = ipow(-p.t(), gamma_total(w));
  for (const Letter& l : w.letters()) value *= p.a(static_cast<std::size_t>(l.index() - 1));
  return value;
}

double phi_outer_boundary(std::span<const double> c, const Word& w) {
  check_rank(w, static_cast<int>(c.size()));
  double norm_sq = 0.0;
  for (double v : c) {
    if (v < 0.0) throw DomainError("outer-boundary coefficients must be nonnegative");
    norm_sq += v * v;
  }
  if (!(norm_sq > 0.0)) throw DomainError("outer-boundary state needs a nonzero c");
  if (gamma_total(w) > 0) return 0.0;
  const double lambda = std::sqrt(norm_sq);
  std::vector<int> counts(c.size(), 0);
  for (const Letter& l : w.letters()) ++counts[static_cast<std::size_t>(l.index() - 1)];
  double value = 1.0;
  for (std::size_t i = 0; i < c.size(); ++i) value *= ipow(c[i] / lambda, counts[i]);
  return value;
}

PhiFunction phi_function(const GeneralStateParams& p) {
  return [p](const Word& w) { return phi_eval(p, w); };
}

PhiFunction phi_function(const CanonicalParams& p) {
  return [p](const Word& w) { return phi_eval(p, w); };
}

PhiFunction outer_boundary_function(std::vector<double> c) {
  return [c = std::move(c)](const Word& w) { return phi_outer_boundary(c, w); };
}

double eigenstate_residual(const PhiFunction& phi, std::span<const double> c, double lambda,
                           int rank, int max_len) {
  double worst = 0.0;
  for (const Word& s : enumerate_words(rank, max_len)) {
    double lhs = 0.0;
    for (int i = 1; i <= rank; ++i) {
      lhs += c[static_cast<std::size_t>(i - 1)] * phi(s * Word::generator(rank, i));
    }
    worst = std::max(worst, std::abs(lhs - lambda * phi(s)));
  }
  return worst;
}

double eigenstate_residual(const GeneralStateParams& p, int max_len) {
  const std::vector<double> c(p.c().data(), p.c().data() + p.c().size());
  return eigenstate_residual(phi_function(p), c, p.lambda(), p.rank(), max_len);
}

double eigenstate_residual(const CanonicalParams& p, int max_len) {
  return eigenstate_residual(phi_function(p), p.coefficients().c(), p.lambda(), p.rank(),
                             max_len);
}

double algebraic_property_residual(const PhiFunction& phi, const Eigen::VectorXd& a,
                                   const Eigen::MatrixXd& B, int max_len) {
  const int n = static_cast<int>(a.size());
  double worst = std::abs(phi(Word(n)) - 1.0);
  for (const Word& s : enumerate_words(n, max_len)) {
    const double ps = phi(s);
    worst = std::max(worst, std::abs(ps - phi(inverse(s))));
    for (int i = 1; i <= n; ++i) {
      const Word ui = Word::generator(n, i);
      const double ai = a(i - 1);
      if (s.empty() || s.front() != Letter(i, -1)) {
        worst = std::max(worst, std::abs(phi(ui * s) - ai * ps));
      }
      if (s.empty() || s.back().positive()) {
        worst = std::max(worst, std::abs(phi(s * ui) - ai * ps));
      }
      for (int j = 1; j <= n; ++j) {
        if (j == i) continue;
        if (!s.empty() && s.back() == Letter(j, +1)) continue;
        const Word tail = Word::generator(n, j, -1) * ui;
        worst = std::max(worst, std::abs(phi(s * tail) - B(i - 1, j - 1) * ps));
      }
    }
  }
  return worst;
}

double isometry_residual(const PhiFunction& phi, std::span<const double> c, double lambda,
                         int rank, int k) {
  const std::vector<Word> words = enumerate_positive(rank, k);
  double worst = 0.0;
  for (const Word& s : words) {
    for (const Word& t : words) {
      const Word core = inverse(t) * s;
      double sum = 0.0;
      for (int i = 1; i <= rank; ++i) {
        const Word right = core * Word::generator(rank, i);
        for (int j = 1; j <= rank; ++j) {
          sum += c[static_cast<std::size_t>(i - 1)] * c[static_cast<std::size_t>(j - 1)] *
                 phi(Word::generator(rank, j, -1) * right);
        }
      }
      worst = std::max(worst, std::abs(sum / (lambda * lambda) - phi(core)));
    }
  }
  return worst;
}

namespace {

std::size_t checked_gram_size(int rank, int k, std::size_t cap) {
  if (k < 1) throw PreconditionError("Gram matrices start at k = 1");
  std::size_t size = 1;
  for (int i = 0; i < k; ++i) {
    size *= static_cast<std::size_t>(rank);
    if (size > cap) {
      throw PreconditionError("Gram matrix size n^k exceeds cap " + std::to_string(cap));
    }
  }
  return size;
}

}  // namespace

GramMatrix gram_direct(const PhiFunction& phi, int rank, int k, std::size_t cap) {
  const auto size = static_cast<Eigen::Index>(checked_gram_size(rank, k, cap));
  const std::vector<Word> words = enumerate_positive(rank, k);
  std::vector<Word> inverses;
  inverses.reserve(words.size());
  for (const Word& w : words) inverses.push_back(inverse(w));

  Eigen::MatrixXd m(size, size);
  for (Eigen::Index r = 0; r < size; ++r) {
    for (Eigen::Index c = r; c < size; ++c) {
      const double v = phi(inverses[static_cast<std::size_t>(r)] * words[static_cast<std::size_t>(c)]);
      m(r, c) = v;
      m(c, r) = v;
    }
  }
  return {k, std::move(m)};
}

Eigen::MatrixXd rank_one_x1(const GeneralStateParams& p) { return p.a() * p.a().transpose(); }

GramMatrix gram_recursive(const GeneralStateParams& p, int k, std::size_t cap) {
  checked_gram_size(p.rank(), k, cap);
  const Eigen::Index n = p.rank();
  const Eigen::MatrixXd x1 = rank_one_x1(p);
  const Eigen::MatrixXd offdiag = p.B() - Eigen::MatrixXd::Identity(n, n);

  Eigen::MatrixXd a = p.B();
  Eigen::MatrixXd x = x1;
  for (int level = 1; level < k; ++level) {
    const Eigen::Index m = a.rows();
    Eigen::MatrixXd next(n * m, n * m);
    Eigen::MatrixXd next_x(n * m, n * m);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        next.block(i * m, j * m, m, m) = (i == j) ? a : Eigen::MatrixXd(offdiag(i, j) * x);
        next_x.block(i * m, j * m, m, m) = x1(i, j) * x;
      }
    }
    a = std::move(next);
    x = std::move(next_x);
  }
  return {k, std::move(a)};
}

PsdReport psd_report(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) throw PreconditionError("PSD check needs a square matrix");
  if (m.size() == 0) return {0.0, true};
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw PreconditionError("PSD check needs a symmetric matrix");
  }
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
                             .eigenvalues()
                             .minCoeff();
  return {min_eig, min_eig >= -tol};
}

}  // namespace freestate
