#pragma once

// Markov measure on the combinatorial boundary of the free group and the
// Radon-Nikodym cocycle whose integrals reproduce the canonical eigenstate.
//
// Boundary points are never materialised. Everything here works on finite
// prefixes w, standing for the cylinder set Omega(w) of infinite reduced
// strings that begin with w; every quantity involved is constant on
// cylinders of sufficient depth, so integrals are exact finite sums.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "freestate/eigenstate.hpp"
#include "freestate/words.hpp"

namespace freestate {

// Initial distribution beta on the 2n letters and transition matrix alpha,
// both indexed by Letter::slot().
struct BoundaryMeasure {
  int rank = 0;
  std::vector<double> beta;   // 2n
  std::vector<double> alpha;  // 2n x 2n, row = current letter

  double beta_of(Letter v) const { return beta[v.slot()]; }
  double alpha_of(Letter from, Letter to) const {
    return alpha[from.slot() * 2 * static_cast<std::size_t>(rank) + to.slot()];
  }
};

// beta(u_i) = x_i/(t(1+t)),          beta(u_i^-1) = x_i/(1+t),
// alpha(u_j, u_i) = alpha(u_j^-1, u_i^-1) = x_i/(t(1+y_j)),
// alpha(u_j, u_i^-1) = alpha(u_j^-1, u_i) = x_i/(1+y_j)   (i != j),
// alpha(v, v^-1) = 0.
BoundaryMeasure measure_from(const CanonicalParams& params);

// Largest deviation from sum beta = 1, unit row sums of alpha and
// alpha(v, v^-1) = 0.
double measure_invariant_residual(const BoundaryMeasure& m);

// mu(Omega(w)) = beta(v_1) alpha(v_1, v_2) ... alpha(v_{k-1}, v_k); 1 for w = 1.
double mu_hat(const BoundaryMeasure& m, const Word& w);

// max_{|s| <= L} |mu_hat(s) - sum_v mu_hat(s v)| over letters v with |sv| = |s|+1.
double compatibility_residual(const BoundaryMeasure& m, int max_len);

// max over nonempty |w| <= L of |mu_hat(sigma(w))/mu_hat(w) - beta(v_1^-1)/beta(v_1)|,
// sigma inverting every letter.
double symmetry_ratio_residual(const BoundaryMeasure& m, int max_len);

// Values of P(u_i, omega) by the first symbol of omega:
//   own[i]            p_1 = u_i          sqrt(t(1+y_i)/x_i)
//   other[i]          p_1 = u_j, j != i  -sqrt(t x_i/(1+y_i))
//   inverse_first[i]  p_1 = u_j^-1       sqrt(x_i/(t(1+y_i)))
// P(u_i^-1, omega) is always derived as 1/P(u_i, u_i omega).
struct CocycleTable {
  int rank = 0;
  std::vector<double> own;
  std::vector<double> other;
  std::vector<double> inverse_first;
};

CocycleTable cocycle_table(const CanonicalParams& params);

// Everything the boundary computations read, built once from the parameters.
// Fields are public so that tests can corrupt individual entries.
struct BoundaryModel {
  CanonicalParams params;
  BoundaryMeasure measure;
  CocycleTable table;
};

BoundaryModel make_boundary_model(const CanonicalParams& params);

// Constant value of P(s, .) on Omega(prefix), via
//   P(v_1 ... v_k, w) = P(v_1, w) P(v_2, v_1^-1 w) ... P(v_k, v_{k-1}^-1 ... v_1^-1 w).
// Requires |prefix| >= |s| + 1 unless s is the identity (P(1, .) = 1, and the
// empty prefix stands for the whole boundary).
double cocycle_p(const CocycleTable& table, const Word& s, const Word& prefix);
double cocycle_p(const BoundaryModel& model, const Word& s, const Word& prefix);

// Same factorisation without the depth precondition. Throws PreconditionError
// only when a factor would need a symbol beyond the end of the prefix.
double cocycle_p_unchecked(const CocycleTable& table, const Word& s, const Word& prefix);

// Translate of a boundary prefix: reduce(g w), assuming the cancellation does
// not consume all of w. Throws PreconditionError if it would.
Word translate_prefix(const Word& g, const Word& prefix);

// P(u_i, omega)^2 read from the closed-form Radon-Nikodym table
// (t(1+y_i)/x_i, t x_i/(1+y_i), x_i/(t(1+y_i)) by first symbol).
double radon_nikodym_table(const CanonicalParams& params, int i, Letter first);
// The same derivative from the measure itself:
// mu_hat(reduce(u_i^-1 w)) / mu_hat(w) for |w| >= 2.
double radon_nikodym_from_measure(const BoundaryMeasure& m, int i, const Word& prefix);

constexpr int kDefaultIntegrationCap = 10;

// Exact integral of P(s, .) against mu as a sum over cylinders of depth
// |s| + 1 + extra_depth. Throws PreconditionError when |s| exceeds cap.
double integrate_p(const BoundaryModel& model, const Word& s, int extra_depth = 0,
                   int cap = kDefaultIntegrationCap);

struct SignSplitIntegral {
  double positive_first;  // over Omega(+) = union of Omega(u_j)
  double negative_first;  // over Omega(-) = union of Omega(u_j^-1)
};
SignSplitIntegral integrate_p_split(const BoundaryModel& model, const Word& s,
                                    int extra_depth = 0, int cap = kDefaultIntegrationCap);

// max_{|s| <= L} |integrate_p(s) - phi_eval(s)|.
double integration_residual(const BoundaryModel& model, int max_len);
// max_{|s| <= L} |integrate_p(s, depth |s|+2) - integrate_p(s, depth |s|+1)|.
double depth_stability_residual(const BoundaryModel& model, int max_len);

// max over depth-2 prefixes w of |sum_i (c_i/lambda) P(u_i, w) - 1|.
double check_rightsum(const BoundaryModel& model);

// max_{|s| <= L} |int_{Omega(-)} P(s,.) dmu - t int_{Omega(+)} P(s,.) dmu|.
double check_h_identity(const BoundaryModel& model, int max_len);

// Distinct values (up to 1e-12 relative) of P(r, .) across the depth-(|r|+1)
// prefixes accepted by keep (all prefixes when keep is empty).
std::vector<double> cocycle_distinct_values(
    const BoundaryModel& model, const Word& r,
    const std::function<bool(const Word&)>& keep = {});

// True iff P(r, .) is constant on every class where it should be: on Omega(+)
// when r begins with an inverse letter, and on each Omega(u_i^-1) for which r
// does not begin with u_i^-1.
bool check_constancy(const BoundaryModel& model, const Word& r);

// h = sqrt(t) on Omega(+), -1/sqrt(t) on Omega(-); T inverts every symbol.
// Returns (h(w) P(u_i, T w), h(u_i w) P(u_i^-1, w)) for a depth-2 prefix.
std::pair<double, double> w_intertwiner_values(const BoundaryModel& model, int i,
                                               const Word& prefix);
// max over i and depth-2 prefixes of the gap between the two values above.
double check_w_intertwiner(const BoundaryModel& model);

// Draws prefixes with probability mu_hat(w). Uses its own inverse-CDF over
// 53-bit uniforms from mt19937_64, so sequences are identical on every
// platform for a given seed.
class PrefixSampler {
 public:
  PrefixSampler(const BoundaryMeasure& m, std::uint64_t seed);
  Word next(int depth);

 private:
  std::size_t draw(const double* weights, std::size_t count);

  const BoundaryMeasure* measure_;
  std::mt19937_64 rng_;
};

Word sample_prefix(const BoundaryMeasure& m, int depth, std::uint64_t seed);

struct MonteCarloEstimate {
  double mean;
  double std_error;
  std::size_t samples;
};

// Sample mean of P(s, w) over prefixes w of depth |s|+1 drawn from mu.
MonteCarloEstimate monte_carlo_phi(const BoundaryModel& model, const Word& s,
                                   std::size_t samples, std::uint64_t seed);

}  // namespace freestate
