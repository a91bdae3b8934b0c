#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <memory>
#include <random>

#include "freestate/boundary.hpp"
#include "freestate/eigenstate.hpp"
#include "freestate/smap.hpp"
#include "freestate/spectral.hpp"
#include "freestate/words.hpp"

#ifndef FREESTATE_VERSION_STRING
#define FREESTATE_VERSION_STRING "unknown"
#endif

namespace freestate::cli {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Check {
  std::string name;
  std::string anchor;
  std::string tolerance_key;
  std::function<double()> residual;
};

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Uniform on (lo, hi) from the top 53 bits; fixed across standard libraries.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

std::vector<OrthantPoint> sample_points(const JobConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<OrthantPoint> pts;
  for (int k = 0; k < cfg.round_trip_samples; ++k) {
    std::vector<double> x(static_cast<std::size_t>(cfg.n));
    for (auto& v : x) v = uniform(rng, 0.01, 10.0);
    pts.emplace_back(std::move(x));
  }
  return pts;
}

double min_eig(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

double jacobian_fd_gap(const OrthantPoint& p) {
  const auto J = jacobian_s(p);
  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    auto up = p.x();
    auto dn = p.x();
    up[j] += h;
    dn[j] -= h;
    const auto fu = apply_s_raw(up);
    const auto fd = apply_s_raw(dn);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double fdiff = (fu[i] - fd[i]) / (2 * h);
      worst = std::max(worst, std::abs(fdiff - J(static_cast<Eigen::Index>(i),
                                                  static_cast<Eigen::Index>(j))));
    }
  }
  return worst;
}

double det_gap(const OrthantPoint& p) {
  const double d = det_jacobian(p);
  if (!(d > 0.0)) return kInf;
  const double direct = jacobian_s(p).partialPivLu().determinant();
  return std::abs(d - direct) / std::abs(direct);
}

// Matrix with diagonal 1 + y_i and row-constant off-diagonal -x_i has
// determinant (1 + t)^{n-1}; compared both by the closed form and directly.
double arrow_gap(const OrthantPoint& p) {
  const std::size_t n = p.size();
  std::vector<double> r(n), q(n);
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = 1.0 + p.y(i);
    q[i] = -p.x(i);
    for (std::size_t j = 0; j < n; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = i == j ? r[i] : q[i];
    }
  }
  const double expect = std::pow(1.0 + p.t(), static_cast<double>(n - 1));
  const double closed = det_arrow_matrix(r, q);
  const double direct = m.partialPivLu().determinant();
  return std::max(std::abs(closed - expect), std::abs(direct - expect)) / expect;
}

std::vector<Check> smap_checks(const JobConfig& cfg) {
  auto pts = std::make_shared<std::vector<OrthantPoint>>(sample_points(cfg));
  std::vector<Check> out;
  out.push_back({"smap.round_trip", "invert_S(S(x)) = x and S(x) in D_n", "s_round_trip", [pts] {
                   double worst = 0.0;
                   for (const auto& p : *pts) {
                     const auto q = apply_s(p);
                     if (!in_dn(q)) return kInf;
                     const auto back = invert_s(q);
                     for (std::size_t j = 0; j < p.size(); ++j) {
                       worst = std::max(worst, std::abs(back.x(j) - p.x(j)));
                     }
                   }
                   return worst;
                 }});
  out.push_back({"smap.det_jacobian", "det S' = P / t^(n+1) > 0", "det_jacobian", [pts] {
                   double worst = 0.0;
                   for (const auto& p : *pts) worst = std::max(worst, det_gap(p));
                   return worst;
                 }});
  out.push_back({"smap.arrow_determinant", "det(diag(1+y) - x 1^T off-diagonal) = (1+t)^(n-1)",
                 "arrow_determinant", [pts] {
                   double worst = 0.0;
                   for (const auto& p : *pts) worst = std::max(worst, arrow_gap(p));
                   return worst;
                 }});
  out.push_back({"smap.jacobian_fd", "S'_ij = (x_i^2 - x_i)/t^2, S'_ii = (y_i^2 + y_i)/t^2",
                 "jacobian_fd", [pts] {
                   double worst = 0.0;
                   for (const auto& p : *pts) worst = std::max(worst, jacobian_fd_gap(p));
                   return worst;
                 }});
  return out;
}

// Checks shared by the interior and the outer-boundary states.
std::vector<Check> state_checks(const JobConfig& cfg, PhiFunction phi, Eigen::VectorXd a,
                                Eigen::MatrixXd B, std::shared_ptr<GeneralStateParams> general) {
  const int n = cfg.n;
  const int L = cfg.max_word_len;
  const double lambda = *cfg.lambda;
  const auto c = cfg.c;
  const int K = effective_gram_max_k(cfg);
  std::vector<Check> out;
  out.push_back({"eigenstate.relation", "sum_i c_i phi(s u_i) = lambda phi(s)", "eigen_relation",
                 [=] { return eigenstate_residual(phi, c, lambda, n, L); }});
  out.push_back({"eigenstate.algebraic_properties",
                 "phi(s^-1) = phi(s), phi(u_i s) = a_i phi(s), phi(s u_j^-1 u_i) = b_ij phi(s)",
                 "algebraic_properties",
                 [=] { return algebraic_property_residual(phi, a, B, std::min(L, 5)); }});
  out.push_back({"eigenstate.isometry",
                 "lambda^-2 sum c_i c_j phi(u_j^-1 t^-1 s u_i) = phi(t^-1 s) on G+_k", "isometry",
                 [=] {
                   double worst = 0.0;
                   for (int k = 1; k <= std::min(K, 3); ++k) {
                     worst = std::max(worst, isometry_residual(phi, c, lambda, n, k));
                   }
                   return worst;
                 }});
  out.push_back({"eigenstate.gram_psd", "A_k = [phi(s^-1 t)] over G+_k is PSD", "psd", [=] {
                   double worst = 0.0;
                   for (int k = 1; k <= K; ++k) {
                     worst = std::max(worst, -psd_report(gram_direct(phi, n, k).entries).min_eigenvalue);
                   }
                   return worst;
                 }});
  out.push_back({"eigenstate.gram_recursion", "A_(k+1) = I (x) A_k + (B - I) (x) X_k",
                 "gram_recursion", [=] {
                   double worst = 0.0;
                   for (int k = 1; k <= K; ++k) {
                     const auto d = gram_direct(phi, n, k).entries;
                     const auto r = gram_recursive(*general, k).entries;
                     worst = std::max(worst, (d - r).cwiseAbs().maxCoeff());
                   }
                   return worst;
                 }});
  out.push_back({"eigenstate.b_minus_x1", "B - a a^T is PSD", "b_minus_x1",
                 [=] { return std::max(0.0, -min_eig(B - a * a.transpose())); }});
  out.push_back({"eigenstate.canonical_consistency", "phi equals phi_{B,c} from the general formula",
                 "canonical_consistency", [=] {
                   double worst = 0.0;
                   for (const auto& w : enumerate_words(n, std::min(L, 5))) {
                     worst = std::max(worst, std::abs(phi(w) - phi_eval(*general, w)));
                   }
                   return worst;
                 }});
  return out;
}

std::vector<Check> boundary_checks(const JobConfig& cfg,
                                   std::shared_ptr<const BoundaryModel> model) {
  const int n = cfg.n;
  const int L = cfg.max_word_len;
  std::vector<Check> out;
  out.push_back({"boundary.measure_invariants", "sum beta = 1, rows of alpha sum to 1, alpha(v, v^-1) = 0",
                 "measure_invariants", [=] { return measure_invariant_residual(model->measure); }});
  out.push_back({"boundary.compatibility", "mu(Omega(s)) = sum_v mu(Omega(s v))", "compatibility",
                 [=] { return compatibility_residual(model->measure, L); }});
  out.push_back({"boundary.symmetry_ratio",
                 "mu(Omega(sigma w)) / mu(Omega(w)) = beta(v_1^-1) / beta(v_1)", "symmetry_ratio",
                 [=] { return symmetry_ratio_residual(model->measure, L); }});
  out.push_back({"boundary.integration", "integral of P(s, .) dmu = phi(s)", "integration",
                 [=] { return integration_residual(*model, std::min(L, 5)); }});
  out.push_back({"boundary.depth_stability", "P(s, .) is constant on cylinders of depth |s|+1",
                 "depth_stability", [=] { return depth_stability_residual(*model, std::min(L, 4)); }});
  out.push_back({"boundary.rightsum", "sum_i (c_i / lambda) P(u_i, w) = 1", "rightsum",
                 [=] { return check_rightsum(*model); }});
  out.push_back({"boundary.h_identity",
                 "integral over Omega(-) of P(s, .) = t * integral over Omega(+)", "h_identity",
                 [=] { return check_h_identity(*model, std::min(L, 4)); }});
  out.push_back({"boundary.w_intertwiner", "h(w) P(u_i, T w) = h(u_i w) P(u_i^-1, w)",
                 "w_intertwiner", [=] { return check_w_intertwiner(*model); }});
  out.push_back({"boundary.radon_nikodym",
                 "P(u_i, w)^2 = d(u_i^-1 mu)/dmu = mu(Omega(u_i^-1 w)) / mu(Omega(w))",
                 "radon_nikodym", [=] {
                   double worst = 0.0;
                   for (const auto& w : enumerate_words_of_length(n, 3)) {
                     for (int i = 1; i <= n; ++i) {
                       const double table = radon_nikodym_table(model->params, i, w.front());
                       const double p = cocycle_p(*model, Word::generator(n, i), w);
                       const double rn = radon_nikodym_from_measure(model->measure, i, w);
                       worst = std::max({worst, rel_gap(p * p, table), rel_gap(rn, table)});
                     }
                   }
                   return worst;
                 }});
  out.push_back({"boundary.constancy",
                 "P(r, .) constant on Omega(+) and on each Omega(u_i^-1) not starting r",
                 "constancy", [=] {
                   double failures = 0.0;
                   for (const auto& r : enumerate_words(n, std::min(L, 3))) {
                     if (!r.empty() && !check_constancy(*model, r)) failures += 1.0;
                   }
                   return failures;
                 }});
  const auto seed = cfg.seed;
  const auto samples = cfg.mc_samples;
  const int mc_len = std::min(cfg.mc_max_len, L);
  out.push_back({"boundary.monte_carlo",
                 "sampled mean of P(s, w), w ~ mu, within k standard errors of phi(s)",
                 "monte_carlo_sigmas", [=] {
                   double worst = 0.0;
                   std::uint64_t k = 0;
                   for (const auto& s : enumerate_words(n, mc_len)) {
                     const auto est = monte_carlo_phi(*model, s, samples, seed + k++);
                     const double gap = std::abs(est.mean - phi_eval(model->params, s));
                     if (est.std_error > 1e-15) {
                       worst = std::max(worst, gap / est.std_error);
                     } else if (gap > 1e-12) {
                       return kInf;
                     }
                   }
                   return worst;
                 }});
  return out;
}

std::vector<Check> spectral_checks(const JobConfig& cfg) {
  const auto c = cfg.c;
  const int n = cfg.n;
  const double lambda = *cfg.lambda;
  const bool outer = cfg.mode == StateMode::kOuter;
  std::vector<Check> out;
  out.push_back({"spectral.power_norm", "||X^k||_2 = (sum c_i^2)^(k/2), supp X^k = G+_k",
                 "power_norm", [=] {
                   double sq = 0.0;
                   for (double v : c) sq += v * v;
                   double worst = 0.0;
                   const auto x = GroupFunction::linear(c);
                   auto xk = GroupFunction::delta(Word(n));
                   std::size_t size = 1;
                   for (int k = 1; k <= 6; ++k) {
                     size *= static_cast<std::size_t>(n);
                     if (size > 100'000) break;
                     xk = convolve(xk, x);
                     if (xk.support_size() != size) return kInf;
                     const double expect = std::pow(sq, k / 2.0);
                     worst = std::max(worst, std::abs(l2_norm(xk) - expect) / expect);
                   }
                   return worst;
                 }});
  out.push_back({"spectral.spectrum",
                 "reduced annulus: outer^2 = sum c^2, inner^2 = max(0, 2 max c^2 - sum c^2)",
                 "spectrum", [=] {
                   double sq = 0.0, mx = 0.0;
                   for (double v : c) {
                     sq += v * v;
                     mx = std::max(mx, v * v);
                   }
                   const auto ann = reduced_spectrum(std::span<const double>(c));
                   double gap = std::abs(ann.outer_radius - std::sqrt(sq)) +
                                std::abs(ann.inner_radius - std::sqrt(std::max(0.0, 2 * mx - sq)));
                   // The state's lambda must sit where its mode says it does.
                   const bool placed = outer ? std::abs(lambda - ann.outer_radius) <= 1e-12 * lambda
                                             : (lambda > ann.inner_radius && lambda < ann.outer_radius);
                   if (!placed) return kInf;
                   return gap > 1e-12 * std::sqrt(sq) ? gap : 0.0;
                 }});
  out.push_back({"spectral.geometric_inverse",
                 "||Y * f_m - delta_1||_2 = (||d|| / |d0|)^(m+1), decreasing in m",
                 "geometric_inverse", [=] {
                   double sq = 0.0;
                   for (double v : c) sq += v * v;
                   const double d0 = 2.0 * std::sqrt(sq);
                   const auto y = affine_element(d0, c);
                   const auto one = GroupFunction::delta(Word(n));
                   double worst = 0.0, prev = kInf;
                   for (int m = 0; m <= 6; ++m) {
                     if (std::pow(static_cast<double>(n), m) > 50'000) break;
                     auto r = convolve(y, geometric_inverse(d0, c, m));
                     r.add(Word(n), -1.0);
                     const double res = l2_norm(r);
                     if (!(res < prev)) return kInf;
                     prev = res;
                     worst = std::max(worst, std::abs(res - geometric_inverse_tail(d0, c, m)));
                   }
                   return worst;
                 }});
  return out;
}

std::vector<Check> all_checks(const JobConfig& cfg) {
  auto checks = smap_checks(cfg);
  auto add = [&](std::vector<Check> more) {
    for (auto& c : more) checks.push_back(std::move(c));
  };
  add(spectral_checks(cfg));
  const Eigen::VectorXd cvec = Eigen::Map<const Eigen::VectorXd>(cfg.c.data(),
                                                                 static_cast<Eigen::Index>(cfg.n));
  if (cfg.mode == StateMode::kOuter) {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(cfg.n, cfg.n);
    auto general = std::make_shared<GeneralStateParams>(general_params(I, cvec));
    add(state_checks(cfg, outer_boundary_function(cfg.c), cvec / *cfg.lambda, I, general));
    return checks;
  }
  const auto params = canonical_params(CoefficientVector(cfg.c, *cfg.lambda));
  checks.push_back({"smap.inversion", "S(x) = c^2 / lambda^2", "s_residual", [params] {
                      const auto q = apply_s(params.x());
                      const auto target = params.coefficients().normalized_squares();
                      double worst = 0.0;
                      for (std::size_t j = 0; j < target.size(); ++j) {
                        worst = std::max(worst, std::abs(q.s(j) - target[j]));
                      }
                      return worst;
                    }});
  checks.push_back({"eigenstate.canonical_invariants",
                    "b_ij = -t a_i a_j, Bc = lambda a, Bc.c = lambda^2", "canonical_invariants",
                    [params] { return canonical_invariant_residual(params); }});
  auto general = std::make_shared<GeneralStateParams>(general_params(params.B(), cvec));
  add(state_checks(cfg, phi_function(params), params.a(), params.B(), general));
  auto model = std::make_shared<const BoundaryModel>(make_boundary_model(params));
  add(boundary_checks(cfg, model));
  return checks;
}

}  // namespace

VerificationReport run_verification(const JobConfig& cfg) {
  auto checks = all_checks(cfg);
  std::vector<std::future<double>> pending;
  pending.reserve(checks.size());
  for (const auto& c : checks) pending.push_back(std::async(std::launch::async, c.residual));

  VerificationReport report;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    CheckRecord rec;
    rec.name = checks[k].name;
    rec.anchor = checks[k].anchor;
    rec.tolerance = tolerance(cfg, checks[k].tolerance_key);
    rec.max_residual = pending[k].get();
    rec.pass = rec.max_residual <= rec.tolerance;
    report.checks.push_back(std::move(rec));
  }
  std::sort(report.checks.begin(), report.checks.end(),
            [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  report.config = config_to_json(cfg);
  report.version = FREESTATE_VERSION_STRING;
  report.toolchain = std::string("C++") + std::to_string(__cplusplus / 100 % 100) + " " +
#if defined(__clang__)
                     "clang " __clang_version__;
#elif defined(__GNUC__)
                     "gcc " __VERSION__;
#else
                     "unknown compiler";
#endif
  return report;
}

}  // namespace freestate::cli
