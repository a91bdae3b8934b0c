#include "freestate/smap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "freestate/errors.hpp"

namespace freestate {

OrthantPoint::OrthantPoint(std::vector<double> x) : x_(std::move(x)), t_(0.0) {
  if (x_.empty()) throw DomainError("orthant point needs at least one coordinate");
  for (double v : x_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("orthant point coordinates must be finite and positive");
    }
  }
  t_ = std::accumulate(x_.begin(), x_.end(), 0.0);
  y_.resize(x_.size());
  for (std::size_t j = 0; j < x_.size(); ++j) y_[j] = t_ - x_[j];
}

TargetPoint::TargetPoint(std::vector<double> s) : s_(std::move(s)) {
  if (s_.empty()) throw DomainError("target point needs at least one coordinate");
  for (double v : s_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("target point coordinates must be finite and positive");
    }
  }
}

std::vector<double> apply_s_raw(std::span<const double> x) {
  const double t = std::accumulate(x.begin(), x.end(), 0.0);
  std::vector<double> s(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) s[j] = x[j] * (1.0 + (t - x[j])) / t;
  return s;
}

TargetPoint apply_s(const OrthantPoint& p) {
  std::vector<double> s(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) s[j] = p.x(j) * (1.0 + p.y(j)) / p.t();
  return TargetPoint(std::move(s));
}

bool in_dn(std::span<const double> s) {
  if (s.empty()) return false;
  double total = 0.0;
  for (double v : s) {
    if (!(v > 0.0)) return false;
    total += v;
  }
  if (!(total > 1.0)) return false;
  for (double v : s) {
    // s_j < 1 + sum_{i != j} s_i
    if (!(v < 1.0 + (total - v))) return false;
  }
  return true;
}

bool in_dn(const TargetPoint& q) { return in_dn(q.s()); }

Eigen::MatrixXd jacobian_s(const OrthantPoint& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  const double t2 = p.t() * p.t();
  Eigen::MatrixXd j(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const double xr = p.x(static_cast<std::size_t>(r));
    const double yr = p.y(static_cast<std::size_t>(r));
    for (Eigen::Index c = 0; c < n; ++c) {
      j(r, c) = (r == c) ? (yr * yr + yr) / t2 : (xr * xr - xr) / t2;
    }
  }
  return j;
}

double det_arrow_matrix(std::span<const double> r, std::span<const double> p) {
  if (r.size() != p.size() || r.empty()) {
    throw PreconditionError("arrow matrix needs equal nonzero lengths");
  }
  const std::size_t n = r.size();
  std::vector<double> q(n);
  for (std::size_t j = 0; j < n; ++j) q[j] = r[j] - p[j];

  // Products over all-but-one index via prefix/suffix products so that a
  // zero q_j does not need special handling.
  std::vector<double> prefix(n + 1, 1.0), suffix(n + 1, 1.0);
  for (std::size_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] * q[j];
  for (std::size_t j = n; j-- > 0;) suffix[j] = suffix[j + 1] * q[j];

  double det = prefix[n];
  for (std::size_t j = 0; j < n; ++j) det += p[j] * prefix[j] * suffix[j + 1];
  return det;
}

double det_jacobian(const OrthantPoint& p) {
  const std::size_t n = p.size();
  std::vector<double> theta(n);
  for (std::size_t j = 0; j < n; ++j) theta[j] = p.theta(j);
  std::vector<double> prefix(n + 1, 1.0), suffix(n + 1, 1.0);
  for (std::size_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] * theta[j];
  for (std::size_t j = n; j-- > 0;) suffix[j] = suffix[j + 1] * theta[j];

  double poly = 0.0;
  for (std::size_t j = 0; j < n; ++j) poly += p.x(j) * p.y(j) * prefix[j] * suffix[j + 1];
  return poly / std::pow(p.t(), static_cast<double>(n + 1));
}

OrthantPoint invert_s_n2(const TargetPoint& q) {
  if (q.size() != 2) throw PreconditionError("closed-form inverse is for n = 2 only");
  if (!in_dn(q)) throw DomainError("point is not in D_n");
  const double s1 = q.s(0), s2 = q.s(1);
  const double num = s1 + s2 - 1.0;
  return OrthantPoint({num / (1.0 + s2 - s1), num / (1.0 + s1 - s2)});
}

namespace {

double sup_residual(std::span<const double> x, std::span<const double> target) {
  const std::vector<double> s = apply_s_raw(x);
  double r = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) r = std::max(r, std::abs(s[j] - target[j]));
  return r;
}

// Scalar reduction: with b = x/t each coordinate solves
//   t b_i^2 - (1 + t) b_i + s_i = 0,
// and the b_i must sum to 1. plus_index selects the one coordinate (if any)
// that takes the larger root.
class ScalarReduction {
 public:
  ScalarReduction(std::span<const double> s, double clamp) : s_(s), clamp_(clamp) {}

  // Q_i(t) = (1+t)^2 - 4 t s_i, clamped near zero. nullopt when negative.
  std::optional<double> root_disc(std::size_t i, double t) const {
    double q = (1.0 + t) * (1.0 + t) - 4.0 * t * s_[i];
    if (q < 0.0) {
      if (q > -clamp_ * std::max(1.0, (1.0 + t) * (1.0 + t))) {
        q = 0.0;
      } else {
        return std::nullopt;
      }
    }
    return std::sqrt(q);
  }

  std::optional<double> b(std::size_t i, double t, bool plus) const {
    auto r = root_disc(i, t);
    if (!r) return std::nullopt;
    // The small root is written as 2 s / (1 + t + sqrt Q) to avoid cancellation.
    return plus ? (1.0 + t + *r) / (2.0 * t) : 2.0 * s_[i] / (1.0 + t + *r);
  }

  std::optional<double> g(double t, std::optional<std::size_t> plus_index) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < s_.size(); ++i) {
      auto bi = b(i, t, plus_index && *plus_index == i);
      if (!bi) return std::nullopt;
      sum += *bi;
    }
    return sum - 1.0;
  }

  std::vector<double> x_at(double t, std::optional<std::size_t> plus_index) const {
    std::vector<double> x(s_.size());
    for (std::size_t i = 0; i < s_.size(); ++i) {
      x[i] = t * b(i, t, plus_index && *plus_index == i).value_or(0.0);
    }
    return x;
  }

 private:
  std::span<const double> s_;
  double clamp_;
};

// Closed intervals of t in (0, t_max] where every Q_i(t) >= 0. Q_i has real
// zeros only when s_i >= 1, at 2 s_i - 1 -/+ 2 sqrt(s_i^2 - s_i).
std::vector<std::pair<double, double>> admissible_intervals(std::span<const double> s,
                                                            double t_min, double t_max) {
  std::vector<std::pair<double, double>> gaps;
  for (double si : s) {
    if (si >= 1.0) {
      const double d = 2.0 * std::sqrt(si * si - si);
      gaps.emplace_back(2.0 * si - 1.0 - d, 2.0 * si - 1.0 + d);
    }
  }
  std::sort(gaps.begin(), gaps.end());
  std::vector<std::pair<double, double>> out;
  double lo = t_min;
  for (const auto& [a, b] : gaps) {
    if (a > lo) out.emplace_back(lo, std::min(a, t_max));
    lo = std::max(lo, b);
    if (lo >= t_max) break;
  }
  if (lo < t_max) out.emplace_back(lo, t_max);
  return out;
}

double bisect(const ScalarReduction& red, std::optional<std::size_t> pattern, double lo,
              double hi, double glo, double rel_tol) {
  for (int it = 0; it < 200 && (hi - lo) > rel_tol * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    auto gm = red.g(mid, pattern);
    if (!gm) break;
    if (*gm == 0.0) return mid;
    if ((*gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = *gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Damped Newton on S(x) = q, keeping x in the orthant. Returns the polished
// point and its sup-norm residual.
std::pair<std::vector<double>, double> newton_polish(std::vector<double> x,
                                                     std::span<const double> q,
                                                     int max_iter) {
  double res = sup_residual(x, q);
  const auto n = static_cast<Eigen::Index>(x.size());
  for (int it = 0; it < max_iter && res > 0.0; ++it) {
    const OrthantPoint p(x);
    const Eigen::MatrixXd jac = jacobian_s(p);
    const std::vector<double> s = apply_s_raw(x);
    Eigen::VectorXd f(n);
    for (Eigen::Index j = 0; j < n; ++j) f(j) = s[static_cast<std::size_t>(j)] - q[static_cast<std::size_t>(j)];
    const Eigen::VectorXd step = jac.partialPivLu().solve(f);
    if (!step.allFinite()) break;

    bool improved = false;
    for (double damp = 1.0; damp > 1e-6; damp *= 0.5) {
      std::vector<double> trial(x.size());
      bool positive = true;
      for (std::size_t j = 0; j < x.size(); ++j) {
        trial[j] = x[j] - damp * step(static_cast<Eigen::Index>(j));
        positive = positive && trial[j] > 0.0;
      }
      if (!positive) continue;
      const double r = sup_residual(trial, q);
      if (r < res) {
        x = std::move(trial);
        res = r;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return {std::move(x), res};
}

}  // namespace

OrthantPoint invert_s(const TargetPoint& q, const InvertOptions& opts) {
  if (!in_dn(q)) throw DomainError("point is not in D_n");
  const std::span<const double> s(q.s());
  const std::size_t n = s.size();
  const ScalarReduction red(s, opts.disc_clamp);

  constexpr double kTMin = 1e-12;
  const auto intervals = admissible_intervals(s, kTMin, opts.t_max);

  std::vector<std::optional<std::size_t>> patterns{std::nullopt};
  for (std::size_t j = 0; j < n; ++j) patterns.emplace_back(j);

  std::optional<std::vector<double>> best;
  double best_res = std::numeric_limits<double>::infinity();
  auto consider = [&](double t, std::optional<std::size_t> pattern) {
    auto [x, res] = newton_polish(red.x_at(t, pattern), s, opts.newton_max_iter);
    for (double v : x) {
      if (!(v > 0.0) || !std::isfinite(v)) return;
    }
    if (res < best_res) {
      best_res = res;
      best = std::move(x);
    }
  };

  for (const auto& [lo, hi] : intervals) {
    const int m = std::max(opts.samples_per_interval, 2);
    const double log_lo = std::log(lo), log_hi = std::log(hi);
    for (const auto& pattern : patterns) {
      double t_prev = lo;
      auto g_prev = red.g(t_prev, pattern);
      for (int k = 1; k <= m; ++k) {
        const double t = (k == m) ? hi : std::exp(log_lo + (log_hi - log_lo) * k / m);
        auto gk = red.g(t, pattern);
        if (g_prev && gk) {
          if (*g_prev == 0.0) {
            consider(t_prev, pattern);
          } else if ((*g_prev > 0.0) != (*gk > 0.0)) {
            consider(bisect(red, pattern, t_prev, t, *g_prev, opts.t_root_tol), pattern);
          }
        }
        t_prev = t;
        g_prev = gk;
      }
      if (g_prev && *g_prev == 0.0) consider(t_prev, pattern);
    }
  }

  if (!best || best_res > opts.tol) {
    throw ConvergenceError("S inversion did not reach residual " + std::to_string(opts.tol) +
                           (best ? " (best " + std::to_string(best_res) + ")" : ""));
  }
  return OrthantPoint(std::move(*best));
}

OracleSolution oracle_invert_s(const TargetPoint& q, int grid) {
  OracleBox box;
  box.lo.assign(q.size(), 1e-4);
  box.hi.assign(q.size(), 1e4);
  return oracle_invert_s(q, box, grid);
}

OracleSolution oracle_invert_s(const TargetPoint& q, const OracleBox& box, int grid) {
  const std::size_t n = q.size();
  if (box.lo.size() != n || box.hi.size() != n) {
    throw PreconditionError("oracle box dimension mismatch");
  }
  if (grid < 3) throw PreconditionError("oracle grid needs at least 3 points per axis");

  std::vector<double> log_lo(n), log_hi(n), center(n), half(n);
  for (std::size_t j = 0; j < n; ++j) {
    log_lo[j] = std::log(box.lo[j]);
    log_hi[j] = std::log(box.hi[j]);
    center[j] = 0.5 * (log_lo[j] + log_hi[j]);
    half[j] = 0.5 * (log_hi[j] - log_lo[j]);
  }

  std::vector<double> best_x(n);
  double best_res = std::numeric_limits<double>::infinity();
  std::vector<double> x(n);
  std::vector<int> idx(n);

  for (int level = 0; level < 200; ++level) {
    std::vector<double> level_best = best_x;
    double level_res = best_res;
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      for (std::size_t j = 0; j < n; ++j) {
        const double lx = center[j] - half[j] + 2.0 * half[j] * idx[j] / (grid - 1);
        x[j] = std::exp(std::clamp(lx, log_lo[j], log_hi[j]));
      }
      const double r = sup_residual(x, q.s());
      if (r < level_res) {
        level_res = r;
        level_best = x;
      }
      std::size_t d = 0;
      while (d < n && ++idx[d] == grid) idx[d++] = 0;
      if (d == n) break;
    }
    best_x = level_best;
    best_res = level_res;

    double widest = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      center[j] = std::log(best_x[j]);
      half[j] *= 0.35;
      widest = std::max(widest, half[j]);
    }
    if (widest < 1e-14) break;
  }
  return {best_x, best_res};
}

}  // namespace freestate
