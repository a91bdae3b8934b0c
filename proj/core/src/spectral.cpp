#include "freestate/spectral.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "freestate/errors.hpp"

namespace freestate {

GroupFunction GroupFunction::delta(const Word& w, double coeff) {
  GroupFunction f(w.rank());
  f.add(w, coeff);
  return f;
}

GroupFunction GroupFunction::linear(std::span<const double> c) {
  const int n = static_cast<int>(c.size());
  GroupFunction f(n);
  for (int i = 1; i <= n; ++i) f.add(Word::generator(n, i), c[static_cast<std::size_t>(i - 1)]);
  return f;
}

double GroupFunction::at(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? 0.0 : it->second;
}

void GroupFunction::add(const Word& w, double coeff) {
  if (w.rank() != rank_) throw PreconditionError("word rank does not match group function");
  if (coeff == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(w, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

GroupFunction convolve(const GroupFunction& f, const GroupFunction& g, std::size_t cap) {
  if (f.rank() != g.rank()) throw PreconditionError("rank mismatch in convolution");
  GroupFunction out(f.rank());
  // (f * g)(t u) accumulates f(t) g(u) over all pairs.
  for (const auto& [t, ft] : f.terms()) {
    for (const auto& [u, gu] : g.terms()) {
      out.add(t * u, ft * gu);
      if (out.support_size() > cap) {
        throw PreconditionError("convolution support exceeds cap " + std::to_string(cap));
      }
    }
  }
  return out;
}

double l2_norm(const GroupFunction& f) {
  double sum = 0.0;
  for (const auto& [w, v] : f.terms()) sum += v * v;
  return std::sqrt(sum);
}

GroupFunction power(const GroupFunction& f, int k, std::size_t cap) {
  if (k < 0) throw PreconditionError("power needs k >= 0");
  GroupFunction out = GroupFunction::delta(Word(f.rank()));
  for (int i = 0; i < k; ++i) out = convolve(out, f, cap);
  return out;
}

std::pair<double, double> power_norm_bounds(std::span<const double> c, int k, std::size_t cap) {
  if (k < 1) throw PreconditionError("power_norm_bounds needs k >= 1");
  const double lower = l2_norm(power(GroupFunction::linear(c), k, cap));
  return {lower, static_cast<double>(k + 1) * lower};
}

GroupFunction affine_element(double d0, std::span<const double> d) {
  const int n = static_cast<int>(d.size());
  GroupFunction y = GroupFunction::delta(Word(n), d0);
  for (int i = 1; i <= n; ++i) y.add(Word::generator(n, i), d[static_cast<std::size_t>(i - 1)]);
  return y;
}

GroupFunction geometric_inverse(double d0, std::span<const double> d, int depth,
                                std::size_t cap) {
  if (depth < 0) throw PreconditionError("depth must be >= 0");
  double dsq = 0.0;
  for (double v : d) dsq += v * v;
  if (!(dsq < d0 * d0)) {
    throw DomainError("geometric series diverges: sum d_i^2 >= d0^2");
  }
  const int n = static_cast<int>(d.size());
  GroupFunction f(n);
  // Layer m holds the positive words of length m with nonzero coefficient.
  std::vector<std::pair<Word, double>> layer{{Word(n), 1.0 / d0}};
  f.add(Word(n), 1.0 / d0);
  for (int m = 1; m <= depth; ++m) {
    std::vector<std::pair<Word, double>> next;
    for (const auto& [w, v] : layer) {
      for (int i = 1; i <= n; ++i) {
        const double di = d[static_cast<std::size_t>(i - 1)];
        if (di == 0.0) continue;
        // prepend u_i: multiply by -d_i / d0
        next.emplace_back(Word::generator(n, i) * w, -di / d0 * v);
      }
    }
    for (const auto& [w, v] : next) f.add(w, v);
    if (f.support_size() > cap) {
      throw PreconditionError("geometric inverse support exceeds cap " + std::to_string(cap));
    }
    layer = std::move(next);
  }
  return f;
}

double geometric_inverse_tail(double d0, std::span<const double> d, int depth) {
  double dsq = 0.0;
  for (double v : d) dsq += v * v;
  return std::pow(std::sqrt(dsq) / std::abs(d0), depth + 1);
}

}  // namespace freestate
