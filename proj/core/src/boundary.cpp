#include "freestate/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "freestate/errors.hpp"

namespace freestate {

namespace {

std::vector<int> tokens_of(const Word& w) {
  std::vector<int> out;
  out.reserve(w.size());
  for (const Letter& l : w.letters()) out.push_back(l.token());
  return out;
}

std::size_t slot_of(int token) {
  return token > 0 ? 2 * static_cast<std::size_t>(token - 1)
                   : 2 * static_cast<std::size_t>(-token - 1) + 1;
}

// P(u_i, omega) given the first symbol of omega.
double generator_factor(const CocycleTable& table, int i, int first) {
  const auto k = static_cast<std::size_t>(i - 1);
  if (first == i) return table.own[k];
  if (first > 0) return table.other[k];
  return table.inverse_first[k];
}

// A boundary prefix under repeated left translation by single letters.
// Stored in a buffer with room at the front for prepended symbols.
class PrefixCursor {
 public:
  void reset(std::span<const int> prefix, std::size_t front_room) {
    buf_.resize(front_room + prefix.size());
    std::copy(prefix.begin(), prefix.end(), buf_.begin() + static_cast<std::ptrdiff_t>(front_room));
    head_ = front_room;
  }
  std::size_t size() const { return buf_.size() - head_; }
  int at(std::size_t k) const { return buf_[head_ + k]; }
  void drop_front() { ++head_; }
  void push_front(int token) { buf_[--head_] = token; }

 private:
  std::vector<int> buf_;
  std::size_t head_ = 0;
};

[[noreturn]] void throw_short_prefix() {
  throw PreconditionError("cocycle factor reads beyond the end of the prefix");
}

double evaluate_cocycle(const CocycleTable& table, std::span<const int> s, PrefixCursor& cur) {
  double value = 1.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const int v = s[k];
    if (cur.size() == 0) throw_short_prefix();
    if (v > 0) {
      value *= generator_factor(table, v, cur.at(0));
    } else {
      // P(u_i^-1, w) = 1 / P(u_i, u_i w)
      const int i = -v;
      int first = i;
      if (cur.at(0) == -i) {
        if (cur.size() < 2) throw_short_prefix();
        first = cur.at(1);
      }
      value /= generator_factor(table, i, first);
    }
    if (k + 1 < s.size()) {
      // w <- v^-1 w
      if (cur.at(0) == v) {
        cur.drop_front();
      } else {
        cur.push_front(-v);
      }
    }
  }
  return value;
}

// Calls visit(tokens, mass) for every reduced word of the given length, with
// mass = mu_hat(word).
template <typename Visit>
void for_each_cylinder(const BoundaryMeasure& m, int depth, Visit&& visit) {
  const std::size_t slots = 2 * static_cast<std::size_t>(m.rank);
  std::vector<int> tokens(static_cast<std::size_t>(depth));
  auto token_of_slot = [](std::size_t slot) {
    const int idx = static_cast<int>(slot / 2) + 1;
    return slot % 2 == 0 ? idx : -idx;
  };
  auto recurse = [&](auto&& self, std::size_t pos, double mass) -> void {
    if (pos == tokens.size()) {
      visit(std::span<const int>(tokens), mass);
      return;
    }
    for (std::size_t s = 0; s < slots; ++s) {
      const int tok = token_of_slot(s);
      double next_mass;
      if (pos == 0) {
        next_mass = m.beta[s];
      } else {
        if (tokens[pos - 1] == -tok) continue;
        next_mass = mass * m.alpha[slot_of(tokens[pos - 1]) * slots + s];
      }
      tokens[pos] = tok;
      self(self, pos + 1, next_mass);
    }
  };
  recurse(recurse, 0, 1.0);
}

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

BoundaryMeasure measure_from(const CanonicalParams& params) {
  const int n = params.rank();
  const auto slots = 2 * static_cast<std::size_t>(n);
  const OrthantPoint& x = params.x();
  const double t = x.t();

  BoundaryMeasure m;
  m.rank = n;
  m.beta.assign(slots, 0.0);
  m.alpha.assign(slots * slots, 0.0);
  for (int i = 1; i <= n; ++i) {
    const double xi = x.x(static_cast<std::size_t>(i - 1));
    m.beta[Letter(i, +1).slot()] = xi / (t * (1.0 + t));
    m.beta[Letter(i, -1).slot()] = xi / (1.0 + t);
  }
  for (int j = 1; j <= n; ++j) {
    const double yj = x.y(static_cast<std::size_t>(j - 1));
    for (int i = 1; i <= n; ++i) {
      const double xi = x.x(static_cast<std::size_t>(i - 1));
      const double same_sign = xi / (t * (1.0 + yj));
      const double flip_sign = xi / (1.0 + yj);
      auto set = [&](Letter from, Letter to, double v) {
        m.alpha[from.slot() * slots + to.slot()] = v;
      };
      set(Letter(j, +1), Letter(i, +1), same_sign);
      set(Letter(j, -1), Letter(i, -1), same_sign);
      if (i != j) {
        set(Letter(j, +1), Letter(i, -1), flip_sign);
        set(Letter(j, -1), Letter(i, +1), flip_sign);
      }
    }
  }
  return m;
}

double measure_invariant_residual(const BoundaryMeasure& m) {
  const auto slots = 2 * static_cast<std::size_t>(m.rank);
  double total = 0.0;
  for (double b : m.beta) total += b;
  double worst = std::abs(total - 1.0);
  for (std::size_t r = 0; r < slots; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < slots; ++c) row += m.alpha[r * slots + c];
    worst = std::max(worst, std::abs(row - 1.0));
    const std::size_t back = r ^ 1U;  // slot of the inverse letter
    worst = std::max(worst, std::abs(m.alpha[r * slots + back]));
  }
  return worst;
}

double mu_hat(const BoundaryMeasure& m, const Word& w) {
  if (w.rank() != m.rank) throw PreconditionError("word rank does not match measure");
  if (w.empty()) return 1.0;
  double v = m.beta_of(w.front());
  for (std::size_t k = 1; k < w.size(); ++k) v *= m.alpha_of(w[k - 1], w[k]);
  return v;
}

double compatibility_residual(const BoundaryMeasure& m, int max_len) {
  double worst = 0.0;
  const std::size_t slots = 2 * static_cast<std::size_t>(m.rank);
  for (const Word& s : enumerate_words(m.rank, max_len)) {
    double children = 0.0;
    for (std::size_t sl = 0; sl < slots; ++sl) {
      const Letter v = Letter::from_slot(sl);
      if (!s.empty() && s.back() == v.inverse()) continue;
      std::vector<Letter> ls = s.letters();
      ls.push_back(v);
      children += mu_hat(m, Word(m.rank, ls));
    }
    worst = std::max(worst, std::abs(mu_hat(m, s) - children));
  }
  return worst;
}

double symmetry_ratio_residual(const BoundaryMeasure& m, int max_len) {
  double worst = 0.0;
  for (const Word& w : enumerate_words(m.rank, max_len)) {
    if (w.empty()) continue;
    std::vector<Letter> flipped;
    for (const Letter& l : w.letters()) flipped.push_back(l.inverse());
    const double ratio = mu_hat(m, Word(m.rank, flipped)) / mu_hat(m, w);
    const double expected = m.beta_of(w.front().inverse()) / m.beta_of(w.front());
    worst = std::max(worst, std::abs(ratio - expected));
  }
  return worst;
}

CocycleTable cocycle_table(const CanonicalParams& params) {
  const int n = params.rank();
  const OrthantPoint& x = params.x();
  const double t = x.t();
  CocycleTable table;
  table.rank = n;
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    const double xi = x.x(i), yi = x.y(i);
    table.own.push_back(std::sqrt(t * (1.0 + yi) / xi));
    table.other.push_back(-std::sqrt(t * xi / (1.0 + yi)));
    table.inverse_first.push_back(std::sqrt(xi / (t * (1.0 + yi))));
  }
  return table;
}

BoundaryModel make_boundary_model(const CanonicalParams& params) {
  return BoundaryModel{params, measure_from(params), cocycle_table(params)};
}

double cocycle_p_unchecked(const CocycleTable& table, const Word& s, const Word& prefix) {
  if (s.rank() != table.rank || prefix.rank() != table.rank) {
    throw PreconditionError("rank mismatch in cocycle evaluation");
  }
  if (s.empty()) return 1.0;
  const std::vector<int> st = tokens_of(s);
  const std::vector<int> pt = tokens_of(prefix);
  PrefixCursor cur;
  cur.reset(pt, st.size() + 1);
  return evaluate_cocycle(table, st, cur);
}

double cocycle_p(const CocycleTable& table, const Word& s, const Word& prefix) {
  if (!s.empty() && prefix.size() < s.size() + 1) {
    throw PreconditionError("cocycle needs a prefix of length >= |s| + 1 (got " +
                            std::to_string(prefix.size()) + " for |s| = " +
                            std::to_string(s.size()) + ")");
  }
  return cocycle_p_unchecked(table, s, prefix);
}

double cocycle_p(const BoundaryModel& model, const Word& s, const Word& prefix) {
  return cocycle_p(model.table, s, prefix);
}

Word translate_prefix(const Word& g, const Word& prefix) {
  const Word out = g * prefix;
  const std::size_t cancelled = (g.size() + prefix.size() - out.size()) / 2;
  if (cancelled >= prefix.size() && !prefix.empty()) {
    throw PreconditionError("translation consumes the whole prefix");
  }
  return out;
}

double radon_nikodym_table(const CanonicalParams& params, int i, Letter first) {
  const OrthantPoint& x = params.x();
  const double t = x.t();
  const double xi = x.x(static_cast<std::size_t>(i - 1));
  const double yi = x.y(static_cast<std::size_t>(i - 1));
  if (first == Letter(i, +1)) return t * (1.0 + yi) / xi;
  if (first.positive()) return t * xi / (1.0 + yi);
  return xi / (t * (1.0 + yi));
}

double radon_nikodym_from_measure(const BoundaryMeasure& m, int i, const Word& prefix) {
  if (prefix.size() < 2) throw PreconditionError("derivative needs a prefix of length >= 2");
  const Word moved = translate_prefix(Word::generator(m.rank, i, -1), prefix);
  return mu_hat(m, moved) / mu_hat(m, prefix);
}

SignSplitIntegral integrate_p_split(const BoundaryModel& model, const Word& s, int extra_depth,
                                    int cap) {
  if (static_cast<int>(s.size()) > cap) {
    throw PreconditionError("word length " + std::to_string(s.size()) +
                            " exceeds integration cap " + std::to_string(cap));
  }
  if (extra_depth < 0) throw PreconditionError("extra_depth must be >= 0");
  const std::vector<int> st = tokens_of(s);
  const int depth = static_cast<int>(s.size()) + 1 + extra_depth;
  SignSplitIntegral out{0.0, 0.0};
  PrefixCursor cur;
  for_each_cylinder(model.measure, depth, [&](std::span<const int> prefix, double mass) {
    cur.reset(prefix, st.size() + 1);
    const double p = evaluate_cocycle(model.table, st, cur);
    (prefix.front() > 0 ? out.positive_first : out.negative_first) += p * mass;
  });
  return out;
}

double integrate_p(const BoundaryModel& model, const Word& s, int extra_depth, int cap) {
  const SignSplitIntegral split = integrate_p_split(model, s, extra_depth, cap);
  return split.positive_first + split.negative_first;
}

double integration_residual(const BoundaryModel& model, int max_len) {
  double worst = 0.0;
  for (const Word& s : enumerate_words(model.params.rank(), max_len)) {
    worst = std::max(worst, std::abs(integrate_p(model, s) - phi_eval(model.params, s)));
  }
  return worst;
}

double depth_stability_residual(const BoundaryModel& model, int max_len) {
  double worst = 0.0;
  for (const Word& s : enumerate_words(model.params.rank(), max_len)) {
    worst = std::max(worst, std::abs(integrate_p(model, s, 1) - integrate_p(model, s, 0)));
  }
  return worst;
}

double check_rightsum(const BoundaryModel& model) {
  const int n = model.params.rank();
  const auto& c = model.params.coefficients();
  double worst = 0.0;
  for (const Word& w : enumerate_words_of_length(n, 2)) {
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
      sum += c.c(static_cast<std::size_t>(i - 1)) / c.lambda() *
             cocycle_p(model.table, Word::generator(n, i), w);
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

double check_h_identity(const BoundaryModel& model, int max_len) {
  const double t = model.params.t();
  double worst = 0.0;
  for (const Word& s : enumerate_words(model.params.rank(), max_len)) {
    const SignSplitIntegral split = integrate_p_split(model, s);
    worst = std::max(worst, std::abs(split.negative_first - t * split.positive_first));
  }
  return worst;
}

std::vector<double> cocycle_distinct_values(const BoundaryModel& model, const Word& r,
                                            const std::function<bool(const Word&)>& keep) {
  std::vector<double> values;
  for (const Word& w :
       enumerate_words_of_length(model.params.rank(), static_cast<int>(r.size()) + 1)) {
    if (keep && !keep(w)) continue;
    values.push_back(cocycle_p(model.table, r, w));
  }
  std::sort(values.begin(), values.end());
  std::vector<double> distinct;
  for (double v : values) {
    if (distinct.empty() || !nearly_equal(distinct.back(), v)) distinct.push_back(v);
  }
  return distinct;
}

bool check_constancy(const BoundaryModel& model, const Word& r) {
  if (r.empty()) throw PreconditionError("constancy check needs a nonempty word");
  const int n = model.params.rank();
  if (!r.front().positive()) {
    auto pos = cocycle_distinct_values(model, r, [](const Word& w) { return w.front().positive(); });
    if (pos.size() > 1) return false;
  }
  for (int i = 1; i <= n; ++i) {
    const Letter inv(i, -1);
    if (r.front() == inv) continue;
    auto vals = cocycle_distinct_values(model, r, [&](const Word& w) { return w.front() == inv; });
    if (vals.size() > 1) return false;
  }
  return true;
}

std::pair<double, double> w_intertwiner_values(const BoundaryModel& model, int i,
                                               const Word& prefix) {
  const int n = model.params.rank();
  const double sqrt_t = std::sqrt(model.params.t());
  auto h = [&](const Word& w) { return w.front().positive() ? sqrt_t : -1.0 / sqrt_t; };

  std::vector<Letter> flipped;
  for (const Letter& l : prefix.letters()) flipped.push_back(l.inverse());
  const Word t_prefix(n, flipped);

  const Word ui = Word::generator(n, i);
  const double lhs = h(prefix) * cocycle_p_unchecked(model.table, ui, t_prefix);
  const double rhs = h(translate_prefix(ui, prefix)) *
                     cocycle_p_unchecked(model.table, Word::generator(n, i, -1), prefix);
  return {lhs, rhs};
}

double check_w_intertwiner(const BoundaryModel& model) {
  const int n = model.params.rank();
  double worst = 0.0;
  for (const Word& w : enumerate_words_of_length(n, 2)) {
    for (int i = 1; i <= n; ++i) {
      const auto [lhs, rhs] = w_intertwiner_values(model, i, w);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

PrefixSampler::PrefixSampler(const BoundaryMeasure& m, std::uint64_t seed)
    : measure_(&m), rng_(seed) {}

std::size_t PrefixSampler::draw(const double* weights, std::size_t count) {
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < count; ++k) {
    if (weights[k] <= 0.0) continue;
    acc += weights[k];
    last_positive = k;
    if (u < acc) return k;
  }
  return last_positive;  // rounding in the cumulative sum
}

Word PrefixSampler::next(int depth) {
  if (depth < 1) throw PreconditionError("sample depth must be >= 1");
  const std::size_t slots = 2 * static_cast<std::size_t>(measure_->rank);
  std::vector<Letter> letters;
  letters.reserve(static_cast<std::size_t>(depth));
  std::size_t slot = draw(measure_->beta.data(), slots);
  letters.push_back(Letter::from_slot(slot));
  for (int k = 1; k < depth; ++k) {
    slot = draw(measure_->alpha.data() + slot * slots, slots);
    letters.push_back(Letter::from_slot(slot));
  }
  return Word(measure_->rank, letters);
}

Word sample_prefix(const BoundaryMeasure& m, int depth, std::uint64_t seed) {
  return PrefixSampler(m, seed).next(depth);
}

MonteCarloEstimate monte_carlo_phi(const BoundaryModel& model, const Word& s,
                                   std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw PreconditionError("Monte Carlo needs at least two samples");
  PrefixSampler sampler(model.measure, seed);
  const int depth = static_cast<int>(s.size()) + 1;
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double v = cocycle_p(model.table, s, sampler.next(depth));
    const double delta = v - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

}  // namespace freestate
