#pragma once

// Finitely supported functions on the free group (elements of the group
// algebra), their convolution and l2 norms.

#include <cstddef>
#include <map>
#include <span>
#include <utility>

#include "freestate/words.hpp"

namespace freestate {

constexpr std::size_t kDefaultSupportCap = 1'000'000;

class GroupFunction {
 public:
  explicit GroupFunction(int rank) : rank_(rank) {}

  static GroupFunction delta(const Word& w, double coeff = 1.0);
  // X = sum_i c_i u_i.
  static GroupFunction linear(std::span<const double> c);

  int rank() const { return rank_; }
  std::size_t support_size() const { return terms_.size(); }
  const std::map<Word, double>& terms() const { return terms_; }
  double at(const Word& w) const;

  // Adds coeff at w; entries that become exactly zero are erased.
  void add(const Word& w, double coeff);

 private:
  int rank_;
  std::map<Word, double> terms_;
};

// (f * g)(s) = sum_t f(t) g(t^{-1} s). Throws PreconditionError on rank
// mismatch or when the product support would exceed cap.
GroupFunction convolve(const GroupFunction& f, const GroupFunction& g,
                       std::size_t cap = kDefaultSupportCap);
inline GroupFunction operator*(const GroupFunction& f, const GroupFunction& g) {
  return convolve(f, g);
}

double l2_norm(const GroupFunction& f);

// X^k by repeated convolution; returns (||X^k||_2, (k+1) ||X^k||_2), the
// Haagerup sandwich for ||X^k||_op.
std::pair<double, double> power_norm_bounds(std::span<const double> c, int k,
                                            std::size_t cap = kDefaultSupportCap);
GroupFunction power(const GroupFunction& f, int k, std::size_t cap = kDefaultSupportCap);

// Truncation to words of length <= depth of the inverse of
// Y = d0 + sum_i d_i u_i, supported on the positive semigroup:
//   f(u_{i1} ... u_{im}) = (-1)^m d_{i1} ... d_{im} / d0^{m+1}.
// Throws DomainError unless sum d_i^2 < d0^2.
GroupFunction geometric_inverse(double d0, std::span<const double> d, int depth,
                                std::size_t cap = kDefaultSupportCap);
// Y as a group function.
GroupFunction affine_element(double d0, std::span<const double> d);
// ||Y * f_depth - delta_1||_2 predicted in closed form: (||d|| / |d0|)^{depth+1}.
double geometric_inverse_tail(double d0, std::span<const double> d, int depth);

}  // namespace freestate
