#pragma once

// Reduced words in the free group on n generators u_1, ..., u_n.
//
// Letters are stored as signed generator indices: +k is u_k, -k is u_k^{-1}.
// The canonical text form is the same whitespace-separated signed integers,
// so "1 -2 1" is u_1 u_2^{-1} u_1 and the empty string is the identity.

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace freestate {

class Letter {
 public:
  // index in 1..rank, sign in {+1, -1}. Rank is checked by Word.
  Letter(int index, int sign);

  static Letter from_token(int token);

  int index() const { return index_; }
  int sign() const { return sign_; }
  bool positive() const { return sign_ > 0; }
  int token() const { return sign_ * index_; }
  Letter inverse() const { return Letter(index_, -sign_); }

  // Slot in 0..2n-1 used by per-letter tables: u_i -> 2(i-1), u_i^{-1} -> 2(i-1)+1.
  std::size_t slot() const {
    return 2 * static_cast<std::size_t>(index_ - 1) + (sign_ < 0 ? 1 : 0);
  }
  static Letter from_slot(std::size_t slot);

  friend bool operator==(const Letter&, const Letter&) = default;
  // Slot order: u_1 < u_1^{-1} < u_2 < ...
  friend std::strong_ordering operator<=>(const Letter& a, const Letter& b) {
    return a.slot() <=> b.slot();
  }

 private:
  int index_;
  int sign_;
};

class Word {
 public:
  explicit Word(int rank);  // identity
  // Reduces the given sequence (free cancellation). Throws PreconditionError
  // on a letter index above rank.
  Word(int rank, std::span<const Letter> letters);
  static Word from_tokens(int rank, std::span<const int> tokens);
  static Word generator(int rank, int index, int sign = +1);

  int rank() const { return rank_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  bool is_identity() const { return letters_.empty(); }
  const std::vector<Letter>& letters() const { return letters_; }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }
  const Letter& front() const { return letters_.front(); }
  const Letter& back() const { return letters_.back(); }

  // Every letter has sign +1 (element of the positive semigroup G+).
  bool is_positive() const;

  // Letters [pos, pos+len), already reduced.
  Word subword(std::size_t pos, std::size_t len) const;

  friend bool operator==(const Word& a, const Word& b) {
    return a.rank_ == b.rank_ && a.letters_ == b.letters_;
  }
  // Shortlex order: by length, then lexicographic in letter slot order.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  int rank_;
  std::vector<Letter> letters_;
};

// Canonical signed-integer form. Throws ParseError naming the bad token.
Word parse_word(std::string_view text, int rank);
std::string format_word(const Word& w);
// Display form "u1 u2^-1"; "1" for the identity.
std::string pretty_word(const Word& w);

Word multiply(const Word& a, const Word& b);
inline Word operator*(const Word& a, const Word& b) { return multiply(a, b); }
Word inverse(const Word& w);

// |w|_i: occurrences of u_i or u_i^{-1}.
int letter_count(const Word& w, int index);
// gamma_ij(w): occurrences of u_i^{-1} u_j or u_j^{-1} u_i, i != j.
int gamma_pair(const Word& w, int i, int j);
// gamma(w): occurrences of u_k^{-1} u_j with k != j.
int gamma_total(const Word& w);

// Every reduced word of length <= max_len, BFS by length, lexicographic by
// token slot within a length. Count is 1 + sum_m 2n(2n-1)^{m-1}; callers
// bound max_len.
std::vector<Word> enumerate_words(int rank, int max_len);
// Reduced words of exactly the given length, same order as enumerate_words.
std::vector<Word> enumerate_words_of_length(int rank, int length);
// The n^k positive words of length k, lexicographic in the index sequence.
std::vector<Word> enumerate_positive(int rank, int length);

std::size_t reduced_word_count(int rank, int max_len);

}  // namespace freestate
