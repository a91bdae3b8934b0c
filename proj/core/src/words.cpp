#include "freestate/words.hpp"

#include <cctype>
#include <charconv>

#include "freestate/errors.hpp"

namespace freestate {

Letter::Letter(int index, int sign) : index_(index), sign_(sign) {
  if (index < 1) throw PreconditionError("letter index must be >= 1");
  if (sign != 1 && sign != -1) throw PreconditionError("letter sign must be +1 or -1");
}

Letter Letter::from_token(int token) {
  if (token == 0) throw PreconditionError("letter token 0 is not a generator");
  return token > 0 ? Letter(token, +1) : Letter(-token, -1);
}

Letter Letter::from_slot(std::size_t slot) {
  return Letter(static_cast<int>(slot / 2) + 1, slot % 2 == 0 ? +1 : -1);
}

Word::Word(int rank) : rank_(rank) {
  if (rank < 1) throw PreconditionError("rank must be >= 1");
}

Word::Word(int rank, std::span<const Letter> letters) : Word(rank) {
  letters_.reserve(letters.size());
  for (const Letter& l : letters) {
    if (l.index() > rank_) {
      throw PreconditionError("letter index " + std::to_string(l.index()) +
                              " exceeds rank " + std::to_string(rank_));
    }
    if (!letters_.empty() && letters_.back() == l.inverse()) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }
}

Word Word::from_tokens(int rank, std::span<const int> tokens) {
  std::vector<Letter> ls;
  ls.reserve(tokens.size());
  for (int tok : tokens) ls.push_back(Letter::from_token(tok));
  return Word(rank, ls);
}

Word Word::generator(int rank, int index, int sign) {
  const Letter l(index, sign);
  return Word(rank, std::span<const Letter>(&l, 1));
}

bool Word::is_positive() const {
  for (const Letter& l : letters_) {
    if (!l.positive()) return false;
  }
  return true;
}

Word Word::subword(std::size_t pos, std::size_t len) const {
  Word out(rank_);
  out.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                      letters_.begin() + static_cast<std::ptrdiff_t>(pos + len));
  return out;
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (auto c = a.rank_ <=> b.rank_; c != 0) return c;
  if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.letters_.size(); ++i) {
    if (auto c = a.letters_[i] <=> b.letters_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

Word parse_word(std::string_view text, int rank) {
  if (rank < 1) throw PreconditionError("rank must be >= 1");
  std::vector<Letter> letters;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    const std::string_view tok = text.substr(pos, end - pos);
    pos = end;

    int value = 0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      throw ParseError("word token '" + std::string(tok) + "' is not an integer");
    }
    if (value == 0) {
      throw ParseError("word token '" + std::string(tok) + "' is zero");
    }
    if (value > rank || value < -rank) {
      throw ParseError("word token '" + std::string(tok) + "' exceeds rank " +
                       std::to_string(rank));
    }
    letters.push_back(Letter::from_token(value));
  }
  return Word(rank, letters);
}

std::string format_word(const Word& w) {
  std::string out;
  for (const Letter& l : w.letters()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(l.token());
  }
  return out;
}

std::string pretty_word(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (const Letter& l : w.letters()) {
    if (!out.empty()) out += ' ';
    out += 'u';
    out += std::to_string(l.index());
    if (!l.positive()) out += "^-1";
  }
  return out;
}

Word multiply(const Word& a, const Word& b) {
  if (a.rank() != b.rank()) {
    throw PreconditionError("rank mismatch in word product: " + std::to_string(a.rank()) +
                            " vs " + std::to_string(b.rank()));
  }
  std::vector<Letter> joined;
  joined.reserve(a.size() + b.size());
  joined.insert(joined.end(), a.letters().begin(), a.letters().end());
  joined.insert(joined.end(), b.letters().begin(), b.letters().end());
  return Word(a.rank(), joined);
}

Word inverse(const Word& w) {
  std::vector<Letter> rev;
  rev.reserve(w.size());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
    rev.push_back(it->inverse());
  }
  return Word(w.rank(), rev);
}

namespace {

void check_index(const Word& w, int i) {
  if (i < 1 || i > w.rank()) {
    throw PreconditionError("generator index " + std::to_string(i) + " out of range 1.." +
                            std::to_string(w.rank()));
  }
}

}  // namespace

int letter_count(const Word& w, int index) {
  check_index(w, index);
  int count = 0;
  for (const Letter& l : w.letters()) count += (l.index() == index);
  return count;
}

int gamma_pair(const Word& w, int i, int j) {
  check_index(w, i);
  check_index(w, j);
  if (i == j) throw PreconditionError("gamma_pair needs distinct indices");
  int count = 0;
  const auto& ls = w.letters();
  for (std::size_t k = 1; k < ls.size(); ++k) {
    const Letter& p = ls[k - 1];
    const Letter& q = ls[k];
    if (p.positive() || !q.positive()) continue;
    if ((p.index() == i && q.index() == j) || (p.index() == j && q.index() == i)) ++count;
  }
  return count;
}

int gamma_total(const Word& w) {
  int count = 0;
  const auto& ls = w.letters();
  for (std::size_t k = 1; k < ls.size(); ++k) {
    // u_k^{-1} u_k cannot occur in a reduced word, so any inverse-then-plain
    // junction has distinct indices.
    if (!ls[k - 1].positive() && ls[k].positive()) ++count;
  }
  return count;
}

std::size_t reduced_word_count(int rank, int max_len) {
  std::size_t total = 1;
  std::size_t layer = 2 * static_cast<std::size_t>(rank);
  for (int m = 1; m <= max_len; ++m) {
    total += layer;
    layer *= 2 * static_cast<std::size_t>(rank) - 1;
  }
  return total;
}

namespace {

std::vector<Word> extend_layer(const std::vector<Word>& layer, int rank) {
  const std::size_t slots = 2 * static_cast<std::size_t>(rank);
  std::vector<Word> next;
  next.reserve(layer.size() * slots);
  for (const Word& w : layer) {
    for (std::size_t s = 0; s < slots; ++s) {
      const Letter l = Letter::from_slot(s);
      if (!w.empty() && w.back() == l.inverse()) continue;
      std::vector<Letter> ls = w.letters();
      ls.push_back(l);
      next.emplace_back(rank, ls);
    }
  }
  return next;
}

}  // namespace

std::vector<Word> enumerate_words_of_length(int rank, int length) {
  std::vector<Word> layer{Word(rank)};
  for (int m = 0; m < length; ++m) layer = extend_layer(layer, rank);
  return layer;
}

std::vector<Word> enumerate_words(int rank, int max_len) {
  std::vector<Word> out;
  out.reserve(reduced_word_count(rank, max_len));
  std::vector<Word> layer{Word(rank)};
  out.push_back(layer.front());
  for (int m = 0; m < max_len; ++m) {
    layer = extend_layer(layer, rank);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

std::vector<Word> enumerate_positive(int rank, int length) {
  std::vector<Word> layer{Word(rank)};
  for (int m = 0; m < length; ++m) {
    std::vector<Word> next;
    next.reserve(layer.size() * static_cast<std::size_t>(rank));
    for (const Word& w : layer) {
      for (int i = 1; i <= rank; ++i) {
        std::vector<Letter> ls = w.letters();
        ls.emplace_back(i, +1);
        next.emplace_back(rank, ls);
      }
    }
    layer = std::move(next);
  }
  return layer;
}

}  // namespace freestate
