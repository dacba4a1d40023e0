#pragma once

// Free-group words over generators x_1, ..., x_k.
//
// A letter is a nonzero signed generator index: +i is x_i and -i is x_i^-1.
// The empty word is the identity. Words are plain values; every operation
// below returns a fresh word and leaves its arguments alone.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "rng.hpp"

namespace wpc {

using Letter = std::int32_t;

constexpr Letter inverse(Letter x) noexcept { return -x; }

constexpr std::int32_t generator_of(Letter x) noexcept { return x < 0 ? -x : x; }

// Total order on letters used for every "lexicographically smallest" tie
// break: x1 < X1 < x2 < X2 < ...
constexpr std::int64_t letter_rank(Letter x) noexcept {
  return 2 * static_cast<std::int64_t>(generator_of(x)) - (x > 0 ? 1 : 0);
}

class Word {
 public:
  using value_type = Letter;
  using const_iterator = std::vector<Letter>::const_iterator;

  Word() = default;
  Word(std::initializer_list<Letter> letters) : letters_(letters) { validate(); }
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
    validate();
  }
  Word(const_iterator first, const_iterator last) : letters_(first, last) {}

  // Compact notation: a..t are x1..x20, A..T their inverses.
  static Word from_letters(std::string_view text) {
    std::vector<Letter> out;
    out.reserve(text.size());
    for (char c : text) {
      if (c >= 'a' && c <= 't') {
        out.push_back(c - 'a' + 1);
      } else if (c >= 'A' && c <= 'T') {
        out.push_back(-(c - 'A' + 1));
      } else if (c == ' ' || c == '\t') {
        continue;
      } else {
        throw Error(Errc::parse_error,
                    std::string("invalid letter '") + c + "' in word");
      }
    }
    return Word(std::move(out));
  }

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const noexcept { return letters_[i]; }
  Letter front() const noexcept { return letters_.front(); }
  Letter back() const noexcept { return letters_.back(); }
  const_iterator begin() const noexcept { return letters_.begin(); }
  const_iterator end() const noexcept { return letters_.end(); }
  std::span<Letter const> letters() const noexcept { return letters_; }
  std::vector<Letter> const& vector() const noexcept { return letters_; }

  // Largest generator index occurring in the word (0 for the empty word).
  std::int32_t max_generator() const noexcept {
    std::int32_t m = 0;
    for (Letter x : letters_) m = std::max(m, generator_of(x));
    return m;
  }

  bool uses_only(std::int32_t k) const noexcept { return max_generator() <= k; }

  // Letters when every index fits in a..t, signed integers otherwise.
  std::string to_string() const {
    if (letters_.empty()) return "";
    if (max_generator() <= 20) {
      std::string s;
      s.reserve(letters_.size());
      for (Letter x : letters_) {
        s.push_back(x > 0 ? static_cast<char>('a' + x - 1)
                          : static_cast<char>('A' - x - 1));
      }
      return s;
    }
    return to_ints();
  }

  std::string to_ints() const {
    std::string s;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
      if (i != 0) s.push_back(' ');
      s += std::to_string(letters_[i]);
    }
    return s;
  }

  friend bool operator==(Word const&, Word const&) = default;

  friend std::strong_ordering operator<=>(Word const& a, Word const& b) noexcept {
    return std::lexicographical_compare_three_way(
        a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
        b.letters_.end(), [](Letter x, Letter y) {
          return letter_rank(x) <=> letter_rank(y);
        });
  }

 private:
  void validate() const {
    for (Letter x : letters_) {
      if (x == 0) throw Error(Errc::invalid_argument, "letter 0 in word");
    }
  }

  std::vector<Letter> letters_;
};

inline Word operator""_w(char const* s, std::size_t n) {
  return Word::from_letters(std::string_view(s, n));
}

// Unreduced concatenation.
inline Word concat(Word const& u, Word const& v) {
  std::vector<Letter> out;
  out.reserve(u.size() + v.size());
  out.insert(out.end(), u.begin(), u.end());
  out.insert(out.end(), v.begin(), v.end());
  return Word(std::move(out));
}

inline bool is_reduced(Word const& w) noexcept {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == inverse(w[i - 1])) return false;
  }
  return true;
}

inline bool is_cyclically_reduced(Word const& w) noexcept {
  return is_reduced(w) && (w.size() < 2 || w.front() != inverse(w.back()));
}

// Stack-based single pass: amortized linear.
inline Word free_reduce(std::span<Letter const> letters) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (Letter x : letters) {
    if (!out.empty() && out.back() == inverse(x)) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return Word(std::move(out));
}

inline Word free_reduce(Word const& w) { return free_reduce(w.letters()); }

// Reduced product u*v.
inline Word operator*(Word const& u, Word const& v) {
  std::vector<Letter> out(u.begin(), u.end());
  out.reserve(u.size() + v.size());
  for (Letter x : v) {
    if (!out.empty() && out.back() == inverse(x)) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return Word(std::move(out));
}

inline Word invert(Word const& w) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (auto it = w.vector().rbegin(); it != w.vector().rend(); ++it) {
    out.push_back(inverse(*it));
  }
  return Word(std::move(out));
}

struct CyclicReduction {
  Word core;
  Word prefix;  // free_reduce(w) == prefix * core * prefix^-1
};

inline CyclicReduction cyclic_reduce(Word const& w) {
  Word r = free_reduce(w);
  std::size_t lo = 0;
  std::size_t hi = r.size();
  while (hi - lo >= 2 && r[lo] == inverse(r[hi - 1])) {
    ++lo;
    --hi;
  }
  return {Word(r.begin() + static_cast<std::ptrdiff_t>(lo),
               r.begin() + static_cast<std::ptrdiff_t>(hi)),
          Word(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(lo))};
}

inline Word cyclic_core(Word const& w) { return cyclic_reduce(w).core; }

// [a,b] = a^-1 b^-1 a b, freely reduced.
inline Word commutator(Word const& a, Word const& b) {
  return invert(a) * invert(b) * a * b;
}

inline Word power(Word const& w, int n) {
  Word base = n < 0 ? invert(w) : w;
  Word out;
  for (int i = 0; i < std::abs(n); ++i) out = out * base;
  return out;
}

// Cyclic rotation starting at position i (no reduction).
inline Word rotate(Word const& w, std::size_t i) {
  if (w.empty()) return w;
  i %= w.size();
  std::vector<Letter> out;
  out.reserve(w.size());
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(i), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
  return Word(std::move(out));
}

// Least rotation of the cyclic core or of its inverse: a canonical
// representative of the conjugacy class of w together with that of w^-1.
inline Word cyclic_canonical(Word const& w) {
  Word core = cyclic_core(w);
  if (core.empty()) return core;
  Word best = core;
  Word inv = invert(core);
  for (std::size_t i = 0; i < core.size(); ++i) {
    Word a = rotate(core, i);
    if (a < best) best = std::move(a);
    Word b = rotate(inv, i);
    if (b < best) best = std::move(b);
  }
  return best;
}

inline std::vector<std::int64_t> exponent_vector(Word const& w, std::int32_t k) {
  std::vector<std::int64_t> e(static_cast<std::size_t>(k), 0);
  for (Letter x : w) {
    auto g = generator_of(x);
    if (g > k) {
      throw Error(Errc::index_out_of_range,
                  "generator " + std::to_string(g) + " exceeds " +
                      std::to_string(k));
    }
    e[static_cast<std::size_t>(g - 1)] += x > 0 ? 1 : -1;
  }
  return e;
}

// Uniform letter among the 2k symbols.
inline Letter random_letter(Rng& rng, std::int32_t k) {
  auto v = static_cast<std::int32_t>(rng.below(2 * static_cast<std::uint64_t>(k)));
  return v < k ? v + 1 : -(v - k + 1);
}

// Uniform letter among the 2k-1 symbols that do not cancel against prev.
inline Letter random_letter_after(Rng& rng, std::int32_t k, Letter prev) {
  auto v = static_cast<std::int32_t>(rng.below(2 * static_cast<std::uint64_t>(k) - 1));
  Letter x = v < k ? v + 1 : -(v - k + 1);
  // The excluded symbol inverse(prev) is mapped to the one slot not drawn.
  if (x == inverse(prev)) x = -k;
  return x;
}

// Uniform over reduced words of length exactly n on k generators.
inline Word random_reduced_word(Rng& rng, std::int32_t k, std::size_t n) {
  if (k < 1) throw Error(Errc::invalid_argument, "need at least one generator");
  std::vector<Letter> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(i == 0 ? random_letter(rng, k)
                         : random_letter_after(rng, k, out.back()));
  }
  return Word(std::move(out));
}

namespace detail {

inline bool commutator_length_feasible(Range len) {
  for (auto n = std::max<std::int64_t>(len.lo, 0); n <= len.hi; ++n) {
    if (n == 0 || (n % 2 == 0 && n >= 4)) return true;
  }
  return false;
}

// Drive every exponent sum to zero by flipping letters, inserting one
// letter first when the imbalance is odd. Returns false if the round cap
// is hit.
inline bool zero_exponents(Rng& rng, std::vector<Letter>& w, std::int32_t k) {
  for (int round = 0; round < 1000; ++round) {
    auto e = exponent_vector(Word(w.begin(), w.end()), k);
    std::vector<std::int32_t> unbalanced;
    for (std::int32_t i = 0; i < k; ++i) {
      if (e[static_cast<std::size_t>(i)] != 0) unbalanced.push_back(i + 1);
    }
    if (unbalanced.empty()) return true;
    std::int32_t g = unbalanced[rng.below(unbalanced.size())];
    std::int64_t eg = e[static_cast<std::size_t>(g - 1)];
    Letter heavy = eg > 0 ? g : -g;
    if (eg % 2 != 0) {
      auto pos = rng.below(w.size() + 1);
      w.insert(w.begin() + static_cast<std::ptrdiff_t>(pos), inverse(heavy));
    } else {
      std::vector<std::size_t> hits;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == heavy) hits.push_back(i);
      }
      w[hits[rng.below(hits.size())]] = inverse(heavy);
    }
    w = free_reduce(w).vector();
  }
  return false;
}

}  // namespace detail

// Random reduced word with zero exponent sum on every generator (an element
// of the commutator subgroup) whose length lies in len.
inline Word random_commutator_word(Rng& rng, std::int32_t k, Range len) {
  if (k < 2) throw Error(Errc::invalid_argument, "need at least two generators");
  if (len.empty() || !detail::commutator_length_feasible(len)) {
    throw Error(Errc::invalid_argument,
                "length range admits no word with zero exponent sums");
  }
  for (int attempt = 0; attempt < 100000; ++attempt) {
    auto n = static_cast<std::size_t>(std::max<std::int64_t>(len.draw(rng), 0));
    auto w = random_reduced_word(rng, k, n).vector();
    if (!detail::zero_exponents(rng, w, k)) continue;
    if (len.contains(static_cast<std::int64_t>(w.size()))) return Word(std::move(w));
  }
  throw Error(Errc::retry_exhausted, "random_commutator_word did not converge");
}

}  // namespace wpc

template <>
struct std::hash<wpc::Word> {
  std::size_t operator()(wpc::Word const& w) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto x : w) {
      h ^= static_cast<std::uint32_t>(x);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};
