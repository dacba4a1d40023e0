#pragma once

// Isomorphism-preserving rewrites of a presentation that keep track of the
// inverse isomorphism as a substitution table: every generator of the
// current presentation is mapped to a word over the original generators.

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "presentation.hpp"
#include "word.hpp"

namespace wpc {

class SubstitutionTable {
 public:
  SubstitutionTable() = default;

  static SubstitutionTable identity(std::int32_t k) {
    SubstitutionTable t;
    for (std::int32_t i = 1; i <= k; ++i) t.entries_.push_back(Word{i});
    return t;
  }

  std::int32_t size() const noexcept {
    return static_cast<std::int32_t>(entries_.size());
  }

  Word const& operator[](std::int32_t g) const {
    if (g < 1 || g > size()) {
      throw Error(Errc::missing_entry,
                  "no substitution for generator " + std::to_string(g));
    }
    return entries_[static_cast<std::size_t>(g - 1)];
  }

  void set(std::int32_t g, Word w) {
    if (g < 1 || g > size()) {
      throw Error(Errc::missing_entry,
                  "no substitution for generator " + std::to_string(g));
    }
    entries_[static_cast<std::size_t>(g - 1)] = std::move(w);
  }

  void push_back(Word w) { entries_.push_back(std::move(w)); }

  std::vector<Word> const& entries() const noexcept { return entries_; }

  std::size_t max_entry_length() const noexcept {
    std::size_t n = 0;
    for (auto const& e : entries_) n = std::max(n, e.size());
    return n;
  }

  friend bool operator==(SubstitutionTable const&, SubstitutionTable const&) = default;

 private:
  std::vector<Word> entries_;
};

// Letterwise substitution followed by free reduction.
inline Word apply_substitution(SubstitutionTable const& psi, Word const& w) {
  std::vector<Letter> out;
  for (Letter x : w) {
    Word const& img = psi[generator_of(x)];
    auto push = [&](Letter y) {
      if (!out.empty() && out.back() == inverse(y)) {
        out.pop_back();
      } else {
        out.push_back(y);
      }
    };
    if (x > 0) {
      for (Letter y : img) push(y);
    } else {
      for (auto it = img.vector().rbegin(); it != img.vector().rend(); ++it) {
        push(inverse(*it));
      }
    }
  }
  return Word(std::move(out));
}

// Elementary free-group automorphisms (T3):
//   right_multiply: x_i -> x_i x_j^s
//   left_multiply:  x_i -> x_j^s x_i
//   invert:         x_i -> x_i^-1
struct NielsenMove {
  enum class Kind { right_multiply, left_multiply, invert };
  Kind kind = Kind::right_multiply;
  std::int32_t i = 1;
  std::int32_t j = 2;
  int sign = 1;

  NielsenMove inverse() const {
    NielsenMove m = *this;
    if (kind != Kind::invert) m.sign = -sign;
    return m;
  }

  // Image of generator i (all other generators are fixed).
  Word image() const {
    switch (kind) {
      case Kind::right_multiply: return Word{i, sign * j};
      case Kind::left_multiply: return Word{sign * j, i};
      case Kind::invert: return Word{-i};
    }
    return Word{i};
  }

  friend bool operator==(NielsenMove const&, NielsenMove const&) = default;
};

// Recursive relator changes (T4'):
//   invert:      r_i -> r_i^-1
//   multiply:    r_i -> r_i r_j^s (on_left = false) or r_j^s r_i (on_left = true)
//   conjugate:   r_i -> x_g^-s r_i x_g^s
struct RelatorMove {
  enum class Kind { invert, multiply, conjugate };
  Kind kind = Kind::invert;
  std::size_t i = 0;
  std::size_t j = 0;
  std::int32_t generator = 1;
  int sign = 1;
  bool on_left = false;

  friend bool operator==(RelatorMove const&, RelatorMove const&) = default;
};

struct Introduction {
  Word definition;  // y = s
  friend bool operator==(Introduction const&, Introduction const&) = default;
};

struct Breaking {
  std::size_t relator = 0;
  std::size_t position = 0;
  friend bool operator==(Breaking const&, Breaking const&) = default;
};

struct Padding {
  std::size_t preset = 0;
  friend bool operator==(Padding const&, Padding const&) = default;
};

using TietzeMove =
    std::variant<Introduction, NielsenMove, RelatorMove, Breaking, Padding>;

// A balanced presentation of the trivial group.
struct TrivialPreset {
  std::int32_t generators = 0;
  std::vector<Word> relators;
};

// <x,y | x y x^-1 y^-2, y x y^-1 x^-2>: from x y = y^2 x and y x = x^2 y one
// gets x y = y x^2 y, so x = y x^2, y = x^-1 and then x = 1.
inline std::vector<TrivialPreset> const& trivial_group_presets() {
  static std::vector<TrivialPreset> const presets{
      {2, {Word{1, 2, -1, -2, -2}, Word{2, 1, -2, -1, -1}}},
  };
  return presets;
}

class TietzeSession {
 public:
  static constexpr std::size_t default_entry_cap = 4096;

  explicit TietzeSession(Presentation original,
                         std::size_t entry_cap = default_entry_cap)
      : original_(original),
        current_(std::move(original)),
        psi_(SubstitutionTable::identity(current_.generators())),
        entry_cap_(entry_cap) {}

  Presentation const& original() const noexcept { return original_; }
  Presentation const& current() const noexcept { return current_; }
  SubstitutionTable const& psi() const noexcept { return psi_; }
  std::vector<TietzeMove> const& history() const noexcept { return history_; }

  // T1: new generator y with relator y s^-1; psi(y) = psi(s).
  std::int32_t introduce(Word const& s) {
    current_.check_word(s);
    Word def = free_reduce(s);
    if (def.empty()) {
      throw Error(Errc::empty_introduction, "cannot introduce y = 1");
    }
    Word image = apply_substitution(psi_, def);
    check_cap(image);
    std::int32_t y = current_.add_generator();
    current_.add_relator(concat(Word{y}, invert(def)));
    psi_.push_back(std::move(image));
    history_.emplace_back(Introduction{def});
    return y;
  }

  // T3: relators r -> phi(r); psi_new(x) = psi_old(phi^-1(x)).
  void nielsen(NielsenMove const& move) {
    current_.check_generator(move.i);
    if (move.kind != NielsenMove::Kind::invert) {
      current_.check_generator(move.j);
      if (move.i == move.j) {
        throw Error(Errc::index_out_of_range, "Nielsen move needs i != j");
      }
      if (move.sign != 1 && move.sign != -1) {
        throw Error(Errc::invalid_argument, "Nielsen sign must be +-1");
      }
    }
    Word const inv_image = move.inverse().image();
    Word entry = apply_substitution(psi_, inv_image);
    check_cap(entry);

    Word const fwd = move.image();
    Word const fwd_inv = invert(fwd);
    std::vector<Word> rels;
    rels.reserve(current_.size());
    for (auto const& r : current_.relators()) {
      std::vector<Letter> out;
      out.reserve(r.size() + 4);
      for (Letter x : r) {
        if (generator_of(x) == move.i) {
          auto const& img = x > 0 ? fwd : fwd_inv;
          out.insert(out.end(), img.begin(), img.end());
        } else {
          out.push_back(x);
        }
      }
      rels.push_back(free_reduce(out));
    }
    for (std::size_t i = 0; i < rels.size(); ++i) current_.set_relator(i, rels[i]);
    psi_.set(move.i, std::move(entry));
    history_.emplace_back(move);
  }

  // T4': psi unchanged. Refused (state untouched) if the result is empty.
  void relator_move(RelatorMove const& move) {
    current_.check_relator_index(move.i);
    Word const& ri = current_.relator(move.i);
    Word result;
    switch (move.kind) {
      case RelatorMove::Kind::invert:
        result = invert(ri);
        break;
      case RelatorMove::Kind::multiply: {
        current_.check_relator_index(move.j);
        if (move.i == move.j) {
          throw Error(Errc::index_out_of_range, "relator product needs i != j");
        }
        Word rj = current_.relator(move.j);
        if (move.sign < 0) rj = invert(rj);
        result = move.on_left ? rj * ri : ri * rj;
        break;
      }
      case RelatorMove::Kind::conjugate: {
        current_.check_generator(move.generator);
        Word x{move.sign * move.generator};
        result = invert(x) * ri * x;
        break;
      }
    }
    if (cyclic_core(result).empty()) {
      throw Error(Errc::degenerate_relator,
                  "relator move would produce the empty relator");
    }
    current_.set_relator(move.i, result);
    history_.emplace_back(move);
  }

  // Carves the two letters at `position` (cyclically) out of relator i:
  // r = a x_p x_q b becomes y b a with a new generator y = x_p x_q.
  std::int32_t break_relator(std::size_t i, std::size_t position) {
    current_.check_relator_index(i);
    Word const r = current_.relator(i);
    if (r.size() < 5) {
      throw Error(Errc::too_short,
                  "relator of length " + std::to_string(r.size()) +
                      " cannot be broken");
    }
    Word rot = rotate(r, position % r.size());
    Word carved{rot[0], rot[1]};
    std::int32_t y = introduce(carved);
    history_.pop_back();
    std::vector<Letter> shortened{y};
    shortened.insert(shortened.end(), rot.begin() + 2, rot.end());
    current_.set_relator(i, Word(std::move(shortened)));
    history_.emplace_back(Breaking{i, position % r.size()});
    return y;
  }

  // Free product with a presentation of the trivial group. The new
  // generators are trivial in the original group, so psi sends them to 1.
  void pad_with_trivial_group(std::size_t preset) {
    auto const& presets = trivial_group_presets();
    if (preset >= presets.size()) {
      throw Error(Errc::index_out_of_range,
                  "no trivial-group preset " + std::to_string(preset));
    }
    auto const& tp = presets[preset];
    std::int32_t base = current_.generators();
    for (std::int32_t g = 0; g < tp.generators; ++g) {
      current_.add_generator();
      psi_.push_back(Word{});
    }
    for (auto const& r : tp.relators) {
      std::vector<Letter> shifted;
      for (Letter x : r) shifted.push_back(x > 0 ? x + base : x - base);
      current_.add_relator(Word(std::move(shifted)));
    }
    history_.emplace_back(Padding{preset});
  }

  // Used when abridging: drops relators, keeps generators and psi.
  void remove_relator(std::size_t i) { current_.remove_relator(i); }

 private:
  void check_cap(Word const& w) const {
    if (w.size() > entry_cap_) {
      throw Error(Errc::key_too_large,
                  "substitution entry of length " + std::to_string(w.size()) +
                      " exceeds cap " + std::to_string(entry_cap_));
    }
  }

  Presentation original_;
  Presentation current_;
  SubstitutionTable psi_;
  std::vector<TietzeMove> history_;
  std::size_t entry_cap_;
};

}  // namespace wpc
