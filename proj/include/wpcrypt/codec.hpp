#pragma once

// Bit encryption over a public presentation and decryption with the private
// key. A 1 becomes a shuffled commutator [x, u] with u a product of
// conjugated short relators (trivial in the public group); a 0 becomes a
// shuffled [x, u] with u a random word of the commutator subgroup.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "keygen.hpp"
#include "presentation.hpp"
#include "rng.hpp"
#include "tietze.hpp"
#include "word.hpp"

namespace wpc {

using Bits = std::vector<bool>;

inline Bits parse_bits(std::string_view text) {
  Bits out;
  for (char c : text) {
    if (c == '0' || c == '1') {
      out.push_back(c == '1');
    } else if (c != ' ' && c != '\t' && c != '\n' && c != '\r') {
      throw Error(Errc::parse_error, std::string("not a bit: '") + c + "'");
    }
  }
  return out;
}

inline std::string bits_to_string(Bits const& bits) {
  std::string s;
  s.reserve(bits.size());
  for (bool b : bits) s.push_back(b ? '1' : '0');
  return s;
}

struct Ciphertext {
  std::vector<Word> words;
  friend bool operator==(Ciphertext const&, Ciphertext const&) = default;
};

// Rotations and inverses of the public relators of length 3 or 4, indexed by
// their first two letters.
class ShortRelatorIndex {
 public:
  ShortRelatorIndex() = default;

  explicit ShortRelatorIndex(Presentation const& pub) {
    std::vector<Word> shorts;
    for (auto const& r : pub.relators()) {
      if (r.size() == 3 || r.size() == 4) shorts.push_back(r);
    }
    members_ = SymmetrizedSet(shorts).members();
    for (std::size_t i = 0; i < members_.size(); ++i) {
      by_prefix_[key(members_[i][0], members_[i][1])].push_back(i);
    }
  }

  bool empty() const noexcept { return members_.empty(); }
  std::vector<Word> const& members() const noexcept { return members_; }

  // Members r = a b c (c of length 1 or 2).
  std::vector<std::size_t> const* starting_with(Letter a, Letter b) const {
    auto it = by_prefix_.find(key(a, b));
    return it == by_prefix_.end() ? nullptr : &it->second;
  }

 private:
  static std::uint64_t key(Letter a, Letter b) noexcept {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }

  std::vector<Word> members_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_prefix_;
};

class Encoder {
 public:
  explicit Encoder(PublicKey key, ProtocolParams params = {})
      : key_(std::move(key)), params_(std::move(params)), shorts_(key_.presentation) {
    key_.presentation.check_generator(key_.special);
    if (params_.factors.empty() || params_.factors.lo < 0 || params_.zero_length.empty()) {
      throw Error(Errc::invalid_argument, "bad codec ranges");
    }
  }

  PublicKey const& key() const noexcept { return key_; }
  ProtocolParams const& params() const noexcept { return params_; }
  ShortRelatorIndex const& short_relators() const noexcept { return shorts_; }
  std::int32_t generators() const noexcept { return key_.presentation.generators(); }

  // Number of trivial pairs inserted per round for a given p.
  std::size_t pairs_for(std::size_t p) const {
    auto k = static_cast<std::size_t>(std::max(generators(), 1));
    return (2 * p + k - 1) / k;
  }

  // One round: insert trivial pairs, rewrite two-letter pieces of short
  // relators left to right, freely reduce.
  Word shuffle_round(Word const& w, std::size_t pairs, Rng& rng) const {
    std::vector<Letter> cur = w.vector();
    std::int32_t const k = generators();
    for (std::size_t n = 0; n < pairs; ++n) {
      auto pos = rng.below(cur.size() + 1);
      auto x = static_cast<Letter>(rng.uniform(1, k));
      if (rng.coin()) x = -x;
      auto at = cur.begin() + static_cast<std::ptrdiff_t>(pos);
      at = cur.insert(at, x);
      cur.insert(at + 1, inverse(x));
    }

    std::vector<Letter> out;
    out.reserve(cur.size() + 8);
    std::size_t t = 0;
    while (t < cur.size()) {
      std::vector<std::size_t> const* cand =
          t + 1 < cur.size() ? shorts_.starting_with(cur[t], cur[t + 1]) : nullptr;
      if (cand == nullptr) {
        out.push_back(cur[t++]);
        continue;
      }
      Word const& r = shorts_.members()[(*cand)[rng.below(cand->size())]];
      // r = a b c  =>  a b = c^-1
      for (std::size_t i = r.size(); i > 2; --i) out.push_back(inverse(r[i - 1]));
      t += 2;
    }
    return free_reduce(out);
  }

  Word shuffle(Word const& w, std::size_t rounds, std::size_t p, Rng& rng) const {
    Word cur = w;
    std::size_t const pairs = pairs_for(p);
    for (std::size_t n = 0; n < rounds; ++n) cur = shuffle_round(cur, pairs, rng);
    return cur;
  }

  // u = s_1 ... s_p with each s a short relator form, possibly conjugated.
  Word trivial_product(std::size_t p, Rng& rng) const {
    if (shorts_.empty()) {
      throw Error(Errc::no_short_relators, "public key has no relators of length 3 or 4");
    }
    Word u;
    for (std::size_t n = 0; n < p; ++n) {
      Word s = shorts_.members()[rng.below(shorts_.members().size())];
      auto conj_len = rng.below(params_.max_conjugator_length + 1);
      if (conj_len > 0) {
        Word c = random_reduced_word(rng, generators(), conj_len);
        s = invert(c) * s * c;
      }
      u = u * s;
    }
    return u;
  }

  Word encode_one(Rng& rng) const {
    auto p = static_cast<std::size_t>(params_.factors.draw(rng));
    Word u = shuffle(trivial_product(p, rng), p, p, rng);
    Word w = commutator(Word{key_.special}, u);
    return shuffle(w, (w.size() + 1) / 2, p, rng);
  }

  Word encode_zero(Rng& rng) const {
    auto p = static_cast<std::size_t>(params_.factors.draw(rng));
    Word u = random_commutator_word(rng, generators(), params_.zero_length);
    Word w = commutator(Word{key_.special}, u);
    return shuffle(w, (w.size() + 1) / 2, p, rng);
  }

  Word encode(bool bit, Rng& rng) const { return bit ? encode_one(rng) : encode_zero(rng); }

  // Bit i uses its own stream derived from (seed, i).
  Ciphertext encrypt(Bits const& bits, std::uint64_t seed) const {
    Ciphertext ct;
    ct.words.reserve(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      Rng rng = Rng::derive(seed, i);
      ct.words.push_back(encode(bits[i], rng));
    }
    return ct;
  }

 private:
  PublicKey key_;
  ProtocolParams params_;
  ShortRelatorIndex shorts_;
};

inline Ciphertext encrypt(PublicKey const& pub, Bits const& bits, std::uint64_t seed,
                          ProtocolParams const& params = {}) {
  return Encoder(pub, params).encrypt(bits, seed);
}

// Image of a public word in the private group, then Dehn.
inline bool decrypt_word(PrivateKey const& priv, Word const& w) {
  return priv.group.word_problem(apply_substitution(priv.psi, w)).trivial;
}

inline Bits decrypt(PrivateKey const& priv, Ciphertext const& ct) {
  if (!priv.group.is_c_prime_sixth()) {
    throw Error(Errc::not_small_cancellation, "private presentation is not C'(1/6)");
  }
  Bits out;
  out.reserve(ct.words.size());
  for (auto const& w : ct.words) out.push_back(decrypt_word(priv, w));
  return out;
}

}  // namespace wpc
