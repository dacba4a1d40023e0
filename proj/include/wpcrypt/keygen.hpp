#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "presentation.hpp"
#include "rng.hpp"
#include "tietze.hpp"
#include "word.hpp"

namespace wpc {

struct ProtocolParams {
  PresentationParams presentation{};      // k, m and relator lengths
  std::size_t special_factors = 10;       // M
  std::size_t tietze_moves = 50;          // s1 + s2
  double introduce_probability = 0.5;     // share of T1 among those moves
  Range introduce_length{12, 20};         // |s| for T1 during mixing
  bool introduce_over_seed = true;        // T1 words use the seed generators only
  std::size_t premix_factor = 2;          // T4' moves per relator
  std::size_t short_length = 4;           // "short" relator bound
  double target_short_fraction = 0.30;    // reached by T1 breaking
  double discard_fraction = 0.70;
  double min_short_fraction_public = 0.50;
  Range factors{5, 12};                   // p
  Range zero_length{65, 85};              // l for the 0-encoding
  std::size_t max_conjugator_length = 2;  // conjugators of short relators in u
  std::size_t retry_cap = 50;
  std::size_t entry_cap = TietzeSession::default_entry_cap;
  bool pad_trivial = false;
};

struct PublicKey {
  Presentation presentation;  // abridged diffused presentation + special relator
  std::int32_t special = 1;   // index of x_i'

  friend bool operator==(PublicKey const&, PublicKey const&) = default;
};

struct PrivateKey {
  PrivateKey(Presentation p, std::int32_t special_index, SubstitutionTable table)
      : group(std::move(p)), special(special_index), psi(std::move(table)) {}

  Presentation const& presentation() const noexcept { return group.presentation(); }

  SmallCancellationGroup group;  // final private presentation, Dehn index cached
  std::int32_t special = 1;
  SubstitutionTable psi;         // public generators -> private words
};

struct KeyPair {
  PublicKey pub;
  PrivateKey priv;
  Presentation seed;             // private presentation before the special relator
  std::size_t attempts = 1;      // pipeline runs including the successful one
};

struct KeygenStats {
  std::size_t seed_draws = 0;
  std::size_t seed_rejections = 0;
  std::size_t final_rejections = 0;
  std::size_t key_too_large = 0;
  std::size_t unsatisfiable = 0;
  std::size_t collisions = 0;

  std::string to_string() const {
    return "seed_draws=" + std::to_string(seed_draws) +
           " seed_rejections=" + std::to_string(seed_rejections) +
           " final_rejections=" + std::to_string(final_rejections) +
           " key_too_large=" + std::to_string(key_too_large) +
           " unsatisfiable=" + std::to_string(unsatisfiable) +
           " collisions=" + std::to_string(collisions);
  }
};

inline bool is_short(Word const& r, std::size_t bound) { return r.size() <= bound; }

inline std::size_t count_short(Presentation const& p, std::size_t bound) {
  return static_cast<std::size_t>(std::count_if(
      p.relators().begin(), p.relators().end(),
      [bound](Word const& r) { return is_short(r, bound); }));
}

inline Presentation generate_seed_presentation(Rng& rng, ProtocolParams const& params,
                                               KeygenStats* stats = nullptr) {
  for (std::size_t attempt = 0; attempt < params.retry_cap; ++attempt) {
    Presentation p = random_presentation(rng, params.presentation);
    if (stats) ++stats->seed_draws;
    if (verify_c_prime(p).satisfies_lambda) return p;
    if (stats) ++stats->seed_rejections;
  }
  throw Error(Errc::retry_exhausted,
              "no C'(1/6) seed presentation in " + std::to_string(params.retry_cap) +
                  " draws");
}

namespace detail {

inline RelatorMove random_relator_move(Rng& rng, Presentation const& p) {
  RelatorMove m;
  m.i = rng.below(p.size());
  switch (rng.below(p.size() > 1 ? 3 : 2)) {
    case 0:
      m.kind = RelatorMove::Kind::invert;
      break;
    case 1:
      m.kind = RelatorMove::Kind::conjugate;
      m.generator = static_cast<std::int32_t>(rng.uniform(1, p.generators()));
      m.sign = rng.coin() ? 1 : -1;
      break;
    default:
      m.kind = RelatorMove::Kind::multiply;
      m.j = rng.below(p.size() - 1);
      if (m.j >= m.i) ++m.j;
      m.sign = rng.coin() ? 1 : -1;
      m.on_left = rng.coin();
      break;
  }
  return m;
}

inline NielsenMove random_nielsen_move(Rng& rng, std::int32_t k) {
  NielsenMove m;
  m.kind = rng.coin() ? NielsenMove::Kind::right_multiply
                      : NielsenMove::Kind::left_multiply;
  m.i = static_cast<std::int32_t>(rng.uniform(1, k));
  m.j = static_cast<std::int32_t>(rng.uniform(1, k - 1));
  if (m.j >= m.i) ++m.j;
  m.sign = rng.coin() ? 1 : -1;
  return m;
}

// Uniform random subset of {0..n-1} of the given size, sorted.
inline std::vector<std::size_t> sample_subset(Rng& rng, std::vector<std::size_t> pool,
                                              std::size_t size) {
  for (std::size_t i = 0; i < size; ++i) {
    auto j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(size);
  std::sort(pool.begin(), pool.end());
  return pool;
}

inline double log_binomial(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

}  // namespace detail

struct MixResult {
  TietzeSession session;
  Presentation abridged;
};

// Diffuses the seed (T4' premix, an interleaving of T1 and T3 moves, then T1
// breaking until enough relators are short) and discards relators.
inline MixResult mix_and_abridge(Rng& rng, Presentation const& seed,
                                 ProtocolParams const& params) {
  TietzeSession session(seed, params.entry_cap);

  if (params.pad_trivial) {
    session.pad_with_trivial_group(0);
  }

  std::size_t const premix = params.premix_factor * session.current().size();
  for (std::size_t n = 0; n < premix && session.current().size() > 0;) {
    auto move = detail::random_relator_move(rng, session.current());
    try {
      session.relator_move(move);
      ++n;
    } catch (Error const& e) {
      if (e.code() != Errc::degenerate_relator) throw;
    }
  }

  for (std::size_t n = 0; n < params.tietze_moves; ++n) {
    std::int32_t k = session.current().generators();
    if (rng.unit() < params.introduce_probability) {
      auto len = static_cast<std::size_t>(params.introduce_length.draw(rng));
      std::int32_t alphabet = params.introduce_over_seed ? seed.generators() : k;
      session.introduce(random_reduced_word(rng, alphabet, len));
    } else {
      session.nielsen(detail::random_nielsen_move(rng, k));
    }
  }

  auto short_fraction = [&] {
    auto const& p = session.current();
    return p.size() == 0 ? 1.0
                         : static_cast<double>(count_short(p, params.short_length)) /
                               static_cast<double>(p.size());
  };
  while (short_fraction() < params.target_short_fraction) {
    auto const& rels = session.current().relators();
    std::vector<std::size_t> breakable;
    for (std::size_t i = 0; i < rels.size(); ++i) {
      if (rels[i].size() > params.short_length) breakable.push_back(i);
    }
    if (breakable.empty()) break;
    auto i = breakable[rng.below(breakable.size())];
    session.break_relator(i, rng.below(rels[i].size()));
  }

  // Keep round((1 - discard) * n) relators, at least half of them short,
  // drawn uniformly among all subsets meeting that constraint.
  Presentation const& diffused = session.current();
  std::size_t const n = diffused.size();
  auto keep = static_cast<std::size_t>(
      std::lround((1.0 - params.discard_fraction) * static_cast<double>(n)));
  keep = std::clamp<std::size_t>(keep, std::min<std::size_t>(n, 1), n);
  std::vector<std::size_t> shorts;
  std::vector<std::size_t> longs;
  for (std::size_t i = 0; i < n; ++i) {
    (is_short(diffused.relator(i), params.short_length) ? shorts : longs).push_back(i);
  }
  auto const need = static_cast<std::size_t>(
      std::ceil(params.min_short_fraction_public * static_cast<double>(keep) - 1e-9));
  std::vector<double> weights;
  std::vector<std::size_t> choices;
  for (std::size_t s = need; s <= std::min(keep, shorts.size()); ++s) {
    if (keep - s > longs.size()) continue;
    choices.push_back(s);
    weights.push_back(detail::log_binomial(shorts.size(), s) +
                      detail::log_binomial(longs.size(), keep - s));
  }
  if (choices.empty()) {
    throw Error(Errc::constraint_unsatisfiable,
                "cannot keep " + std::to_string(keep) + " relators with " +
                    std::to_string(need) + " short ones out of " +
                    std::to_string(shorts.size()));
  }
  double const top = *std::max_element(weights.begin(), weights.end());
  double total = 0;
  for (auto& w : weights) total += (w = std::exp(w - top));
  double pick = rng.unit() * total;
  std::size_t s_count = choices.back();
  for (std::size_t c = 0; c < choices.size(); ++c) {
    if (pick < weights[c]) {
      s_count = choices[c];
      break;
    }
    pick -= weights[c];
  }
  auto kept_short = detail::sample_subset(rng, shorts, s_count);
  auto kept_long = detail::sample_subset(rng, longs, keep - s_count);

  Presentation abridged(diffused.generators());
  std::vector<std::size_t> kept(kept_short);
  kept.insert(kept.end(), kept_long.begin(), kept_long.end());
  std::sort(kept.begin(), kept.end());
  for (auto i : kept) abridged.add_relator(diffused.relator(i));
  return {std::move(session), std::move(abridged)};
}

struct SpecialRelator {
  Presentation public_presentation;  // abridged + special relator
  std::int32_t special = 1;
  Word relator;                      // x_i^-1 prod [x_i, w_j]
  Word preimage;                     // psi(relator), cyclically reduced
  Presentation private_presentation; // seed + preimage
};

// Appends x_i = prod_{j=1}^{M} [x_i, w_j] with |w_j| in {1, 2}, w_j != x_i^{+-1}.
inline SpecialRelator add_special_relator(Rng& rng, TietzeSession const& session,
                                          Presentation const& abridged,
                                          std::size_t factors) {
  std::int32_t const k = abridged.generators();
  if (k < 2) {
    throw Error(Errc::invalid_argument, "special relator needs two generators");
  }
  auto const i = static_cast<std::int32_t>(rng.uniform(1, k));
  Word const x{i};
  Word product;
  for (std::size_t j = 0; j < factors; ++j) {
    Word w;
    do {
      w = random_reduced_word(rng, k, rng.coin() ? 1 : 2);
    } while (w == Word{i} || w == Word{-i});
    product = product * commutator(x, w);
  }
  SpecialRelator out;
  out.special = i;
  out.relator = invert(x) * product;
  out.public_presentation = abridged;
  out.public_presentation.add_relator(out.relator);
  out.preimage = cyclic_core(apply_substitution(session.psi(), out.relator));
  out.private_presentation = session.original();
  if (!out.preimage.empty()) out.private_presentation.add_relator(out.preimage);
  return out;
}

inline KeyPair keygen(Rng& rng, ProtocolParams const& params,
                      KeygenStats* stats = nullptr) {
  KeygenStats local;
  KeygenStats& st = stats ? *stats : local;
  for (std::size_t attempt = 1; attempt <= params.retry_cap; ++attempt) {
    try {
      Presentation seed = generate_seed_presentation(rng, params, &st);
      auto mixed = mix_and_abridge(rng, seed, params);
      auto special =
          add_special_relator(rng, mixed.session, mixed.abridged, params.special_factors);
      // A public relator textually equal to a seed relator would leak it.
      bool leak = false;
      for (auto const& r : special.public_presentation.relators()) {
        for (auto const& s : seed.relators()) {
          if (r == s) leak = true;
        }
      }
      if (leak) {
        ++st.collisions;
        continue;
      }
      PrivateKey priv(special.private_presentation, special.special,
                      mixed.session.psi());
      if (!priv.group.is_c_prime_sixth()) {
        ++st.final_rejections;
        continue;
      }
      return KeyPair{PublicKey{std::move(special.public_presentation), special.special},
                     std::move(priv), std::move(seed), attempt};
    } catch (Error const& e) {
      if (e.code() == Errc::key_too_large) {
        ++st.key_too_large;
      } else if (e.code() == Errc::constraint_unsatisfiable) {
        ++st.unsatisfiable;
      } else if (e.code() == Errc::retry_exhausted) {
        continue;
      } else {
        throw;
      }
    }
  }
  throw Error(Errc::retry_exhausted,
              "keygen failed after " + std::to_string(params.retry_cap) +
                  " attempts (" + st.to_string() + ")");
}

}  // namespace wpc
