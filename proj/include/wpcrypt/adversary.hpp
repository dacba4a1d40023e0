#pragma once

// What an eavesdropper holding only the public key can try: quotient tests
// (abelian and free class-2 nilpotent), bounded enumeration of the normal
// closure, and statistics on ciphertext corpora.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "codec.hpp"
#include "error.hpp"
#include "keygen.hpp"
#include "lattice.hpp"
#include "presentation.hpp"
#include "rng.hpp"
#include "word.hpp"

namespace wpc {

struct AttackVerdict {
  enum class Kind { definitely_nontrivial, trivial_certified, inconclusive };
  Kind kind = Kind::inconclusive;
  std::string evidence;

  bool nontrivial() const noexcept { return kind == Kind::definitely_nontrivial; }
  bool trivial() const noexcept { return kind == Kind::trivial_certified; }
  bool inconclusive() const noexcept { return kind == Kind::inconclusive; }
};

inline char const* verdict_name(AttackVerdict::Kind k) {
  switch (k) {
    case AttackVerdict::Kind::definitely_nontrivial: return "DefinitelyNonTrivial";
    case AttackVerdict::Kind::trivial_certified: return "TrivialCertified";
    case AttackVerdict::Kind::inconclusive: return "Inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Abelianization

class AbelianAttack {
 public:
  explicit AbelianAttack(Presentation const& pub)
      : k_(pub.generators()), lattice_(static_cast<std::size_t>(pub.generators())) {
    for (auto const& r : pub.relators()) lattice_.add(exponent_vector(r, k_));
  }

  IntegerLattice const& lattice() const noexcept { return lattice_; }

  AttackVerdict operator()(Word const& w) const {
    auto e = exponent_vector(w, k_);
    if (lattice_.contains(e)) return {AttackVerdict::Kind::inconclusive, "exponent vector in relator lattice"};
    return {AttackVerdict::Kind::definitely_nontrivial,
            "exponent vector outside relator lattice"};
  }

 private:
  std::int32_t k_;
  IntegerLattice lattice_;
};

inline AttackVerdict abelian_attack(Presentation const& pub, Word const& w) {
  return AbelianAttack(pub)(w);
}

// ---------------------------------------------------------------------------
// Free class-2 nilpotent quotient

// Index of x_i ^ x_j (0-based i < j) in the flattened upper triangle.
inline std::size_t pair_index(std::size_t i, std::size_t j, std::size_t k) noexcept {
  return i * k - i * (i + 1) / 2 + (j - i - 1);
}

struct Class2Coords {
  std::vector<std::int64_t> e;  // length k
  std::vector<std::int64_t> c;  // length k(k-1)/2, c_ij at pair_index(i, j)

  friend bool operator==(Class2Coords const&, Class2Coords const&) = default;
};

// w = x_1^e_1 ... x_k^e_k prod_{i<j} [x_i, x_j]^c_ij modulo weight-3
// commutators, collected in one left-to-right pass.
inline Class2Coords class2_coords(Word const& w, std::int32_t k) {
  if (k < 0) throw Error(Errc::invalid_argument, "negative generator count");
  auto const n = static_cast<std::size_t>(k);
  Class2Coords out{std::vector<std::int64_t>(n, 0),
                   std::vector<std::int64_t>(n * (n - (n > 0)) / 2, 0)};
  for (Letter x : w) {
    auto g = generator_of(x);
    if (g > k) {
      throw Error(Errc::index_out_of_range,
                  "generator " + std::to_string(g) + " of " + std::to_string(k));
    }
    auto i = static_cast<std::size_t>(g - 1);
    std::int64_t eps = x > 0 ? 1 : -1;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (out.e[j] != 0) out.c[pair_index(i, j, n)] -= eps * out.e[j];
    }
    out.e[i] += eps;
  }
  return out;
}

// phi = 2c + (e_i e_j). Unlike c, phi is additive on products up to the
// antisymmetric term e_u ^ e_v, so the normal closure of R lands inside the
// lattice spanned by (e(r), phi(r)) and (0, e(r) ^ x_j).
inline std::vector<std::int64_t> class2_phi(Class2Coords const& cc) {
  auto const n = cc.e.size();
  std::vector<std::int64_t> phi(cc.c.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      auto idx = pair_index(i, j, n);
      phi[idx] = 2 * cc.c[idx] + cc.e[i] * cc.e[j];
    }
  }
  return phi;
}

// Membership of (e(w), phi(w)) in the relator lattice. The exponent matrix
// E of the relators is diagonalized, P E Q = D; in the basis f_a given by
// the rows of Q^-1 the cross-term lattice span{e(r) ^ x_j} is the direct
// sum of g_ab Z (f_a ^ f_b) with g_ab = gcd(d_a, d_b) (d = 0 past the rank),
// so only coordinates with g_ab != 1 need to be looked at.
class Nilpotent2Attack {
 public:
  explicit Nilpotent2Attack(Presentation const& pub)
      : k_(static_cast<std::size_t>(pub.generators())), m_(pub.size()) {
    IntMatrix ex;
    for (auto const& r : pub.relators()) ex.push_back(to_integers(exponent_vector(r, pub.generators())));
    diag_ = diagonalize(ex, k_);
    rank_ = diag_.rank;

    auto dval = [&](std::size_t a) -> Integer {
      return a < rank_ ? Integer(abs(diag_.d[a])) : Integer(0);
    };
    for (std::size_t a = 0; a < k_; ++a) {
      if (dval(a) != 1) support_.push_back(a);
    }
    for (std::size_t x = 0; x < support_.size(); ++x) {
      for (std::size_t y = x + 1; y < support_.size(); ++y) {
        Integer g = gcd(dval(support_[x]), dval(support_[y]));
        if (g == 1) continue;
        (g == 0 ? exact_ : mod_).push_back({x, y});
        if (g != 0) moduli_.push_back(g);
      }
    }

    q_support_.assign(k_, IntVector(support_.size()));
    fast_ = true;
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t b = 0; b < support_.size(); ++b) {
        q_support_[i][b] = diag_.q[i][support_[b]];
        if (abs(q_support_[i][b]) > fast_bound) fast_ = false;
      }
    }
    if (fast_) {
      q_small_.assign(k_, std::vector<std::int64_t>(support_.size()));
      for (std::size_t i = 0; i < k_; ++i) {
        for (std::size_t b = 0; b < support_.size(); ++b) {
          q_small_[i][b] = static_cast<std::int64_t>(q_support_[i][b]);
        }
      }
    }

    for (auto const& r : pub.relators()) rel_phi_.push_back(transformed_phi(r));

    // Kernel of the exponent map: rows rank..m-1 of P.
    for (std::size_t l = rank_; l < m_; ++l) {
      IntVector x(exact_.size() + mod_.size());
      for (std::size_t i = 0; i < m_; ++i) {
        if (diag_.p[l][i] == 0) continue;
        for (std::size_t t = 0; t < x.size(); ++t) x[t] += diag_.p[l][i] * rel_phi_[i][t];
      }
      kernel_phi_.push_back(std::move(x));
    }

    std::size_t const nk = kernel_phi_.size();
    exact_lattice_ = IntegerLattice(exact_.size() + nk);
    for (std::size_t l = 0; l < nk; ++l) {
      IntVector row(exact_.size() + nk);
      for (std::size_t t = 0; t < exact_.size(); ++t) row[t] = kernel_phi_[l][t];
      row[exact_.size() + l] = 1;
      exact_lattice_.add(std::move(row));
    }
    mod_lattice_ = IntegerLattice(mod_.size());
    for (std::size_t t = 0; t < mod_.size(); ++t) {
      IntVector row(mod_.size());
      row[t] = moduli_[t];
      mod_lattice_.add(std::move(row));
    }
    for (auto const& [c, row] : exact_lattice_.rows()) {
      if (c < exact_.size()) continue;
      // Combination of kernel vectors with vanishing exact part.
      IntVector y(row.begin() + static_cast<std::ptrdiff_t>(exact_.size()), row.end());
      mod_lattice_.add(mod_part(y));
    }
  }

  std::size_t rank() const noexcept { return rank_; }
  std::size_t constrained_coordinates() const noexcept { return exact_.size() + mod_.size(); }

  AttackVerdict operator()(Word const& w) const {
    auto cc = class2_coords(w, static_cast<std::int32_t>(k_));
    // e(w) = t^T E  <=>  z D = e(w) Q with t^T = z P.
    IntVector h(k_);
    for (std::size_t a = 0; a < k_; ++a) {
      for (std::size_t i = 0; i < k_; ++i) {
        if (cc.e[i] != 0 && diag_.q[i][a] != 0) h[a] += cc.e[i] * diag_.q[i][a];
      }
    }
    IntVector t0(m_);
    for (std::size_t a = 0; a < k_; ++a) {
      if (a < rank_) {
        if (h[a] % diag_.d[a] != 0) return abelian_failure();
        Integer z = h[a] / diag_.d[a];
        if (z == 0) continue;
        for (std::size_t i = 0; i < m_; ++i) t0[i] += z * diag_.p[a][i];
      } else if (h[a] != 0) {
        return abelian_failure();
      }
    }

    IntVector v = transformed_phi_of(cc);
    for (std::size_t i = 0; i < m_; ++i) {
      if (t0[i] == 0) continue;
      for (std::size_t t = 0; t < v.size(); ++t) v[t] -= t0[i] * rel_phi_[i][t];
    }

    std::size_t const nk = kernel_phi_.size();
    IntVector ex(exact_.size() + nk);
    for (std::size_t t = 0; t < exact_.size(); ++t) ex[t] = v[t];
    if (!exact_lattice_.reduce(ex, exact_.size())) return class2_failure();
    IntVector y(nk);
    for (std::size_t l = 0; l < nk; ++l) y[l] = -ex[exact_.size() + l];
    IntVector rest = mod_part(y);
    for (std::size_t t = 0; t < mod_.size(); ++t) rest[t] = v[exact_.size() + t] - rest[t];
    if (!mod_lattice_.contains(rest)) return class2_failure();
    return {AttackVerdict::Kind::inconclusive, "class-2 coordinates in relator lattice"};
  }

 private:
  static constexpr std::int64_t fast_bound = std::int64_t{1} << 24;

  struct Pair {
    std::size_t x, y;  // positions in support_
  };

  static AttackVerdict abelian_failure() {
    return {AttackVerdict::Kind::definitely_nontrivial,
            "exponent vector outside relator lattice"};
  }
  static AttackVerdict class2_failure() {
    return {AttackVerdict::Kind::definitely_nontrivial,
            "class-2 coordinates outside relator lattice"};
  }

  IntVector mod_part(IntVector const& y) const {
    IntVector out(mod_.size());
    for (std::size_t l = 0; l < y.size(); ++l) {
      if (y[l] == 0) continue;
      for (std::size_t t = 0; t < mod_.size(); ++t) {
        out[t] += y[l] * kernel_phi_[l][exact_.size() + t];
      }
    }
    return out;
  }

  IntVector transformed_phi(Word const& w) const {
    return transformed_phi_of(class2_coords(w, static_cast<std::int32_t>(k_)));
  }

  // Entries (a, b) of Q^T Phi Q on the constrained pairs, exact then mod.
  IntVector transformed_phi_of(Class2Coords const& cc) const {
    auto phi = class2_phi(cc);
    std::size_t const ns = support_.size();
    IntVector out(exact_.size() + mod_.size());
    if (ns == 0) return out;
    auto entry = [&](std::size_t i, std::size_t j) -> std::int64_t {
      if (i == j) return 0;
      return i < j ? phi[pair_index(i, j, k_)] : -phi[pair_index(j, i, k_)];
    };
    bool small = fast_;
    for (auto x : phi) {
      if (x > fast_bound || x < -fast_bound) small = false;
    }
    auto emit = [&](auto const& full) {
      std::size_t t = 0;
      for (auto const& p : exact_) out[t++] = full(p.x, p.y);
      for (auto const& p : mod_) out[t++] = full(p.x, p.y);
    };
    if (small) {
      using wide = __int128;
      std::vector<std::vector<wide>> tmat(k_, std::vector<wide>(ns, 0));
      for (std::size_t i = 0; i < k_; ++i) {
        for (std::size_t j = 0; j < k_; ++j) {
          auto f = entry(i, j);
          if (f == 0) continue;
          for (std::size_t b = 0; b < ns; ++b) tmat[i][b] += static_cast<wide>(f) * q_small_[j][b];
        }
      }
      emit([&](std::size_t a, std::size_t b) {
        wide s = 0;
        for (std::size_t i = 0; i < k_; ++i) {
          if (q_small_[i][a] != 0) s += static_cast<wide>(q_small_[i][a]) * tmat[i][b];
        }
        return from_wide(s);
      });
    } else {
      IntMatrix tmat(k_, IntVector(ns));
      for (std::size_t i = 0; i < k_; ++i) {
        for (std::size_t j = 0; j < k_; ++j) {
          auto f = entry(i, j);
          if (f == 0) continue;
          for (std::size_t b = 0; b < ns; ++b) tmat[i][b] += f * q_support_[j][b];
        }
      }
      emit([&](std::size_t a, std::size_t b) {
        Integer s = 0;
        for (std::size_t i = 0; i < k_; ++i) {
          if (q_support_[i][a] != 0) s += q_support_[i][a] * tmat[i][b];
        }
        return s;
      });
    }
    return out;
  }

  static Integer from_wide(__int128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                              : static_cast<unsigned __int128>(v);
    Integer r = static_cast<std::uint64_t>(u >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(u);
    return neg ? Integer(-r) : r;
  }

  std::size_t k_;
  std::size_t m_;
  Diagonalization diag_;
  std::size_t rank_ = 0;
  std::vector<std::size_t> support_;  // f-indices with d != 1
  std::vector<Pair> exact_;           // g_ab = 0
  std::vector<Pair> mod_;             // g_ab >= 2
  std::vector<Integer> moduli_;
  IntMatrix q_support_;
  std::vector<std::vector<std::int64_t>> q_small_;
  bool fast_ = false;
  std::vector<IntVector> rel_phi_;
  std::vector<IntVector> kernel_phi_;
  IntegerLattice exact_lattice_;
  IntegerLattice mod_lattice_;
};

inline AttackVerdict nilpotent2_attack(Presentation const& pub, Word const& w) {
  return Nilpotent2Attack(pub)(w);
}

// ---------------------------------------------------------------------------
// Enumeration of the normal closure

struct EnumerationBudget {
  std::size_t max_factors = 3;
  std::size_t max_conj_len = 1;
  std::size_t max_states = 200000;
};

// All reduced words of length <= n over k generators, shortest first.
inline std::vector<Word> words_up_to(std::int32_t k, std::size_t n) {
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= n; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (std::int32_t g = 1; g <= k; ++g) {
        for (Letter x : {g, -g}) {
          if (!out[i].empty() && out[i].back() == inverse(x)) continue;
          std::vector<Letter> v = out[i].vector();
          v.push_back(x);
          out.emplace_back(std::move(v));
        }
      }
    }
    begin = end;
  }
  return out;
}

// Breadth-first search over products of conjugated relators; a hit is a
// certificate of triviality. States are identified up to cyclic permutation
// and inversion.
inline AttackVerdict enumerate_yes(Presentation const& pub, Word const& w,
                                   EnumerationBudget const& budget = {}) {
  Word const target = free_reduce(w);
  if (target.empty()) return {AttackVerdict::Kind::trivial_certified, "empty word"};
  Word const target_key = cyclic_canonical(target);

  std::vector<Word> factors;
  auto const members = SymmetrizedSet(pub).members();
  auto const conj = words_up_to(pub.generators(), budget.max_conj_len);
  for (auto const& r : members) {
    for (auto const& c : conj) factors.push_back(invert(c) * r * c);
  }

  struct State {
    Word word;
    std::size_t parent;
    std::size_t factor;
  };
  std::vector<State> states{{Word{}, 0, 0}};
  std::unordered_map<Word, std::size_t> seen{{Word{}, 0}};
  auto derivation = [&](std::size_t s, std::size_t last) {
    std::vector<std::string> parts{factors[last].to_string()};
    while (s != 0) {
      parts.push_back(factors[states[s].factor].to_string());
      s = states[s].parent;
    }
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      if (!out.empty()) out += " * ";
      out += *it;
    }
    return out;
  };

  std::size_t begin = 0;
  for (std::size_t depth = 1; depth <= budget.max_factors; ++depth) {
    std::size_t const end = states.size();
    for (std::size_t s = begin; s < end; ++s) {
      for (std::size_t f = 0; f < factors.size(); ++f) {
        Word next = states[s].word * factors[f];
        Word key = cyclic_canonical(next);
        if (key == target_key) {
          return {AttackVerdict::Kind::trivial_certified,
                  "conjugate of " + derivation(s, f) + " (" + std::to_string(depth) +
                      " factors)"};
        }
        if (seen.count(key)) continue;
        if (states.size() >= budget.max_states) {
          return {AttackVerdict::Kind::inconclusive,
                  "budget exhausted after " + std::to_string(states.size()) + " states"};
        }
        seen.emplace(std::move(key), states.size());
        states.push_back({std::move(next), s, f});
      }
    }
    begin = end;
  }
  return {AttackVerdict::Kind::inconclusive,
          "not found in " + std::to_string(states.size()) + " states"};
}

// ---------------------------------------------------------------------------
// Statistics

struct FrequencyRow {
  std::size_t length = 0;  // subword length n
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 1;
  std::size_t cells = 0;
};

// Two-sample chi-square on n-letter subword counts, n = 1..max_sub. Cells
// with an expected count below 5 in either corpus are pooled.
inline std::vector<FrequencyRow> freq_test(std::vector<Word> const& a,
                                           std::vector<Word> const& b,
                                           std::size_t max_sub = 3) {
  if (a.empty() || b.empty()) throw Error(Errc::empty_corpus, "frequency test needs two corpora");
  if (max_sub < 1) throw Error(Errc::invalid_argument, "max_sub must be at least 1");
  std::vector<FrequencyRow> out;
  for (std::size_t n = 1; n <= max_sub; ++n) {
    std::map<std::vector<Letter>, std::pair<double, double>> counts;
    double na = 0, nb = 0;
    auto tally = [&](std::vector<Word> const& corpus, bool first, double& total) {
      for (auto const& w : corpus) {
        for (std::size_t i = 0; i + n <= w.size(); ++i) {
          std::vector<Letter> sub(w.begin() + static_cast<std::ptrdiff_t>(i),
                                  w.begin() + static_cast<std::ptrdiff_t>(i + n));
          auto& c = counts[sub];
          (first ? c.first : c.second) += 1;
          total += 1;
        }
      }
    };
    tally(a, true, na);
    tally(b, false, nb);
    FrequencyRow row;
    row.length = n;
    double const total = na + nb;
    if (na == 0 || nb == 0) {
      // One corpus has no n-letter subwords at all: no chi-square exists, and
      // reporting p = 1 would pass corpora that differ in the plainest way.
      if (na != nb) row.p_value = std::numeric_limits<double>::quiet_NaN();
      out.push_back(row);
      continue;
    }
    std::vector<std::pair<double, double>> cells;
    std::pair<double, double> other{0, 0};
    for (auto const& [sub, c] : counts) {
      double pooled = c.first + c.second;
      if (std::min(pooled * na / total, pooled * nb / total) < 5) {
        other.first += c.first;
        other.second += c.second;
      } else {
        cells.push_back(c);
      }
    }
    if (other.first + other.second > 0) cells.push_back(other);
    for (auto const& c : cells) {
      double pooled = c.first + c.second;
      double ea = pooled * na / total;
      double eb = pooled * nb / total;
      row.statistic += (c.first - ea) * (c.first - ea) / ea + (c.second - eb) * (c.second - eb) / eb;
    }
    row.cells = cells.size();
    row.dof = cells.size() > 0 ? cells.size() - 1 : 0;
    row.p_value = row.dof == 0 ? 1.0
                               : boost::math::gamma_q(static_cast<double>(row.dof) / 2,
                                                      row.statistic / 2);
    out.push_back(row);
  }
  return out;
}

// Fraction of uniform reduced words of length n over the public generators
// that the private key declares nontrivial.
inline double estimate_nontrivial_rate(PrivateKey const& priv, std::size_t n,
                                       std::size_t samples, Rng& rng) {
  if (samples == 0) return 0;
  std::size_t hits = 0;
  std::int32_t const k = priv.psi.size();
  for (std::size_t s = 0; s < samples; ++s) {
    if (!decrypt_word(priv, random_reduced_word(rng, k, n))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace wpc
