#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rng.hpp"
#include "word.hpp"

namespace wpc {

// <x_1, ..., x_k | r_1, ..., r_m>. Relators are stored cyclically reduced
// and non-empty; conjugating prefixes are discarded on the way in since the
// normal closure does not see them.
class Presentation {
 public:
  Presentation() = default;

  explicit Presentation(std::int32_t generators, std::vector<Word> relators = {})
      : k_(generators) {
    if (k_ < 0) throw Error(Errc::invalid_argument, "negative generator count");
    relators_.reserve(relators.size());
    for (auto& r : relators) add_relator(r);
  }

  std::int32_t generators() const noexcept { return k_; }
  std::vector<Word> const& relators() const noexcept { return relators_; }
  Word const& relator(std::size_t i) const { return relators_.at(i); }
  std::size_t size() const noexcept { return relators_.size(); }

  std::size_t total_length() const noexcept {
    std::size_t n = 0;
    for (auto const& r : relators_) n += r.size();
    return n;
  }

  // Returns the index of the new generator.
  std::int32_t add_generator() { return ++k_; }

  void add_relator(Word const& r) { relators_.push_back(normalize(r)); }

  void set_relator(std::size_t i, Word const& r) {
    check_relator_index(i);
    relators_[i] = normalize(r);
  }

  void remove_relator(std::size_t i) {
    check_relator_index(i);
    relators_.erase(relators_.begin() + static_cast<std::ptrdiff_t>(i));
  }

  void check_relator_index(std::size_t i) const {
    if (i >= relators_.size()) {
      throw Error(Errc::index_out_of_range,
                  "relator index " + std::to_string(i) + " of " +
                      std::to_string(relators_.size()));
    }
  }

  void check_generator(std::int32_t g) const {
    if (g < 1 || g > k_) {
      throw Error(Errc::index_out_of_range,
                  "generator " + std::to_string(g) + " of " + std::to_string(k_));
    }
  }

  void check_word(Word const& w) const {
    if (!w.uses_only(k_)) {
      throw Error(Errc::index_out_of_range,
                  "word uses generator " + std::to_string(w.max_generator()) +
                      " but presentation has " + std::to_string(k_));
    }
  }

  friend bool operator==(Presentation const&, Presentation const&) = default;

 private:
  Word normalize(Word const& r) const {
    check_word(r);
    Word core = cyclic_core(r);
    if (core.empty()) {
      throw Error(Errc::degenerate_relator, "relator reduces to the empty word");
    }
    return core;
  }

  std::int32_t k_ = 0;
  std::vector<Word> relators_;
};

// Closure of a relator set under inversion and cyclic permutation, sorted
// and deduplicated. Members are rotations viewed in place over the relator
// cores and their inverses, so a relator of length L costs O(L) memory
// rather than O(L^2).
class SymmetrizedSet {
 public:
  SymmetrizedSet() = default;

  explicit SymmetrizedSet(std::vector<Word> const& relators) {
    for (auto const& r : relators) {
      Word core = cyclic_core(r);
      if (core.empty()) continue;
      add_base(core);
      add_base(invert(core));
    }
    std::sort(members_.begin(), members_.end(),
              [this](Member const& a, Member const& b) { return compare(a, b) < 0; });
    members_.erase(std::unique(members_.begin(), members_.end(),
                               [this](Member const& a, Member const& b) {
                                 return compare(a, b) == 0;
                               }),
                   members_.end());
  }

  explicit SymmetrizedSet(Presentation const& p) : SymmetrizedSet(p.relators()) {}

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }

  std::size_t length(std::size_t i) const noexcept { return members_[i].length; }

  Letter letter(std::size_t i, std::size_t pos) const noexcept {
    auto const& m = members_[i];
    return bases_[m.base][m.offset + pos];
  }

  Word operator[](std::size_t i) const { return prefix(i, length(i)); }

  Word prefix(std::size_t i, std::size_t n) const {
    auto const& m = members_[i];
    auto first = bases_[m.base].begin() + static_cast<std::ptrdiff_t>(m.offset);
    return Word(std::vector<Letter>(first, first + static_cast<std::ptrdiff_t>(n)));
  }

  std::vector<Word> members() const {
    std::vector<Word> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i]);
    return out;
  }

  bool contains(Word const& w) const {
    auto it = std::lower_bound(members_.begin(), members_.end(), w,
                               [this](Member const& m, Word const& v) {
                                 return compare(m, v) < 0;
                               });
    return it != members_.end() && compare(*it, w) == 0;
  }

  std::size_t common_prefix(std::size_t i, std::size_t j) const noexcept {
    auto n = std::min(length(i), length(j));
    std::size_t d = 0;
    while (d < n && letter(i, d) == letter(j, d)) ++d;
    return d;
  }

  std::size_t max_length() const noexcept {
    std::size_t n = 0;
    for (auto const& m : members_) n = std::max<std::size_t>(n, m.length);
    return n;
  }

  friend bool operator==(SymmetrizedSet const& a, SymmetrizedSet const& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] != b[i]) return false;
    }
    return true;
  }

 private:
  struct Member {
    std::uint32_t base = 0;
    std::uint32_t offset = 0;
    std::uint32_t length = 0;
  };

  void add_base(Word const& w) {
    auto id = static_cast<std::uint32_t>(bases_.size());
    std::vector<Letter> doubled(w.begin(), w.end());
    doubled.insert(doubled.end(), w.begin(), w.end());
    bases_.push_back(std::move(doubled));
    for (std::size_t i = 0; i < w.size(); ++i) {
      members_.push_back({id, static_cast<std::uint32_t>(i),
                          static_cast<std::uint32_t>(w.size())});
    }
  }

  template <typename Seq>
  static int compare_seq(Letter const* a, std::size_t na, Seq const& b, std::size_t nb) {
    std::size_t n = std::min(na, nb);
    for (std::size_t i = 0; i < n; ++i) {
      if (a[i] != b[i]) return letter_rank(a[i]) < letter_rank(b[i]) ? -1 : 1;
    }
    return na < nb ? -1 : (na > nb ? 1 : 0);
  }

  Letter const* data(Member const& m) const noexcept {
    return bases_[m.base].data() + m.offset;
  }

  int compare(Member const& a, Member const& b) const {
    return compare_seq(data(a), a.length, data(b), b.length);
  }

  int compare(Member const& a, Word const& w) const {
    return compare_seq(data(a), a.length, w.vector(), w.size());
  }

  std::vector<std::vector<Letter>> bases_;  // each core written twice
  std::vector<Member> members_;
};

inline SymmetrizedSet symmetrize(Presentation const& p) { return SymmetrizedSet(p); }

struct Ratio {
  std::int64_t num = 1;
  std::int64_t den = 6;

  // |u| < (num/den) * |r|
  bool strictly_below(std::size_t u, std::size_t r) const noexcept {
    return den * static_cast<std::int64_t>(u) < num * static_cast<std::int64_t>(r);
  }

  std::string to_string() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

struct PieceWitness {
  Word piece;
  Word relator1;
  Word relator2;
};

struct SmallCancellationReport {
  std::size_t max_piece_length = 0;
  std::optional<PieceWitness> witness;    // a longest piece
  std::optional<PieceWitness> violation;  // first piece breaking the bound
  bool satisfies_lambda = true;
  Ratio lambda{};
  std::size_t short_relators = 0;  // members of length <= 2
};

// Longest common prefix of two distinct members. In sorted order the
// longest common prefix of a member with any other member is attained at
// one of its two neighbours.
inline SmallCancellationReport max_piece(SymmetrizedSet const& s,
                                         Ratio lambda = {}) {
  SmallCancellationReport rep;
  rep.lambda = lambda;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.length(i) <= 2) ++rep.short_relators;
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t best = 0;
    std::size_t partner = i;
    if (i > 0) {
      auto l = s.common_prefix(i, i - 1);
      if (l > best) best = l, partner = i - 1;
    }
    if (i + 1 < s.size()) {
      auto l = s.common_prefix(i, i + 1);
      if (l > best) best = l, partner = i + 1;
    }
    if (best == 0) continue;
    if (best > rep.max_piece_length) {
      rep.max_piece_length = best;
      rep.witness = PieceWitness{s.prefix(i, best), s[i], s[partner]};
    }
    if (!lambda.strictly_below(best, s.length(i))) {
      rep.satisfies_lambda = false;
      if (!rep.violation) {
        rep.violation = PieceWitness{s.prefix(i, best), s[i], s[partner]};
      }
    }
  }
  return rep;
}

inline SmallCancellationReport verify_c_prime(Presentation const& p,
                                              Ratio lambda = {}) {
  return max_piece(symmetrize(p), lambda);
}

// Path-compressed prefix tree over the sorted members of a symmetrized
// set. An internal node at depth d covers the run of members sharing a
// prefix of length d and remembers the lexicographically smallest of them
// with 2d > |r|, i.e. the preferred relator of which the path spells more
// than half. Once a run narrows to one member the node becomes a leaf and
// the rest of that member is compared letter by letter.
class DehnIndex {
 public:
  DehnIndex() : nodes_(1) {}

  explicit DehnIndex(SymmetrizedSet const& s) : set_(&s) {
    nodes_.emplace_back();
    if (!s.empty()) build(0, 0, s.size(), 0);
    max_depth_ = s.max_length();
  }

  struct Match {
    std::size_t length = 0;  // |u|
    std::int32_t member = -1;
  };

  // Longest u starting at pos that is more than half of some member.
  Match longest_at(std::vector<Letter> const& w, std::size_t pos) const {
    Match m;
    if (set_ == nullptr || set_->empty()) return m;
    std::uint32_t node = 0;
    std::size_t d = 0;
    while (true) {
      auto const& n = nodes_[node];
      if (n.leaf >= 0) {
        auto id = static_cast<std::size_t>(n.leaf);
        auto len = set_->length(id);
        std::size_t c = d;
        while (c < len && pos + c < w.size() && set_->letter(id, c) == w[pos + c]) ++c;
        if (2 * c > len) {
          m.length = c;
          m.member = n.leaf;
        }
        return m;
      }
      if (n.best >= 0 && d > 0) {
        m.length = d;
        m.member = n.best;
      }
      if (pos + d >= w.size()) return m;
      auto next = child(node, w[pos + d]);
      if (!next) return m;
      node = *next;
      ++d;
    }
  }

  std::size_t max_depth() const noexcept { return max_depth_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  SymmetrizedSet const& set() const noexcept { return *set_; }

 private:
  struct Node {
    std::vector<std::pair<Letter, std::uint32_t>> children;  // sorted by rank
    std::int32_t best = -1;
    std::int32_t leaf = -1;
  };

  // Members [lo, hi) share their first `depth` letters.
  void build(std::uint32_t node, std::size_t lo, std::size_t hi, std::size_t depth) {
    auto const& s = *set_;
    if (hi - lo == 1) {
      nodes_[node].leaf = static_cast<std::int32_t>(lo);
      return;
    }
    for (std::size_t i = lo; i < hi; ++i) {
      if (2 * depth > s.length(i) && depth <= s.length(i)) {
        nodes_[node].best = static_cast<std::int32_t>(i);
        break;
      }
    }
    std::size_t i = lo;
    while (i < hi && s.length(i) == depth) ++i;  // members ending here sort first
    while (i < hi) {
      Letter x = s.letter(i, depth);
      std::size_t j = i + 1;
      while (j < hi && s.letter(j, depth) == x) ++j;
      auto id = static_cast<std::uint32_t>(nodes_.size());
      nodes_.emplace_back();
      nodes_[node].children.emplace_back(x, id);
      build(id, i, j, depth + 1);
      i = j;
    }
  }

  std::optional<std::uint32_t> child(std::uint32_t node, Letter x) const {
    auto const& c = nodes_[node].children;
    auto it = std::lower_bound(c.begin(), c.end(), x, [](auto const& e, Letter v) {
      return letter_rank(e.first) < letter_rank(v);
    });
    if (it != c.end() && it->first == x) return it->second;
    return std::nullopt;
  }

  std::vector<Node> nodes_;
  SymmetrizedSet const* set_ = nullptr;
  std::size_t max_depth_ = 0;
};

struct DehnResult {
  Word word;
  std::size_t steps = 0;
};

// Dehn's algorithm. Scans left to right for the leftmost position carrying
// more than half of a member r = uv (longest u first, then the smallest r),
// replaces u by v^-1 and freely reduces across the seam. After a
// replacement only positions within one member length of the change can
// start a new match, so the scan resumes there. The final word is
// cyclically reduced.
inline DehnResult dehn_reduce(DehnIndex const& index, Word const& w) {
  std::vector<Letter> cur = free_reduce(w).vector();
  DehnResult res;
  auto const& set = index.set();
  std::size_t const reach = index.max_depth() > 0 ? index.max_depth() - 1 : 0;
  std::size_t start = 0;
  std::vector<Letter> next;
  while (true) {
    bool replaced = false;
    for (std::size_t pos = start; pos < cur.size(); ++pos) {
      auto m = index.longest_at(cur, pos);
      if (m.member < 0) continue;
      auto const id = static_cast<std::size_t>(m.member);
      auto const rlen = set.length(id);
      next.assign(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(pos));
      std::size_t low = next.size();
      auto push = [&](Letter x) {
        if (!next.empty() && next.back() == inverse(x)) {
          next.pop_back();
          low = std::min(low, next.size());
        } else {
          next.push_back(x);
        }
      };
      for (std::size_t i = rlen; i > m.length; --i) push(inverse(set.letter(id, i - 1)));
      std::size_t tail = pos + m.length;
      while (tail < cur.size() && !next.empty() && next.back() == inverse(cur[tail])) {
        push(cur[tail]);
        ++tail;
      }
      next.insert(next.end(), cur.begin() + static_cast<std::ptrdiff_t>(tail), cur.end());
      cur.swap(next);
      ++res.steps;
      start = low > reach ? low - reach : 0;
      replaced = true;
      break;
    }
    if (!replaced) break;
  }
  res.word = cyclic_core(Word(std::move(cur)));
  return res;
}

inline DehnResult dehn_reduce(SymmetrizedSet const& s, Word const& w) {
  DehnIndex index(s);
  return dehn_reduce(index, w);
}

struct WpVerdict {
  bool trivial = false;
  std::size_t steps = 0;
};

// A presentation together with its symmetrized set, C'(1/6) report and Dehn
// index, all computed once at construction. Immutable afterwards, so one
// instance can serve concurrent queries.
class SmallCancellationGroup {
 public:
  explicit SmallCancellationGroup(Presentation p)
      : presentation_(std::move(p)),
        set_(presentation_),
        report_(max_piece(set_)),
        index_(set_) {}

  SmallCancellationGroup(SmallCancellationGroup const& o)
      : presentation_(o.presentation_),
        set_(o.set_),
        report_(o.report_),
        index_(set_) {}

  SmallCancellationGroup& operator=(SmallCancellationGroup const&) = delete;

  Presentation const& presentation() const noexcept { return presentation_; }
  SymmetrizedSet const& symmetrized() const noexcept { return set_; }
  SmallCancellationReport const& report() const noexcept { return report_; }
  bool is_c_prime_sixth() const noexcept { return report_.satisfies_lambda; }

  DehnResult reduce(Word const& w) const { return dehn_reduce(index_, w); }

  WpVerdict word_problem(Word const& w) const {
    if (!report_.satisfies_lambda) {
      throw Error(Errc::not_small_cancellation,
                  "presentation is not C'(1/6); max piece " +
                      std::to_string(report_.max_piece_length));
    }
    presentation_.check_word(w);
    auto r = reduce(w);
    return {r.word.empty(), r.steps};
  }

 private:
  Presentation presentation_;
  SymmetrizedSet set_;
  SmallCancellationReport report_;
  DehnIndex index_;
};

inline WpVerdict word_problem(Presentation const& p, Word const& w) {
  return SmallCancellationGroup(p).word_problem(w);
}

struct PresentationParams {
  Range generators{10, 20};
  Range relators{10, 30};
  Range relator_length{12, 20};
};

inline Presentation random_presentation(Rng& rng, PresentationParams const& params) {
  if (params.generators.empty() || params.relators.empty() ||
      params.relator_length.empty() || params.generators.lo < 1 ||
      params.relator_length.lo < 1 || params.relators.lo < 0) {
    throw Error(Errc::invalid_argument, "random_presentation: bad ranges");
  }
  auto k = static_cast<std::int32_t>(params.generators.draw(rng));
  auto m = params.relators.draw(rng);
  Presentation p(k);
  for (std::int64_t i = 0; i < m; ++i) {
    auto len = static_cast<std::size_t>(params.relator_length.draw(rng));
    p.add_relator(random_reduced_word(rng, k, len));
  }
  return p;
}

// Genus-2 surface group <a,b,c,d | [a,b][c,d]>, the standard C'(1/6) example.
inline Presentation surface_group_genus2() {
  return Presentation(4, {Word::from_letters("abABcdCD")});
}

}  // namespace wpc
