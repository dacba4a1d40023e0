// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <wpcrypt/adversary.hpp>
#include <wpcrypt/codec.hpp>
#include <wpcrypt/keygen.hpp>
#include <wpcrypt/presentation.hpp>
#include <wpcrypt/tietze.hpp>

#include "oracles.hpp"

#ifndef TEST_BIN_DIR
#define TEST_BIN_DIR "."
#endif

using namespace wpc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(char const* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<KeyPair> const& keys() {
  static std::vector<KeyPair> const out = [] {
    std::vector<KeyPair> v;
    for (std::uint64_t s = 1; s <= 20; ++s) {
      Rng rng(0xacce97 + s);
      v.push_back(keygen(rng, {}));
    }
    return v;
  }();
  return out;
}

Bits random_bits(Rng& rng, std::size_t n) {
  Bits b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = rng.coin();
  return b;
}

Outcome round_trip() {
  auto t0 = Clock::now();
  std::size_t errors = 0, total = 0, one_errors = 0, ones = 0;
  for (std::size_t i = 0; i < 5; ++i) {
    auto const& key = keys()[i];
    Rng rng(500 + i);
    Bits bits = random_bits(rng, 1000);
    auto ct = encrypt(key.pub, bits, 9000 + i);
    auto back = decrypt(key.priv, ct);
    for (std::size_t j = 0; j < bits.size(); ++j) {
      ++total;
      if (bits[j]) ++ones;
      if (bits[j] != back[j]) {
        ++errors;
        if (bits[j]) ++one_errors;
      }
    }
  }
  double secs = seconds_since(t0);
  double rate = static_cast<double>(errors) / static_cast<double>(total);
  return {rate <= 0.01 && one_errors == 0 && secs <= 300,
          fmt("bit errors %zu/%zu (%.3f%%), errors on 1-bits %zu/%zu, %.1fs", errors, total,
              100 * rate, one_errors, ones, secs)};
}

Outcome expansion() {
  auto const& key = keys()[0];
  Rng rng(77);
  Bits bits = random_bits(rng, 1000);
  auto ct = encrypt(key.pub, bits, 4321);
  double sum = 0, sum1 = 0, sum0 = 0;
  std::size_t n1 = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    double len = static_cast<double>(ct.words[i].size());
    sum += len;
    (bits[i] ? sum1 : sum0) += len;
    n1 += bits[i];
  }
  double mean = sum / 1000.0;
  return {mean >= 100 && mean <= 250,
          fmt("mean length %.1f (1-words %.1f, 0-words %.1f)", mean,
              n1 ? sum1 / static_cast<double>(n1) : 0.0,
              n1 < 1000 ? sum0 / static_cast<double>(1000 - n1) : 0.0)};
}

std::vector<Word> canonical(Presentation const& p) {
  std::vector<Word> out;
  for (auto const& r : p.relators()) out.push_back(cyclic_canonical(r));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Word> canonical(std::vector<Word> v) {
  for (auto& r : v) r = cyclic_canonical(r);
  std::sort(v.begin(), v.end());
  return v;
}

Outcome tietze_chain() {
  std::vector<std::string> failed;
  TietzeSession s(Presentation(3, {"aabbb"_w, "abbAc"_w}));
  s.break_relator(0, 0);
  if (canonical(s.current()) != canonical({"dAA"_w, "dbbb"_w, "abbAc"_w})) failed.push_back("stage 2");
  s.introduce("abb"_w);
  RelatorMove m;
  m.kind = RelatorMove::Kind::multiply;
  m.i = 1;
  m.j = 3;
  m.on_left = true;
  s.relator_move(m);
  if (canonical(s.current()) != canonical({"eBBA"_w, "dAA"_w, "dbbb"_w, "eAc"_w})) {
    failed.push_back("stage 3");
  }
  s.nielsen({NielsenMove::Kind::left_multiply, 5, 1, 1});
  if (canonical(s.current()) != canonical({"eBB"_w, "dAA"_w, "dbbb"_w, "aeAc"_w})) {
    failed.push_back("stage 4");
  }
  if (s.current().generators() != 5 || s.psi()[4] != "aa"_w || s.psi()[5] != "bb"_w) {
    failed.push_back("substitution");
  }
  std::string d = "4 presentations, final <x1..x5 | ";
  for (std::size_t i = 0; i < s.current().size(); ++i) {
    d += (i ? ", " : "") + s.current().relator(i).to_string();
  }
  d += ">";
  for (auto const& f : failed) d += "; mismatch at " + f;
  return {failed.empty(), d};
}

Outcome dehn_suite() {
  SmallCancellationGroup g(surface_group_genus2());
  auto members = g.symmetrized().members();
  std::set<oracle::Seq> set;
  for (auto const& m : members) set.insert(m.vector());
  Rng rng(44);
  std::size_t bad = 0, steps_bad = 0, forms = 0;
  for (auto const& r : members) {
    ++forms;
    auto v = g.word_problem(r);
    if (!v.trivial) ++bad;
    if (v.steps > r.size()) ++steps_bad;
  }
  for (int t = 0; t < 200; ++t) {
    Word w;
    for (std::size_t f = 0, n = 1 + rng.below(3); f < n; ++f) {
      Word c = random_reduced_word(rng, 4, rng.below(4));
      w = w * invert(c) * members[rng.below(members.size())] * c;
    }
    auto v = g.word_problem(w);
    if (!v.trivial) ++bad;
    if (v.steps > free_reduce(w).size()) ++steps_bad;
  }
  if (g.word_problem("abAB"_w).trivial) ++bad;
  int stalled = 0;
  while (stalled < 200) {
    Word w = random_reduced_word(rng, 4, 20);
    auto r = g.reduce(w);
    if (r.steps > w.size()) ++steps_bad;
    if (r.word.empty()) continue;
    ++stalled;
    if (g.word_problem(w).trivial || oracle::dehn(set, w.vector()).empty()) ++bad;
  }
  return {forms == 16 && bad == 0 && steps_bad == 0,
          fmt("%zu symmetrized forms, wrong verdicts %zu, step-bound violations %zu", forms, bad,
              steps_bad)};
}

Outcome piece_oracle() {
  Rng rng(555);
  std::size_t disagreements = 0;
  for (int t = 0; t < 100; ++t) {
    auto k = static_cast<std::int32_t>(rng.uniform(1, 4));
    std::vector<Word> rels;
    std::size_t total = 0;
    while (total < 40) {
      Word r = cyclic_core(random_reduced_word(rng, k, 1 + rng.below(std::min<std::size_t>(12, 40 - total))));
      if (r.empty()) continue;
      total += r.size();
      rels.push_back(r);
      if (rng.below(3) == 0) break;
    }
    std::vector<oracle::Seq> raw;
    for (auto const& r : rels) raw.push_back(r.vector());
    if (max_piece(SymmetrizedSet(rels)).max_piece_length !=
        oracle::max_piece(oracle::symmetrize(raw))) {
      ++disagreements;
    }
  }
  return {disagreements == 0, fmt("100 presentations, %zu discrepancies", disagreements)};
}

Outcome key_soundness() {
  std::size_t bad = 0, relators = 0, not_c6 = 0, attempts = 0;
  for (auto const& key : keys()) {
    attempts += key.attempts;
    if (!verify_c_prime(key.priv.presentation()).satisfies_lambda) ++not_c6;
    for (auto const& r : key.pub.presentation.relators()) {
      ++relators;
      if (!key.priv.group.word_problem(apply_substitution(key.priv.psi, r)).trivial) ++bad;
    }
  }
  return {bad == 0 && not_c6 == 0,
          fmt("20 keys, %zu public relators, %zu not trivial, %zu private presentations "
              "failing C'(1/6), %zu pipeline runs",
              relators, bad, not_c6, attempts)};
}

Outcome quotient_attacks() {
  auto const& key = keys()[0];
  AbelianAttack ab(key.pub.presentation);
  Nilpotent2Attack nil(key.pub.presentation);
  Rng rng(8);
  Bits bits = random_bits(rng, 500);
  auto ct = encrypt(key.pub, bits, 808);
  std::size_t ab_flag = 0, nil_flag = 0;
  for (auto const& w : ct.words) {
    if (ab(w).kind != AttackVerdict::Kind::inconclusive) ++ab_flag;
    if (nil(w).kind != AttackVerdict::Kind::inconclusive) ++nil_flag;
  }
  std::size_t caught = 0;
  for (int t = 0; t < 500; ++t) {
    Word w = random_reduced_word(rng, key.pub.presentation.generators(), 150);
    if (ab(w).kind == AttackVerdict::Kind::definitely_nontrivial) ++caught;
  }
  return {ab_flag == 0 && nil_flag == 0 && caught >= 450,
          fmt("ciphertext words flagged: abelian %zu/500, class-2 %zu/500; random words caught "
              "by abelian %zu/500",
              ab_flag, nil_flag, caught)};
}

Outcome frequency() {
  std::size_t passing = 0;
  std::string d;
  for (std::size_t i = 0; i < 5; ++i) {
    auto const& key = keys()[i];
    Encoder enc(key.pub);
    std::vector<Word> ones, zeros;
    for (std::uint64_t j = 0; j < 1000; ++j) {
      Rng a = Rng::derive(1000 + i, 2 * j);
      Rng b = Rng::derive(1000 + i, 2 * j + 1);
      ones.push_back(enc.encode_one(a));
      zeros.push_back(enc.encode_zero(b));
    }
    bool ok = true;
    d += i ? "; key " : "key ";
    d += std::to_string(i + 1) + ":";
    for (auto const& row : freq_test(ones, zeros, 3)) {
      d += fmt(" p%zu=%.3g", row.length, row.p_value);
      if (!(row.p_value > 0.01)) ok = false;
    }
    if (ok) ++passing;
  }
  return {passing >= 4, fmt("%zu/5 keys pass; ", passing) + d};
}

Outcome nontriviality() {
  std::string d;
  bool ok = true;
  for (std::size_t i = 0; i < 5; ++i) {
    Rng rng(60 + i);
    double rate = estimate_nontrivial_rate(keys()[i].priv, 150, 1000, rng);
    d += fmt("%s%.3f", i ? ", " : "rates ", rate);
    if (rate < 0.999) ok = false;
  }
  return {ok, d};
}

Outcome property_suites() {
  std::vector<std::string> suites{"test_words", "test_presentations", "test_tietze",
                                  "test_lattice", "test_adversary"};
  auto t0 = Clock::now();
  std::size_t failed = 0;
  for (auto const& s : suites) {
    std::string cmd = std::string("\"") + TEST_BIN_DIR + "/" + s + "\" \"[properties]\" > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) ++failed;
  }
  double secs = seconds_since(t0);
  return {failed == 0 && secs < 60,
          fmt("%zu suites, %zu failing, %.1fs", suites.size(), failed, secs)};
}

}  // namespace

int main() {
  std::vector<std::pair<char const*, std::function<Outcome()>>> criteria{
      {"round-trip correctness", round_trip},
      {"ciphertext expansion", expansion},
      {"golden Tietze chain", tietze_chain},
      {"Dehn oracle suite", dehn_suite},
      {"piece length vs brute force", piece_oracle},
      {"key soundness", key_soundness},
      {"quotient-attack futility", quotient_attacks},
      {"frequency test", frequency},
      {"nontriviality rate", nontriviality},
      {"property suites", property_suites},
  };
  auto t0 = Clock::now();
  std::size_t runs = 0;
  for (auto const& k : keys()) runs += k.attempts;
  std::printf("generated %zu keys in %.1fs (%zu pipeline runs)\n", keys().size(),
              seconds_since(t0), runs);
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      o = criteria[i].second();
    } catch (std::exception const& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2zu %-28s %s  %s (%.1fs)\n", i + 1, criteria[i].first,
                o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
