// wpcrypt: key generation, encryption, decryption, attacks and statistics
// over group presentations.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <wpcrypt/adversary.hpp>
#include <wpcrypt/codec.hpp>
#include <wpcrypt/io.hpp>
#include <wpcrypt/keygen.hpp>

namespace {

using namespace wpc;

enum Exit { ok = 0, io_error = 1, retry_exhausted = 2, key_mismatch = 3, not_c_prime = 4 };

struct Failure {
  int code;
  std::string message;
};

Range read_range(nlohmann::json const& j, char const* name, Range fallback) {
  if (!j.contains(name)) return fallback;
  auto const& v = j.at(name);
  if (!v.is_array() || v.size() != 2) throw Failure{io_error, std::string(name) + ": expected [lo, hi]"};
  Range r{v[0].get<std::int64_t>(), v[1].get<std::int64_t>()};
  if (r.empty()) throw Failure{io_error, std::string(name) + ": empty range"};
  return r;
}

template <typename T>
void read_value(nlohmann::json const& j, char const* name, T& out) {
  if (j.contains(name)) out = j.at(name).get<T>();
}

ProtocolParams load_params(std::string const& path) {
  ProtocolParams p;
  if (path.empty()) return p;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
    auto& pp = p.presentation;
    pp.generators = read_range(j, "generators", pp.generators);
    pp.relators = read_range(j, "relators", pp.relators);
    pp.relator_length = read_range(j, "relator_length", pp.relator_length);
    p.introduce_length = read_range(j, "introduce_length", p.introduce_length);
    p.factors = read_range(j, "factors", p.factors);
    p.zero_length = read_range(j, "zero_length", p.zero_length);
    read_value(j, "special_factors", p.special_factors);
    read_value(j, "tietze_moves", p.tietze_moves);
    read_value(j, "introduce_probability", p.introduce_probability);
    read_value(j, "introduce_over_seed", p.introduce_over_seed);
    read_value(j, "premix_factor", p.premix_factor);
    read_value(j, "short_length", p.short_length);
    read_value(j, "target_short_fraction", p.target_short_fraction);
    read_value(j, "discard_fraction", p.discard_fraction);
    read_value(j, "min_short_fraction_public", p.min_short_fraction_public);
    read_value(j, "max_conjugator_length", p.max_conjugator_length);
    read_value(j, "retry_cap", p.retry_cap);
    read_value(j, "entry_cap", p.entry_cap);
    read_value(j, "pad_trivial", p.pad_trivial);
  } catch (nlohmann::json::exception const& e) {
    throw Failure{io_error, path + ": " + e.what()};
  }
  for (double f : {p.introduce_probability, p.target_short_fraction, p.discard_fraction,
                   p.min_short_fraction_public}) {
    if (f < 0 || f > 1) throw Failure{io_error, path + ": fractions must lie in [0, 1]"};
  }
  return p;
}

std::string histogram(Presentation const& p) {
  std::map<std::size_t, std::size_t> h;
  for (auto const& r : p.relators()) ++h[r.size()];
  std::string out;
  for (auto const& [len, n] : h) {
    if (!out.empty()) out += ' ';
    out += std::to_string(len) + ":" + std::to_string(n);
  }
  return out;
}

int cmd_keygen(std::uint64_t seed, std::string const& params_path, std::string const& pub_path,
               std::string const& priv_path) {
  auto params = load_params(params_path);
  Rng rng(seed);
  KeygenStats stats;
  KeyPair keys = [&] {
    try {
      return keygen(rng, params, &stats);
    } catch (Error const& e) {
      if (e.code() == Errc::retry_exhausted) throw Failure{retry_exhausted, e.what()};
      throw;
    }
  }();
  write_file(pub_path, format_public_key(keys.pub));
  write_file(priv_path, format_private_key(keys));

  auto const& pub = keys.pub.presentation;
  std::size_t short_rel = 0;
  for (std::size_t i = 0; i + 1 < pub.size(); ++i) {
    if (pub.relator(i).size() <= params.short_length) ++short_rel;
  }
  std::size_t const abridged = pub.size() - 1;
  std::cout << "public_generators=" << pub.generators() << "\n"
            << "public_relators=" << pub.size() << "\n"
            << "special=" << keys.pub.special << "\n"
            << "short_fraction=" << (abridged ? double(short_rel) / double(abridged) : 0.0) << "\n"
            << "public_lengths=" << histogram(pub) << "\n"
            << "private_generators=" << keys.priv.presentation().generators() << "\n"
            << "private_relators=" << keys.priv.presentation().size() << "\n"
            << "private_lengths=" << histogram(keys.priv.presentation()) << "\n"
            << "max_sub_length=" << keys.priv.psi.max_entry_length() << "\n"
            << "attempts=" << keys.attempts << "\n"
            << stats.to_string() << "\n";
  return ok;
}

int cmd_encrypt(std::string const& pub_path, std::string const& bits_text,
                std::string const& in_path, std::uint64_t seed, std::string const& out_path,
                std::string const& params_path) {
  auto params = load_params(params_path);
  auto pub = parse_public_key(read_file(pub_path));
  Bits bits = parse_bits(in_path.empty() ? bits_text : read_file(in_path));
  auto ct = Encoder(pub, params).encrypt(bits, seed);
  write_file(out_path, format_ciphertext(ct));
  std::size_t total = 0, longest = 0;
  for (auto const& w : ct.words) {
    total += w.size();
    longest = std::max(longest, w.size());
  }
  std::cout << "words=" << ct.words.size() << "\n"
            << "mean_length=" << (ct.words.empty() ? 0.0 : double(total) / double(ct.words.size()))
            << "\n"
            << "max_length=" << longest << "\n";
  return ok;
}

int cmd_decrypt(std::string const& priv_path, std::string const& in_path,
                std::string const& out_path) {
  auto file = parse_private_key(read_file(priv_path));
  auto ct = parse_ciphertext(read_file(in_path));
  for (std::size_t i = 0; i < ct.words.size(); ++i) {
    if (ct.words[i].max_generator() > file.psi.size()) {
      throw Failure{key_mismatch, "word " + std::to_string(i) + " uses generator " +
                                      std::to_string(ct.words[i].max_generator()) +
                                      " but the key has " + std::to_string(file.psi.size())};
    }
  }
  auto key = file.key();
  if (!key.group.is_c_prime_sixth()) {
    throw Failure{not_c_prime, "private presentation is not C'(1/6)"};
  }
  auto bits = bits_to_string(decrypt(key, ct));
  if (out_path.empty()) {
    std::cout << bits << "\n";
  } else {
    write_file(out_path, bits + "\n");
  }
  return ok;
}

int cmd_attack(std::string const& kind, std::string const& pub_path, std::string const& in_path,
               EnumerationBudget const& budget) {
  auto pub = parse_public_key(read_file(pub_path));
  auto ct = parse_ciphertext(read_file(in_path));
  for (std::size_t i = 0; i < ct.words.size(); ++i) {
    if (ct.words[i].max_generator() > pub.presentation.generators()) {
      throw Failure{key_mismatch, "word " + std::to_string(i) + " uses an unknown generator"};
    }
  }
  std::map<std::string, std::size_t> counts;
  auto report = [&](std::size_t i, AttackVerdict const& v) {
    std::string name = verdict_name(v.kind);
    ++counts[name];
    std::cout << "word " << i << ": " << name << "\n";
  };
  if (kind == "abelian") {
    AbelianAttack attack(pub.presentation);
    for (std::size_t i = 0; i < ct.words.size(); ++i) report(i, attack(ct.words[i]));
  } else if (kind == "nilpotent2") {
    Nilpotent2Attack attack(pub.presentation);
    for (std::size_t i = 0; i < ct.words.size(); ++i) report(i, attack(ct.words[i]));
  } else {
    for (std::size_t i = 0; i < ct.words.size(); ++i) {
      report(i, enumerate_yes(pub.presentation, ct.words[i], budget));
    }
  }
  std::cout << "words=" << ct.words.size() << "\n";
  for (auto const* name : {"DefinitelyNonTrivial", "TrivialCertified", "Inconclusive"}) {
    std::cout << name << "=" << counts[name] << "\n";
  }
  return ok;
}

int cmd_freq(std::string const& a_path, std::string const& b_path, std::size_t max_sub) {
  auto a = parse_ciphertext(read_file(a_path));
  auto b = parse_ciphertext(read_file(b_path));
  for (auto const& row : freq_test(a.words, b.words, max_sub)) {
    std::cout << "n=" << row.length << " statistic=" << row.statistic << " dof=" << row.dof
              << " cells=" << row.cells << " p=" << row.p_value << "\n";
  }
  return ok;
}

int cmd_p1(std::string const& priv_path, std::size_t length, std::size_t samples,
           std::uint64_t seed) {
  auto key = parse_private_key(read_file(priv_path)).key();
  if (!key.group.is_c_prime_sixth()) {
    throw Failure{not_c_prime, "private presentation is not C'(1/6)"};
  }
  Rng rng(seed);
  double rate = estimate_nontrivial_rate(key, length, samples, rng);
  std::cout << "length=" << length << "\nsamples=" << samples << "\nrate=" << rate << "\n";
  return ok;
}

int cmd_wp(std::string const& path, std::string const& word_text) {
  SmallCancellationGroup g(parse_presentation(read_file(path)));
  if (!g.is_c_prime_sixth()) {
    auto const& rep = g.report();
    std::string msg = "presentation is not C'(1/6): max piece " +
                      std::to_string(rep.max_piece_length);
    if (rep.violation) {
      msg += " piece=" + rep.violation->piece.to_ints() +
             " relator1=" + rep.violation->relator1.to_ints() +
             " relator2=" + rep.violation->relator2.to_ints();
    }
    throw Failure{not_c_prime, msg};
  }
  Word w = parse_word(word_text);
  if (!w.uses_only(g.presentation().generators())) {
    throw Failure{io_error, "word uses a generator outside the presentation"};
  }
  auto v = g.word_problem(w);
  std::cout << (v.trivial ? "TRIVIAL" : "NONTRIVIAL") << " steps=" << v.steps << "\n";
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Public-key encryption over group presentations"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string params_path, pub_path, priv_path, in_path, out_path, bits_text;

  auto* keygen_cmd = app.add_subcommand("keygen", "generate a key pair");
  keygen_cmd->add_option("--seed", seed, "random seed")->required();
  keygen_cmd->add_option("--params", params_path, "JSON parameter overrides");
  keygen_cmd->add_option("--pub", pub_path, "public key output")->required();
  keygen_cmd->add_option("--priv", priv_path, "private key output")->required();

  auto* enc_cmd = app.add_subcommand("encrypt", "encrypt bits with a public key");
  enc_cmd->add_option("--pub", pub_path, "public key")->required();
  auto* bits_opt = enc_cmd->add_option("--bits", bits_text, "bits as a 0/1 string");
  auto* in_opt = enc_cmd->add_option("--in", in_path, "file of 0/1 characters");
  bits_opt->excludes(in_opt);
  enc_cmd->add_option("--seed", seed, "random seed")->required();
  enc_cmd->add_option("--out", out_path, "ciphertext output")->required();
  enc_cmd->add_option("--params", params_path, "JSON parameter overrides");

  auto* dec_cmd = app.add_subcommand("decrypt", "decrypt a ciphertext with a private key");
  dec_cmd->add_option("--priv", priv_path, "private key")->required();
  dec_cmd->add_option("--in", in_path, "ciphertext")->required();
  dec_cmd->add_option("--out", out_path, "bits output (default stdout)");

  std::string attack_kind;
  EnumerationBudget budget;
  auto* atk_cmd = app.add_subcommand("attack", "run a public-key-only attack on a ciphertext");
  atk_cmd->add_option("kind", attack_kind, "abelian | nilpotent2 | enumerate")
      ->required()
      ->check(CLI::IsMember({"abelian", "nilpotent2", "enumerate"}));
  atk_cmd->add_option("--pub", pub_path, "public key")->required();
  atk_cmd->add_option("--in", in_path, "ciphertext")->required();
  atk_cmd->add_option("--max-factors", budget.max_factors, "enumeration depth");
  atk_cmd->add_option("--max-conj-len", budget.max_conj_len, "conjugator length bound");
  atk_cmd->add_option("--max-states", budget.max_states, "enumeration state cap");

  auto* stats_cmd = app.add_subcommand("stats", "ciphertext statistics");
  stats_cmd->require_subcommand(1);
  std::string a_path, b_path;
  std::size_t max_sub = 3, length = 150, samples = 1000;
  auto* freq_cmd = stats_cmd->add_subcommand("freq", "two-sample subword frequency test");
  freq_cmd->add_option("--a", a_path, "first ciphertext")->required();
  freq_cmd->add_option("--b", b_path, "second ciphertext")->required();
  freq_cmd->add_option("--max-sub", max_sub, "longest subword length")->check(CLI::Range(1, 3));
  auto* p1_cmd = stats_cmd->add_subcommand("p1", "rate of nontrivial random words");
  p1_cmd->add_option("--priv", priv_path, "private key")->required();
  p1_cmd->add_option("--length", length, "word length");
  p1_cmd->add_option("--samples", samples, "number of words");
  p1_cmd->add_option("--seed", seed, "random seed");

  std::string presentation_path, word_text;
  auto* wp_cmd = app.add_subcommand("wp", "solve the word problem with Dehn's algorithm");
  wp_cmd->add_option("--presentation", presentation_path, "wpp file")->required();
  wp_cmd->add_option("--word", word_text, "letters (aAbB...) or signed integers")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*keygen_cmd) return cmd_keygen(seed, params_path, pub_path, priv_path);
    if (*enc_cmd) {
      if (bits_opt->count() == 0 && in_opt->count() == 0) {
        throw Failure{io_error, "one of --bits or --in is required"};
      }
      return cmd_encrypt(pub_path, bits_text, in_path, seed, out_path, params_path);
    }
    if (*dec_cmd) return cmd_decrypt(priv_path, in_path, out_path);
    if (*atk_cmd) return cmd_attack(attack_kind, pub_path, in_path, budget);
    if (*freq_cmd) return cmd_freq(a_path, b_path, max_sub);
    if (*p1_cmd) return cmd_p1(priv_path, length, samples, seed);
    if (*wp_cmd) return cmd_wp(presentation_path, word_text);
  } catch (Failure const& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (Error const& e) {
    std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
    if (e.code() == Errc::missing_entry) return key_mismatch;
    if (e.code() == Errc::not_small_cancellation) return not_c_prime;
    if (e.code() == Errc::retry_exhausted) return retry_exhausted;
    return io_error;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return io_error;
  }
  return io_error;
}
