#include <catch_amalgamated.hpp>

#include <wpcrypt/codec.hpp>
#include <wpcrypt/keygen.hpp>
#include <wpcrypt/lattice.hpp>

using namespace wpc;

namespace {

KeyPair const& shared_key() {
  static KeyPair const key = [] {
    Rng rng(4242);
    return keygen(rng, {});
  }();
  return key;
}

// Shuffle replacements move the exponent vector by relator vectors only.
IntegerLattice relator_lattice(Presentation const& p) {
  IntegerLattice l(static_cast<std::size_t>(p.generators()));
  for (auto const& r : p.relators()) l.add(to_integers(exponent_vector(r, p.generators())));
  return l;
}

PublicKey toy_key() {
  // One short relator x1 x2 x3 x4 and a long one to keep it honest.
  return PublicKey{Presentation(4, {"abcd"_w, "aabbccddaBcD"_w}), 1};
}

}  // namespace

TEST_CASE("shuffle replaces two-letter pieces by the complement inverse", "[codec]") {
  Encoder enc(toy_key());
  Rng rng(1);
  CHECK(enc.shuffle_round("ab"_w, 0, rng) == "DC"_w);
  CHECK(enc.shuffle_round("bc"_w, 0, rng) == "AD"_w);
  // Scan continues after the replacement: "abab" -> DC DC.
  CHECK(enc.shuffle_round("abab"_w, 0, rng) == "DCDC"_w);
  // Pieces of the long relator are left alone.
  CHECK(enc.shuffle_round("aa"_w, 0, rng) == "aa"_w);
  CHECK(enc.shuffle("abcab"_w, 0, 5, rng) == "abcab"_w);
}

TEST_CASE("shuffle preserves the element of the public group", "[codec]") {
  auto const& key = shared_key();
  Encoder enc(key.pub);
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    Word w = random_reduced_word(rng, enc.generators(), 20 + rng.below(40));
    Word s = enc.shuffle(w, 1 + rng.below(6), 8, rng);
    CHECK(is_reduced(s));
    // Same element of the public group, hence the same image in the private one.
    CHECK(decrypt_word(key.priv, s * invert(w)));
  }
}

TEST_CASE("pairs per round", "[codec]") {
  Encoder enc(toy_key());
  CHECK(enc.pairs_for(5) == 3);
  CHECK(enc.pairs_for(12) == 6);
  CHECK(enc.pairs_for(0) == 0);
}

TEST_CASE("encode_one is always trivial with a relator-lattice exponent vector", "[codec]") {
  auto const& key = shared_key();
  Encoder enc(key.pub);
  auto k = enc.generators();
  auto lattice = relator_lattice(key.pub.presentation);
  for (std::uint64_t i = 0; i < 500; ++i) {
    Rng rng = Rng::derive(77, i);
    Word w = enc.encode_one(rng);
    CHECK(w.uses_only(k));
    CHECK(is_reduced(w));
    CHECK(lattice_membership(lattice, to_integers(exponent_vector(w, k))));
    CHECK(decrypt_word(key.priv, w));
  }
}

TEST_CASE("encode_zero has a relator-lattice exponent vector and decrypts to 0", "[codec]") {
  auto const& key = shared_key();
  Encoder enc(key.pub);
  auto k = enc.generators();
  auto lattice = relator_lattice(key.pub.presentation);
  int zeros = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng = Rng::derive(78, i);
    Word w = enc.encode_zero(rng);
    CHECK(lattice_membership(lattice, to_integers(exponent_vector(w, k))));
    if (!decrypt_word(key.priv, w)) ++zeros;
  }
  CHECK(zeros >= 990);
}

TEST_CASE("the unshuffled 0-word has length 2l + 2", "[codec]") {
  auto const& key = shared_key();
  auto k = key.pub.presentation.generators();
  Word x{key.pub.special};
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    Word u = random_commutator_word(rng, k, {65, 85});
    Word w = commutator(x, u);
    bool touches = generator_of(u.front()) == x[0] || generator_of(u.back()) == x[0];
    if (!touches) CHECK(w.size() == 2 * u.size() + 2);
    CHECK(w.size() <= 2 * u.size() + 2);
  }
}

TEST_CASE("encrypt and decrypt", "[codec]") {
  auto const& key = shared_key();
  CHECK(encrypt(key.pub, {}, 1).words.empty());
  CHECK(encrypt(key.pub, parse_bits("10"), 1).words.size() == 2);
  CHECK(decrypt(key.priv, Ciphertext{}).empty());

  Bits bits = parse_bits("1100101001110001");
  auto ct = encrypt(key.pub, bits, 99);
  CHECK(ct == encrypt(key.pub, bits, 99));
  CHECK(ct != encrypt(key.pub, bits, 100));
  // Per-bit streams: a prefix of the plaintext gives a prefix of the ciphertext.
  auto head = encrypt(key.pub, Bits(bits.begin(), bits.begin() + 5), 99);
  CHECK(std::equal(head.words.begin(), head.words.end(), ct.words.begin()));
  CHECK(decrypt(key.priv, ct) == bits);

  // A bare public relator is a 1.
  for (auto const& r : key.pub.presentation.relators()) {
    if (r.size() <= 4) CHECK(decrypt(key.priv, Ciphertext{{r}}) == Bits{true});
  }
  CHECK_THROWS_MATCHES(
      decrypt(key.priv, Ciphertext{{Word{key.pub.presentation.generators() + 1}}}), Error,
      Catch::Matchers::Predicate<Error>(
          [](Error const& e) { return e.code() == Errc::missing_entry; }));
}

TEST_CASE("encoder errors", "[codec]") {
  PublicKey nothing_short{Presentation(3, {"aabbccaBBc"_w}), 1};
  Encoder enc(nothing_short);
  Rng rng(1);
  CHECK_THROWS_MATCHES(enc.encode_one(rng), Error,
                       Catch::Matchers::Predicate<Error>([](Error const& e) {
                         return e.code() == Errc::no_short_relators;
                       }));
  CHECK_NOTHROW(enc.encode_zero(rng));
  CHECK_THROWS_AS(Encoder(PublicKey{Presentation(3), 4}), Error);
  CHECK_THROWS_AS(parse_bits("10x"), Error);
  CHECK(bits_to_string(parse_bits("1 0 1")) == "101");
}
