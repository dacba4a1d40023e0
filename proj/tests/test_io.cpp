#include <catch_amalgamated.hpp>

#include <wpcrypt/io.hpp>

using namespace wpc;

namespace {

KeyPair const& shared_key() {
  static KeyPair const key = [] {
    Rng rng(4242);
    return keygen(rng, {});
  }();
  return key;
}

std::string parse_error_of(auto&& fn) {
  try {
    fn();
  } catch (Error const& e) {
    if (e.code() == Errc::parse_error) return e.what();
    return std::string("wrong code: ") + e.what();
  }
  return "no error";
}

}  // namespace

TEST_CASE("presentation round trip", "[io]") {
  auto p = surface_group_genus2();
  auto text = format_presentation(p);
  CHECK(text == "wpp 1\ngenerators 4\nrel 1 2 -1 -2 3 4 -3 -4\n");
  CHECK(parse_presentation(text) == p);
  CHECK(parse_presentation("# comment\n\nwpp 1   # v1\ngenerators 2\n") == Presentation(2));
}

TEST_CASE("key and ciphertext round trips", "[io]") {
  auto const& key = shared_key();
  auto pub_text = format_public_key(key.pub);
  CHECK(parse_public_key(pub_text) == key.pub);
  CHECK(format_public_key(parse_public_key(pub_text)) == pub_text);

  auto priv_text = format_private_key(key);
  auto f = parse_private_key(priv_text);
  CHECK(f.pubhash == public_key_hash(key.pub));
  CHECK(f.psi == key.priv.psi);
  CHECK(f.special == key.priv.special);
  CHECK(f.presentation == key.priv.presentation());
  CHECK(format_private_key(f.key(), f.pubhash) == priv_text);

  auto ct = encrypt(key.pub, parse_bits("0110"), 3);
  auto ct_text = format_ciphertext(ct);
  CHECK(parse_ciphertext(ct_text) == ct);
  CHECK(parse_ciphertext("wct 1\nbits 2\nw\nw 1 -2\n").words ==
        std::vector<Word>{Word{}, Word{1, -2}});
}

TEST_CASE("hash", "[io]") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("malformed input names the line", "[io]") {
  CHECK(parse_error_of([] { parse_presentation("wpp 2\n"); }) ==
        "ParseError: line 1: unsupported wpp version");
  CHECK(parse_error_of([] { parse_presentation("wpp 1\n\ngenerators x\n"); }) ==
        "ParseError: line 3: not an integer: 'x'");
  CHECK(parse_error_of([] { parse_presentation("wpp 1\ngenerators 2\nrel 1 3\n"); }) ==
        "ParseError: line 3: letter 3 out of range for 2 generators");
  CHECK(parse_error_of([] { parse_presentation("wpp 1\ngenerators 2\nrel 1 -1\n"); }) ==
        "ParseError: line 3: relator reduces to the empty word");
  CHECK(parse_error_of([] { parse_presentation("wpp 1\ngenerators 2\nrel 1 0\n"); }) ==
        "ParseError: line 3: letter 0 out of range for 2 generators");
  CHECK(parse_error_of([] { parse_presentation("wpp 1\ngenerators 2\nfoo\n"); }) ==
        "ParseError: line 3: trailing content 'foo'");
  CHECK(parse_error_of([] { parse_presentation(""); }) ==
        "ParseError: line 1: unexpected end of input, expected 'wpp'");
  CHECK(parse_error_of([] { parse_public_key("wpub 1\nwpp 1\ngenerators 2\nspecial 3\n"); }) ==
        "ParseError: line 4: special generator out of range");
  CHECK(parse_error_of([] {
          parse_private_key("wprv 1\nwpp 1\ngenerators 2\nspecial 1\nsub 2 1\npubhash 0\n");
        }) == "ParseError: line 5: sub entries must be numbered 1, 2, ... in order");
  CHECK(parse_error_of([] { parse_ciphertext("wct 1\nbits 2\nw 1\n"); }) ==
        "ParseError: line 4: unexpected end of input, expected 'w'");
  CHECK(parse_error_of([] { parse_ciphertext("wct 1\nbits 1\nw 1 2x\n"); }) ==
        "ParseError: line 3: not an integer: '2x'");
  CHECK(parse_error_of([] { parse_ciphertext("wct 1\nbits 1\nw 5\n", 4); }) ==
        "ParseError: line 3: letter 5 out of range for 4 generators");
}

TEST_CASE("words on the command line", "[io]") {
  CHECK(parse_word("abAB") == "abAB"_w);
  CHECK(parse_word("ab AB") == "abAB"_w);
  CHECK(parse_word("1 2 -1 -2") == "abAB"_w);
  CHECK(parse_word("") == Word{});
  CHECK_THROWS_AS(parse_word("a?"), Error);
  CHECK_THROWS_AS(parse_word("1 x"), Error);
}

TEST_CASE("random garbage never escapes as anything but a parse error", "[io]") {
  auto const& key = shared_key();
  std::vector<std::string> seeds{format_public_key(key.pub), format_private_key(key),
                                 format_ciphertext(encrypt(key.pub, parse_bits("101"), 1))};
  Rng rng(13);
  std::string const alphabet = "0123456789 -\n#abcdefghijklmnopqrstuvwxyz";
  for (int t = 0; t < 3000; ++t) {
    std::string text = seeds[rng.below(seeds.size())];
    for (int m = 0, n = 1 + static_cast<int>(rng.below(4)); m < n; ++m) {
      auto pos = rng.below(text.size());
      switch (rng.below(3)) {
        case 0: text[pos] = alphabet[rng.below(alphabet.size())]; break;
        case 1: text.erase(pos, 1 + rng.below(5)); break;
        default: text.insert(pos, 1, alphabet[rng.below(alphabet.size())]); break;
      }
    }
    auto ok = [&](auto&& fn) {
      try {
        fn();
      } catch (Error const& e) {
        bool allowed = e.code() == Errc::parse_error;
        if (!allowed) FAIL_CHECK("unexpected error " << e.what());
      }
    };
    ok([&] { parse_public_key(text); });
    ok([&] { parse_private_key(text); });
    ok([&] { parse_ciphertext(text); });
  }
}
