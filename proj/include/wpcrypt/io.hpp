#pragma once

// Line-oriented text formats for presentations, keys and ciphertexts.
//
//   wpp 1 / generators <k> / rel <ints...>*
//   wpub 1 / <wpp block> / special <i>
//   wprv 1 / <wpp block> / special <i> / sub <j> <ints...>* / pubhash <hex>
//   wct 1 / bits <n> / w <ints...>*
//
// '#' starts a comment; blank lines are ignored.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "codec.hpp"
#include "error.hpp"
#include "keygen.hpp"
#include "presentation.hpp"
#include "tietze.hpp"
#include "word.hpp"

namespace wpc {

namespace detail {

inline void append_ints(std::string& out, Word const& w) {
  for (Letter x : w) {
    out += ' ';
    out += std::to_string(x);
  }
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) {
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view line = text.substr(pos, nl - pos);
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      std::vector<std::string> toks;
      std::istringstream in{std::string(line)};
      for (std::string t; in >> t;) toks.push_back(std::move(t));
      if (!toks.empty()) lines_.push_back({lineno, std::move(toks)});
      pos = nl + 1;
    }
    last_line_ = lineno;
  }

  bool done() const noexcept { return next_ == lines_.size(); }

  std::vector<std::string> const* peek() const {
    return done() ? nullptr : &lines_[next_].tokens;
  }

  std::vector<std::string> const& expect(std::string_view keyword, std::size_t min_tokens = 1) {
    if (done()) fail_at(last_line_, "unexpected end of input, expected '" + std::string(keyword) + "'");
    auto const& l = lines_[next_];
    if (l.tokens[0] != keyword) {
      fail_at(l.number, "expected '" + std::string(keyword) + "', got '" + l.tokens[0] + "'");
    }
    if (l.tokens.size() < min_tokens) fail_at(l.number, "too few fields");
    current_ = l.number;
    ++next_;
    return l.tokens;
  }

  void finish() const {
    if (!done()) fail_at(lines_[next_].number, "trailing content '" + lines_[next_].tokens[0] + "'");
  }

  std::size_t line() const noexcept { return current_; }

  [[noreturn]] void fail(std::string const& what) const { fail_at(current_, what); }

  std::int64_t integer(std::string const& tok) const {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (std::exception const&) {
      fail("not an integer: '" + tok + "'");
    }
    if (used != tok.size()) fail("not an integer: '" + tok + "'");
    return v;
  }

  Word word(std::vector<std::string> const& toks, std::size_t from, std::int64_t k) const {
    std::vector<Letter> v;
    for (std::size_t i = from; i < toks.size(); ++i) {
      auto x = integer(toks[i]);
      if (x == 0 || x > k || x < -k) fail("letter " + toks[i] + " out of range for " + std::to_string(k) + " generators");
      v.push_back(static_cast<Letter>(x));
    }
    return Word(std::move(v));
  }

 private:
  [[noreturn]] static void fail_at(std::size_t line, std::string const& what) {
    throw Error(Errc::parse_error, "line " + std::to_string(line) + ": " + what);
  }

  struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
  };
  std::vector<Line> lines_;
  std::size_t next_ = 0;
  std::size_t current_ = 0;
  std::size_t last_line_ = 0;
};

inline void expect_version(LineReader& in, std::string_view tag) {
  auto const& t = in.expect(tag, 2);
  if (t.size() != 2 || t[1] != "1") in.fail("unsupported " + std::string(tag) + " version");
}

inline Presentation read_presentation(LineReader& in) {
  expect_version(in, "wpp");
  auto const& g = in.expect("generators", 2);
  auto k = in.integer(g[1]);
  if (k < 0 || k > 1'000'000) in.fail("bad generator count");
  Presentation p(static_cast<std::int32_t>(k));
  while (auto const* t = in.peek()) {
    if ((*t)[0] != "rel") break;
    auto const& toks = in.expect("rel");
    Word r = in.word(toks, 1, k);
    if (cyclic_core(r).empty()) in.fail("relator reduces to the empty word");
    p.add_relator(r);
  }
  return p;
}

inline std::int32_t read_special(LineReader& in, Presentation const& p) {
  auto const& t = in.expect("special", 2);
  auto i = in.integer(t[1]);
  if (i < 1 || i > p.generators()) in.fail("special generator out of range");
  return static_cast<std::int32_t>(i);
}

}  // namespace detail

inline std::string format_presentation(Presentation const& p) {
  std::string out = "wpp 1\ngenerators " + std::to_string(p.generators()) + "\n";
  for (auto const& r : p.relators()) {
    out += "rel";
    detail::append_ints(out, r);
    out += '\n';
  }
  return out;
}

inline Presentation parse_presentation(std::string_view text) {
  detail::LineReader in(text);
  auto p = detail::read_presentation(in);
  in.finish();
  return p;
}

inline std::string format_public_key(PublicKey const& key) {
  return "wpub 1\n" + format_presentation(key.presentation) + "special " +
         std::to_string(key.special) + "\n";
}

inline PublicKey parse_public_key(std::string_view text) {
  detail::LineReader in(text);
  detail::expect_version(in, "wpub");
  PublicKey key;
  key.presentation = detail::read_presentation(in);
  key.special = detail::read_special(in, key.presentation);
  in.finish();
  return key;
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string public_key_hash(PublicKey const& key) {
  return hex64(fnv1a(format_public_key(key)));
}

struct PrivateKeyFile {
  Presentation presentation;
  std::int32_t special = 1;
  SubstitutionTable psi;
  std::string pubhash;

  PrivateKey key() const { return PrivateKey(presentation, special, psi); }
};

inline std::string format_private_key(PrivateKey const& key, std::string const& pubhash) {
  std::string out = "wprv 1\n" + format_presentation(key.presentation()) + "special " +
                    std::to_string(key.special) + "\n";
  for (std::int32_t j = 1; j <= key.psi.size(); ++j) {
    out += "sub " + std::to_string(j);
    detail::append_ints(out, key.psi[j]);
    out += '\n';
  }
  out += "pubhash " + pubhash + "\n";
  return out;
}

inline std::string format_private_key(KeyPair const& keys) {
  return format_private_key(keys.priv, public_key_hash(keys.pub));
}

inline PrivateKeyFile parse_private_key(std::string_view text) {
  detail::LineReader in(text);
  detail::expect_version(in, "wprv");
  PrivateKeyFile f;
  f.presentation = detail::read_presentation(in);
  auto const& sp = in.expect("special", 2);
  f.special = static_cast<std::int32_t>(in.integer(sp[1]));
  while (auto const* t = in.peek()) {
    if ((*t)[0] != "sub") break;
    auto const& toks = in.expect("sub", 2);
    auto j = in.integer(toks[1]);
    if (j != f.psi.size() + 1) in.fail("sub entries must be numbered 1, 2, ... in order");
    f.psi.push_back(in.word(toks, 2, f.presentation.generators()));
  }
  if (f.special < 1 || f.special > f.psi.size()) in.fail("special generator has no sub entry");
  auto const& h = in.expect("pubhash", 2);
  f.pubhash = h[1];
  in.finish();
  return f;
}

inline std::string format_ciphertext(Ciphertext const& ct) {
  std::string out = "wct 1\nbits " + std::to_string(ct.words.size()) + "\n";
  for (auto const& w : ct.words) {
    out += "w";
    detail::append_ints(out, w);
    out += '\n';
  }
  return out;
}

// Letters are only range-checked against `max_generator` when it is given;
// the key decides whether a word is meaningful.
inline Ciphertext parse_ciphertext(std::string_view text,
                                   std::int64_t max_generator = std::int64_t{1} << 30) {
  detail::LineReader in(text);
  detail::expect_version(in, "wct");
  auto const& b = in.expect("bits", 2);
  auto n = in.integer(b[1]);
  if (n < 0) in.fail("negative bit count");
  Ciphertext ct;
  for (std::int64_t i = 0; i < n; ++i) {
    auto const& toks = in.expect("w");
    ct.words.push_back(in.word(toks, 1, max_generator));
  }
  in.finish();
  return ct;
}

// Signed integers ("1 -2 3") or letters a-t / A-T.
inline Word parse_word(std::string_view text) {
  bool numeric = false;
  for (char c : text) {
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') numeric = true;
  }
  if (!numeric) {
    std::string compact;
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
    }
    try {
      return Word::from_letters(compact);
    } catch (Error const& e) {
      throw Error(Errc::parse_error, e.what());
    }
  }
  detail::LineReader in(std::string("w ") + std::string(text));
  return in.word(in.expect("w"), 1, std::int64_t{1} << 30);
}

inline std::string read_file(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(std::string const& path, std::string const& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::parse_error, "cannot write " + path);
  out << content;
  if (!out) throw Error(Errc::parse_error, "write failed for " + path);
}

}  // namespace wpc
