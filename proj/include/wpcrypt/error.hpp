#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wpc {

enum class Errc {
  index_out_of_range,
  invalid_argument,
  empty_introduction,
  degenerate_relator,
  too_short,
  missing_entry,
  key_too_large,
  not_small_cancellation,
  retry_exhausted,
  constraint_unsatisfiable,
  no_short_relators,
  dimension_mismatch,
  empty_corpus,
  parse_error,
};

constexpr std::string_view errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::index_out_of_range: return "IndexError";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::empty_introduction: return "EmptyIntroduction";
    case Errc::degenerate_relator: return "DegenerateRelator";
    case Errc::too_short: return "TooShort";
    case Errc::missing_entry: return "MissingEntry";
    case Errc::key_too_large: return "KeyTooLarge";
    case Errc::not_small_cancellation: return "NotSmallCancellation";
    case Errc::retry_exhausted: return "RetryExhausted";
    case Errc::constraint_unsatisfiable: return "ConstraintUnsatisfiable";
    case Errc::no_short_relators: return "NoShortRelators";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::empty_corpus: return "EmptyCorpus";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string const& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace wpc
