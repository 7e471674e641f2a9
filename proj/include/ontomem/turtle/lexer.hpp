#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace ontomem::turtle {

enum class TokenKind : std::uint8_t {
  End,
  IriRef,      // text = IRI without brackets
  PName,       // prefix + local
  BlankLabel,  // text = label without "_:"
  String,      // text = decoded lexical form
  AtWord,      // text = word after '@' ("prefix", "en", ...)
  Caret2,      // ^^
  Integer,
  Decimal,
  Double,
  Variable,    // text = name without '?' / '$'
  Word,        // bare identifier: a, true, SELECT, FILTER, ...
  Punct,       // one of . , ; { } ( ) [ ] * +
  Op,          // = != < <= > >= && || !
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::string prefix;  // PName only
  std::size_t offset = 0;
  std::size_t length = 0;
};

// Raised for malformed input at the lexical level.
struct LexError {
  std::size_t offset;
  std::string message;
};

enum class LexMode : std::uint8_t { Turtle, Sparql };

// Hand-rolled scanner shared by the Turtle and SPARQL parsers. In SPARQL mode
// '<' starts an IRI only when a well-formed IRIREF follows; otherwise it is a
// comparison operator. '?x' and '$x' are variables in SPARQL mode.
class Lexer {
 public:
  Lexer(std::string_view input, LexMode mode) : in_(input), mode_(mode) {}

  const Token& peek();
  Token next();
  std::size_t offset() const { return pos_; }
  std::string_view input() const { return in_; }

 private:
  Token scan();
  void skip_ws_and_comments();
  Token scan_iri();
  Token scan_string();
  Token scan_number();
  Token scan_name_or_pname();
  [[noreturn]] void fail(std::size_t at, std::string msg) const;

  std::string_view in_;
  LexMode mode_;
  std::size_t pos_ = 0;
  bool has_peek_ = false;
  Token peeked_;
};

// 1-based line/column of a byte offset; offsets at or past the end clamp to
// the last byte so positions always fall inside the input.
struct LineCol {
  int line;
  int column;
};
LineCol line_col(std::string_view input, std::size_t offset);

}  // namespace ontomem::turtle
