#include "ontomem/turtle/lexer.hpp"

#include <cctype>

namespace ontomem::turtle {

namespace {

bool is_name_start(unsigned char c) { return std::isalpha(c) != 0 || c == '_' || c >= 0x80; }
bool is_name_char(unsigned char c) {
  return std::isalnum(c) != 0 || c == '_' || c == '-' || c >= 0x80;
}
bool is_local_char(unsigned char c) { return is_name_char(c) || c == ':' || c == '%'; }

bool is_iri_char(unsigned char c) {
  if (c <= 0x20) return false;
  switch (c) {
    case '<': case '>': case '"': case '{': case '}':
    case '|': case '^': case '`': case '\\':
      return false;
    default:
      return true;
  }
}

bool is_local_escape(char c) {
  static constexpr std::string_view kAllowed = "_~.-!$&'()*+,;=/?#@%";
  return kAllowed.find(c) != std::string_view::npos;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

LineCol line_col(std::string_view input, std::size_t offset) {
  if (input.empty()) return {1, 1};
  if (offset >= input.size()) offset = input.size() - 1;
  int line = 1;
  std::size_t line_start = 0;
  for (std::size_t i = 0; i < offset; ++i) {
    if (input[i] == '\n') {
      ++line;
      line_start = i + 1;
    }
  }
  return {line, static_cast<int>(offset - line_start) + 1};
}

void Lexer::fail(std::size_t at, std::string msg) const { throw LexError{at, std::move(msg)}; }

const Token& Lexer::peek() {
  if (!has_peek_) {
    peeked_ = scan();
    has_peek_ = true;
  }
  return peeked_;
}

Token Lexer::next() {
  if (has_peek_) {
    has_peek_ = false;
    return std::move(peeked_);
  }
  return scan();
}

void Lexer::skip_ws_and_comments() {
  while (pos_ < in_.size()) {
    unsigned char c = in_[pos_];
    if (std::isspace(c)) {
      ++pos_;
    } else if (c == '#') {
      while (pos_ < in_.size() && in_[pos_] != '\n') ++pos_;
    } else {
      break;
    }
  }
}

Token Lexer::scan() {
  skip_ws_and_comments();
  Token tok;
  tok.offset = pos_;
  if (pos_ >= in_.size()) {
    tok.kind = TokenKind::End;
    return tok;
  }
  const char c = in_[pos_];
  const char n1 = pos_ + 1 < in_.size() ? in_[pos_ + 1] : '\0';
  auto single = [&](TokenKind k, std::size_t len) {
    tok.kind = k;
    tok.text = std::string(in_.substr(pos_, len));
    tok.length = len;
    pos_ += len;
    return tok;
  };

  if (c == '<') {
    if (mode_ == LexMode::Turtle) return scan_iri();
    std::size_t j = pos_ + 1;
    while (j < in_.size() && is_iri_char(static_cast<unsigned char>(in_[j]))) ++j;
    if (j < in_.size() && in_[j] == '>' && j > pos_ + 1) return scan_iri();
    return single(TokenKind::Op, n1 == '=' ? 2 : 1);
  }
  if (mode_ == LexMode::Sparql) {
    if (c == '>') return single(TokenKind::Op, n1 == '=' ? 2 : 1);
    if (c == '=') return single(TokenKind::Op, 1);
    if (c == '!') return single(TokenKind::Op, n1 == '=' ? 2 : 1);
    if (c == '&' && n1 == '&') return single(TokenKind::Op, 2);
    if (c == '|' && n1 == '|') return single(TokenKind::Op, 2);
    if (c == '?' || c == '$') {
      std::size_t j = pos_ + 1;
      while (j < in_.size() && (std::isalnum(static_cast<unsigned char>(in_[j])) || in_[j] == '_')) ++j;
      if (j == pos_ + 1) fail(pos_, "empty variable name");
      tok.kind = TokenKind::Variable;
      tok.text = std::string(in_.substr(pos_ + 1, j - pos_ - 1));
      tok.length = j - pos_;
      pos_ = j;
      return tok;
    }
  }
  if (c == '"' || c == '\'') return scan_string();
  if (c == '_' && n1 == ':') {
    std::size_t j = pos_ + 2;
    if (j >= in_.size() || !is_name_char(static_cast<unsigned char>(in_[j])) || in_[j] == '-') {
      fail(pos_, "invalid blank node label");
    }
    while (j < in_.size()) {
      unsigned char d = in_[j];
      if (is_name_char(d)) {
        ++j;
      } else if (d == '.' && j + 1 < in_.size() && is_name_char(static_cast<unsigned char>(in_[j + 1]))) {
        ++j;
      } else {
        break;
      }
    }
    tok.kind = TokenKind::BlankLabel;
    tok.text = std::string(in_.substr(pos_ + 2, j - pos_ - 2));
    tok.length = j - pos_;
    pos_ = j;
    return tok;
  }
  if (c == '@') {
    std::size_t j = pos_ + 1;
    while (j < in_.size() && std::isalpha(static_cast<unsigned char>(in_[j]))) ++j;
    while (j < in_.size() && (std::isalnum(static_cast<unsigned char>(in_[j])) || in_[j] == '-')) ++j;
    if (j == pos_ + 1) fail(pos_, "expected a word after '@'");
    tok.kind = TokenKind::AtWord;
    tok.text = std::string(in_.substr(pos_ + 1, j - pos_ - 1));
    tok.length = j - pos_;
    pos_ = j;
    return tok;
  }
  if (c == '^') {
    if (n1 != '^') fail(pos_, "expected '^^'");
    return single(TokenKind::Caret2, 2);
  }
  const bool digit_next = std::isdigit(static_cast<unsigned char>(n1)) != 0;
  if (std::isdigit(static_cast<unsigned char>(c)) || ((c == '+' || c == '-') && (digit_next || n1 == '.')) ||
      (c == '.' && digit_next)) {
    return scan_number();
  }
  switch (c) {
    case '.': case ',': case ';': case '{': case '}':
    case '(': case ')': case '[': case ']': case '*': case '+':
      return single(TokenKind::Punct, 1);
    default:
      break;
  }
  if (is_name_start(static_cast<unsigned char>(c)) || c == ':') return scan_name_or_pname();
  fail(pos_, std::string("unexpected character '") + c + "'");
}

Token Lexer::scan_iri() {
  Token tok;
  tok.kind = TokenKind::IriRef;
  tok.offset = pos_;
  std::size_t j = pos_ + 1;
  std::string value;
  while (true) {
    if (j >= in_.size()) fail(pos_, "unterminated IRI");
    unsigned char d = in_[j];
    if (d == '>') break;
    if (d == '\\') {
      if (j + 1 < in_.size() && (in_[j + 1] == 'u' || in_[j + 1] == 'U')) {
        std::size_t len = in_[j + 1] == 'u' ? 4 : 8;
        if (j + 2 + len > in_.size()) fail(j, "invalid escape in IRI");
        unsigned long cp = std::stoul(std::string(in_.substr(j + 2, len)), nullptr, 16);
        append_utf8(value, cp);
        j += 2 + len;
        continue;
      }
      fail(j, "invalid escape in IRI");
    }
    if (!is_iri_char(d)) fail(pos_, "unterminated IRI");
    value.push_back(static_cast<char>(d));
    ++j;
  }
  tok.text = std::move(value);
  tok.length = j + 1 - pos_;
  pos_ = j + 1;
  return tok;
}

Token Lexer::scan_string() {
  Token tok;
  tok.kind = TokenKind::String;
  tok.offset = pos_;
  const char q = in_[pos_];
  const bool long_form = in_.substr(pos_, 3) == std::string(3, q);
  std::size_t j = pos_ + (long_form ? 3 : 1);
  std::string value;
  while (true) {
    if (j >= in_.size()) fail(pos_, "unterminated literal");
    char d = in_[j];
    if (long_form) {
      if (d == q && in_.substr(j, 3) == std::string(3, q)) {
        // A quote run longer than three closes on its last three.
        while (j + 3 < in_.size() && in_[j + 3] == q) {
          value.push_back(q);
          ++j;
        }
        j += 3;
        break;
      }
    } else {
      if (d == q) {
        ++j;
        break;
      }
      if (d == '\n' || d == '\r') fail(pos_, "unterminated literal");
    }
    if (d == '\\') {
      if (j + 1 >= in_.size()) fail(pos_, "unterminated literal");
      char e = in_[j + 1];
      switch (e) {
        case 't': value.push_back('\t'); j += 2; continue;
        case 'b': value.push_back('\b'); j += 2; continue;
        case 'n': value.push_back('\n'); j += 2; continue;
        case 'r': value.push_back('\r'); j += 2; continue;
        case 'f': value.push_back('\f'); j += 2; continue;
        case '"': value.push_back('"'); j += 2; continue;
        case '\'': value.push_back('\''); j += 2; continue;
        case '\\': value.push_back('\\'); j += 2; continue;
        case 'u':
        case 'U': {
          std::size_t len = e == 'u' ? 4 : 8;
          if (j + 2 + len > in_.size()) fail(j, "invalid escape sequence");
          auto hex = in_.substr(j + 2, len);
          for (char h : hex) {
            if (!std::isxdigit(static_cast<unsigned char>(h))) fail(j, "invalid escape sequence");
          }
          append_utf8(value, std::stoul(std::string(hex), nullptr, 16));
          j += 2 + len;
          continue;
        }
        default:
          fail(j, "invalid escape sequence");
      }
    }
    value.push_back(d);
    ++j;
  }
  tok.text = std::move(value);
  tok.length = j - pos_;
  pos_ = j;
  return tok;
}

Token Lexer::scan_number() {
  Token tok;
  tok.offset = pos_;
  std::size_t j = pos_;
  if (in_[j] == '+' || in_[j] == '-') ++j;
  bool has_dot = false;
  bool has_exp = false;
  while (j < in_.size() && std::isdigit(static_cast<unsigned char>(in_[j]))) ++j;
  if (j + 1 < in_.size() && in_[j] == '.' && std::isdigit(static_cast<unsigned char>(in_[j + 1]))) {
    has_dot = true;
    ++j;
    while (j < in_.size() && std::isdigit(static_cast<unsigned char>(in_[j]))) ++j;
  }
  if (j < in_.size() && (in_[j] == 'e' || in_[j] == 'E')) {
    std::size_t k = j + 1;
    if (k < in_.size() && (in_[k] == '+' || in_[k] == '-')) ++k;
    if (k < in_.size() && std::isdigit(static_cast<unsigned char>(in_[k]))) {
      has_exp = true;
      j = k;
      while (j < in_.size() && std::isdigit(static_cast<unsigned char>(in_[j]))) ++j;
    }
  }
  tok.kind = has_exp ? TokenKind::Double : has_dot ? TokenKind::Decimal : TokenKind::Integer;
  tok.text = std::string(in_.substr(pos_, j - pos_));
  tok.length = j - pos_;
  pos_ = j;
  return tok;
}

Token Lexer::scan_name_or_pname() {
  Token tok;
  tok.offset = pos_;
  std::size_t j = pos_;
  auto take_name = [&](std::size_t k) {
    while (k < in_.size()) {
      unsigned char d = in_[k];
      if (is_name_char(d)) {
        ++k;
      } else if (d == '.' && k + 1 < in_.size() && is_name_char(static_cast<unsigned char>(in_[k + 1]))) {
        ++k;
      } else {
        break;
      }
    }
    return k;
  };
  j = take_name(j);
  if (j < in_.size() && in_[j] == ':') {
    tok.kind = TokenKind::PName;
    tok.prefix = std::string(in_.substr(pos_, j - pos_));
    std::size_t k = j + 1;
    std::string local;
    while (k < in_.size()) {
      unsigned char d = in_[k];
      if (d == '\\' && k + 1 < in_.size() && is_local_escape(in_[k + 1])) {
        local.push_back(in_[k + 1]);
        k += 2;
      } else if (is_local_char(d)) {
        local.push_back(static_cast<char>(d));
        ++k;
      } else if (d == '.' && k + 1 < in_.size() &&
                 (is_local_char(static_cast<unsigned char>(in_[k + 1])) || in_[k + 1] == '\\')) {
        local.push_back('.');
        ++k;
      } else {
        break;
      }
    }
    if (!local.empty() && local.front() == '-') fail(j + 1, "invalid local name");
    tok.text = std::move(local);
    tok.length = k - pos_;
    pos_ = k;
    return tok;
  }
  tok.kind = TokenKind::Word;
  tok.text = std::string(in_.substr(pos_, j - pos_));
  tok.length = j - pos_;
  pos_ = j;
  return tok;
}

}  // namespace ontomem::turtle
