#include "ontomem/turtle/turtle.hpp"

#include <algorithm>
#include <cctype>

#include "ontomem/error.hpp"
#include "ontomem/rdf/vocab.hpp"
#include "ontomem/turtle/lexer.hpp"

namespace ontomem::turtle {

using rdf::Term;
using rdf::Triple;

namespace {

struct ParseFailure {
  std::size_t offset;
  std::string message;
};

bool is_absolute_iri(std::string_view iri) {
  if (iri.empty() || !std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (std::size_t i = 1; i < iri.size(); ++i) {
    unsigned char c = iri[i];
    if (c == ':') return true;
    if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
  }
  return false;
}

bool equals_ci(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

class TurtleParser {
 public:
  TurtleParser(std::string_view input, PrefixMap prefixes)
      : lex_(input, LexMode::Turtle), prefixes_(std::move(prefixes)) {}

  Document parse_document() {
    Document doc;
    while (lex_.peek().kind != TokenKind::End) {
      const Token& t = lex_.peek();
      if (t.kind == TokenKind::AtWord && t.text == "prefix") {
        parse_prefix(true);
      } else if (t.kind == TokenKind::Word && equals_ci(t.text, "prefix")) {
        parse_prefix(false);
      } else if ((t.kind == TokenKind::AtWord && t.text == "base") ||
                 (t.kind == TokenKind::Word && equals_ci(t.text, "base"))) {
        fail(t.offset, "unsupported feature: base IRI declarations");
      } else if (t.kind == TokenKind::AtWord) {
        fail(t.offset, "unexpected '@" + t.text + "'");
      } else {
        parse_statement(doc.graph);
      }
    }
    doc.prefixes = prefixes_;
    return doc;
  }

  Term parse_lone_term() {
    Term t = parse_object();
    if (lex_.peek().kind != TokenKind::End) fail(lex_.peek().offset, "trailing input after term");
    return t;
  }

 private:
  [[noreturn]] void fail(std::size_t offset, std::string msg) {
    throw ParseFailure{offset, std::move(msg)};
  }

  void expect_punct(char c, const char* what) {
    Token t = lex_.next();
    if (t.kind != TokenKind::Punct || t.text[0] != c) {
      fail(t.offset, std::string("expected '") + c + "' " + what +
                         (t.kind == TokenKind::End ? ", found end of input" : ""));
    }
  }

  void parse_prefix(bool at_form) {
    lex_.next();
    Token label = lex_.next();
    if (label.kind != TokenKind::PName || !label.text.empty()) {
      fail(label.offset, "expected prefix label ending in ':'");
    }
    Token iri = lex_.next();
    if (iri.kind != TokenKind::IriRef) fail(iri.offset, "expected namespace IRI in <...>");
    if (!is_absolute_iri(iri.text)) fail(iri.offset, "relative IRI not supported: <" + iri.text + ">");
    prefixes_[label.prefix] = iri.text;
    if (at_form) expect_punct('.', "after @prefix directive");
  }

  Term make_iri(const Token& t) {
    if (t.kind == TokenKind::IriRef) {
      if (!is_absolute_iri(t.text)) fail(t.offset, "relative IRI not supported: <" + t.text + ">");
      return guarded(t, [&] { return Term::iri(t.text); });
    }
    auto it = prefixes_.find(t.prefix);
    if (it == prefixes_.end()) fail(t.offset, "unknown prefix '" + t.prefix + ":'");
    return guarded(t, [&] { return Term::iri(it->second + t.text); });
  }

  template <typename Fn>
  Term guarded(const Token& t, Fn&& fn) {
    try {
      return fn();
    } catch (const StructuralError& e) {
      fail(t.offset, e.what());
    }
  }

  [[noreturn]] void unsupported_bracket(const Token& t) {
    if (t.text == "[") fail(t.offset, "unsupported feature: anonymous blank node '[ ]'");
    if (t.text == "(") fail(t.offset, "unsupported feature: collection '( )'");
    fail(t.offset, "unexpected '" + t.text + "'");
  }

  static bool is_literal_start(const Token& t) {
    return t.kind == TokenKind::String || t.kind == TokenKind::Integer ||
           t.kind == TokenKind::Decimal || t.kind == TokenKind::Double ||
           (t.kind == TokenKind::Word && (t.text == "true" || t.text == "false"));
  }

  Term parse_subject() {
    const Token& peeked = lex_.peek();
    if (is_literal_start(peeked)) fail(peeked.offset, "literal in subject position");
    Token t = lex_.next();
    switch (t.kind) {
      case TokenKind::IriRef:
      case TokenKind::PName:
        return make_iri(t);
      case TokenKind::BlankLabel:
        return guarded(t, [&] { return Term::blank(t.text); });
      case TokenKind::Punct:
        unsupported_bracket(t);
      case TokenKind::End:
        fail(t.offset, "unexpected end of input, expected subject");
      default:
        fail(t.offset, "expected subject, found '" + t.text + "'");
    }
  }

  Term parse_verb() {
    Token t = lex_.next();
    switch (t.kind) {
      case TokenKind::Word:
        if (t.text == "a") return Term::iri(vocab::rdf::type);
        fail(t.offset, "expected predicate, found '" + t.text + "'");
      case TokenKind::IriRef:
      case TokenKind::PName:
        return make_iri(t);
      case TokenKind::BlankLabel:
      case TokenKind::String:
      case TokenKind::Integer:
      case TokenKind::Decimal:
      case TokenKind::Double:
        fail(t.offset, "predicate must be an IRI");
      case TokenKind::End:
        fail(t.offset, "unexpected end of input, expected predicate");
      default:
        fail(t.offset, "expected predicate, found '" + t.text + "'");
    }
  }

  Term parse_object() {
    Token t = lex_.next();
    switch (t.kind) {
      case TokenKind::IriRef:
      case TokenKind::PName:
        return make_iri(t);
      case TokenKind::BlankLabel:
        return guarded(t, [&] { return Term::blank(t.text); });
      case TokenKind::String:
        return parse_literal_tail(t);
      case TokenKind::Integer:
        return Term::literal(t.text, vocab::xsd::integer);
      case TokenKind::Decimal:
        return Term::literal(t.text, vocab::xsd::decimal);
      case TokenKind::Double:
        return Term::literal(t.text, vocab::xsd::double_);
      case TokenKind::Word:
        if (t.text == "true" || t.text == "false") return Term::literal(t.text, vocab::xsd::boolean);
        fail(t.offset, "expected object, found '" + t.text + "'");
      case TokenKind::Punct:
        unsupported_bracket(t);
      case TokenKind::End:
        fail(t.offset, "unexpected end of input, expected object");
      default:
        fail(t.offset, "expected object, found '" + t.text + "'");
    }
  }

  Term parse_literal_tail(const Token& str) {
    const Token& next = lex_.peek();
    if (next.kind == TokenKind::AtWord) {
      Token lang = lex_.next();
      return guarded(lang, [&] { return Term::lang_literal(str.text, lang.text); });
    }
    if (next.kind == TokenKind::Caret2) {
      lex_.next();
      Token dt = lex_.next();
      if (dt.kind != TokenKind::IriRef && dt.kind != TokenKind::PName) {
        fail(dt.offset, "expected datatype IRI after '^^'");
      }
      Term dt_iri = make_iri(dt);
      return guarded(dt, [&] { return Term::literal(str.text, dt_iri.value()); });
    }
    return Term::literal(str.text);
  }

  void parse_statement(rdf::Graph& g) {
    Term subject = parse_subject();
    while (true) {
      Term verb = parse_verb();
      while (true) {
        std::size_t at = lex_.peek().offset;
        Term object = parse_object();
        try {
          g.insert(Triple(subject, verb, object));
        } catch (const StructuralError& e) {
          fail(at, e.what());
        }
        const Token& sep = lex_.peek();
        if (sep.kind == TokenKind::Punct && sep.text == ",") {
          lex_.next();
          continue;
        }
        break;
      }
      bool more = false;
      while (lex_.peek().kind == TokenKind::Punct && lex_.peek().text == ";") {
        lex_.next();
        more = true;
      }
      if (!more) break;
      const Token& after = lex_.peek();
      if (after.kind == TokenKind::Punct && after.text == ".") break;
    }
    expect_punct('.', "at end of statement");
  }

  Lexer lex_;
  PrefixMap prefixes_;
};

bool valid_local_name(std::string_view local) {
  if (local.empty()) return true;
  auto ok = [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '-' || c == '.'; };
  if (!std::all_of(local.begin(), local.end(), ok)) return false;
  if (local.front() == '-' || local.front() == '.' || local.back() == '.') return false;
  return true;
}

}  // namespace

std::string format_diagnostic(const ParseDiagnostic& d) {
  return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " +
         (d.severity == Severity::Error ? "error: " : "warning: ") + d.message;
}

ParseResult parse_turtle(std::string_view input) {
  ParseResult result;
  auto report = [&](std::size_t offset, std::string msg) {
    auto lc = line_col(input, offset);
    result.diagnostics.push_back({lc.line, lc.column, std::move(msg), Severity::Error});
  };
  try {
    TurtleParser parser(input, {});
    result.document = parser.parse_document();
  } catch (const ParseFailure& f) {
    report(f.offset, f.message);
  } catch (const LexError& e) {
    report(e.offset, e.message);
  }
  return result;
}

Document parse_turtle_or_throw(std::string_view input, const std::string& origin) {
  auto r = parse_turtle(input);
  if (!r.ok()) throw InputError(origin + ":" + format_diagnostic(r.diagnostics.front()));
  return std::move(*r.document);
}

std::optional<Term> parse_term(std::string_view text, std::string* error,
                               const PrefixMap& prefixes) {
  try {
    TurtleParser parser(text, prefixes);
    return parser.parse_lone_term();
  } catch (const ParseFailure& f) {
    if (error) *error = f.message;
  } catch (const LexError& e) {
    if (error) *error = e.message;
  }
  return std::nullopt;
}

std::string format_iri(const std::string& iri, const PrefixMap& prefixes) {
  const std::pair<const std::string, std::string>* best = nullptr;
  for (const auto& entry : prefixes) {
    const auto& ns = entry.second;
    if (ns.empty() || iri.size() < ns.size() || iri.compare(0, ns.size(), ns) != 0) continue;
    if (!valid_local_name(std::string_view(iri).substr(ns.size()))) continue;
    if (!best || ns.size() > best->second.size()) best = &entry;
  }
  if (!best) return "<" + iri + ">";
  return best->first + ":" + iri.substr(best->second.size());
}

std::string format_term(const Term& term, const PrefixMap& prefixes) {
  switch (term.kind()) {
    case rdf::TermKind::Iri:
      return format_iri(term.value(), prefixes);
    case rdf::TermKind::Blank:
      return "_:" + term.value();
    case rdf::TermKind::Literal: {
      std::string out = "\"" + rdf::escape_literal(term.value()) + "\"";
      if (term.language()) {
        out += "@" + *term.language();
      } else if (term.datatype() != vocab::xsd::string) {
        out += "^^" + format_iri(term.datatype(), prefixes);
      }
      return out;
    }
  }
  return term.canonical();
}

std::string serialize_turtle(const rdf::Graph& graph, const PrefixMap& prefixes) {
  std::string out;
  for (const auto& [label, ns] : prefixes) {
    out += "@prefix " + label + ": <" + ns + "> .\n";
  }
  if (graph.empty()) return out;
  if (!out.empty()) out += "\n";

  std::map<Term, Term> renumber;
  for (const auto& node : graph.nodes()) {
    if (node.is_blank()) {
      renumber.emplace(node, Term::blank("b" + std::to_string(renumber.size())));
    }
  }
  auto relabel = [&](const Term& t) -> const Term& {
    if (!t.is_blank()) return t;
    return renumber.at(t);
  };
  std::vector<Triple> rows;
  rows.reserve(graph.size());
  graph.for_each([&](const Term& s, const Term& p, const Term& o) {
    rows.emplace_back(relabel(s), p, relabel(o));
  });
  std::sort(rows.begin(), rows.end());

  const std::string& type_iri = vocab::rdf::type;
  for (const auto& t : rows) {
    out += format_term(t.subject(), prefixes);
    out += ' ';
    out += t.predicate().value() == type_iri ? std::string("a") : format_term(t.predicate(), prefixes);
    out += ' ';
    out += format_term(t.object(), prefixes);
    out += " .\n";
  }
  return out;
}

}  // namespace ontomem::turtle
