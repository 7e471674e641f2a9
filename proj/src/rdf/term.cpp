#include "ontomem/rdf/term.hpp"

#include <cctype>
#include <cstdio>

#include "ontomem/error.hpp"
#include "ontomem/rdf/vocab.hpp"

namespace ontomem::rdf {

namespace {

bool forbidden_iri_char(unsigned char c) {
  if (c <= 0x20) return true;
  switch (c) {
    case '<': case '>': case '"': case '{': case '}':
    case '|': case '^': case '`': case '\\':
      return true;
    default:
      return false;
  }
}

bool valid_blank_char(unsigned char c) {
  return std::isalnum(c) != 0 || c == '_' || c == '-' || c == '.' || c >= 0x80;
}

}  // namespace

std::string escape_literal(std::string_view lexical) {
  std::string out;
  out.reserve(lexical.size() + 2);
  for (unsigned char c : lexical) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (c < 0x20 || c == 0x7f) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", c);
          out += buf;
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  return out;
}

Term::Term(TermKind kind, std::string value, std::string datatype,
           std::optional<std::string> language)
    : kind_(kind),
      value_(std::move(value)),
      datatype_(std::move(datatype)),
      language_(std::move(language)) {
  switch (kind_) {
    case TermKind::Iri:
      canonical_ = "<" + value_ + ">";
      break;
    case TermKind::Blank:
      canonical_ = "_:" + value_;
      break;
    case TermKind::Literal:
      canonical_ = "\"" + escape_literal(value_) + "\"";
      if (language_) {
        canonical_ += "@" + *language_;
      } else if (datatype_ != vocab::xsd::string) {
        canonical_ += "^^<" + datatype_ + ">";
      }
      break;
  }
}

Term Term::iri(std::string value) {
  if (value.empty()) throw StructuralError("IRI must not be empty");
  for (unsigned char c : value) {
    if (forbidden_iri_char(c)) {
      throw StructuralError("IRI contains forbidden character: " + value);
    }
  }
  return Term(TermKind::Iri, std::move(value), {}, std::nullopt);
}

Term Term::blank(std::string label) {
  if (label.empty()) throw StructuralError("blank node label must not be empty");
  for (unsigned char c : label) {
    if (!valid_blank_char(c)) {
      throw StructuralError("invalid blank node label: " + label);
    }
  }
  return Term(TermKind::Blank, std::move(label), {}, std::nullopt);
}

Term Term::literal(std::string lexical, std::string datatype) {
  if (datatype.empty()) datatype = vocab::xsd::string;
  if (datatype == vocab::rdf::langString) {
    throw StructuralError("rdf:langString literal requires a language tag");
  }
  for (unsigned char c : datatype) {
    if (forbidden_iri_char(c)) throw StructuralError("invalid datatype IRI: " + datatype);
  }
  return Term(TermKind::Literal, std::move(lexical), std::move(datatype), std::nullopt);
}

Term Term::lang_literal(std::string lexical, std::string language) {
  if (language.empty()) throw StructuralError("language tag must not be empty");
  for (unsigned char c : language) {
    if (std::isalnum(c) == 0 && c != '-') {
      throw StructuralError("invalid language tag: " + language);
    }
  }
  return Term(TermKind::Literal, std::move(lexical), vocab::rdf::langString,
              std::move(language));
}

Term Term::integer(long long v) { return literal(std::to_string(v), vocab::xsd::integer); }

Term Term::boolean(bool v) { return literal(v ? "true" : "false", vocab::xsd::boolean); }

Triple::Triple(Term subject, Term predicate, Term object)
    : s_(std::move(subject)), p_(std::move(predicate)), o_(std::move(object)) {
  if (s_.is_literal()) {
    throw StructuralError("literal in subject position: " + s_.canonical());
  }
  if (!p_.is_iri()) {
    throw StructuralError("predicate must be an IRI: " + p_.canonical());
  }
}

std::string Triple::canonical() const {
  return s_.canonical() + " " + p_.canonical() + " " + o_.canonical() + " .";
}

std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::SourceDocument: return "SOURCE_DOCUMENT";
    case Origin::Dialogue: return "DIALOGUE";
    case Origin::AnswerFeedback: return "ANSWER_FEEDBACK";
    case Origin::ToolResult: return "TOOL_RESULT";
  }
  return "SOURCE_DOCUMENT";
}

Origin origin_from_string(std::string_view s) {
  if (s == "SOURCE_DOCUMENT") return Origin::SourceDocument;
  if (s == "DIALOGUE") return Origin::Dialogue;
  if (s == "ANSWER_FEEDBACK") return Origin::AnswerFeedback;
  if (s == "TOOL_RESULT") return Origin::ToolResult;
  throw StructuralError("unknown provenance origin: " + std::string(s));
}

void Provenance::validate() const {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw StructuralError("provenance confidence outside [0,1]");
  }
}

}  // namespace ontomem::rdf
