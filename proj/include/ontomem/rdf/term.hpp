#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace ontomem::rdf {

enum class TermKind : std::uint8_t { Iri = 0, Blank = 1, Literal = 2 };

// An RDF term. Immutable once built; the factories enforce the invariants.
//
// Every term carries its canonical N-Triples-style text:
//   <http://ex.org/a>   _:label   "lex"   "lex"@en   "5"^^<...#integer>
// Plain xsd:string literals print without a datatype suffix. Ordering is
// IRI < blank < literal, then byte-wise over the canonical text.
class Term {
 public:
  static Term iri(std::string value);
  static Term blank(std::string label);
  // Datatype defaults to xsd:string.
  static Term literal(std::string lexical, std::string datatype = {});
  static Term lang_literal(std::string lexical, std::string language);

  static Term integer(long long v);
  static Term boolean(bool v);

  TermKind kind() const { return kind_; }
  bool is_iri() const { return kind_ == TermKind::Iri; }
  bool is_blank() const { return kind_ == TermKind::Blank; }
  bool is_literal() const { return kind_ == TermKind::Literal; }

  // IRI text, blank label, or literal lexical form.
  const std::string& value() const { return value_; }
  // Empty for non-literals.
  const std::string& datatype() const { return datatype_; }
  const std::optional<std::string>& language() const { return language_; }
  const std::string& canonical() const { return canonical_; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.kind_ == b.kind_ && a.canonical_ == b.canonical_;
  }
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    return a.canonical_.compare(b.canonical_) <=> 0;
  }

 private:
  Term(TermKind kind, std::string value, std::string datatype,
       std::optional<std::string> language);

  TermKind kind_;
  std::string value_;
  std::string datatype_;
  std::optional<std::string> language_;
  std::string canonical_;
};

// Escape a lexical form for use between double quotes.
std::string escape_literal(std::string_view lexical);

class Triple {
 public:
  // Throws StructuralError if subject is a literal or predicate is not an IRI.
  Triple(Term subject, Term predicate, Term object);

  const Term& subject() const { return s_; }
  const Term& predicate() const { return p_; }
  const Term& object() const { return o_; }

  // "<s> <p> <o> ."
  std::string canonical() const;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend std::strong_ordering operator<=>(const Triple&, const Triple&) = default;

 private:
  Term s_;
  Term p_;
  Term o_;
};

enum class Origin : std::uint8_t { SourceDocument, Dialogue, AnswerFeedback, ToolResult };

std::string_view to_string(Origin o);
Origin origin_from_string(std::string_view s);

struct Provenance {
  std::string source_id;
  std::optional<std::string> chunk_id;
  std::int64_t extracted_at = 0;
  double confidence = 1.0;
  Origin origin = Origin::SourceDocument;

  // Throws StructuralError when confidence is outside [0,1].
  void validate() const;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

}  // namespace ontomem::rdf

template <>
struct std::hash<ontomem::rdf::Term> {
  std::size_t operator()(const ontomem::rdf::Term& t) const noexcept {
    return std::hash<std::string>{}(t.canonical());
  }
};

template <>
struct std::hash<ontomem::rdf::Triple> {
  std::size_t operator()(const ontomem::rdf::Triple& t) const noexcept {
    std::hash<ontomem::rdf::Term> h;
    std::size_t v = h(t.subject());
    v = v * 1000003u ^ h(t.predicate());
    v = v * 1000003u ^ h(t.object());
    return v;
  }
};
