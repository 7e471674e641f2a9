#include "ontomem/sparql/sparql.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <deque>
#include <functional>
#include <regex>
#include <set>

#include "ontomem/error.hpp"
#include "ontomem/rdf/vocab.hpp"
#include "ontomem/turtle/lexer.hpp"

namespace ontomem::sparql {

using rdf::Term;
using turtle::Lexer;
using turtle::LexError;
using turtle::Token;
using turtle::TokenKind;

namespace {

struct ParseFailure {
  std::size_t offset;
  std::string message;
};

const std::set<std::string> kUnsupportedKeywords = {
    "OPTIONAL", "UNION",  "GROUP",  "ORDER",  "DISTINCT", "REDUCED", "MINUS",  "BIND",
    "VALUES",   "GRAPH",  "SERVICE", "CONSTRUCT", "DESCRIBE", "OFFSET", "HAVING", "BASE",
    "FROM",     "INSERT", "DELETE", "LOAD",   "CLEAR",    "EXISTS",  "NOT",    "SELECT"};

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool is_keyword(const Token& t, std::string_view kw) {
  return t.kind == TokenKind::Word && upper(t.text) == kw;
}

class QueryParser {
 public:
  explicit QueryParser(std::string_view text) : lex_(text, turtle::LexMode::Sparql) {}

  Query parse() {
    while (is_keyword(lex_.peek(), "PREFIX")) parse_prefix();
    Query q;
    Token t = lex_.next();
    if (is_keyword(t, "SELECT")) {
      q.form = QueryForm::Select;
      parse_projection(q);
    } else if (is_keyword(t, "ASK")) {
      q.form = QueryForm::Ask;
    } else if (t.kind == TokenKind::Word && kUnsupportedKeywords.count(upper(t.text))) {
      unsupported(t);
    } else {
      fail(t.offset, "expected SELECT or ASK");
    }
    if (is_keyword(lex_.peek(), "WHERE")) lex_.next();
    parse_group(q);
    parse_modifiers(q);
    check_variables(q);
    return q;
  }

 private:
  [[noreturn]] void fail(std::size_t offset, std::string msg) {
    throw ParseFailure{offset, std::move(msg)};
  }

  [[noreturn]] void unsupported(const Token& t) {
    fail(t.offset, "unsupported feature: " + upper(t.text));
  }

  void expect_punct(char c) {
    Token t = lex_.next();
    if (t.kind != TokenKind::Punct || t.text[0] != c) {
      if (t.kind == TokenKind::Word && kUnsupportedKeywords.count(upper(t.text))) unsupported(t);
      fail(t.offset, std::string("expected '") + c + "'" +
                         (t.kind == TokenKind::End ? ", found end of query" : ", found '" + t.text + "'"));
    }
  }

  bool peek_punct(char c) {
    const Token& t = lex_.peek();
    return t.kind == TokenKind::Punct && t.text[0] == c;
  }

  void parse_prefix() {
    lex_.next();
    Token label = lex_.next();
    if (label.kind != TokenKind::PName || !label.text.empty()) fail(label.offset, "expected prefix label ending in ':'");
    Token iri = lex_.next();
    if (iri.kind != TokenKind::IriRef) fail(iri.offset, "expected namespace IRI in <...>");
    prefixes_[label.prefix] = iri.text;
  }

  void parse_projection(Query& q) {
    if (lex_.peek().kind == TokenKind::Word && kUnsupportedKeywords.count(upper(lex_.peek().text))) {
      unsupported(lex_.peek());
    }
    if (peek_punct('*')) {
      lex_.next();
      select_all_ = true;
      return;
    }
    while (lex_.peek().kind == TokenKind::Variable) q.projection.push_back(lex_.next().text);
    if (q.projection.empty()) {
      const Token& t = lex_.peek();
      if (t.kind == TokenKind::Punct && t.text == "(") fail(t.offset, "unsupported feature: projection expressions");
      fail(t.offset, "expected projected variables or '*'");
    }
  }

  Term iri_from(const Token& t) {
    if (t.kind == TokenKind::IriRef) return guarded(t, [&] { return Term::iri(t.text); });
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

  // Constant or variable in subject/object/rhs position.
  Slot parse_value(bool subject_position) {
    Token t = lex_.next();
    switch (t.kind) {
      case TokenKind::Variable:
        note_var(t.text);
        return Slot::variable(t.text);
      case TokenKind::IriRef:
      case TokenKind::PName:
        return Slot::constant(iri_from(t));
      case TokenKind::BlankLabel:
        fail(t.offset, "unsupported feature: blank nodes in queries");
      case TokenKind::Punct:
        if (t.text == "[") fail(t.offset, "unsupported feature: blank nodes in queries");
        if (t.text == "(") fail(t.offset, "unsupported feature: collections");
        fail(t.offset, "unexpected '" + t.text + "'");
      case TokenKind::End:
        fail(t.offset, "unexpected end of query");
      default:
        break;
    }
    bool literal_like = t.kind == TokenKind::String || t.kind == TokenKind::Integer ||
                        t.kind == TokenKind::Decimal || t.kind == TokenKind::Double ||
                        (t.kind == TokenKind::Word && (t.text == "true" || t.text == "false"));
    if (!literal_like) {
      if (t.kind == TokenKind::Word && kUnsupportedKeywords.count(upper(t.text))) unsupported(t);
      fail(t.offset, "unexpected '" + t.text + "'");
    }
    if (subject_position) fail(t.offset, "literal in subject position");
    if (t.kind == TokenKind::Integer) return Slot::constant(Term::literal(t.text, vocab::xsd::integer));
    if (t.kind == TokenKind::Decimal) return Slot::constant(Term::literal(t.text, vocab::xsd::decimal));
    if (t.kind == TokenKind::Double) return Slot::constant(Term::literal(t.text, vocab::xsd::double_));
    if (t.kind == TokenKind::Word) return Slot::constant(Term::literal(t.text, vocab::xsd::boolean));
    if (lex_.peek().kind == TokenKind::AtWord) {
      Token lang = lex_.next();
      return Slot::constant(guarded(lang, [&] { return Term::lang_literal(t.text, lang.text); }));
    }
    if (lex_.peek().kind == TokenKind::Caret2) {
      lex_.next();
      Token dt = lex_.next();
      if (dt.kind != TokenKind::IriRef && dt.kind != TokenKind::PName) fail(dt.offset, "expected datatype IRI after '^^'");
      Term dt_iri = iri_from(dt);
      return Slot::constant(guarded(dt, [&] { return Term::literal(t.text, dt_iri.value()); }));
    }
    return Slot::constant(Term::literal(t.text));
  }

  std::pair<Slot, bool> parse_verb() {
    Token t = lex_.next();
    Slot verb;
    if (t.kind == TokenKind::Variable) {
      note_var(t.text);
      verb = Slot::variable(t.text);
    } else if (t.kind == TokenKind::Word && t.text == "a") {
      verb = Slot::constant(Term::iri(vocab::rdf::type));
    } else if (t.kind == TokenKind::IriRef || t.kind == TokenKind::PName) {
      verb = Slot::constant(iri_from(t));
    } else if (t.kind == TokenKind::Op && (t.text == "!" || t.text == "^")) {
      fail(t.offset, "unsupported feature: property path '" + t.text + "'");
    } else if (t.kind == TokenKind::End) {
      fail(t.offset, "unexpected end of query, expected predicate");
    } else {
      fail(t.offset, "predicate must be an IRI or variable");
    }
    const Token& next = lex_.peek();
    if (next.kind == TokenKind::Punct && next.text == "+") {
      if (verb.is_var()) fail(next.offset, "'+' path requires a constant predicate");
      lex_.next();
      return {verb, true};
    }
    if (next.kind == TokenKind::Punct && next.text == "*") {
      fail(next.offset, "unsupported feature: property path '*'");
    }
    return {verb, false};
  }

  void parse_triples(Query& q) {
    Slot subject = parse_value(true);
    while (true) {
      auto [verb, transitive] = parse_verb();
      while (true) {
        Slot object = parse_value(false);
        q.patterns.push_back(TriplePattern{subject, verb, object, transitive});
        if (peek_punct(',')) {
          lex_.next();
          continue;
        }
        break;
      }
      if (!peek_punct(';')) break;
      while (peek_punct(';')) lex_.next();
      if (peek_punct('.') || peek_punct('}') || is_keyword(lex_.peek(), "FILTER")) break;
    }
  }

  void parse_group(Query& q) {
    expect_punct('{');
    while (true) {
      const Token& t = lex_.peek();
      if (t.kind == TokenKind::Punct && t.text == "}") {
        lex_.next();
        break;
      }
      if (t.kind == TokenKind::End) fail(t.offset, "expected '}', found end of query");
      if (is_keyword(t, "FILTER")) {
        lex_.next();
        parse_filter(q);
        if (peek_punct('.')) lex_.next();
        continue;
      }
      if (t.kind == TokenKind::Word && kUnsupportedKeywords.count(upper(t.text))) unsupported(t);
      if (t.kind == TokenKind::Punct && t.text == "{") fail(t.offset, "unsupported feature: nested group patterns");
      parse_triples(q);
      if (peek_punct('.')) {
        lex_.next();
      } else if (!peek_punct('}') && !is_keyword(lex_.peek(), "FILTER")) {
        const Token& bad = lex_.peek();
        if (bad.kind == TokenKind::Word && kUnsupportedKeywords.count(upper(bad.text))) unsupported(bad);
        fail(bad.offset, "expected '.' or '}'");
      }
    }
  }

  void parse_filter(Query& q) {
    const Token& t = lex_.peek();
    if (t.kind == TokenKind::Word) {
      q.filters.push_back(parse_function());
      return;
    }
    expect_punct('(');
    parse_conjunction(q);
    expect_punct(')');
  }

  void parse_conjunction(Query& q) {
    while (true) {
      parse_atom(q);
      const Token& t = lex_.peek();
      if (t.kind == TokenKind::Op && t.text == "&&") {
        lex_.next();
        continue;
      }
      if (t.kind == TokenKind::Op && t.text == "||") fail(t.offset, "unsupported feature: ||");
      break;
    }
  }

  void parse_atom(Query& q) {
    const Token& t = lex_.peek();
    if (t.kind == TokenKind::Punct && t.text == "(") {
      lex_.next();
      parse_conjunction(q);
      expect_punct(')');
      return;
    }
    if (t.kind == TokenKind::Op && t.text == "!") fail(t.offset, "unsupported feature: !");
    if (t.kind == TokenKind::Word) {
      q.filters.push_back(parse_function());
      return;
    }
    Token lhs = lex_.next();
    if (lhs.kind != TokenKind::Variable) fail(lhs.offset, "filter comparison must start with a variable");
    filter_vars_.emplace_back(lhs.text, lhs.offset);
    Token op = lex_.next();
    static const std::map<std::string, CompareOp> ops = {
        {"=", CompareOp::Eq}, {"!=", CompareOp::Ne}, {"<", CompareOp::Lt},
        {"<=", CompareOp::Le}, {">", CompareOp::Gt}, {">=", CompareOp::Ge}};
    auto it = op.kind == TokenKind::Op ? ops.find(op.text) : ops.end();
    if (it == ops.end()) fail(op.offset, "expected comparison operator");
    std::size_t rhs_at = lex_.peek().offset;
    Slot rhs = parse_filter_value();
    if (rhs.is_var()) filter_vars_.emplace_back(rhs.var, rhs_at);
    q.filters.push_back(Comparison{lhs.text, it->second, rhs});
  }

  Slot parse_filter_value() {
    if (lex_.peek().kind == TokenKind::Variable) return Slot::variable(lex_.next().text);
    return parse_value(false);
  }

  FilterExpr parse_function() {
    Token name = lex_.next();
    std::string fn = upper(name.text);
    if (fn != "REGEX" && fn != "ISIRI" && fn != "ISURI") {
      if (kUnsupportedKeywords.count(fn)) unsupported(name);
      fail(name.offset, "unsupported feature: function " + name.text);
    }
    expect_punct('(');
    Token var = lex_.next();
    if (var.kind != TokenKind::Variable) fail(var.offset, "expected variable argument");
    filter_vars_.emplace_back(var.text, var.offset);
    FilterExpr out;
    if (fn == "REGEX") {
      Token comma = lex_.next();
      if (comma.kind != TokenKind::Punct || comma.text != ",") fail(comma.offset, "expected ','");
      Token pat = lex_.next();
      if (pat.kind != TokenKind::String) fail(pat.offset, "expected regular expression string");
      try {
        std::regex probe(pat.text, std::regex::ECMAScript);
      } catch (const std::regex_error&) {
        fail(pat.offset, "invalid regular expression");
      }
      if (peek_punct(',')) fail(lex_.peek().offset, "unsupported feature: regex flags");
      out = RegexMatch{var.text, pat.text};
    } else {
      out = IsIri{var.text};
    }
    expect_punct(')');
    return out;
  }

  void parse_modifiers(Query& q) {
    while (lex_.peek().kind != TokenKind::End) {
      Token t = lex_.next();
      if (is_keyword(t, "LIMIT")) {
        if (q.limit) fail(t.offset, "duplicate LIMIT");
        Token n = lex_.next();
        if (n.kind != TokenKind::Integer || n.text.front() == '-' || n.text.front() == '+') {
          fail(n.offset, "LIMIT expects a positive integer");
        }
        long long v = std::atoll(n.text.c_str());
        if (v < 1) fail(n.offset, "LIMIT expects a positive integer");
        q.limit = static_cast<std::size_t>(v);
      } else if (t.kind == TokenKind::Word && kUnsupportedKeywords.count(upper(t.text))) {
        unsupported(t);
      } else {
        fail(t.offset, "unexpected '" + t.text + "' after query pattern");
      }
    }
  }

  void note_var(const std::string& v) {
    if (std::find(pattern_vars_.begin(), pattern_vars_.end(), v) == pattern_vars_.end()) pattern_vars_.push_back(v);
  }

  void check_variables(Query& q) {
    auto in_pattern = [&](const std::string& v) {
      return std::find(pattern_vars_.begin(), pattern_vars_.end(), v) != pattern_vars_.end();
    };
    if (select_all_) q.projection = pattern_vars_;
    for (const auto& v : q.projection) {
      if (!in_pattern(v)) fail(0, "projected variable ?" + v + " does not appear in the pattern");
    }
    for (const auto& [v, at] : filter_vars_) {
      if (!in_pattern(v)) fail(at, "filter variable ?" + v + " does not appear in the pattern");
    }
  }

  Lexer lex_;
  turtle::PrefixMap prefixes_;
  std::vector<std::string> pattern_vars_;
  std::vector<std::pair<std::string, std::size_t>> filter_vars_;
  bool select_all_ = false;
};

const std::set<std::string>& numeric_datatypes() {
  static const std::set<std::string> types = [] {
    std::set<std::string> s;
    for (const char* local : {"integer", "decimal", "double", "float", "int", "long", "short", "byte",
                              "nonNegativeInteger", "positiveInteger", "negativeInteger",
                              "nonPositiveInteger", "unsignedInt", "unsignedLong", "unsignedShort",
                              "unsignedByte"}) {
      s.insert(vocab::kXsd + local);
    }
    return s;
  }();
  return types;
}

std::optional<double> numeric_value(const Term& t) {
  if (!t.is_literal() || !numeric_datatypes().count(t.datatype())) return std::nullopt;
  const std::string& lex = t.value();
  if (lex.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(lex.c_str(), &end);
  if (end != lex.c_str() + lex.size()) return std::nullopt;
  return v;
}

bool compare(const Term& a, CompareOp op, const Term& b) {
  int c;
  auto na = numeric_value(a);
  auto nb = numeric_value(b);
  if (na && nb) {
    c = *na < *nb ? -1 : (*na > *nb ? 1 : 0);
  } else if (op == CompareOp::Eq || op == CompareOp::Ne) {
    c = a == b ? 0 : 1;
  } else {
    c = a.canonical().compare(b.canonical());
  }
  switch (op) {
    case CompareOp::Eq: return c == 0;
    case CompareOp::Ne: return c != 0;
    case CompareOp::Lt: return c < 0;
    case CompareOp::Le: return c <= 0;
    case CompareOp::Gt: return c > 0;
    case CompareOp::Ge: return c >= 0;
  }
  return false;
}

class Evaluator {
 public:
  Evaluator(const Query& q, const rdf::Graph& g) : q_(q), g_(g) {
    for (const auto& f : q.filters) regexes_.push_back(compile(f));
  }

  void run(const std::function<bool(const Binding&)>& emit) {
    emit_ = &emit;
    Binding b;
    stopped_ = false;
    step(0, b);
  }

 private:
  static std::optional<std::regex> compile(const FilterExpr& f) {
    if (const auto* r = std::get_if<RegexMatch>(&f)) return std::regex(r->pattern, std::regex::ECMAScript);
    return std::nullopt;
  }

  const Term* lookup(const Slot& s, const Binding& b) const {
    if (!s.is_var()) return &*s.term;
    auto it = b.find(s.var);
    return it == b.end() ? nullptr : &it->second;
  }

  static bool bind(Binding& b, const Slot& s, const Term& value) {
    if (!s.is_var()) return *s.term == value;
    auto [it, inserted] = b.emplace(s.var, value);
    return inserted || it->second == value;
  }

  // Filters whose variables are all bound; unbound ones are retried deeper.
  bool filters_hold(const Binding& b) const {
    for (std::size_t i = 0; i < q_.filters.size(); ++i) {
      const auto& f = q_.filters[i];
      if (const auto* c = std::get_if<Comparison>(&f)) {
        auto l = b.find(c->lhs);
        const Term* r = lookup(c->rhs, b);
        if (l == b.end() || !r) continue;
        if (!compare(l->second, c->op, *r)) return false;
      } else if (const auto* ii = std::get_if<IsIri>(&f)) {
        auto it = b.find(ii->var);
        if (it != b.end() && !it->second.is_iri()) return false;
      } else if (const auto* rm = std::get_if<RegexMatch>(&f)) {
        auto it = b.find(rm->var);
        if (it == b.end()) continue;
        if (it->second.is_blank()) return false;
        if (!std::regex_search(it->second.value(), *regexes_[i])) return false;
      }
    }
    return true;
  }

  void step(std::size_t i, const Binding& b) {
    if (stopped_) return;
    if (i == q_.patterns.size()) {
      if (!(*emit_)(b)) stopped_ = true;
      return;
    }
    const auto& tp = q_.patterns[i];
    const Term* s = lookup(tp.subject, b);
    const Term* p = lookup(tp.predicate, b);
    const Term* o = lookup(tp.object, b);
    auto descend = [&](const Term& sv, const Term& pv, const Term& ov) {
      Binding next = b;
      if (!bind(next, tp.subject, sv) || !bind(next, tp.predicate, pv) || !bind(next, tp.object, ov)) return;
      if (!filters_hold(next)) return;
      step(i + 1, next);
    };
    if (!tp.transitive) {
      auto opt = [](const Term* t) { return t ? rdf::TermPattern(*t) : std::nullopt; };
      for (const auto& t : g_.match(opt(s), opt(p), opt(o))) {
        descend(t.subject(), t.predicate(), t.object());
        if (stopped_) return;
      }
      return;
    }
    if (s) {
      for (const auto& r : transitive_reach(g_, *p, *s, true)) {
        if (o && *o != r) continue;
        descend(*s, *p, r);
        if (stopped_) return;
      }
    } else if (o) {
      for (const auto& r : transitive_reach(g_, *p, *o, false)) {
        descend(r, *p, *o);
        if (stopped_) return;
      }
    } else {
      std::set<Term> starts;
      for (const auto& t : g_.match(std::nullopt, *p, std::nullopt)) starts.insert(t.subject());
      for (const auto& start : starts) {
        for (const auto& r : transitive_reach(g_, *p, start, true)) {
          descend(start, *p, r);
          if (stopped_) return;
        }
      }
    }
  }

  const Query& q_;
  const rdf::Graph& g_;
  std::vector<std::optional<std::regex>> regexes_;
  const std::function<bool(const Binding&)>* emit_ = nullptr;
  bool stopped_ = false;
};

}  // namespace

QueryParseResult parse_query(std::string_view text) {
  QueryParseResult result;
  auto report = [&](std::size_t offset, std::string msg) {
    auto lc = turtle::line_col(text, offset);
    result.diagnostics.push_back({lc.line, lc.column, std::move(msg), turtle::Severity::Error});
  };
  try {
    QueryParser parser(text);
    result.query = parser.parse();
  } catch (const ParseFailure& f) {
    report(f.offset, f.message);
  } catch (const LexError& e) {
    report(e.offset, e.message);
  }
  return result;
}

Query parse_query_or_throw(std::string_view text) {
  auto r = parse_query(text);
  if (!r.ok()) throw InputError("query:" + turtle::format_diagnostic(r.diagnostics.front()));
  return std::move(*r.query);
}

std::vector<Term> transitive_reach(const rdf::Graph& graph, const Term& predicate, const Term& start,
                                   bool forward) {
  std::set<Term> seen;
  std::deque<Term> frontier{start};
  while (!frontier.empty()) {
    Term cur = frontier.front();
    frontier.pop_front();
    auto next = forward ? graph.objects(cur, predicate) : graph.subjects(predicate, cur);
    for (auto& n : next) {
      if (seen.insert(n).second) frontier.push_back(std::move(n));
    }
  }
  return {seen.begin(), seen.end()};
}

SolutionSequence evaluate(const Query& query, const rdf::Graph& graph) {
  SolutionSequence out;
  out.form = query.form;
  Evaluator ev(query, graph);
  if (query.form == QueryForm::Ask) {
    ev.run([&](const Binding&) {
      out.ask = true;
      return false;
    });
    return out;
  }
  out.vars = query.projection;
  std::vector<std::vector<Term>> keys;
  ev.run([&](const Binding& b) {
    std::vector<Term> key;
    key.reserve(query.projection.size());
    for (const auto& v : query.projection) key.push_back(b.at(v));
    keys.push_back(std::move(key));
    return true;
  });
  std::sort(keys.begin(), keys.end());
  if (query.limit && keys.size() > *query.limit) keys.resize(*query.limit);
  out.rows.reserve(keys.size());
  for (auto& key : keys) {
    Binding row;
    for (std::size_t i = 0; i < key.size(); ++i) row.emplace(query.projection[i], std::move(key[i]));
    out.rows.push_back(std::move(row));
  }
  return out;
}

nlohmann::json to_json(const SolutionSequence& s) {
  if (s.form == QueryForm::Ask) return {{"ask", s.ask}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& b : s.rows) {
    nlohmann::json row = nlohmann::json::object();
    for (const auto& v : s.vars) row[v] = b.at(v).canonical();
    rows.push_back(std::move(row));
  }
  return {{"vars", s.vars}, {"rows", std::move(rows)}};
}

}  // namespace ontomem::sparql
