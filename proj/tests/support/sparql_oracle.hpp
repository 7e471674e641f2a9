#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <set>

#include "ontomem/rdf/vocab.hpp"
#include "test_support.hpp"

namespace oracles {

using namespace ontomem;
using namespace ontomem::rdf;
using testsupport::ex;

struct GenTerm {
  bool is_var;
  std::string var;
  Term term = Term::iri("urn:unused");
};

struct GenPattern {
  GenTerm s, p, o;
  bool plus = false;
};

struct GenFilter {
  int kind;  // 0 compare, 1 isIRI, 2 regex
  std::string var;
  std::string op;
  GenTerm rhs;
  std::string regex;
};

struct GenQuery {
  bool ask = false;
  std::vector<std::string> projection;
  std::vector<GenPattern> patterns;
  std::vector<GenFilter> filters;
  std::optional<int> limit;
};

inline std::string text_of(const GenTerm& t) { return t.is_var ? "?" + t.var : t.term.canonical(); }

inline std::string render(const GenQuery& q) {
  std::string s = q.ask ? "ASK" : "SELECT";
  for (const auto& v : q.projection) s += " ?" + v;
  s += " WHERE {\n";
  for (const auto& p : q.patterns) s += "  " + text_of(p.s) + " " + text_of(p.p) + (p.plus ? "+" : "") + " " + text_of(p.o) + " .\n";
  for (const auto& f : q.filters) {
    if (f.kind == 0) s += "  FILTER(?" + f.var + " " + f.op + " " + text_of(f.rhs) + ")\n";
    if (f.kind == 1) s += "  FILTER(isIRI(?" + f.var + "))\n";
    if (f.kind == 2) s += "  FILTER regex(?" + f.var + ", \"" + f.regex + "\")\n";
  }
  s += "}";
  if (q.limit) s += " LIMIT " + std::to_string(*q.limit);
  return s;
}

// Transitive closure by repeated single-step joins until nothing changes.
inline std::set<std::pair<Term, Term>> closure_fixpoint(const Graph& g, const Term& p) {
  std::set<std::pair<Term, Term>> edges;
  for (const auto& t : g.triples())
    if (t.predicate() == p) edges.emplace(t.subject(), t.object());
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<std::pair<Term, Term>> add;
    for (const auto& [a, b] : edges)
      for (const auto& [c, d] : edges)
        if (b == c && !edges.count({a, d})) add.emplace(a, d);
    if (!add.empty()) {
      edges.insert(add.begin(), add.end());
      changed = true;
    }
  }
  return edges;
}

inline std::optional<double> oracle_number(const Term& t) {
  static const std::set<std::string> numeric = {vocab::xsd::integer, vocab::xsd::decimal, vocab::xsd::double_};
  if (!t.is_literal() || !numeric.count(t.datatype())) return std::nullopt;
  try {
    std::size_t used = 0;
    double v = std::stod(t.value(), &used);
    if (used != t.value().size()) return std::nullopt;
    return v;
  } catch (...) {
    return std::nullopt;
  }
}

inline bool oracle_compare(const Term& a, const std::string& op, const Term& b) {
  auto x = oracle_number(a), y = oracle_number(b);
  if (x && y) {
    if (op == "=") return *x == *y;
    if (op == "!=") return *x != *y;
    if (op == "<") return *x < *y;
    if (op == "<=") return *x <= *y;
    if (op == ">") return *x > *y;
    return *x >= *y;
  }
  if (op == "=") return a == b;
  if (op == "!=") return !(a == b);
  const std::string &l = a.canonical(), &r = b.canonical();
  if (op == "<") return l < r;
  if (op == "<=") return l <= r;
  if (op == ">") return l > r;
  return l >= r;
}

// Enumerates every assignment of every variable over every term of the graph.
inline std::vector<std::vector<Term>> naive_eval(const GenQuery& q, const Graph& g, bool& any) {
  std::vector<std::string> vars;
  auto note = [&](const GenTerm& t) {
    if (t.is_var && std::find(vars.begin(), vars.end(), t.var) == vars.end()) vars.push_back(t.var);
  };
  for (const auto& p : q.patterns) {
    note(p.s);
    note(p.p);
    note(p.o);
  }
  std::set<Term> universe;
  for (const auto& t : g.triples()) {
    universe.insert(t.subject());
    universe.insert(t.predicate());
    universe.insert(t.object());
  }
  std::vector<Term> terms(universe.begin(), universe.end());
  std::map<Term, std::set<std::pair<Term, Term>>> closures;
  for (const auto& p : q.patterns)
    if (p.plus && !closures.count(p.p.term)) closures[p.p.term] = closure_fixpoint(g, p.p.term);

  std::vector<std::vector<Term>> rows;
  any = false;
  if (terms.empty()) return rows;
  std::vector<std::size_t> idx(vars.size(), 0);
  while (true) {
    std::map<std::string, Term> a;
    for (std::size_t i = 0; i < vars.size(); ++i) a.emplace(vars[i], terms[idx[i]]);
    auto val = [&](const GenTerm& t) { return t.is_var ? a.at(t.var) : t.term; };
    bool ok = true;
    for (const auto& p : q.patterns) {
      Term s = val(p.s), pr = val(p.p), o = val(p.o);
      if (p.plus) {
        ok = closures[pr].count({s, o}) > 0;
      } else {
        ok = !s.is_literal() && pr.is_iri() && g.contains(Triple(s, pr, o));
      }
      if (!ok) break;
    }
    for (const auto& f : q.filters) {
      if (!ok) break;
      Term v = a.at(f.var);
      if (f.kind == 0) ok = oracle_compare(v, f.op, val(f.rhs));
      if (f.kind == 1) ok = v.is_iri();
      if (f.kind == 2) ok = !v.is_blank() && std::regex_search(v.value(), std::regex(f.regex));
    }
    if (ok) {
      any = true;
      std::vector<Term> row;
      for (const auto& v : q.projection) row.push_back(a.at(v));
      rows.push_back(row);
    }
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == terms.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  std::sort(rows.begin(), rows.end());
  if (q.limit && rows.size() > static_cast<std::size_t>(*q.limit)) rows.resize(*q.limit);
  return rows;
}

inline GenQuery random_query(std::mt19937_64& rng, const Graph& g) {
  auto triples = g.triples();
  std::uniform_int_distribution<int> coin(0, 99);
  const std::vector<std::string> names = {"x", "y", "z"};
  auto pick_var = [&]() { return GenTerm{true, names[coin(rng) % 3]}; };
  auto pick_const = [&](int pos) {
    const auto& t = triples[coin(rng) % triples.size()];
    Term c = pos == 0 ? t.subject() : pos == 1 ? t.predicate() : t.object();
    if (c.is_blank()) c = ex("n1");
    return GenTerm{false, "", c};
  };
  GenQuery q;
  q.ask = coin(rng) < 15;
  int n = 1 + coin(rng) % 3;
  for (int i = 0; i < n; ++i) {
    GenPattern p;
    p.s = coin(rng) < 75 ? pick_var() : pick_const(0);
    p.plus = coin(rng) < 20;
    p.p = (!p.plus && coin(rng) < 10) ? GenTerm{true, "z"} : pick_const(1);
    p.o = coin(rng) < 70 ? pick_var() : pick_const(2);
    q.patterns.push_back(p);
  }
  std::vector<std::string> used;
  for (const auto& p : q.patterns)
    for (const auto* t : {&p.s, &p.p, &p.o})
      if (t->is_var && std::find(used.begin(), used.end(), t->var) == used.end()) used.push_back(t->var);
  if (used.empty()) {
    q.patterns[0].s = GenTerm{true, "x"};
    used.push_back("x");
  }
  if (!q.ask) {
    for (const auto& v : used)
      if (coin(rng) < 70) q.projection.push_back(v);
    if (q.projection.empty()) q.projection.push_back(used.front());
    if (coin(rng) < 30) q.limit = 1 + coin(rng) % 5;
  }
  int nf = coin(rng) % 3;
  static const std::vector<std::string> ops = {"=", "!=", "<", "<=", ">", ">="};
  for (int i = 0; i < nf; ++i) {
    GenFilter f;
    f.kind = coin(rng) % 3;
    f.var = used[coin(rng) % used.size()];
    f.op = ops[coin(rng) % ops.size()];
    if (coin(rng) < 30) {
      f.rhs = GenTerm{true, used[coin(rng) % used.size()]};
    } else if (coin(rng) < 50) {
      f.rhs = GenTerm{false, "", Term::integer(coin(rng) % 8)};
    } else {
      f.rhs = pick_const(2);
    }
    f.regex = coin(rng) < 50 ? "n[0-3]$" : "^v";
    q.filters.push_back(f);
  }
  return q;
}

}  // namespace oracles
