#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <tuple>

#include "ontomem/rdf/vocab.hpp"
#include "ontomem/shacl/shacl.hpp"
#include "test_support.hpp"

namespace oracles {

using namespace ontomem;
using namespace ontomem::rdf;
using namespace ontomem::shacl;
using testsupport::ex;

using Key = std::tuple<Term, std::optional<std::string>, std::string>;

inline std::vector<Key> keys(const ValidationReport& r) {
  std::vector<Key> out;
  for (const auto& x : r.results) out.emplace_back(x.focus, x.path, x.constraint);
  return out;
}

// Per node, per constraint, by scanning the full triple list.
inline std::vector<Key> naive_check(const Graph& data, const std::vector<NodeShape>& shapes) {
  std::vector<Key> out;
  auto all = data.triples();
  for (const auto& shape : shapes) {
    if (!shape.target_class) continue;
    std::set<Term> focus;
    for (const auto& t : all)
      if (t.predicate().value() == vocab::rdf::type && t.object() == Term::iri(*shape.target_class))
        focus.insert(t.subject());
    for (const auto& f : focus) {
      for (const auto& ps : shape.properties) {
        std::vector<Term> vals;
        for (const auto& t : all)
          if (t.subject() == f && t.predicate().value() == ps.path) vals.push_back(t.object());
        long long n = static_cast<long long>(vals.size());
        if (ps.min_count && n < *ps.min_count) out.emplace_back(f, ps.path, "minCount");
        if (ps.max_count && n > *ps.max_count) out.emplace_back(f, ps.path, "maxCount");
        for (const auto& v : vals) {
          if (ps.datatype && !(v.is_literal() && v.datatype() == *ps.datatype)) out.emplace_back(f, ps.path, "datatype");
          if (ps.value_class) {
            bool typed = false;
            for (const auto& t : all)
              typed |= t.subject() == v && t.predicate().value() == vocab::rdf::type &&
                       t.object() == Term::iri(*ps.value_class);
            if (!typed) out.emplace_back(f, ps.path, "class");
          }
          if (ps.value_in) {
            bool found = false;
            for (const auto& x : *ps.value_in) found |= x == v;
            if (!found) out.emplace_back(f, ps.path, "in");
          }
          if (ps.pattern && (v.is_blank() || !std::regex_search(v.value(), std::regex(*ps.pattern))))
            out.emplace_back(f, ps.path, "pattern");
        }
      }
      if (shape.closed) {
        std::set<std::string> flagged;
        for (const auto& t : all) {
          if (t.subject() != f) continue;
          const std::string& p = t.predicate().value();
          bool listed = p == vocab::rdf::type;
          for (const auto& ps : shape.properties) listed |= ps.path == p;
          if (!listed && flagged.insert(p).second) out.emplace_back(f, p, "closed");
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Graph random_shape_data(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> d(0, 99);
  Graph g;
  for (std::size_t i = 0; i < n; ++i) {
    Term s = ex("n" + std::to_string(d(rng) % 10));
    if (d(rng) < 25) {
      g.insert(Triple(s, Term::iri(vocab::rdf::type), ex("C" + std::to_string(d(rng) % 3))));
      continue;
    }
    Term p = ex("p" + std::to_string(d(rng) % 4));
    Term o = ex("n" + std::to_string(d(rng) % 10));
    int k = d(rng) % 4;
    if (k == 1) o = Term::integer(d(rng) % 5);
    if (k == 2) o = Term::literal("code-" + std::to_string(d(rng) % 4));
    g.insert(Triple(s, p, o));
  }
  return g;
}

inline std::vector<NodeShape> random_shapes(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(0, 99);
  std::vector<NodeShape> shapes;
  int n = 1 + d(rng) % 3;
  for (int i = 0; i < n; ++i) {
    NodeShape s;
    s.id = ex("S" + std::to_string(i));
    s.target_class = ex("C" + std::to_string(d(rng) % 3)).value();
    s.closed = d(rng) < 20;
    int np = d(rng) % 3;
    for (int j = 0; j < np; ++j) {
      PropertyShape ps;
      ps.path = ex("p" + std::to_string(d(rng) % 4)).value();
      if (d(rng) < 50) ps.min_count = d(rng) % 3;
      if (d(rng) < 50) ps.max_count = std::max<long long>(ps.min_count.value_or(0), d(rng) % 3);
      if (d(rng) < 20) ps.datatype = vocab::xsd::integer;
      if (d(rng) < 20) ps.value_class = ex("C" + std::to_string(d(rng) % 3)).value();
      if (d(rng) < 20) ps.value_in = std::vector<Term>{ex("n1"), ex("n2"), Term::integer(3)};
      if (d(rng) < 20) ps.pattern = d(rng) < 50 ? "^code-[0-1]$" : "n[2-5]";
      s.properties.push_back(ps);
    }
    shapes.push_back(s);
  }
  return shapes;
}

}  // namespace oracles
