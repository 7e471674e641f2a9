#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <regex>
#include <set>

#include "ontomem/rdf/vocab.hpp"
#include "ontomem/sparql/sparql.hpp"
#include "ontomem/turtle/turtle.hpp"
#include "sparql_oracle.hpp"
#include "test_support.hpp"

using namespace ontomem;
using namespace ontomem::rdf;
using namespace ontomem::sparql;
using testsupport::ex;
using testsupport::tr;

using namespace oracles;

namespace {

Graph ttl(const std::string& body) {
  return turtle::parse_turtle_or_throw("@prefix ex: <http://ex.org/> .\n" + body).graph;
}

SolutionSequence run(const std::string& q, const Graph& g) {
  return evaluate(parse_query_or_throw("PREFIX ex: <http://ex.org/>\n" + q), g);
}

std::set<std::string> column(const SolutionSequence& s, const std::string& var) {
  std::set<std::string> out;
  for (const auto& row : s.rows) out.insert(row.at(var).value());
  return out;
}

}  // namespace

TEST(SparqlParse, MinimalAsk) {
  auto r = parse_query("ASK WHERE { ?s ?p ?o }");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.query->form, QueryForm::Ask);
  EXPECT_EQ(r.query->patterns.size(), 1u);
}

TEST(SparqlParse, TypedLookup) {
  auto r = parse_query("PREFIX ex: <http://ex.org/> SELECT ?x WHERE { ?x a ex:Disk }");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r.query->patterns.size(), 1u);
  EXPECT_EQ(*r.query->patterns[0].predicate.term, Term::iri(vocab::rdf::type));
  EXPECT_EQ(r.query->projection, std::vector<std::string>{"x"});
}

TEST(SparqlParse, UnsupportedFeaturesAreNamed) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"SELECT ?x WHERE { ?x ?p ?o OPTIONAL { ?x ?q ?r } }", "OPTIONAL"},
      {"SELECT ?x WHERE { { ?x ?p ?o } UNION { ?x ?q ?o } }", "nested group"},
      {"SELECT ?x WHERE { ?x ?p ?o } ORDER BY ?x", "ORDER"},
      {"SELECT DISTINCT ?x WHERE { ?x ?p ?o }", "DISTINCT"},
      {"SELECT ?x WHERE { ?x ?p ?o } GROUP BY ?x", "GROUP"},
      {"CONSTRUCT { ?x ?p ?o } WHERE { ?x ?p ?o }", "CONSTRUCT"},
      {"SELECT ?x WHERE { ?x ?p _:b }", "blank nodes"},
      {"SELECT ?x WHERE { ?x <http://ex.org/p>* ?o }", "property path"},
      {"SELECT ?x WHERE { ?x ?p ?o FILTER(?x = ?o || ?x = ?p) }", "||"},
      {"SELECT ?x WHERE { ?x ?p ?o FILTER(STRLEN(?o) > 2) }", "STRLEN"},
  };
  for (const auto& [q, feature] : cases) {
    auto r = parse_query(q);
    ASSERT_FALSE(r.ok()) << q;
    EXPECT_NE(r.diagnostics.front().message.find(feature), std::string::npos)
        << q << " -> " << r.diagnostics.front().message;
    EXPECT_NE(r.diagnostics.front().message.find("unsupported"), std::string::npos) << q;
  }
}

TEST(SparqlParse, SyntaxErrorsCarryPosition) {
  auto r = parse_query("SELECT ?x WHERE {\n  ?x ?p \n");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics.front().line, 2);
  auto bad_var = parse_query("SELECT ?y WHERE { ?x ?p ?o }");
  ASSERT_FALSE(bad_var.ok());
  EXPECT_NE(bad_var.diagnostics.front().message.find("?y"), std::string::npos);
  EXPECT_FALSE(parse_query("SELECT ?x WHERE { ?x ?p ?o } LIMIT 0").ok());
  EXPECT_FALSE(parse_query("SELECT ?x WHERE { ?x ?p ?o FILTER(?q = 1) }").ok());
}

TEST(SparqlEval, EmptyGraph) {
  Graph g;
  EXPECT_TRUE(run("SELECT ?s WHERE { ?s ?p ?o }", g).rows.empty());
  EXPECT_FALSE(run("ASK { ?s ?p ?o }", g).ask);
}

TEST(SparqlEval, TransitivePathHandComputed) {
  Graph g = ttl("ex:a ex:sub ex:b . ex:b ex:sub ex:c .");
  auto s = run("SELECT ?x WHERE { ?x ex:sub+ ex:c }", g);
  EXPECT_EQ(column(s, "x"), (std::set<std::string>{"http://ex.org/a", "http://ex.org/b"}));
}

TEST(SparqlEval, FilterNotEqualBruteForce) {
  Graph g = ttl("ex:s1 ex:p ex:b . ex:s2 ex:p ex:c . ex:s3 ex:q ex:d .");
  auto s = run("SELECT ?s WHERE { ?s ex:p ?o FILTER(?o != ex:b) }", g);
  std::set<std::string> expected;
  for (const auto& t : g.triples())
    if (t.predicate() == ex("p") && t.object() != ex("b")) expected.insert(t.subject().value());
  EXPECT_EQ(column(s, "s"), expected);
  EXPECT_EQ(expected, std::set<std::string>{"http://ex.org/s2"});
}

TEST(SparqlEval, NumericComparisonAndRegex) {
  Graph g = ttl("ex:a ex:size 3 . ex:b ex:size 10 . ex:c ex:size 2.5 . ex:d ex:name \"Disk one\" .");
  auto s = run("SELECT ?x WHERE { ?x ex:size ?n FILTER(?n > 2.9 && ?n < 11) }", g);
  EXPECT_EQ(column(s, "x"), (std::set<std::string>{"http://ex.org/a", "http://ex.org/b"}));
  auto r = run("SELECT ?x WHERE { ?x ex:name ?n FILTER regex(?n, \"^Disk\") }", g);
  EXPECT_EQ(column(r, "x"), std::set<std::string>{"http://ex.org/d"});
  auto iri = run("SELECT ?o WHERE { ?x ?p ?o FILTER(isIRI(?o)) }", g);
  EXPECT_TRUE(iri.rows.empty());
}

TEST(SparqlEval, OrderingAndJson) {
  Graph g = ttl("ex:b ex:p \"2\" . ex:a ex:p \"1\" . ex:c ex:p ex:z .");
  auto s = run("SELECT * WHERE { ?s ex:p ?o }", g);
  ASSERT_EQ(s.rows.size(), 3u);
  EXPECT_EQ(s.vars, (std::vector<std::string>{"s", "o"}));
  EXPECT_EQ(s.rows[0].at("s"), ex("a"));
  EXPECT_EQ(s.rows[2].at("s"), ex("c"));
  auto j = to_json(s);
  EXPECT_EQ(j["rows"][0]["o"], "\"1\"");
  EXPECT_EQ(j["rows"][2]["o"], "<http://ex.org/z>");
  EXPECT_EQ(to_json(run("ASK { ?s ex:p ex:z }", g)), nlohmann::json({{"ask", true}}));
}

TEST(SparqlProperty, OracleEquivalence) {
  std::mt19937_64 rng(31);
  int nonempty = 0;
  for (int round = 0; round < 60; ++round) {
    std::uniform_int_distribution<std::size_t> size(1, round < 50 ? 60 : 500);
    Graph g = testsupport::random_graph(rng, size(rng));
    for (int k = 0; k < 5; ++k) {
      GenQuery gq = random_query(rng, g);
      std::string text = render(gq);
      auto parsed = parse_query(text);
      ASSERT_TRUE(parsed.ok()) << text << "\n" << parsed.diagnostics.front().message;
      auto got = evaluate(*parsed.query, g);
      bool any = false;
      auto expected = naive_eval(gq, g, any);
      if (gq.ask) {
        EXPECT_EQ(got.ask, any) << text;
        continue;
      }
      std::vector<std::vector<Term>> rows;
      for (const auto& b : got.rows) {
        std::vector<Term> row;
        for (const auto& v : gq.projection) row.push_back(b.at(v));
        rows.push_back(row);
      }
      EXPECT_EQ(rows, expected) << text;
      if (!rows.empty()) ++nonempty;
    }
  }
  EXPECT_GT(nonempty, 30);
}

TEST(SparqlProperty, MonotoneWithoutFilters) {
  std::mt19937_64 rng(37);
  for (int round = 0; round < 40; ++round) {
    Graph g = testsupport::random_graph(rng, 80);
    GenQuery gq = random_query(rng, g);
    gq.filters.clear();
    gq.limit.reset();
    gq.ask = false;
    if (gq.projection.empty()) gq.projection.push_back("x");
    auto parsed = parse_query(render(gq));
    if (!parsed.ok()) continue;
    auto before = evaluate(*parsed.query, g);
    Graph bigger = g;
    bigger.insert(testsupport::random_triple(rng));
    auto after = evaluate(*parsed.query, bigger);
    std::multiset<std::vector<Term>> a, b;
    for (const auto& r : before.rows) {
      std::vector<Term> row;
      for (const auto& v : before.vars) row.push_back(r.at(v));
      a.insert(row);
    }
    for (const auto& r : after.rows) {
      std::vector<Term> row;
      for (const auto& v : after.vars) row.push_back(r.at(v));
      b.insert(row);
    }
    for (const auto& row : a) EXPECT_GE(b.count(row), a.count(row));
  }
}

TEST(SparqlProperty, LimitIsPrefix) {
  std::mt19937_64 rng(41);
  Graph g = testsupport::random_graph(rng, 200);
  auto all = evaluate(parse_query_or_throw("SELECT ?s ?o WHERE { ?s <http://ex.org/p1> ?o }"), g);
  for (std::size_t n = 1; n <= all.rows.size() + 2; ++n) {
    auto lim = evaluate(parse_query_or_throw("SELECT ?s ?o WHERE { ?s <http://ex.org/p1> ?o } LIMIT " + std::to_string(n)), g);
    ASSERT_EQ(lim.rows.size(), std::min(n, all.rows.size()));
    EXPECT_TRUE(std::equal(lim.rows.begin(), lim.rows.end(), all.rows.begin()));
  }
}

TEST(SparqlProperty, PlusPathEqualsFixpointClosure) {
  std::mt19937_64 rng(43);
  for (int round = 0; round < 30; ++round) {
    Graph g = testsupport::random_graph(rng, 120);
    Term p = ex("p" + std::to_string(round % 4));
    auto closure = closure_fixpoint(g, p);
    auto s = evaluate(parse_query_or_throw("SELECT ?a ?b WHERE { ?a " + p.canonical() + "+ ?b }"), g);
    std::set<std::pair<Term, Term>> got;
    for (const auto& r : s.rows) got.emplace(r.at("a"), r.at("b"));
    EXPECT_EQ(got, closure);
    EXPECT_EQ(s.rows.size(), closure.size());
  }
}
