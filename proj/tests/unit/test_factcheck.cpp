#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ontomem/builder/pipeline.hpp"
#include "ontomem/error.hpp"
#include "ontomem/factcheck/factcheck.hpp"
#include "ontomem/rdf/vocab.hpp"
#include "test_support.hpp"

namespace fc = ontomem::factcheck;
namespace rs = ontomem::reasoner;
namespace vocab = ontomem::vocab;
using namespace testsupport;

namespace {

const ontomem::turtle::PrefixMap kPrefixes = {{"reg", "http://example.org/reg#"}, {"ind", "http://example.org/ind/"}};

Term reg(const std::string& l) { return Term::iri("http://example.org/reg#" + l); }
Term ind(const std::string& l) { return Term::iri("http://example.org/ind/" + l); }

Graph ind_fixture() {
  return ontomem::turtle::parse_turtle_or_throw(ontomem::util::read_file(fixture("factcheck/ind.ttl"))).graph;
}

fc::Claim claim(const Triple& t, fc::Polarity pol = fc::Polarity::Asserted, std::vector<Triple> conds = {}) {
  return {t, pol, std::move(conds), std::nullopt};
}

Triple no_hold() { return Triple(ind("IND-1"), reg("clinicalHold"), Term::boolean(false)); }
Triple may_proceed() { return Triple(ind("Sponsor-1"), reg("mayProceed"), ind("IND-1")); }

bool has_step(const fc::Verdict& v, fc::StepKind k) {
  for (const auto& s : v.trace) {
    if (s.kind == k) return true;
  }
  return false;
}

fc::Status swap(fc::Status s) {
  if (s == fc::Status::Supported) return fc::Status::Contradicted;
  if (s == fc::Status::Contradicted) return fc::Status::Supported;
  return s;
}

Graph with(Graph g, const std::vector<Triple>& extra) {
  for (const auto& t : extra) g.insert(t);
  return g;
}

// Every SUPPORTED trace triple lies in M; every CONTRADICTED trace carries a
// conflict that check_consistency reproduces on the hypothetical graph.
void expect_trace_valid(const fc::Verdict& v, const Graph& trusted) {
  Graph m = rs::materialize(with(trusted, v.claim.conditions));
  if (v.status == fc::Status::Supported) {
    ASSERT_FALSE(v.trace.empty());
    for (const auto& step : v.trace) {
      for (const auto& t : step.triples) ASSERT_TRUE(m.contains(t)) << t.canonical();
    }
  }
  if (v.status == fc::Status::Contradicted) {
    std::vector<Triple> hypo = {v.claim.statement};
    if (v.claim.polarity == fc::Polarity::Negated) hypo = rs::negation_triples(v.claim.statement);
    auto conflicts = rs::check_consistency(rs::materialize(with(m, hypo)));
    bool found = false;
    for (const auto& step : v.trace) {
      if (step.kind != fc::StepKind::Conflict) continue;
      ASSERT_TRUE(step.conflict.has_value());
      found = found || std::find(conflicts.begin(), conflicts.end(), *step.conflict) != conflicts.end();
    }
    ASSERT_TRUE(found);
  }
  if (v.status == fc::Status::NotFound) ASSERT_TRUE(has_step(v, fc::StepKind::Lookup));
}

}  // namespace

TEST(FactCheck, SponsorMayProceedIsSupported) {
  Graph g = ind_fixture();
  auto v = fc::check_claim(claim(may_proceed(), fc::Polarity::Asserted, {no_hold()}), g);
  EXPECT_EQ(v.status, fc::Status::Supported);
  EXPECT_TRUE(has_step(v, fc::StepKind::ConditionCheck));
  EXPECT_TRUE(has_step(v, fc::StepKind::MatchedFact));
  bool inverse = false;
  for (const auto& s : v.trace) inverse = inverse || (s.rule && *s.rule == rs::RuleId::InverseOf);
  EXPECT_TRUE(inverse);
  expect_trace_valid(v, g);
}

TEST(FactCheck, NegativeAnswerIsContradicted) {
  Graph g = ind_fixture();
  auto v = fc::check_claim(claim(may_proceed(), fc::Polarity::Negated, {no_hold()}), g);
  EXPECT_EQ(v.status, fc::Status::Contradicted);
  ASSERT_TRUE(has_step(v, fc::StepKind::Conflict));
  expect_trace_valid(v, g);
}

TEST(FactCheck, SecondSponsorContradictsFunctionalRule) {
  Graph g = ind_fixture();
  auto v = fc::check_claim(claim(Triple(ind("Sponsor-1"), reg("mayProceed"), ind("IND-7"))), g);
  EXPECT_EQ(v.status, fc::Status::Contradicted);
  expect_trace_valid(v, g);
  auto neg = fc::check_claim(claim(Triple(ind("Sponsor-1"), reg("mayProceed"), ind("IND-7")), fc::Polarity::Negated), g);
  EXPECT_EQ(neg.status, fc::Status::Supported);
  expect_trace_valid(neg, g);
}

TEST(FactCheck, StoredNegationContradicts) {
  Graph g = ind_fixture();
  Triple denied(ind("IND-1"), reg("exempt"), Term::boolean(true));
  for (const auto& t : rs::negation_triples(denied)) g.insert(t);
  auto v = fc::check_claim(claim(denied), g);
  EXPECT_EQ(v.status, fc::Status::Contradicted);
  ASSERT_TRUE(has_step(v, fc::StepKind::Conflict));
  expect_trace_valid(v, g);
}

TEST(FactCheck, AbsentEntityIsNotFound) {
  Graph g = ind_fixture();
  auto v = fc::check_claim(claim(Triple(ind("Sponsor-9"), reg("mayProceed"), ind("IND-9"))), g);
  EXPECT_EQ(v.status, fc::Status::NotFound);
  ASSERT_TRUE(has_step(v, fc::StepKind::Lookup));
  EXPECT_EQ(v.trace[0].triples[0], v.claim.statement);
}

TEST(FactCheck, InconsistentConditionIsAnError) {
  Graph g = ind_fixture();
  Triple lift(ind("IND-2"), reg("clinicalHold"), Term::boolean(false));
  EXPECT_THROW(fc::check_claim(claim(may_proceed(), fc::Polarity::Asserted, {lift}), g),
               ontomem::ConditionInconsistencyError);
}

TEST(FactCheck, ConditionsNeverLeak) {
  Graph g = ind_fixture();
  auto before = g.content_hash();
  for (int i = 0; i < 5; ++i) {
    fc::check_claim(claim(may_proceed(), fc::Polarity::Negated, {no_hold()}), g);
    fc::check_claim(claim(Triple(ind("IND-1"), reg("clinicalHold"), Term::boolean(true)),
                          fc::Polarity::Asserted, {no_hold()}),
                    g);
  }
  EXPECT_EQ(g.content_hash(), before);
  EXPECT_FALSE(g.contains(no_hold()));
}

TEST(CheckAnswer, Aggregation) {
  Graph g = ind_fixture();
  auto sup = claim(may_proceed());
  auto con = claim(may_proceed(), fc::Polarity::Negated);
  auto nf = claim(Triple(ind("X"), reg("y"), ind("Z")));
  EXPECT_EQ(fc::check_answer({sup, sup}, g).overall, fc::Overall::Supported);
  EXPECT_EQ(fc::check_answer({sup, con, sup}, g).overall, fc::Overall::Contradicted);
  EXPECT_EQ(fc::check_answer({sup, nf}, g).overall, fc::Overall::Mixed);
  EXPECT_EQ(fc::check_answer({nf}, g).overall, fc::Overall::NotFound);
  EXPECT_EQ(fc::check_answer({sup, nf}, g).verdicts.size(), 2u);
  EXPECT_THROW(fc::check_answer({}, g), ontomem::InputError);
}

TEST(ParseClaims, FixtureGivesThreeClaimsAndOneDiagnostic) {
  auto r = fc::parse_claims(ontomem::util::read_file(fixture("factcheck/claims.jsonl")), kPrefixes);
  ASSERT_EQ(r.claims.size(), 3u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].line, 3);
  EXPECT_EQ(r.claims[0].statement, may_proceed());
  EXPECT_EQ(r.claims[0].conditions, std::vector<Triple>{no_hold()});
  EXPECT_EQ(r.claims[1].polarity, fc::Polarity::Negated);
  EXPECT_EQ(r.claims[0].source_text, std::optional<std::string>("The sponsor may initiate the investigation."));

  auto verdicts = fc::check_answer(r.claims, ind_fixture());
  EXPECT_EQ(verdicts.verdicts[0].status, fc::Status::Supported);
  EXPECT_EQ(verdicts.verdicts[1].status, fc::Status::Contradicted);
  EXPECT_EQ(verdicts.verdicts[2].status, fc::Status::NotFound);
}

TEST(ParseClaims, DiagnosticsForBadLines) {
  auto r = fc::parse_claims("{\"subject\": \"<http://a>\", \"predicate\": \"<http://p>\", \"object\": \"1\"}\n"
                            "not json\n"
                            "{\"subject\": \"<http://a>\", \"predicate\": \"<http://p>\", \"object\": \"<http://b>\", "
                            "\"polarity\": \"MAYBE\"}\n"
                            "{\"subject\": \"<http://a>\", \"predicate\": \"<http://p>\", \"object\": \"<http://b>\"}\n");
  ASSERT_EQ(r.claims.size(), 2u);
  EXPECT_EQ(r.claims[0].statement.object(), Term::integer(1));
  ASSERT_EQ(r.diagnostics.size(), 2u);
  EXPECT_EQ(r.diagnostics[0].line, 2);
  EXPECT_EQ(r.diagnostics[1].line, 3);
}

TEST(FactCheck, JsonShape) {
  auto v = fc::check_claim(claim(may_proceed(), fc::Polarity::Negated, {no_hold()}), ind_fixture());
  auto j = fc::to_json(v);
  EXPECT_EQ(j["status"], "CONTRADICTED");
  EXPECT_EQ(j["claim"]["polarity"], "NEGATED");
  EXPECT_TRUE(j["trace"].is_array());
}

namespace {

const char* kSchema = R"(
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix ex: <http://ex.org/> .
ex:C0 owl:disjointWith ex:C1 .
ex:p0 a owl:FunctionalProperty .
ex:p1 rdfs:domain ex:C0 .
ex:p2 owl:inverseOf ex:p3 .
ex:p3 rdfs:range ex:C1 .
)";

Triple random_fact(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> node(0, 4), pred(0, 3), kind(0, 4);
  Term s = ex("n" + std::to_string(node(rng)));
  if (kind(rng) == 0) return Triple(s, Term::iri(vocab::rdf::type), ex("C" + std::to_string(node(rng) % 2)));
  return Triple(s, ex("p" + std::to_string(pred(rng))), ex("n" + std::to_string(node(rng))));
}

// A gate-sound trusted graph: schema plus gated random facts and negations.
Graph random_trusted(std::mt19937_64& rng, std::vector<Triple>* accepted_out = nullptr) {
  Graph g = ontomem::turtle::parse_turtle_or_throw(kSchema).graph;
  std::vector<ontomem::builder::Candidate> cands;
  for (int i = 0; i < 12; ++i) cands.push_back({random_fact(rng), {}, false, ""});
  for (int i = 0; i < 2; ++i) {
    Triple t = random_fact(rng);
    for (const auto& n : rs::negation_triples(t)) cands.push_back({n, {}, false, "neg" + std::to_string(i)});
  }
  for (const auto& c : ontomem::builder::validate_gate(cands, g, {}).accepted) {
    g.insert(c.triple);
    if (accepted_out) accepted_out->push_back(c.triple);
  }
  return g;
}

}  // namespace

TEST(FactCheckProperty, PolarityFlipSwapsStatusAndTracesAreValid) {
  std::mt19937_64 rng(99);
  int counts[3] = {0, 0, 0};
  for (int round = 0; round < 150; ++round) {
    Graph trusted = random_trusted(rng);
    auto hash = trusted.content_hash();
    for (int k = 0; k < 4; ++k) {
      std::vector<Triple> conds;
      if (rng() % 3 == 0) conds.push_back(random_fact(rng));
      Triple st = random_fact(rng);
      std::optional<fc::Verdict> pos_v;
      try {
        pos_v = fc::check_claim(claim(st, fc::Polarity::Asserted, conds), trusted);
      } catch (const ontomem::ConditionInconsistencyError&) {
        auto before = rs::check_consistency(rs::materialize(trusted));
        auto after = rs::check_consistency(rs::materialize(with(trusted, conds)));
        ASSERT_NE(before, after) << "condition error without a new conflict";
        continue;
      }
      const fc::Verdict& pos = *pos_v;
      auto neg = fc::check_claim(claim(st, fc::Polarity::Negated, conds), trusted);
      ASSERT_EQ(neg.status, swap(pos.status)) << st.canonical();
      expect_trace_valid(pos, trusted);
      expect_trace_valid(neg, trusted);
      ++counts[static_cast<int>(pos.status)];
    }
    ASSERT_EQ(trusted.content_hash(), hash);
  }
  EXPECT_GT(counts[0], 0);
  EXPECT_GT(counts[1], 0);
  EXPECT_GT(counts[2], 0);
}

TEST(FactCheckProperty, GateAcceptedStatementsAreSupported) {
  std::mt19937_64 rng(100);
  for (int round = 0; round < 100; ++round) {
    std::vector<Triple> accepted;
    Graph trusted = random_trusted(rng, &accepted);
    for (const auto& t : accepted) ASSERT_EQ(fc::check_claim(claim(t), trusted).status, fc::Status::Supported);
  }
}
