#include "ontomem/factcheck/factcheck.hpp"

#include <algorithm>
#include <set>

#include "ontomem/error.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::factcheck {

using nlohmann::json;
using reasoner::Conflict;
using rdf::Graph;
using rdf::Triple;

std::string_view to_string(Polarity p) { return p == Polarity::Asserted ? "ASSERTED" : "NEGATED"; }

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Supported: return "SUPPORTED";
    case Status::Contradicted: return "CONTRADICTED";
    case Status::NotFound: return "NOT_FOUND";
  }
  return "NOT_FOUND";
}

std::string_view to_string(StepKind k) {
  switch (k) {
    case StepKind::MatchedFact: return "MATCHED_FACT";
    case StepKind::InferenceRule: return "INFERENCE_RULE";
    case StepKind::ConditionCheck: return "CONDITION_CHECK";
    case StepKind::Conflict: return "CONFLICT";
    case StepKind::Lookup: return "LOOKUP";
  }
  return "LOOKUP";
}

std::string_view to_string(Overall o) {
  switch (o) {
    case Overall::Supported: return "SUPPORTED";
    case Overall::Contradicted: return "CONTRADICTED";
    case Overall::Mixed: return "MIXED";
    case Overall::NotFound: return "NOT_FOUND";
  }
  return "NOT_FOUND";
}

namespace {

std::vector<Conflict> new_conflicts(const Graph& g, const std::vector<Conflict>& before) {
  std::set<Conflict> seen(before.begin(), before.end());
  std::vector<Conflict> out;
  for (auto& c : reasoner::check_consistency(g)) {
    if (!seen.count(c)) out.push_back(std::move(c));
  }
  return out;
}

void explain_into(const reasoner::Materialization& m, const Triple& t, std::vector<TraceStep>& trace) {
  for (const auto& [conclusion, d] : reasoner::explain(m, t)) {
    TraceStep step{StepKind::InferenceRule, d.premises, d.rule, std::nullopt,
                   "derived by " + std::string(reasoner::to_string(d.rule))};
    step.triples.push_back(conclusion);
    trace.push_back(std::move(step));
  }
}

std::vector<Triple> conflict_triples(const Conflict& c) {
  std::vector<Triple> out = c.detail;
  out.insert(out.end(), c.axioms.begin(), c.axioms.end());
  return out;
}

Graph with(const Graph& g, const std::vector<Triple>& extra) {
  Graph out = g;
  for (const auto& t : extra) out.insert(t);
  return out;
}

}  // namespace

Verdict check_claim(const Claim& claim, const Graph& trusted) {
  const Triple& s = claim.statement;
  auto m = reasoner::materialize_with_trace(with(trusted, claim.conditions));
  auto m_conflicts = reasoner::check_consistency(m.graph);
  if (!claim.conditions.empty()) {
    auto caused = new_conflicts(m.graph, reasoner::check_consistency(reasoner::materialize(trusted)));
    if (!caused.empty()) {
      throw ConditionInconsistencyError("claim conditions conflict with the trusted graph: " +
                                        reasoner::to_json(caused).dump());
    }
  }

  Verdict v{Status::NotFound, {}, claim};
  for (const auto& c : claim.conditions) {
    v.trace.push_back({StepKind::ConditionCheck, {c}, std::nullopt, std::nullopt,
                       trusted.contains(c) ? "condition holds in the trusted graph" : "condition assumed"});
  }

  // The asserted reading first.
  Status asserted = Status::NotFound;
  std::vector<Conflict> raised;
  reasoner::Materialization m2;
  if (m.graph.contains(s)) {
    asserted = Status::Supported;
  } else {
    m2 = reasoner::materialize_with_trace(with(m.graph, {s}));
    raised = new_conflicts(m2.graph, m_conflicts);
    if (!raised.empty()) asserted = Status::Contradicted;
  }

  bool negated = claim.polarity == Polarity::Negated;
  switch (asserted) {
    case Status::Supported: {
      v.trace.push_back({StepKind::MatchedFact, {s}, std::nullopt, std::nullopt,
                         m.derivations.count(s) ? "statement inferred" : "statement asserted"});
      explain_into(m, s, v.trace);
      if (negated) {
        auto neg = reasoner::negation_triples(s);
        auto m3 = reasoner::materialize(with(m.graph, neg));
        for (const auto& c : new_conflicts(m3, m_conflicts)) {
          v.trace.push_back({StepKind::Conflict, conflict_triples(c), std::nullopt, c,
                             "the negation contradicts the statement"});
        }
      }
      v.status = negated ? Status::Contradicted : Status::Supported;
      break;
    }
    case Status::Contradicted: {
      for (const auto& c : raised) {
        if (negated) {
          // Only the members of M: the statement itself is hypothetical here.
          std::vector<Triple> held;
          for (const auto& t : conflict_triples(c)) {
            if (m.graph.contains(t)) held.push_back(t);
          }
          v.trace.push_back({StepKind::Conflict, held, std::nullopt, c, "asserting the statement would raise this conflict"});
          for (const auto& t : held) explain_into(m, t, v.trace);
        } else {
          v.trace.push_back({StepKind::Conflict, conflict_triples(c), std::nullopt, c, "the statement raises this conflict"});
          for (const auto& t : c.detail) explain_into(m2, t, v.trace);
        }
      }
      v.status = negated ? Status::Supported : Status::Contradicted;
      break;
    }
    case Status::NotFound:
      v.trace.push_back({StepKind::Lookup, {s}, std::nullopt, std::nullopt, "statement not in the materialized graph"});
      v.trace.push_back({StepKind::Lookup, {s}, std::nullopt, std::nullopt, "adding the statement raises no conflict"});
      v.status = Status::NotFound;
      break;
  }
  return v;
}

AnswerVerdict check_answer(const std::vector<Claim>& claims, const Graph& trusted) {
  if (claims.empty()) throw InputError("check_answer needs at least one claim");
  AnswerVerdict out;
  std::size_t supported = 0;
  std::size_t not_found = 0;
  bool contradicted = false;
  for (const auto& c : claims) {
    out.verdicts.push_back(check_claim(c, trusted));
    switch (out.verdicts.back().status) {
      case Status::Supported: ++supported; break;
      case Status::NotFound: ++not_found; break;
      case Status::Contradicted: contradicted = true; break;
    }
  }
  if (contradicted) {
    out.overall = Overall::Contradicted;
  } else if (supported == claims.size()) {
    out.overall = Overall::Supported;
  } else if (not_found == claims.size()) {
    out.overall = Overall::NotFound;
  } else {
    out.overall = Overall::Mixed;
  }
  return out;
}

namespace {

Triple triple_from_json(const json& j, const turtle::PrefixMap& prefixes) {
  auto term = [&](const char* field) {
    if (!j.contains(field) || !j[field].is_string()) throw InputError(std::string("missing string field '") + field + "'");
    std::string err;
    auto t = turtle::parse_term(j[field].get<std::string>(), &err, prefixes);
    if (!t) throw InputError(std::string(field) + ": " + err);
    return *t;
  };
  try {
    return Triple(term("subject"), term("predicate"), term("object"));
  } catch (const StructuralError& e) {
    throw InputError(e.what());
  }
}

json triple_json(const Triple& t) {
  return {{"subject", t.subject().canonical()}, {"predicate", t.predicate().canonical()}, {"object", t.object().canonical()}};
}

}  // namespace

ClaimParseResult parse_claims(std::string_view jsonl, const turtle::PrefixMap& prefixes) {
  ClaimParseResult out;
  int line_no = 0;
  for (const auto& line : util::split(jsonl, '\n')) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    try {
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
      }
      if (!j.is_object()) throw InputError("claim must be a JSON object");
      Claim c{triple_from_json(j, prefixes)};
      std::string pol = j.value("polarity", "ASSERTED");
      if (pol == "NEGATED") {
        c.polarity = Polarity::Negated;
      } else if (pol != "ASSERTED") {
        throw InputError("polarity must be ASSERTED or NEGATED, got '" + pol + "'");
      }
      if (j.contains("conditions")) {
        if (!j["conditions"].is_array()) throw InputError("conditions must be an array");
        for (const auto& cj : j["conditions"]) c.conditions.push_back(triple_from_json(cj, prefixes));
      }
      if (j.contains("source_text") && j["source_text"].is_string()) c.source_text = j["source_text"].get<std::string>();
      out.claims.push_back(std::move(c));
    } catch (const InputError& e) {
      out.diagnostics.push_back({line_no, e.what()});
    }
  }
  return out;
}

json to_json(const Claim& c) {
  json j = triple_json(c.statement);
  j["polarity"] = std::string(to_string(c.polarity));
  json conds = json::array();
  for (const auto& t : c.conditions) conds.push_back(triple_json(t));
  j["conditions"] = std::move(conds);
  if (c.source_text) j["source_text"] = *c.source_text;
  return j;
}

json to_json(const Verdict& v) {
  json trace = json::array();
  for (const auto& s : v.trace) {
    json triples = json::array();
    for (const auto& t : s.triples) triples.push_back(t.canonical());
    json step = {{"kind", std::string(to_string(s.kind))}, {"triples", std::move(triples)}, {"note", s.note}};
    if (s.rule) step["rule"] = std::string(reasoner::to_string(*s.rule));
    if (s.conflict) step["conflict"] = reasoner::to_json({*s.conflict}).at(0);
    trace.push_back(std::move(step));
  }
  return {{"status", std::string(to_string(v.status))}, {"claim", to_json(v.claim)}, {"trace", std::move(trace)}};
}

json to_json(const AnswerVerdict& a) {
  json verdicts = json::array();
  for (const auto& v : a.verdicts) verdicts.push_back(to_json(v));
  return {{"overall", std::string(to_string(a.overall))}, {"verdicts", std::move(verdicts)}};
}

}  // namespace ontomem::factcheck
