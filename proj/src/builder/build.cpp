#include "ontomem/builder/build.hpp"

#include <filesystem>
#include <memory>

#include "ontomem/error.hpp"
#include "ontomem/reasoner/reasoner.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::builder {

using rdf::Term;
using rdf::Triple;

nlohmann::json BuildReport::to_json() const {
  return {{"documents", documents},
          {"chunks", chunks},
          {"relations", relations},
          {"candidates", candidates},
          {"accepted", delta.accepted.size()},
          {"quarantined", delta.quarantined.size()},
          {"delta", delta.to_json()}};
}

rdf::Graph skolemize(const rdf::Graph& g) {
  auto fix = [](const Term& t) { return t.is_blank() ? Term::iri("urn:ontomem:skolem:" + t.value()) : t; };
  rdf::Graph out;
  for (const auto& t : g.triples()) {
    out.insert(Triple(fix(t.subject()), t.predicate(), fix(t.object())),
               std::span<const rdf::Provenance>(g.provenance(t)));
  }
  return out;
}

BuildReport run_build(Store& store, const BuildOptions& opts) {
  util::KeyValueConfig cfg = store.config();
  if (opts.patterns_path) {
    auto extra = util::KeyValueConfig::load(*opts.patterns_path);
    for (const auto& [k, v] : extra.entries()) cfg.set(k, v);
  }
  if (opts.shapes_path) store.set_shapes(util::read_file(*opts.shapes_path));
  auto shapes = store.shapes();

  std::unique_ptr<Extractor> extractor;
  if (opts.extractor == ExtractorKind::Transcript) {
    if (!opts.transcript_path) throw ConfigError("the transcript extractor needs a transcript file");
    extractor = std::make_unique<TranscriptExtractor>(TranscriptExtractor::load(*opts.transcript_path));
  } else {
    extractor = std::make_unique<RulePatternExtractor>(RulePatternExtractor::from_config(cfg));
  }

  BuildReport report;
  auto docs = opts.sources_dir.empty() ? std::vector<SourceDocument>{} : load_sources(opts.sources_dir);
  auto max_chars = cfg.get_int("chunk.max_chars", 1000);
  if (max_chars < 64) throw ConfigError("chunk.max_chars must be at least 64");
  std::vector<Chunk> all_chunks;
  std::vector<ExtractionRecord> records;
  std::map<std::string, DocContext> contexts;
  for (const auto& doc : docs) {
    contexts[doc.id] = {doc.received_at,
                        doc.kind == DocKind::Dialogue ? rdf::Origin::Dialogue : rdf::Origin::SourceDocument};
    for (auto& chunk : ingest(doc, static_cast<std::size_t>(max_chars))) {
      records.push_back(extractor->extract(chunk));
      all_chunks.push_back(std::move(chunk));
    }
  }
  report.documents = docs.size();
  report.chunks = all_chunks.size();

  int base = store.version();
  seed_aliases(store.registry(), cfg);
  auto norm = normalize(records, store.registry(), NormalizeConfig::from_config(cfg), contexts);
  report.relations = norm.relations.size();
  auto candidates = construct_triples(norm.relations);
  if (opts.schema_path) {
    auto schema = skolemize(turtle::parse_turtle_or_throw(util::read_file(*opts.schema_path), *opts.schema_path).graph);
    std::string source = "schema:" + std::filesystem::path(*opts.schema_path).filename().string();
    for (const auto& t : schema.triples()) {
      candidates.push_back({t, {rdf::Provenance{source, std::nullopt, 0, 1.0, rdf::Origin::SourceDocument}}, true, ""});
    }
  }
  report.candidates = candidates.size();

  auto gate = validate_gate(std::move(candidates), store.trusted(), shapes);
  gate.quarantined.insert(gate.quarantined.begin(), norm.quarantined.begin(), norm.quarantined.end());
  report.delta = store.commit(gate, base);
  store.save_chunks(all_chunks);
  return report;
}

std::vector<Candidate> feedback_candidates(const std::vector<factcheck::Claim>& claims, const std::string& source_id,
                                           std::int64_t at) {
  std::vector<Candidate> out;
  rdf::Provenance prov{source_id, std::nullopt, at, 1.0, rdf::Origin::AnswerFeedback};
  for (const auto& c : claims) {
    if (c.polarity == factcheck::Polarity::Asserted) {
      out.push_back({c.statement, {prov}, false, ""});
      continue;
    }
    std::string group = reasoner::negation_node(c.statement).value();
    for (const auto& t : reasoner::negation_triples(c.statement)) out.push_back({t, {prov}, false, group});
  }
  return out;
}

OntologyDelta run_feedback(Store& store, const std::vector<factcheck::Claim>& claims, const std::string& source_id,
                           std::int64_t at) {
  int base = store.version();
  auto gate = validate_gate(feedback_candidates(claims, source_id, at), store.trusted(), store.shapes());
  return store.commit(gate, base);
}

}  // namespace ontomem::builder
