#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ontomem/builder/source.hpp"
#include "ontomem/util/config.hpp"

namespace ontomem::builder {

struct EntityMention {
  std::string mention;
  // Free text label such as "Disk"; empty when unknown. "literal" marks a
  // value that must not become an IRI.
  std::string type_guess;
  std::vector<std::string> aliases;
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const EntityMention&, const EntityMention&) = default;
};

struct RelationMention {
  std::string subject;
  std::string predicate;
  std::string object;
  double confidence = 1.0;

  friend bool operator==(const RelationMention&, const RelationMention&) = default;
};

struct ExtractionRecord {
  std::string doc_id;
  std::size_t chunk_index = 0;
  std::vector<EntityMention> entities;
  std::vector<RelationMention> relations;
  std::string extractor_id;

  // Throws StructuralError when a relation names a mention missing from
  // `entities` or a confidence lies outside [0,1].
  void validate() const;
  const EntityMention* entity(const std::string& mention) const;

  friend bool operator==(const ExtractionRecord&, const ExtractionRecord&) = default;
};

nlohmann::json to_json(const ExtractionRecord& r);
// Throws InputError on a malformed object.
ExtractionRecord record_from_json(const nlohmann::json& j);

class Extractor {
 public:
  virtual ~Extractor() = default;
  virtual std::string id() const = 0;
  virtual ExtractionRecord extract(const Chunk& chunk) const = 0;
};

struct PatternRule {
  std::string phrase;
  std::string predicate;
  std::string subject_type;
  std::string object_type;
};

// For every sentence, the earliest pattern phrase (longest on ties) splits it
// into subject and object text. Leading articles and trailing punctuation are
// stripped from both sides.
class RulePatternExtractor : public Extractor {
 public:
  explicit RulePatternExtractor(std::vector<PatternRule> rules, double confidence = 0.9);
  // Reads `pattern.<phrase> = <predicate> [<subject type>|-] [<object type>|-]`
  // entries and `extractor.confidence`.
  static RulePatternExtractor from_config(const util::KeyValueConfig& cfg);

  std::string id() const override { return "rule-pattern"; }
  ExtractionRecord extract(const Chunk& chunk) const override;

 private:
  std::vector<PatternRule> rules_;
  double confidence_;
};

// Replays recorded extractor output. Each JSONL line is
// {"chunk_hash": "...", "record": {...}}.
class TranscriptExtractor : public Extractor {
 public:
  static TranscriptExtractor load(const std::string& path);
  static TranscriptExtractor parse(const std::string& jsonl, const std::string& origin = "transcript");

  std::string id() const override { return "transcript"; }
  // Throws TranscriptError when no output was recorded for the chunk hash.
  ExtractionRecord extract(const Chunk& chunk) const override;

  std::size_t size() const { return by_hash_.size(); }

 private:
  std::map<std::string, ExtractionRecord> by_hash_;
};

}  // namespace ontomem::builder
