#include "ontomem/builder/extract.hpp"

#include <algorithm>
#include <cctype>

#include "ontomem/error.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::builder {

using nlohmann::json;

void ExtractionRecord::validate() const {
  for (const auto& r : relations) {
    if (!entity(r.subject)) throw StructuralError("relation subject '" + r.subject + "' is not an entity of the record");
    if (!entity(r.object)) throw StructuralError("relation object '" + r.object + "' is not an entity of the record");
    if (!(r.confidence >= 0.0 && r.confidence <= 1.0)) {
      throw StructuralError("relation confidence " + std::to_string(r.confidence) + " outside [0,1]");
    }
  }
}

const EntityMention* ExtractionRecord::entity(const std::string& mention) const {
  for (const auto& e : entities) {
    if (e.mention == mention) return &e;
  }
  return nullptr;
}

json to_json(const ExtractionRecord& r) {
  json entities = json::array();
  for (const auto& e : r.entities) {
    entities.push_back({{"mention", e.mention},
                        {"type", e.type_guess},
                        {"aliases", e.aliases},
                        {"span", {e.start, e.end}}});
  }
  json relations = json::array();
  for (const auto& rel : r.relations) {
    relations.push_back(
        {{"subject", rel.subject}, {"predicate", rel.predicate}, {"object", rel.object}, {"confidence", rel.confidence}});
  }
  return {{"doc_id", r.doc_id},
          {"chunk_index", r.chunk_index},
          {"entities", std::move(entities)},
          {"relations", std::move(relations)},
          {"extractor_id", r.extractor_id}};
}

ExtractionRecord record_from_json(const json& j) {
  try {
    ExtractionRecord r;
    r.doc_id = j.value("doc_id", "");
    r.chunk_index = j.value("chunk_index", std::size_t{0});
    r.extractor_id = j.value("extractor_id", "transcript");
    for (const auto& e : j.value("entities", json::array())) {
      EntityMention m;
      m.mention = e.at("mention").get<std::string>();
      m.type_guess = e.value("type", "");
      m.aliases = e.value("aliases", std::vector<std::string>{});
      if (e.contains("span")) {
        m.start = e.at("span").at(0).get<std::size_t>();
        m.end = e.at("span").at(1).get<std::size_t>();
      }
      r.entities.push_back(std::move(m));
    }
    for (const auto& rel : j.value("relations", json::array())) {
      r.relations.push_back({rel.at("subject").get<std::string>(), rel.at("predicate").get<std::string>(),
                             rel.at("object").get<std::string>(), rel.value("confidence", 1.0)});
    }
    r.validate();
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed extraction record: ") + e.what());
  } catch (const StructuralError& e) {
    throw InputError(std::string("malformed extraction record: ") + e.what());
  }
}

RulePatternExtractor::RulePatternExtractor(std::vector<PatternRule> rules, double confidence)
    : rules_(std::move(rules)), confidence_(confidence) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) throw ConfigError("extractor.confidence must lie in [0,1]");
  for (auto& r : rules_) {
    r.phrase = util::to_lower(util::trim(r.phrase));
    if (r.phrase.empty() || r.predicate.empty()) throw ConfigError("pattern rule needs a phrase and a predicate");
  }
}

RulePatternExtractor RulePatternExtractor::from_config(const util::KeyValueConfig& cfg) {
  std::vector<PatternRule> rules;
  for (const auto& [key, value] : cfg.entries()) {
    if (!util::starts_with(key, "pattern.")) continue;
    auto parts = util::split_ws(value);
    if (parts.empty() || parts.size() > 3) {
      throw ConfigError("key " + key + ": expected '<predicate> [<subject type>] [<object type>]'");
    }
    PatternRule r{key.substr(8), parts[0], "", ""};
    if (parts.size() > 1 && parts[1] != "-") r.subject_type = parts[1];
    if (parts.size() > 2 && parts[2] != "-") r.object_type = parts[2];
    rules.push_back(std::move(r));
  }
  return RulePatternExtractor(std::move(rules), cfg.get_double("extractor.confidence", 0.9));
}

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

struct Piece {
  std::size_t start;
  std::size_t end;
};

Piece trim_piece(const std::string& text, Piece p) {
  while (p.start < p.end && is_space(text[p.start])) ++p.start;
  while (p.end > p.start && (is_space(text[p.end - 1]) || std::string_view(".!?;,:").find(text[p.end - 1]) !=
                                                              std::string_view::npos)) {
    --p.end;
  }
  return p;
}

Piece strip_article(const std::string& text, Piece p) {
  for (std::string_view art : {"the ", "a ", "an "}) {
    if (p.end - p.start > art.size() && util::to_lower(text.substr(p.start, art.size())) == art) {
      p.start += art.size();
      while (p.start < p.end && is_space(text[p.start])) ++p.start;
      break;
    }
  }
  return p;
}

// "Speaker: ..." or "key: ..." prefix of a dialogue turn or record line.
Piece strip_label(const std::string& text, Piece p) {
  std::size_t i = p.start;
  while (i < p.end && (is_alnum(text[i]) || text[i] == '_' || text[i] == '-')) ++i;
  if (i > p.start && i + 1 < p.end && text[i] == ':' && is_space(text[i + 1])) {
    p.start = i + 1;
    while (p.start < p.end && is_space(text[p.start])) ++p.start;
  }
  return p;
}

std::vector<Piece> sentence_pieces(const std::string& text) {
  std::vector<Piece> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    bool boundary = c == '\n' || ((c == '.' || c == '!' || c == '?') && (i + 1 == text.size() || is_space(text[i + 1])));
    if (boundary) {
      out.push_back({start, i + 1});
      start = i + 1;
    }
  }
  if (start < text.size()) out.push_back({start, text.size()});
  return out;
}

}  // namespace

ExtractionRecord RulePatternExtractor::extract(const Chunk& chunk) const {
  ExtractionRecord rec;
  rec.doc_id = chunk.doc_id;
  rec.chunk_index = chunk.index;
  rec.extractor_id = id();
  const std::string& text = chunk.text;
  const std::string lower = util::to_lower(text);

  auto add_entity = [&](Piece p, const std::string& type) {
    std::string mention = text.substr(p.start, p.end - p.start);
    for (auto& e : rec.entities) {
      if (e.mention != mention) continue;
      if (e.type_guess.empty()) e.type_guess = type;
      return mention;
    }
    rec.entities.push_back({mention, type, {}, p.start, p.end});
    return mention;
  };

  for (Piece sent : sentence_pieces(text)) {
    sent = strip_label(text, trim_piece(text, sent));
    if (sent.start >= sent.end) continue;
    const PatternRule* best = nullptr;
    std::size_t best_pos = 0;
    for (const auto& rule : rules_) {
      std::size_t from = sent.start;
      while (true) {
        std::size_t pos = lower.find(rule.phrase, from);
        if (pos == std::string::npos || pos + rule.phrase.size() > sent.end) break;
        std::size_t after = pos + rule.phrase.size();
        bool bounded = (pos == sent.start || !is_alnum(lower[pos - 1])) && (after == sent.end || !is_alnum(lower[after]));
        if (bounded && pos > sent.start && after < sent.end) {
          if (!best || pos < best_pos || (pos == best_pos && rule.phrase.size() > best->phrase.size())) {
            best = &rule;
            best_pos = pos;
          }
          break;
        }
        from = pos + 1;
      }
    }
    if (!best) continue;
    Piece subj = strip_article(text, trim_piece(text, {sent.start, best_pos}));
    Piece obj = strip_article(text, trim_piece(text, {best_pos + best->phrase.size(), sent.end}));
    if (subj.start >= subj.end || obj.start >= obj.end) continue;
    std::string s = add_entity(subj, best->subject_type);
    std::string o = add_entity(obj, best->object_type);
    rec.relations.push_back({s, best->predicate, o, confidence_});
  }
  return rec;
}

TranscriptExtractor TranscriptExtractor::load(const std::string& path) {
  return parse(util::read_file(path), path);
}

TranscriptExtractor TranscriptExtractor::parse(const std::string& jsonl, const std::string& origin) {
  TranscriptExtractor t;
  int line_no = 0;
  for (const auto& line : util::split(jsonl, '\n')) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    std::string where = origin + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("chunk_hash") || !j["chunk_hash"].is_string() || !j.contains("record")) {
      throw InputError(where + ": expected {\"chunk_hash\": ..., \"record\": {...}}");
    }
    try {
      t.by_hash_[j["chunk_hash"].get<std::string>()] = record_from_json(j["record"]);
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  return t;
}

ExtractionRecord TranscriptExtractor::extract(const Chunk& chunk) const {
  auto it = by_hash_.find(chunk.hash());
  if (it == by_hash_.end()) {
    throw TranscriptError("no transcript recorded for chunk " + chunk.id() + " (hash " + chunk.hash() + ")");
  }
  ExtractionRecord r = it->second;
  r.doc_id = chunk.doc_id;
  r.chunk_index = chunk.index;
  return r;
}

}  // namespace ontomem::builder
