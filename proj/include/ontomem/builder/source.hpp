#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ontomem::builder {

enum class DocKind { Text, Dialogue, ApiRecord, TableRowset };

std::string to_string(DocKind k);
DocKind doc_kind_from_string(const std::string& s);

// Ordered key-value pairs of one API record or table row.
using Record = std::vector<std::pair<std::string, std::string>>;

struct SourceDocument {
  std::string id;
  DocKind kind = DocKind::Text;
  // TEXT and DIALOGUE.
  std::string text;
  // API_RECORD and TABLE_ROWSET.
  std::vector<Record> records;
  std::int64_t received_at = 0;

  // The character body chunk spans refer to. Records render as
  // "key: value" lines with a blank line after each record.
  std::string body() const;
};

struct Chunk {
  std::string doc_id;
  std::size_t index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;

  std::string id() const { return doc_id + "#" + std::to_string(index); }
  // FNV-1a of the text, 16 hex digits. Transcripts are keyed by it.
  std::string hash() const;
};

std::string render_record(const Record& r);

// Paragraphs first; an oversized paragraph is packed sentence by sentence and
// an oversized sentence is cut at whitespace. Dialogue splits at turn lines,
// record kinds give one chunk per record. Requires max_chunk_chars >= 64.
std::vector<Chunk> ingest(const SourceDocument& doc, std::size_t max_chunk_chars);

// Loads every regular file of `dir`, sorted by name:
//   *.txt, *.md   TEXT
//   *.dlg         DIALOGUE (one "Speaker: utterance" turn per line)
//   *.jsonl       API_RECORD (one flat JSON object per line)
//   *.csv         TABLE_ROWSET (header row, comma separated, "quoted" cells)
// The document id is the file name without extension. An optional
// `received_at.conf` maps file names to timestamps; absent entries get 0.
std::vector<SourceDocument> load_sources(const std::string& dir);

}  // namespace ontomem::builder
