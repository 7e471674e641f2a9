#include "ontomem/builder/source.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <optional>
#include <set>

#include <json.hpp>

#include "ontomem/error.hpp"
#include "ontomem/util/config.hpp"
#include "ontomem/util/text.hpp"

namespace ontomem::builder {

namespace fs = std::filesystem;

std::string to_string(DocKind k) {
  switch (k) {
    case DocKind::Text: return "TEXT";
    case DocKind::Dialogue: return "DIALOGUE";
    case DocKind::ApiRecord: return "API_RECORD";
    case DocKind::TableRowset: return "TABLE_ROWSET";
  }
  return "TEXT";
}

DocKind doc_kind_from_string(const std::string& s) {
  if (s == "TEXT") return DocKind::Text;
  if (s == "DIALOGUE") return DocKind::Dialogue;
  if (s == "API_RECORD") return DocKind::ApiRecord;
  if (s == "TABLE_ROWSET") return DocKind::TableRowset;
  throw InputError("unknown document kind '" + s + "'");
}

std::string render_record(const Record& r) {
  std::string out;
  for (const auto& [k, v] : r) out += k + ": " + v + "\n";
  out += "\n";
  return out;
}

std::string SourceDocument::body() const {
  if (kind == DocKind::Text || kind == DocKind::Dialogue) return text;
  std::string out;
  for (const auto& r : records) out += render_record(r);
  return out;
}

std::string Chunk::hash() const { return util::hex64(util::fnv1a64(text)); }

namespace {

using Span = std::pair<std::size_t, std::size_t>;

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_continuation(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

// Cuts [s, e) into pieces of at most `max`, preferring to end a piece just
// after whitespace.
void hard_split(const std::string& body, std::size_t s, std::size_t e, std::size_t max, std::vector<Span>& out) {
  while (e - s > max) {
    std::size_t cut = 0;
    for (std::size_t c = s + max; c > s; --c) {
      if (is_space(body[c - 1])) {
        cut = c;
        break;
      }
    }
    if (cut == 0) {
      cut = s + max;
      while (cut > s + 1 && is_continuation(body[cut])) --cut;
    }
    out.push_back({s, cut});
    s = cut;
  }
  if (s < e) out.push_back({s, e});
}

std::vector<Span> sentences(const std::string& body, std::size_t s, std::size_t e) {
  std::vector<Span> out;
  std::size_t start = s;
  std::size_t i = s;
  while (i < e) {
    char c = body[i];
    bool boundary = c == '\n' || ((c == '.' || c == '!' || c == '?') && (i + 1 == e || is_space(body[i + 1])));
    ++i;
    if (!boundary) continue;
    while (i < e && is_space(body[i])) ++i;
    out.push_back({start, i});
    start = i;
  }
  if (start < e) out.push_back({start, e});
  return out;
}

void split_unit(const std::string& body, Span unit, std::size_t max, std::vector<Span>& out) {
  if (unit.second - unit.first <= max) {
    out.push_back(unit);
    return;
  }
  std::optional<Span> cur;
  for (const auto& sent : sentences(body, unit.first, unit.second)) {
    if (cur && sent.second - cur->first <= max) {
      cur->second = sent.second;
      continue;
    }
    if (cur) out.push_back(*cur);
    cur.reset();
    if (sent.second - sent.first <= max) {
      cur = sent;
    } else {
      hard_split(body, sent.first, sent.second, max, out);
    }
  }
  if (cur) out.push_back(*cur);
}

// A paragraph ends after a whitespace run holding at least two newlines.
std::vector<Span> paragraphs(const std::string& body) {
  std::vector<Span> out;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < body.size()) {
    if (!is_space(body[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    int newlines = 0;
    while (j < body.size() && is_space(body[j])) newlines += body[j++] == '\n';
    bool leading = body.find_first_not_of(" \t\r\n", start) >= i;
    if (newlines >= 2 && !leading && j < body.size()) {
      out.push_back({start, j});
      start = j;
    }
    i = j;
  }
  if (start < body.size()) out.push_back({start, body.size()});
  return out;
}

// A turn starts at every non-blank line; blank lines stay with the turn above.
std::vector<Span> turns(const std::string& body) {
  std::vector<Span> out;
  std::size_t start = 0;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t nl = body.find('\n', pos);
    std::size_t line_end = nl == std::string::npos ? body.size() : nl + 1;
    bool blank = util::trim(std::string_view(body).substr(pos, line_end - pos)).empty();
    if (!blank && pos > start && !util::trim(std::string_view(body).substr(start, pos - start)).empty()) {
      out.push_back({start, pos});
      start = pos;
    }
    pos = line_end;
  }
  if (start < body.size()) out.push_back({start, body.size()});
  return out;
}

}  // namespace

std::vector<Chunk> ingest(const SourceDocument& doc, std::size_t max_chunk_chars) {
  if (max_chunk_chars < 64) throw ConfigError("max_chunk_chars must be at least 64");
  const std::string body = doc.body();
  std::vector<Span> units;
  switch (doc.kind) {
    case DocKind::Text: units = paragraphs(body); break;
    case DocKind::Dialogue: units = turns(body); break;
    case DocKind::ApiRecord:
    case DocKind::TableRowset: {
      std::size_t off = 0;
      for (const auto& r : doc.records) {
        std::size_t len = render_record(r).size();
        units.push_back({off, off + len});
        off += len;
      }
      break;
    }
  }
  std::vector<Span> spans;
  for (const auto& u : units) split_unit(body, u, max_chunk_chars, spans);
  std::vector<Chunk> chunks;
  for (const auto& [s, e] : spans) {
    chunks.push_back({doc.id, chunks.size(), s, e, body.substr(s, e - s)});
  }
  return chunks;
}

namespace {

std::vector<std::string> parse_csv_line(const std::string& line, const std::string& where) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::string(util::trim(cur)));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (quoted) throw InputError(where + ": unterminated quoted cell");
  cells.push_back(std::string(util::trim(cur)));
  return cells;
}

std::vector<Record> read_csv(const std::string& text, const std::string& where) {
  std::vector<Record> out;
  std::vector<std::string> header;
  int line_no = 0;
  for (const auto& line : util::split(text, '\n')) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    auto cells = parse_csv_line(line, where + ":" + std::to_string(line_no));
    if (header.empty()) {
      header = std::move(cells);
      continue;
    }
    if (cells.size() != header.size()) {
      throw InputError(where + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                       " cells, found " + std::to_string(cells.size()));
    }
    Record r;
    for (std::size_t i = 0; i < cells.size(); ++i) r.emplace_back(header[i], cells[i]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Record> read_jsonl(const std::string& text, const std::string& where) {
  std::vector<Record> out;
  int line_no = 0;
  for (const auto& line : util::split(text, '\n')) {
    ++line_no;
    if (util::trim(line).empty()) continue;
    nlohmann::ordered_json obj;
    try {
      obj = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.is_object()) throw InputError(where + ":" + std::to_string(line_no) + ": record must be a JSON object");
    Record r;
    for (const auto& [k, v] : obj.items()) r.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<SourceDocument> load_sources(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("sources directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename().string().front() != '.') files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  util::KeyValueConfig stamps;
  fs::path stamp_file = fs::path(dir) / "received_at.conf";
  if (fs::exists(stamp_file)) stamps = util::KeyValueConfig::load(stamp_file.string());

  std::vector<SourceDocument> docs;
  std::set<std::string> ids;
  for (const auto& path : files) {
    std::string name = path.filename().string();
    if (name == "received_at.conf") continue;
    std::string ext = path.extension().string();
    SourceDocument doc;
    doc.id = path.stem().string();
    doc.received_at = stamps.get_int(name, 0);
    std::string content = util::read_file(path.string());
    if (ext == ".txt" || ext == ".md") {
      doc.kind = DocKind::Text;
      doc.text = std::move(content);
    } else if (ext == ".dlg") {
      doc.kind = DocKind::Dialogue;
      doc.text = std::move(content);
    } else if (ext == ".jsonl") {
      doc.kind = DocKind::ApiRecord;
      doc.records = read_jsonl(content, name);
    } else if (ext == ".csv") {
      doc.kind = DocKind::TableRowset;
      doc.records = read_csv(content, name);
    } else {
      throw InputError("unsupported source file type: " + name);
    }
    if (!ids.insert(doc.id).second) throw InputError("duplicate document id '" + doc.id + "' in " + dir);
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace ontomem::builder
