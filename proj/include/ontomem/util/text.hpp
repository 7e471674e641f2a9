#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ontomem::util {

// 64-bit FNV-1a. Stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);
std::string to_lower(std::string_view s);

// Lowercase and collapse every whitespace run to one space; trims.
std::string fold(std::string_view s);

// "Peg A" -> "peg-a". Non-alphanumeric ASCII runs become one hyphen;
// non-ASCII bytes are kept as-is.
std::string slugify(std::string_view s);

// "located in" -> "locatedIn" / "LocatedIn".
std::string lower_camel(std::string_view s);
std::string upper_camel(std::string_view s);

// Lowercased alphanumeric tokens; bytes >= 0x80 count as word characters
// so UTF-8 words stay intact.
std::vector<std::string> tokenize_words(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);
void append_file(const std::string& path, std::string_view content);

}  // namespace ontomem::util
