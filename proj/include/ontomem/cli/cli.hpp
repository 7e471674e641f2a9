#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ontomem::cli {

inline constexpr int kExitOk = 0;
// Nonconforming validation, CONTRADICTED overall verdict.
inline constexpr int kExitNegative = 1;
// Usage, input and I/O errors.
inline constexpr int kExitError = 2;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace ontomem::cli
