#pragma once

#include <string>
#include <string_view>

#include "clab/fem.hpp"

namespace clab {

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`. Throws IoError.
void write_file_atomic(const std::string& path, std::string_view bytes);

/// Serializes a solution in the CLAB1 binary layout (docs/formats.md).
std::string encode_solution(const SolutionField& u);
SolutionField decode_solution(std::string_view bytes);

void write_solution(const std::string& path, const SolutionField& u);
/// Throws ConfigError for a missing file and IoError for a malformed one.
SolutionField read_solution(const std::string& path);

}  // namespace clab
