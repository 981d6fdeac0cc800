#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "skewdepth/multivariate.hpp"

namespace skewdepth::cli {

struct LawSpec {
  MultivariateLaw law;
  std::vector<std::string> warnings;
};

/// Validates a law document. Errors are DomainError with the field path.
LawSpec parse_law(const nlohmann::json& doc);
LawSpec parse_law_text(const std::string& text);

/// Runs one command line; returns the process exit status
/// (0 success, 1 error, 2 a sub-computation flagged non-convergence).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skewdepth::cli
