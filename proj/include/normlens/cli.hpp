#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace normlens::cli {

/// Suite version embedded in every output artifact.
std::string_view suite_version();

/// Runs one subcommand (ingest, metrics, compare, sample, adapt, eval,
/// report). Failures print a single JSON error record to `err` and return
/// nonzero: 2 for usage errors, 1 otherwise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace normlens::cli
