#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cmr::cli {

/// Exit codes: 0 success or Yes, 1 reject or No, 2 input error, 3 Unknown.
enum Exit { kOk = 0, kReject = 1, kInputError = 2, kUnknown = 3 };

/// Runs `cmr` with `args` (program name excluded).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// CMR_CORPUS if set, else the directory configured at build time.
std::string corpus_dir();

}  // namespace cmr::cli
