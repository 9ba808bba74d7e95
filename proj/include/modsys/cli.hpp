#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modsys {

// Exit codes: 0 ok, 1 semantic assertion failure, 2 parse/validation error.
int cli_run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

// The appendix golden suite; prints one PASS/FAIL line per check.
int run_selftest(std::ostream& out, bool json = false);

// The document text the selftest runs on (also shipped as specs/appendix.msl).
const char* appendix_msl();

}  // namespace modsys
