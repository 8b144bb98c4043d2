#pragma once

#include <iosfwd>
#include <string>

#include "fracbv/flux.hpp"
#include "fracbv/source_profile.hpp"
#include "fracbv/variation.hpp"

namespace fracbv {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3 };

/// Configuration problems (bad flags, unknown keys, malformed specs).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// {"kind":"power_law","p":..,"M":..} or {"kind":"table","u":[..],"df":[..],"M":..}
Flux parse_flux_spec(const std::string& text);

/// "zero", a number, {"alpha":"zero"}, {"alpha":"constant","a":..} or {"alpha":"pw","t":[..],"v":[..]}
SourceProfile parse_source_spec(const std::string& text);

/// Two-column CSV with header "x,u".
SampledFunction read_profile_csv(std::istream& in);
void write_profile_csv(std::ostream& out, const SampledFunction& f);

/// Runs one subcommand; output goes to `out` (or --out), error records to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracbv
