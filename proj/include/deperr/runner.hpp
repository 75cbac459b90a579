#pragma once

#include <iosfwd>
#include <string>

#include "deperr/config.hpp"

namespace deperr {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitDomain = 3,
    kExitCapability = 4,
    kExitIo = 5,
};

// Produces the CSV table for a command. Throws on any downstream error; no
// partial table is returned.
std::string render_csv(const RunConfig& config);

// Renders and writes config.output. Errors are reported on `err` and mapped
// to the exit codes above; nothing is written unless rendering succeeded.
int run(const RunConfig& config, std::ostream& err);

// Maps the exception currently being handled to an exit code and message.
int report_current_exception(std::ostream& err);

// Locale-independent, 17 significant digits.
std::string format_number(double v);

}  // namespace deperr
