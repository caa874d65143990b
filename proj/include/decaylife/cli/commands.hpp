#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "decaylife/cli/config.hpp"
#include "decaylife/error.hpp"

namespace decaylife::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitDomain = 3, kExitInternal = 4 };

int exit_code_for(ErrorKind kind);

/// Entry point behind the `decaylife` binary.  args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_eval(const Settings& s, std::ostream& out);
int cmd_figure(const Settings& s, std::ostream& out);
int cmd_sweep(const Settings& s, std::ostream& out);
int cmd_envelope(const Settings& s, std::ostream& out);
int cmd_sample(const Settings& s, std::ostream& out);
int cmd_validate(const Settings& s, std::ostream& out, std::ostream& err);

}  // namespace decaylife::cli
