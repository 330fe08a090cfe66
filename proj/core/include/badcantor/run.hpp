#pragma once

#include <ostream>
#include <string_view>

#include "badcantor/config.hpp"
#include "badcantor/errors.hpp"

namespace badcantor {

enum ExitStatus : int { kExitPass = 0, kExitFail = 1, kExitConfig = 2, kExitUndecidable = 3 };

ExitStatus exit_status_for(ErrorCode code);

/// Subcommands: construct, verify, oracle, transfer-test, lattice-probe.
int run(std::string_view subcommand, const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace badcantor
