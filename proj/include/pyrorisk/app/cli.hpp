// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pyrorisk/app/config.hpp"

namespace pyrorisk::app {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitUsage = 2,
    kExitData = 3,
    kExitProvider = 4,
};

/// Full command line without the program name, e.g. {"fwi", "--weather-csv", "w.csv"}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const EnvLookup& env = process_env());

/// Subcommands on an already-resolved configuration.
void cmd_fwi(const Json& cfg, std::ostream& out, std::ostream& err);
void cmd_eval_reg(const Json& cfg, std::ostream& out, std::ostream& err);
void cmd_tile(const Json& cfg, std::ostream& out, std::ostream& err);
void cmd_infer(const Json& cfg, std::ostream& out, std::ostream& err);
void cmd_assess(const Json& cfg, std::ostream& out, std::ostream& err);
void cmd_split(const Json& cfg, std::ostream& out, std::ostream& err);
void cmd_augment(const Json& cfg, std::ostream& out, std::ostream& err);
void cmd_render(const Json& cfg, std::ostream& out, std::ostream& err);

}  // namespace pyrorisk::app
