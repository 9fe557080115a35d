#pragma once

// The reset-lab subcommands. Each writes its files under the output directory,
// prints a short human-readable report and returns the process exit code.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "reset_lab/scenario.hpp"
#include "reset_lab/stability.hpp"

namespace reset_lab::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInvalid = 1,
    kExitInconclusive = 2,
    kExitUnstable = 3,
    kExitInapplicable = 4,
};

struct CommandOptions {
    std::filesystem::path out_dir = ".";
    std::optional<int> grid;
    std::optional<int> k_max;
    std::optional<double> eps;
    std::optional<std::string> method;  ///< overrides analysis.method
    std::uint64_t seed = stability::kDefaultSeed;
};

/// Raised when a command does not apply to the scenario (exit code 4).
class InapplicableError : public Error {
  public:
    using Error::Error;
};

int cmd_simulate(const Scenario& s, const CommandOptions& opt, std::ostream& log);
int cmd_poincare(const Scenario& s, const CommandOptions& opt, std::ostream& log);
int cmd_periodic(const Scenario& s, const CommandOptions& opt, std::ostream& log);
int cmd_stability(const Scenario& s, const CommandOptions& opt, std::ostream& log);
int cmd_compare(const Scenario& s, const CommandOptions& opt, std::ostream& log);

/// Dispatches by name and maps errors to exit codes; diagnostics go to `err`.
int run_command(const std::string& name, const std::filesystem::path& scenario_file, const CommandOptions& opt,
                std::ostream& log, std::ostream& err);

[[nodiscard]] int exit_code(stability::Result r);

}  // namespace reset_lab::cli
