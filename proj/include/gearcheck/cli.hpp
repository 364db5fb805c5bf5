#pragma once

#include "gearcheck/signal.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gearcheck::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kDataError = 2,
    kNumericalError = 3,
};

// Entry point behind the `gearcheck` binary. Subcommands: synth, extract,
// train, evaluate, diagnose. Never throws; failures map to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

// Signals from a manifest file, a directory holding manifest.json, or a
// directory of *.csv files (sorted by name). Manifest labels override file
// headers.
std::vector<Signal> load_signal_set(const std::filesystem::path& input,
                                    std::optional<double> sample_rate = std::nullopt);

} // namespace gearcheck::cli
