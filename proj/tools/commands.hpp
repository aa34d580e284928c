#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavetwin::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2 };

/// Bad arguments or inputs; maps to kUsage.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Named numeric thresholds, overridable with --tol NAME=VAL.
class Tolerances {
public:
    Tolerances();
    /// Applies "NAME=VAL" entries; unknown names and malformed values throw UsageError.
    void apply(const std::vector<std::string>& overrides);
    [[nodiscard]] double get(const std::string& name) const;
    [[nodiscard]] const std::map<std::string, double>& all() const { return values_; }

private:
    std::map<std::string, double> values_;
};

struct RunManifest {
    std::string subcommand;
    std::string config_path;
    std::vector<std::string> inputs;
    std::string out_dir;
    std::uint64_t seed = 1;
    Tolerances tol;

    // subcommand-specific
    int depth = 0;                 // 0: from config (or 2 without one)
    std::string arch;              // cost: restrict to one architecture
    std::vector<std::string> axes; // shift-bench
    int probes = 8;                // shift-bench synthetic probes per kernel
    int blur_size = 3;             // shift-bench
};

int cmd_filters(const RunManifest& run, std::ostream& out, std::ostream& log);
int cmd_decompose(const RunManifest& run, std::ostream& out, std::ostream& log);
int cmd_shift_bench(const RunManifest& run, std::ostream& out, std::ostream& log);
int cmd_verify(const RunManifest& run, std::ostream& out, std::ostream& log);
int cmd_cost(const RunManifest& run, std::ostream& out, std::ostream& log);
int cmd_recon_check(const RunManifest& run, std::ostream& out, std::ostream& log);

/// Parses argv, dispatches, and maps exceptions to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& log);

/// Directory holding the bundled test images.
std::string default_image_dir();

}  // namespace wavetwin::cli
