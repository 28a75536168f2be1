#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibrenet/experiments.hpp"

namespace fibrenet {

/// Bad configuration text or values. Carries the offending line (0 when the
/// problem is not tied to a line) and key.
struct ConfigError : std::runtime_error {
    ConfigError(const std::string& message, int line, std::string key);
    int line;
    std::string key;
};

enum class Protocol { transfer, sweep_length, scan_T, compare_models, dark_check };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& name);

/// Everything a run needs, resolved. The defaults are the reference
/// operating point used for the fidelity-versus-length study.
struct RunConfig {
    Protocol protocol = Protocol::sweep_length;

    // [model]
    ModelKind model_kind = ModelKind::eliminated;
    double L = 0.5;
    double kappa = 0.1;
    double gamma = 0.0;
    double Delta_g = 0.0;
    double Delta_r = 0.0;
    double g_a = 0.0;
    double g_b = 0.0;
    double delta0 = 0.1;
    std::optional<int> K;  // empty: derived from the coupling scales
    bool compensate_light_shift = true;
    bool include_s11_shift = false;

    // [pulses]
    PulseSchedule schedule{2.0, 2.0, 0.2, 0.2, 0.5};

    // [transfer]
    double T = 300.0;
    double alpha_re = 1.0;
    double alpha_im = 0.0;
    double beta_re = 0.0;
    double beta_im = 0.0;
    bool allow_intuitive_order = false;

    // [integrator]
    long steps = 32768;
    long samples = 1024;
    int halvings_max = 4;
    double fidelity_tol = 1e-6;
    bool refine_dt = true;
    int K_doublings_max = 3;
    double K_tol = 1e-4;

    // [sweep]
    std::vector<double> L_values{0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
    std::vector<double> T_values{300.0, 600.0, 1200.0};

    // [compare]
    double compare_omega = 1.0;
    double compare_g = 1.0;
    double compare_Delta_g = 20.0;

    // [dark-check]
    long dark_draws = 100;
    std::uint64_t seed = 1;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;

    /// Throws ConfigError naming the key of the first violated invariant.
    void validate() const;

    ModelParams model_params() const;
    TransferOptions transfer_options() const;
    ModelParams compare_params() const;
};

struct ParseOptions {
    bool strict = false;            // every key must be present
    std::ostream* diagnostics = nullptr;  // duplicate-key warnings
};

/// Line-oriented `key = value` text with `[section]` headers and `#`
/// comments. Unknown sections or keys are rejected. Duplicate keys: the last
/// one wins and a warning is written to diagnostics.
RunConfig parse_config(const std::string& text, const ParseOptions& options = {});
RunConfig load_config(const std::filesystem::path& path, const ParseOptions& options = {});

/// Canonical text form; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& config);

std::string format_double(double x);

inline constexpr const char* tool_version = "fibrenet 1.0.0";

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_numerical = 3, exit_partial = 4 };

struct RunOptions {
    std::filesystem::path out_dir = ".";
    int jobs = 1;
    bool trace = false;
    std::ostream* log = nullptr;
};

/// Executes the configured protocol and writes results.csv (or the
/// protocol's table), optional trace files and manifest.txt into out_dir.
int run(const RunConfig& config, const RunOptions& options);

}  // namespace fibrenet
