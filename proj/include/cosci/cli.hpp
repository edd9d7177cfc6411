#ifndef COSCI_CLI_HPP
#define COSCI_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace cosci::cli {

/// Options shared by every subcommand; per-command paths are only consulted
/// by the commands that need them.
struct CliOptions {
    std::string out_dir = "cosci-out";
    std::optional<std::uint64_t> seed_override;
    std::size_t jobs = 1;
    bool desk_scale = false;

    std::string data_path;   ///< train / train-baseline / bench input CSV
    std::string model_path;  ///< sample input checkpoint
    std::string real_path;   ///< eval real CSV
    std::string synth_path;  ///< eval synthetic CSV
    std::size_t sample_count = 0;
};

/// Fills reduced-size defaults (N, L, epochs, hidden sizes) for keys the
/// config does not set explicitly.
void apply_desk_preset(nlohmann::json& config);

/// Validates the config against the known schema; unknown keys raise
/// ConfigError naming the offending field.
void validate_config_keys(const nlohmann::json& config);

/// Executes one subcommand (gen-toy, gen-eeg, train, sample, train-baseline,
/// eval, bench, repro-table1, repro-table2, repro-table3), writing artifacts
/// plus manifest.json into the output directory. Returns the process exit
/// status.
int run_command(const std::string& command, nlohmann::json config, const CliOptions& options);

} // namespace cosci::cli

#endif // COSCI_CLI_HPP
