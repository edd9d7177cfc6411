#ifndef COSCI_REPORT_HPP
#define COSCI_REPORT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

namespace cosci::report {

/// FNV-1a 64-bit content hash, rendered as fixed-width hex.
std::uint64_t fnv1a(std::string_view bytes);
std::string hash_hex(std::string_view bytes);

/// Writes artifacts into one output directory and records their content
/// hashes for the run manifest.
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::string out_dir);

    const std::string& dir() const { return dir_; }

    /// Writes `name` (relative to the output directory) and records its hash.
    void write(const std::string& name, const std::string& content);

    /// Serializes JSON with 2-space indentation and writes it.
    void write_json(const std::string& name, const nlohmann::json& value);

    /// Records the hash of a file some other writer already put into the
    /// output directory (model checkpoints).
    void note_file(const std::string& name);

    /// Writes manifest.json: command, seed, effective config and its hash,
    /// artifact hashes, and a manifest hash over everything reproducible
    /// (wall time is recorded but not hashed).
    nlohmann::json finish(const std::string& command, const nlohmann::json& config,
                          std::uint64_t seed, double wall_time_s);

private:
    std::string dir_;
    std::map<std::string, std::string> artifact_hashes_;
};

} // namespace cosci::report

#endif // COSCI_REPORT_HPP
