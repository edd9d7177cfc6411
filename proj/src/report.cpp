#include "cosci/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cosci/errors.hpp"

namespace cosci::report {

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(bytes)));
    return buf;
}

ArtifactWriter::ArtifactWriter(std::string out_dir) : dir_(std::move(out_dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_ + ": " + ec.message());
}

void ArtifactWriter::write(const std::string& name, const std::string& content) {
    const std::filesystem::path path = std::filesystem::path(dir_) / name;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write artifact " + path.string());
    out << content;
    if (!out) throw IoError("write failure on " + path.string());
    artifact_hashes_[name] = hash_hex(content);
}

void ArtifactWriter::write_json(const std::string& name, const nlohmann::json& value) {
    write(name, value.dump(2) + "\n");
}

void ArtifactWriter::note_file(const std::string& name) {
    const std::filesystem::path path = std::filesystem::path(dir_) / name;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read artifact " + path.string());
    const std::string content(std::istreambuf_iterator<char>(in), {});
    artifact_hashes_[name] = hash_hex(content);
}

nlohmann::json ArtifactWriter::finish(const std::string& command, const nlohmann::json& config,
                                      std::uint64_t seed, double wall_time_s) {
    const std::string config_dump = config.dump();
    const std::string config_hash = hash_hex(config_dump);

    std::string hashable = command + "\n" + config_hash + "\n" + std::to_string(seed) + "\n";
    nlohmann::json artifacts = nlohmann::json::object();
    for (const auto& [name, hash] : artifact_hashes_) {
        artifacts[name] = hash;
        hashable += name + "=" + hash + "\n";
    }

    nlohmann::json manifest = {{"schema", "cosci-manifest v1"},
                               {"command", command},
                               {"seed", seed},
                               {"config", config},
                               {"config_hash", config_hash},
                               {"artifacts", artifacts},
                               {"manifest_hash", hash_hex(hashable)},
                               {"wall_time_s", wall_time_s}};

    const std::filesystem::path path = std::filesystem::path(dir_) / "manifest.json";
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << manifest.dump(2) << "\n";
    return manifest;
}

} // namespace cosci::report
