#ifndef COSCI_NN_CHECKPOINT_HPP
#define COSCI_NN_CHECKPOINT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "cosci/nn/params.hpp"

namespace cosci::nn {

// Checkpoint container, format "COSCICK1":
//   bytes 0..7   magic "COSCICK1"
//   u32 LE       format version (1)
//   u64 LE       header length in bytes
//   ...          header JSON (UTF-8)
//   ...          float64 LE payload, arrays in header order
// Every tensor contributes three arrays (value, adam_m, adam_v) and the
// header records names, shapes and the optimizer step counter, so a loaded
// network resumes exactly where it stopped.

/// Header entry describing one network's tensors.
nlohmann::json net_header(const NetParams& params, const std::string& name);

/// Appends value/adam_m/adam_v of every tensor to the payload.
void append_net_payload(const NetParams& params, std::vector<double>& payload);

/// Restores tensors from `header` (as produced by net_header) and the payload
/// cursor; validates names and shapes against the constructed network.
/// Advances the cursor. Throws CorruptFileError on any mismatch.
void read_net_payload(NetParams& params, const nlohmann::json& header, const double*& cursor,
                      const double* end);

/// Writes a complete checkpoint file.
void write_checkpoint_file(const std::string& path, const nlohmann::json& header,
                           const std::vector<double>& payload);

/// Reads a checkpoint file; throws CorruptFileError if the file is truncated
/// or is not a checkpoint.
std::pair<nlohmann::json, std::vector<double>> read_checkpoint_file(const std::string& path);

/// Single-network convenience wrappers (the parameter-checkpoint interface).
void save_net(const NetParams& params, const std::string& path, const std::string& name);
void load_net(NetParams& params, const std::string& path, const std::string& name);

} // namespace cosci::nn

#endif // COSCI_NN_CHECKPOINT_HPP
