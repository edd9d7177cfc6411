#include "cosci/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "cosci/errors.hpp"

namespace cosci::nn {

namespace {

constexpr char kMagic[8] = {'C', 'O', 'S', 'C', 'I', 'C', 'K', '1'};
constexpr std::uint32_t kVersion = 1;

void append_array(std::vector<double>& payload, const MatrixXd& m) {
    payload.insert(payload.end(), m.data(), m.data() + m.size());
}

void read_array(MatrixXd& m, const double*& cursor, const double* end) {
    if (cursor + m.size() > end) throw CorruptFileError("checkpoint payload truncated");
    std::memcpy(m.data(), cursor, static_cast<std::size_t>(m.size()) * sizeof(double));
    cursor += m.size();
}

} // namespace

nlohmann::json net_header(const NetParams& params, const std::string& name) {
    nlohmann::json tensors = nlohmann::json::array();
    for (std::size_t i = 0; i < params.n_tensors(); ++i) {
        const Tensor& t = params.tensor(i);
        tensors.push_back({{"name", t.name}, {"rows", t.rows()}, {"cols", t.cols()}});
    }
    return {{"name", name},
            {"step", params.step},
            {"init_seed", params.init_seed()},
            {"opt_state", true},
            {"tensors", std::move(tensors)}};
}

void append_net_payload(const NetParams& params, std::vector<double>& payload) {
    for (std::size_t i = 0; i < params.n_tensors(); ++i) {
        const Tensor& t = params.tensor(i);
        append_array(payload, t.value);
        append_array(payload, t.adam_m);
        append_array(payload, t.adam_v);
    }
}

void read_net_payload(NetParams& params, const nlohmann::json& header, const double*& cursor,
                      const double* end) {
    const auto& tensors = header.at("tensors");
    if (tensors.size() != params.n_tensors())
        throw CorruptFileError("checkpoint tensor count mismatch for net '" +
                               header.value("name", "?") + "'");
    for (std::size_t i = 0; i < params.n_tensors(); ++i) {
        Tensor& t = params.tensor(i);
        const auto& entry = tensors[i];
        if (entry.at("name").get<std::string>() != t.name ||
            entry.at("rows").get<Index>() != t.rows() ||
            entry.at("cols").get<Index>() != t.cols())
            throw CorruptFileError("checkpoint tensor '" + t.name + "' does not match");
        read_array(t.value, cursor, end);
        read_array(t.adam_m, cursor, end);
        read_array(t.adam_v, cursor, end);
    }
    params.step = header.at("step").get<long>();
}

void write_checkpoint_file(const std::string& path, const nlohmann::json& header,
                           const std::vector<double>& payload) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    const std::string header_bytes = header.dump();
    const std::uint64_t header_len = header_bytes.size();
    out.write(kMagic, sizeof kMagic);
    out.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
    out.write(reinterpret_cast<const char*>(&header_len), sizeof header_len);
    out.write(header_bytes.data(), static_cast<std::streamsize>(header_bytes.size()));
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size() * sizeof(double)));
    if (!out) throw IoError("write failure on " + path);
}

std::pair<nlohmann::json, std::vector<double>> read_checkpoint_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);

    char magic[8];
    std::uint32_t version = 0;
    std::uint64_t header_len = 0;
    in.read(magic, sizeof magic);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&header_len), sizeof header_len);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw CorruptFileError(path + " is not a checkpoint file");
    if (version != kVersion)
        throw CorruptFileError(path + ": unsupported checkpoint version " +
                               std::to_string(version));

    std::string header_bytes(header_len, '\0');
    in.read(header_bytes.data(), static_cast<std::streamsize>(header_len));
    if (!in) throw CorruptFileError(path + ": truncated checkpoint header");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(header_bytes);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFileError(path + ": bad checkpoint header: " + e.what());
    }

    std::vector<char> raw(std::istreambuf_iterator<char>(in), {});
    if (raw.size() % sizeof(double) != 0)
        throw CorruptFileError(path + ": truncated checkpoint payload");
    std::vector<double> payload(raw.size() / sizeof(double));
    std::memcpy(payload.data(), raw.data(), raw.size());
    return {std::move(header), std::move(payload)};
}

void save_net(const NetParams& params, const std::string& path, const std::string& name) {
    nlohmann::json header = {{"kind", "net"}, {"net", net_header(params, name)}};
    std::vector<double> payload;
    append_net_payload(params, payload);
    write_checkpoint_file(path, header, payload);
}

void load_net(NetParams& params, const std::string& path, const std::string& name) {
    auto [header, payload] = read_checkpoint_file(path);
    if (header.value("kind", "") != "net")
        throw CorruptFileError(path + " does not hold a single-network checkpoint");
    const auto& net = header.at("net");
    if (net.at("name").get<std::string>() != name)
        throw CorruptFileError(path + " holds net '" + net.at("name").get<std::string>() +
                               "', expected '" + name + "'");
    const double* cursor = payload.data();
    const double* end = cursor + payload.size();
    read_net_payload(params, net, cursor, end);
    if (cursor != end) throw CorruptFileError(path + ": trailing bytes in checkpoint");
}

} // namespace cosci::nn
