#ifndef COSCI_GAN_HPP
#define COSCI_GAN_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "cosci/dataset.hpp"
#include "cosci/nn/nets.hpp"

namespace cosci {

enum class CdType { Mlp, Lstm };
enum class ChannelNetType { Lstm, Mlp };
enum class Criterion { Bce, Mse };

/// Training configuration. Defaults follow the standard recipe: BCE
/// criterion, MLP central discriminator, LSTM channel nets, 100 epochs,
/// batches of 32, learning rates 1e-3 (channel nets) / 1e-4 (central
/// discriminator), gamma 5, noise length 32.
struct CosciConfig {
    std::size_t n_channels = 2;
    std::size_t noise_len = 32;
    std::size_t batch_size = 32;
    std::size_t n_epochs = 100;
    double glr = 1e-3;
    double dlr = 1e-3;
    double cdlr = 1e-4;
    double gamma = 5.0;
    bool with_cd = true; ///< when false the central discriminator (and its
                         ///< loss term) is dropped entirely
    CdType cd_type = CdType::Mlp;
    ChannelNetType generator_net = ChannelNetType::Lstm;
    ChannelNetType discriminator_net = ChannelNetType::Lstm;
    Criterion criterion = Criterion::Bce;
    std::uint64_t seed = 0;

    // architecture knobs
    std::size_t hidden_dim = 256;
    std::size_t num_layers = 1;
    std::vector<nn::Index> cd_widths{256, 128, 64};
    std::vector<nn::Index> mlp_gen_widths{256, 256};
    double leaky_slope = 0.1;
    double dropout_p = 0.3;

    /// Use the literal minimax generator loss log(1 - D(G(z))) instead of the
    /// default non-saturating form -log D(G(z)).
    bool minimax_generator_loss = false;
    /// Feed the noise block as one wide timestep instead of a scalar sequence.
    bool noise_single_step = false;

    void validate() const;
};

void to_json(nlohmann::json& j, const CosciConfig& c);
void from_json(const nlohmann::json& j, CosciConfig& c);

struct EpochLosses {
    std::vector<double> d_loss; ///< per channel, mean over batches
    std::vector<double> g_loss; ///< per channel, includes the gamma term
    double cd_loss = 0.0;       ///< 0 when training without a CD
};

/// C generator/discriminator pairs plus one central discriminator.
class CosciModel {
public:
    /// Builds an initialized model for series of the given length. Network
    /// init seeds derive from (config.seed, role, channel), so the same seed
    /// always yields the same model.
    static CosciModel create(const CosciConfig& config, std::size_t length);

    const CosciConfig& config() const { return config_; }
    std::size_t length() const { return length_; }
    std::size_t n_channels() const { return config_.n_channels; }

    nn::GeneratorNet& generator(std::size_t i) { return *generators_[i]; }
    nn::DiscriminatorNet& discriminator(std::size_t i) { return *discriminators_[i]; }
    nn::DiscriminatorNet& central() { return *central_; }
    bool has_central() const { return central_ != nullptr; }

    const std::vector<EpochLosses>& epoch_log() const { return epoch_log_; }
    std::vector<EpochLosses>& epoch_log() { return epoch_log_; }

private:
    CosciModel() = default;
    CosciConfig config_;
    std::size_t length_ = 0;
    std::vector<std::unique_ptr<nn::GeneratorNet>> generators_;
    std::vector<std::unique_ptr<nn::DiscriminatorNet>> discriminators_;
    std::unique_ptr<nn::DiscriminatorNet> central_;
    std::vector<EpochLosses> epoch_log_;
};

/// Runs the three-player training loop. Per batch: one shared noise vector
/// per batch element feeds every channel generator; each channel
/// discriminator takes one optimizer step on real-vs-fake of its channel;
/// the central discriminator takes one step on full concatenated instances;
/// each generator then takes one step against its channel loss plus
/// gamma * the central loss, where the gradient reaches generator i only
/// through channel i's slice of the concatenated fake. Throws NumericError
/// naming epoch and batch if a loss goes non-finite.
void train(CosciModel& model, const MTSDataset& data);

/// Noise provider for sampling; called exactly once per instance. The
/// returned vector is shared by all channel generators of that instance.
using NoiseSource = std::function<Eigen::VectorXd(std::size_t instance)>;

MTSDataset sample(CosciModel& model, std::size_t n, std::uint64_t seed);
MTSDataset sample(CosciModel& model, std::size_t n, const NoiseSource& noise);

// ---------------------------------------------------------------------------
// Joint multichannel baseline: one generator emitting all channels at once
// and one discriminator reading whole concatenated instances. Internally a
// one-channel model over series of length C*L, without a CD.
// ---------------------------------------------------------------------------

struct JointModel {
    CosciModel inner;
    std::size_t out_channels = 1;
};

JointModel train_baseline_joint(const CosciConfig& config, const MTSDataset& data);
MTSDataset sample_baseline(JointModel& model, std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Checkpointing (format documented in nn/checkpoint.hpp)
// ---------------------------------------------------------------------------

void save_model(const CosciModel& model, const std::string& path);
CosciModel load_model(const std::string& path);

void save_baseline(const JointModel& model, const std::string& path);
JointModel load_baseline(const std::string& path);

} // namespace cosci

#endif // COSCI_GAN_HPP
