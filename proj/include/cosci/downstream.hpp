#ifndef COSCI_DOWNSTREAM_HPP
#define COSCI_DOWNSTREAM_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cosci/dataset.hpp"
#include "cosci/gan.hpp"
#include "cosci/nn/nets.hpp"

namespace cosci::downstream {

/// Binary sequence classifier: one LSTM over the multichannel series with
/// channels stacked as per-timestep input features, then linear to one
/// logit and a sigmoid.
struct ClassifierSpec {
    std::size_t hidden_dim = 256;
    std::size_t num_layers = 1;
    std::size_t epochs = 20;
    std::size_t batch_size = 32;
    double lr = 1e-3;
    std::uint64_t seed = 0;
};

class Classifier {
public:
    Classifier(const ClassifierSpec& spec, std::size_t n_channels, std::size_t length);

    /// P(label = 1) per instance.
    std::vector<double> predict_proba(const MTSDataset& data);

    nn::NetParams& params() { return net_->params(); }
    nn::LstmDiscriminator& net() { return *net_; }
    std::size_t n_channels() const { return n_channels_; }
    std::size_t length() const { return length_; }
    const ClassifierSpec& spec() const { return spec_; }

    /// Timestep-major input block for a set of instances (rows t*C+c).
    nn::MatrixXd input_block(const MTSDataset& data,
                             const std::vector<std::size_t>& instances) const;

private:
    ClassifierSpec spec_;
    std::size_t n_channels_;
    std::size_t length_;
    std::unique_ptr<nn::LstmDiscriminator> net_;
};

/// BCE training with Adam; epoch-shuffled batches; the parameters with the
/// best validation accuracy are retained. Both classes must be present in
/// the training set. Zero epochs returns the untrained network.
Classifier train_classifier(const ClassifierSpec& spec, const MTSDataset& train,
                            const MTSDataset& val);

/// Fraction of correct 0.5-thresholded predictions on a labeled set.
double evaluate(Classifier& classifier, const MTSDataset& test);

// ---------------------------------------------------------------------------
// Protocols
// ---------------------------------------------------------------------------

enum class Method { CosciCd, CosciNoCd, Baseline, RealControl };
std::string method_name(Method m);

/// Trains a generative model on one class's training data and returns a
/// sampler for it.
using SyntheticSampler = std::function<MTSDataset(std::size_t n, std::uint64_t seed)>;
using ModelFactory =
    std::function<SyntheticSampler(const MTSDataset& class_train, std::uint64_t seed)>;

/// Factories for the three generative arms. The template config's channel
/// count is adapted to the data; the cell seed replaces the config seed.
ModelFactory cosci_factory(const CosciConfig& config, bool with_cd);
ModelFactory baseline_factory(const CosciConfig& config);

struct UtilityReport {
    std::string protocol; ///< TRTF, TFTR, AllSynthetic or Augmentation
    std::string method;
    std::size_t n_channels = 0;
    std::pair<std::size_t, std::size_t> augmentation_ratio{1, 0}; ///< real : synthetic
    std::vector<std::uint64_t> seeds;
    std::vector<double> accuracy; ///< one entry per seed
    double mean = 0.0;
    double sd = 0.0;

    void finalize(); ///< fills mean/sd from the accuracy list
};

struct ProtocolConfig {
    CosciConfig gan;           ///< template for every generative arm
    ClassifierSpec classifier;
    double train_fraction = 0.8; ///< GAN-train / held-out-test split
    double val_fraction = 0.2;   ///< of the classifier's training portion
    std::size_t repeats = 5;
    std::uint64_t seed = 0;
};

/// Per-class generative models are trained on the real training split, a
/// synthetic labeled set of equal size is sampled, and a classifier runs in
/// both directions: train-on-real/test-on-fake (TRTF) and
/// train-on-fake/test-on-real (TFTR, tested on the held-out real split).
std::pair<UtilityReport, UtilityReport> run_trts_tstr(const MTSDataset& real,
                                                      const ModelFactory& factory,
                                                      const ProtocolConfig& config);

/// All-synthetic experiment: GANs train on the real training split, the
/// classifier trains on synthetic data only and is tested on held-out real
/// data; a real-data control arm is always included.
std::vector<UtilityReport> run_all_synthetic(const MTSDataset& real,
                                             const std::vector<Method>& methods,
                                             const std::vector<std::size_t>& channel_counts,
                                             const ProtocolConfig& config);

/// Augmentation experiment: the classifier trains on real-train plus
/// synthetic data at real:synthetic ratios of 1:k.
std::vector<UtilityReport> run_augmentation(
    const MTSDataset& real, const std::vector<Method>& methods,
    const std::vector<std::size_t>& channel_counts,
    const std::vector<std::pair<std::size_t, std::size_t>>& ratios,
    const ProtocolConfig& config);

} // namespace cosci::downstream

#endif // COSCI_DOWNSTREAM_HPP
