#ifndef COSCI_TOYGEN_HPP
#define COSCI_TOYGEN_HPP

#include <cstdint>
#include <vector>

#include "cosci/dataset.hpp"

namespace cosci {

enum class ToyVariant { SimpleSine, FreqChange, Anomaly };

/// Recipe for the two-channel sine "toy medical" datasets: per instance one
/// amplitude drawn from a patient-type Gaussian, the same amplitude on both
/// channels, channel-specific frequencies and i.i.d. Gaussian sample noise.
struct ToySpec {
    ToyVariant variant = ToyVariant::SimpleSine;
    std::size_t n_per_type = 1024;
    std::size_t length = 800;
    double freq_ch1 = 0.01;  ///< cycles per timestep
    double freq_ch2 = 0.005;
    double amp_mean_pt1 = 0.4;
    double amp_mean_pt2 = 0.6;
    double amp_sd = 0.05;
    double noise_sd = 0.05;
    /// Anomaly variant: fraction of the series replaced by pure noise,
    /// centred on the middle (0.25 = middle quarter).
    double anomaly_fraction = 0.25;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Per-instance generation record.
struct ToyGroundTruth {
    int patient_type = 0; ///< 0 or 1
    double amplitude = 0.0;
};

/// Generates 2*n_per_type instances (type-0 block then type-1 block), labels
/// set to the patient type. FreqChange doubles every frequency at t = L/2
/// with a phase-continuous switch; Anomaly replaces the middle quarter with
/// pure Gaussian noise. Bitwise deterministic per seed, instance-parallel
/// RNG streams.
std::pair<MTSDataset, std::vector<ToyGroundTruth>> generate_toy(const ToySpec& spec);

} // namespace cosci

#endif // COSCI_TOYGEN_HPP
