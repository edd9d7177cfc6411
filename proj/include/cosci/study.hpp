#ifndef COSCI_STUDY_HPP
#define COSCI_STUDY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cosci/dataset.hpp"
#include "cosci/downstream.hpp"
#include "cosci/gan.hpp"
#include "cosci/metrics.hpp"
#include "cosci/toygen.hpp"

namespace cosci::study {

// ---------------------------------------------------------------------------
// Toy study: the diversity/correlation trade-off and the feature-correlation
// similarity table, with-CD vs without-CD over several seeds.
// ---------------------------------------------------------------------------

struct ToyArmResult {
    std::string variant;
    bool with_cd = true;
    std::uint64_t seed = 0;
    double awd = 0.0;
    double aed = 0.0;
    metrics::MatrixSimilarity similarity;
    std::vector<double> per_channel_wd;
};

struct ToyStudyConfig {
    ToySpec toy;                       ///< the fixed "real" dataset recipe
    CosciConfig gan;                   ///< template; seed/with_cd set per arm
    std::vector<ToyVariant> variants{ToyVariant::SimpleSine, ToyVariant::FreqChange,
                                     ToyVariant::Anomaly};
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    std::size_t jobs = 1;
};

std::string variant_name(ToyVariant v);
ToyVariant variant_from(const std::string& name);

/// One (variant, arm, seed) cell: train on the fixed real dataset, sample an
/// equal-size synthetic set, compute AWD/AED and the matrix similarity
/// scores (feature drop list donated by the real set).
ToyArmResult run_toy_arm(const ToySpec& toy, const CosciConfig& gan, bool with_cd,
                         std::uint64_t seed);

/// Full grid: variants x {with CD, without CD} x seeds.
std::vector<ToyArmResult> run_toy_study(const ToyStudyConfig& config);

// ---------------------------------------------------------------------------
// EEG-style study: blink-frame fixture, TRTF/TFTR and the channel-count
// experiments against the joint baseline.
// ---------------------------------------------------------------------------

struct EegStudyConfig {
    EegFixtureSpec fixture;
    std::size_t window = 800;
    std::size_t margin = 200;
    std::size_t trts_channels = 2; ///< channel count for the TRTF/TFTR table
    CosciConfig gan;
    downstream::ClassifierSpec classifier;
    double train_fraction = 0.8;
    double val_fraction = 0.2;
    std::size_t repeats = 5;
    std::uint64_t seed = 0;
};

/// The labeled blink-frame dataset the study runs on.
MTSDataset eeg_frames(const EegStudyConfig& config);

struct Table3Result {
    downstream::UtilityReport trtf_with_cd;
    downstream::UtilityReport tftr_with_cd;
    downstream::UtilityReport trtf_without_cd;
    downstream::UtilityReport tftr_without_cd;
};

/// TRTF/TFTR accuracies with and without the central discriminator.
Table3Result run_table3(const EegStudyConfig& config);

/// All-synthetic experiment over channel counts (always includes the real
/// control arm).
std::vector<downstream::UtilityReport>
run_eeg_all_synthetic(const EegStudyConfig& config, const std::vector<downstream::Method>& methods,
                      const std::vector<std::size_t>& channel_counts);

/// Augmentation experiment over channel counts and 1:k ratios.
std::vector<downstream::UtilityReport>
run_eeg_augmentation(const EegStudyConfig& config, const std::vector<downstream::Method>& methods,
                     const std::vector<std::size_t>& channel_counts,
                     const std::vector<std::pair<std::size_t, std::size_t>>& ratios);

/// Runs closures on up to `jobs` worker threads; results must be written to
/// pre-assigned slots so the outcome is independent of scheduling.
void parallel_cells(std::vector<std::function<void()>> cells, std::size_t jobs);

} // namespace cosci::study

#endif // COSCI_STUDY_HPP
