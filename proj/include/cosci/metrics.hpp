#ifndef COSCI_METRICS_HPP
#define COSCI_METRICS_HPP

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cosci/dataset.hpp"

namespace cosci::metrics {

// ---------------------------------------------------------------------------
// Diversity / correlation metrics
// ---------------------------------------------------------------------------

/// Empirical 1-Wasserstein distance between two real multisets. Equal-size
/// inputs reduce to the mean absolute difference of the sorted samples; for
/// unequal sizes the integral of |F_a^{-1} - F_b^{-1}| is taken over the
/// merged step quantile functions.
double wasserstein1d(std::span<const double> sample_a, std::span<const double> sample_b);

/// sqrt(2) * population standard deviation of the mean-removed series; exact
/// for pure sinusoids over whole cycles, phase-free by construction.
double estimate_amplitude(std::span<const double> series);

/// Amplitude estimates of every instance on one channel.
std::vector<double> channel_amplitudes(const MTSDataset& data, std::size_t channel);

/// Per-channel Wasserstein distance between real and synthetic amplitude
/// multisets.
std::vector<double> per_channel_amplitude_wd(const MTSDataset& real, const MTSDataset& synth);

/// Average of per_channel_amplitude_wd over channels (diversity metric).
double awd(const MTSDataset& real, const MTSDataset& synth);

/// Mean distance of per-instance (amplitude_1, amplitude_2) points to the
/// slope-1 line, i.e. mean |A1 - A2| / sqrt(2). Two-channel datasets only.
double aed(const MTSDataset& synth);

// ---------------------------------------------------------------------------
// Feature bank
// ---------------------------------------------------------------------------

inline constexpr std::size_t kNumFeatures = 15;

/// Names of the 15 bank features, aligned with feature_vector's output.
const std::array<std::string, kNumFeatures>& feature_names();

/// 15 summary features of one series: mean; sd; skewness; excess kurtosis;
/// lag-1 autocorrelation; first lag with autocorrelation below 1/e; dominant
/// periodogram bin; spectral centroid; amplitude estimate; linear trend
/// slope; mean-crossing rate; longest run above the mean / L; 5-bin histogram
/// mode bin; Shannon entropy of a 10-bin histogram (nats); fraction of
/// |first differences| above their own sd. Constant series fall back to 0
/// for every correlation-type feature. Requires length >= 8.
std::array<double, kNumFeatures> feature_vector(std::span<const double> series);

/// Pearson correlations across instances between feature f on channel a and
/// feature g on channel b. Features with zero variance on either channel are
/// dropped (the drop list is recorded); undefined entries inside the
/// surviving matrix are set to 0 and flagged.
struct FeatureCorrMatrix {
    std::size_t channel_a = 0;
    std::size_t channel_b = 0;
    std::vector<std::string> features;      ///< surviving feature names
    std::vector<std::string> dropped;       ///< dropped feature names
    Eigen::MatrixXd values;                 ///< F' x F'
    std::vector<std::uint8_t> undefined;    ///< row-major flags for forced-0 entries
};

/// Indices of features with nonzero variance (on both channels a and b)
/// across the dataset's instances; this is the keep list the real dataset
/// donates to all synthetic evaluations.
std::vector<std::size_t> surviving_features(const MTSDataset& data, std::size_t channel_a,
                                            std::size_t channel_b);

FeatureCorrMatrix feature_corr_matrix(const MTSDataset& data, std::size_t channel_a,
                                      std::size_t channel_b);
FeatureCorrMatrix feature_corr_matrix(const MTSDataset& data, std::size_t channel_a,
                                      std::size_t channel_b,
                                      const std::vector<std::size_t>& keep);

struct MatrixSimilarity {
    double mae = 0.0;
    double frobenius = 0.0;
    double spearman_rho = 0.0;
    double kendall_tau = 0.0;
};

/// Similarity of two feature-correlation matrices over identical feature
/// lists: MAE and Frobenius norm of the difference, Spearman's rho and
/// Kendall's tau-b of the row-major flattened entries.
MatrixSimilarity matrix_similarity(const FeatureCorrMatrix& real_m,
                                   const FeatureCorrMatrix& synth_m);

/// Average ranks (ties averaged).
std::vector<double> average_ranks(std::span<const double> values);
double spearman_rho(std::span<const double> x, std::span<const double> y);
/// Kendall's tau-b via merge-sort inversion counting, O(n log n).
double kendall_tau(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Embeddings
// ---------------------------------------------------------------------------

using Points2d = std::vector<std::array<double, 2>>;

struct PcaProjection {
    std::vector<Points2d> sets;   ///< one list of 2-D points per input set
    double eigenvalue_1 = 0.0;    ///< top two eigenvalues of the real set
    double eigenvalue_2 = 0.0;
    Eigen::MatrixXd components;   ///< D x 2 basis (sign-fixed)
    Eigen::VectorXd mean;         ///< real-set mean used for centering
};

/// Flattens instances to C*L vectors, fits the PCA basis on the FIRST set
/// (the real data) and projects every set onto the top-2 components.
/// Components are ordered by descending eigenvalue with the largest-magnitude
/// coordinate made positive. Requires >= 3 instances in the first set.
PcaProjection pca_project(const std::vector<const MTSDataset*>& data_sets);

struct TsneOptions {
    double perplexity = 30.0;
    std::size_t iterations = 1000;
    std::uint64_t seed = 0;
    double learning_rate = 200.0;
    double early_exaggeration = 12.0;
};

/// Exact (O(N^2)) t-SNE on the pooled flattened instances with standard
/// early exaggeration; deterministic given the seed. Requires pooled size
/// >= 3 * perplexity.
std::vector<Points2d> tsne_embed(const std::vector<const MTSDataset*>& data_sets,
                                 const TsneOptions& options);

/// Row-stochastic conditional affinities P(j|i) with per-row bandwidths
/// calibrated by binary search so each row's entropy is ln(perplexity).
/// Exposed so the calibration can be checked directly.
Eigen::MatrixXd tsne_conditional_affinities(const Eigen::MatrixXd& squared_distances,
                                            double perplexity);

} // namespace cosci::metrics

#endif // COSCI_METRICS_HPP
