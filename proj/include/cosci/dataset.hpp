#ifndef COSCI_DATASET_HPP
#define COSCI_DATASET_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cosci {

/// Multivariate time-series dataset: n_instances x n_channels x length real
/// samples, stored instance-major then channel-major, plus optional binary
/// labels (one per instance).
///
/// Invariants: n_instances >= 1, n_channels >= 1, length >= 2, all values
/// finite, labels (when present) in {0,1} with one entry per instance.
class MTSDataset {
public:
    MTSDataset() = default;
    MTSDataset(std::size_t n_instances, std::size_t n_channels, std::size_t length);

    std::size_t n_instances() const { return n_instances_; }
    std::size_t n_channels() const { return n_channels_; }
    std::size_t length() const { return length_; }

    double& at(std::size_t instance, std::size_t channel, std::size_t t) {
        return values_[(instance * n_channels_ + channel) * length_ + t];
    }
    double at(std::size_t instance, std::size_t channel, std::size_t t) const {
        return values_[(instance * n_channels_ + channel) * length_ + t];
    }

    /// One channel of one instance as a contiguous span of `length` samples.
    std::span<double> series(std::size_t instance, std::size_t channel) {
        return {values_.data() + (instance * n_channels_ + channel) * length_, length_};
    }
    std::span<const double> series(std::size_t instance, std::size_t channel) const {
        return {values_.data() + (instance * n_channels_ + channel) * length_, length_};
    }

    /// Full instance (all channels concatenated channel-major), length C*L.
    std::span<const double> instance_row(std::size_t instance) const {
        return {values_.data() + instance * n_channels_ * length_, n_channels_ * length_};
    }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool labeled() const { return labels_.has_value(); }
    const std::vector<int>& labels() const { return *labels_; }
    void set_labels(std::vector<int> labels);
    void clear_labels() { labels_.reset(); }
    int label(std::size_t instance) const { return (*labels_)[instance]; }

    /// Throws ShapeError / DataError if any invariant is violated.
    void validate() const;

    /// New dataset keeping only the given channels, in the given order.
    MTSDataset select_channels(const std::vector<std::size_t>& channels) const;

    /// New dataset keeping only the given instances, in the given order.
    MTSDataset select_instances(const std::vector<std::size_t>& instances) const;

    /// Instances of both datasets stacked (shapes and labeledness must match).
    static MTSDataset concatenate(const MTSDataset& a, const MTSDataset& b);

private:
    std::size_t n_instances_ = 0;
    std::size_t n_channels_ = 0;
    std::size_t length_ = 0;
    std::vector<double> values_;
    std::optional<std::vector<int>> labels_;
};

/// Deterministic train/test split request.
struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// CSV I/O
//
// One instance per row, channels concatenated: columns [c*L, (c+1)*L) hold
// channel c. Labeled files carry one extra trailing column. Files may start
// with the self-describing header line
//   cosci-mts v1; channels=C; length=L; labeled={0,1}
// which save_csv always writes.
// ---------------------------------------------------------------------------

MTSDataset load_csv(const std::string& path, std::size_t n_channels, std::size_t length);

/// Loads a file whose shape is declared by its header line.
MTSDataset load_csv_auto(const std::string& path);

void save_csv(const MTSDataset& dataset, const std::string& path);

/// The exact bytes save_csv would write.
std::string to_csv_string(const MTSDataset& dataset);

/// Replaces per-channel outliers (|x - mu| / sigma > threshold, with mu and
/// sigma pooled over all instances and timesteps of the channel) by linear
/// interpolation between the nearest non-outlier neighbours in the same
/// series; endpoints clamp to the nearest valid value. Channels with zero
/// pooled variance pass through unchanged.
MTSDataset zscore_filter(const MTSDataset& dataset, double threshold);

/// Event location inside a dataset: [start, end) in instance's time axis.
struct Event {
    std::size_t instance = 0;
    std::size_t start = 0;
    std::size_t end = 0;
};

/// Cuts balanced positive/negative frames of `window` samples. A positive
/// frame fully contains one event plus `margin` samples of padding on each
/// side (label 1). Negative frames are found by a deterministic left-to-right
/// scan of spans that keep at least `margin` samples clearance from every
/// event (label 0). Classes are balanced by truncating the larger one.
MTSDataset extract_event_windows(const MTSDataset& dataset, const std::vector<Event>& events,
                                 std::size_t window, std::size_t margin);

/// Accuracy scorer over a channel subset; used by forward selection.
using ChannelSubsetScorer =
    std::function<double(const MTSDataset& dataset, const std::vector<std::size_t>& channels)>;

/// Greedy forward selection: repeatedly adds the channel that maximizes the
/// scorer on (current subset + candidate); ties go to the lowest index.
/// Returns the k selected channels in selection order.
std::vector<std::size_t> forward_select_channels(const MTSDataset& dataset, std::size_t k,
                                                 const ChannelSubsetScorer& scorer);

/// Deterministic shuffled index split; stratified per class when labels are
/// present (proportions preserved within +-1 instance per class).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_indices(const MTSDataset& dataset, const SplitSpec& spec);

std::pair<MTSDataset, MTSDataset> split(const MTSDataset& dataset, const SplitSpec& spec);

// ---------------------------------------------------------------------------
// EEG-like fixture
// ---------------------------------------------------------------------------

/// Recipe for a hermetic EEG-style recording: damped-oscillation "blink"
/// bursts injected into AR(1) colored noise, coherently across channels.
struct EegFixtureSpec {
    std::size_t n_channels = 5;
    std::size_t total_length = 200000; ///< samples in the single recording
    std::size_t n_events = 64;
    std::size_t event_len = 60;    ///< samples per blink burst
    double blink_freq = 0.05;      ///< cycles/timestep of the burst oscillation
    double blink_amp_mean = 6.0;   ///< burst amplitude, drawn per event
    double blink_amp_sd = 1.0;
    double ar_coeff = 0.9;         ///< AR(1) coefficient of the background
    double noise_sd = 1.0;         ///< innovation sd of the background
    std::uint64_t seed = 0;
};

/// Generates the recording (1 instance, C channels) plus its event list.
/// Every channel sees each blink at the same time with a channel-specific
/// gain, so blinks carry inter-channel structure the way real eye blinks do.
std::pair<MTSDataset, std::vector<Event>> generate_eeg_like(const EegFixtureSpec& spec);

} // namespace cosci

#endif // COSCI_DATASET_HPP
