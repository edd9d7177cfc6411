#include "cosci/study.hpp"

#include <atomic>
#include <functional>
#include <thread>

#include "cosci/errors.hpp"
#include "cosci/rng.hpp"

namespace cosci::study {

std::string variant_name(ToyVariant v) {
    switch (v) {
    case ToyVariant::SimpleSine: return "SimpleSine";
    case ToyVariant::FreqChange: return "FreqChange";
    case ToyVariant::Anomaly: return "Anomaly";
    }
    return "unknown";
}

ToyVariant variant_from(const std::string& name) {
    if (name == "SimpleSine") return ToyVariant::SimpleSine;
    if (name == "FreqChange") return ToyVariant::FreqChange;
    if (name == "Anomaly") return ToyVariant::Anomaly;
    throw ConfigError("unknown toy variant '" + name +
                      "' (expected SimpleSine, FreqChange or Anomaly)");
}

void parallel_cells(std::vector<std::function<void()>> cells, std::size_t jobs) {
    if (jobs <= 1 || cells.size() <= 1) {
        for (auto& cell : cells) cell();
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= cells.size()) return;
            cells[k]();
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n_workers = std::min(jobs, cells.size());
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Toy study
// ---------------------------------------------------------------------------

ToyArmResult run_toy_arm(const ToySpec& toy, const CosciConfig& gan_template, bool with_cd,
                         std::uint64_t seed) {
    auto [real, truth] = generate_toy(toy);
    MTSDataset unlabeled = real;
    unlabeled.clear_labels();

    CosciConfig cfg = gan_template;
    cfg.n_channels = real.n_channels();
    cfg.with_cd = with_cd;
    cfg.seed = seed;

    CosciModel model = CosciModel::create(cfg, real.length());
    train(model, unlabeled);
    MTSDataset synth = sample(model, real.n_instances(), derive_seed(seed, "study-sample"));

    ToyArmResult result;
    result.variant = variant_name(toy.variant);
    result.with_cd = with_cd;
    result.seed = seed;
    result.per_channel_wd = metrics::per_channel_amplitude_wd(real, synth);
    result.awd = 0.0;
    for (double w : result.per_channel_wd) result.awd += w;
    result.awd /= static_cast<double>(result.per_channel_wd.size());
    result.aed = metrics::aed(synth);

    const auto keep = metrics::surviving_features(real, 0, 1);
    const auto real_m = metrics::feature_corr_matrix(real, 0, 1, keep);
    const auto synth_m = metrics::feature_corr_matrix(synth, 0, 1, keep);
    result.similarity = metrics::matrix_similarity(real_m, synth_m);
    return result;
}

std::vector<ToyArmResult> run_toy_study(const ToyStudyConfig& config) {
    struct Cell {
        ToyVariant variant;
        bool with_cd;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (ToyVariant variant : config.variants)
        for (bool with_cd : {true, false})
            for (std::uint64_t seed : config.seeds) cells.push_back({variant, with_cd, seed});

    std::vector<ToyArmResult> results(cells.size());
    std::vector<std::function<void()>> tasks;
    tasks.reserve(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
        tasks.push_back([&, k] {
            ToySpec toy = config.toy;
            toy.variant = cells[k].variant;
            results[k] = run_toy_arm(toy, config.gan, cells[k].with_cd, cells[k].seed);
        });
    }
    parallel_cells(std::move(tasks), config.jobs);
    return results;
}

// ---------------------------------------------------------------------------
// EEG-style study
// ---------------------------------------------------------------------------

MTSDataset eeg_frames(const EegStudyConfig& config) {
    auto [recording, events] = generate_eeg_like(config.fixture);
    return extract_event_windows(recording, events, config.window, config.margin);
}

Table3Result run_table3(const EegStudyConfig& config) {
    MTSDataset frames = eeg_frames(config);
    std::vector<std::size_t> keep(config.trts_channels);
    for (std::size_t c = 0; c < keep.size(); ++c) keep[c] = c;
    const MTSDataset data = frames.select_channels(keep);

    downstream::ProtocolConfig protocol;
    protocol.gan = config.gan;
    protocol.classifier = config.classifier;
    protocol.train_fraction = config.train_fraction;
    protocol.val_fraction = config.val_fraction;
    protocol.repeats = config.repeats;
    protocol.seed = config.seed;

    Table3Result result;
    auto factory_cd = downstream::cosci_factory(config.gan, true);
    auto factory_no = downstream::cosci_factory(config.gan, false);
    std::tie(result.trtf_with_cd, result.tftr_with_cd) =
        downstream::run_trts_tstr(data, factory_cd, protocol);
    std::tie(result.trtf_without_cd, result.tftr_without_cd) =
        downstream::run_trts_tstr(data, factory_no, protocol);
    result.trtf_with_cd.method = "cosci_cd";
    result.tftr_with_cd.method = "cosci_cd";
    result.trtf_without_cd.method = "cosci_no_cd";
    result.tftr_without_cd.method = "cosci_no_cd";
    return result;
}

namespace {

downstream::ProtocolConfig protocol_of(const EegStudyConfig& config) {
    downstream::ProtocolConfig protocol;
    protocol.gan = config.gan;
    protocol.classifier = config.classifier;
    protocol.train_fraction = config.train_fraction;
    protocol.val_fraction = config.val_fraction;
    protocol.repeats = config.repeats;
    protocol.seed = config.seed;
    return protocol;
}

} // namespace

std::vector<downstream::UtilityReport>
run_eeg_all_synthetic(const EegStudyConfig& config, const std::vector<downstream::Method>& methods,
                      const std::vector<std::size_t>& channel_counts) {
    const MTSDataset frames = eeg_frames(config);
    return downstream::run_all_synthetic(frames, methods, channel_counts, protocol_of(config));
}

std::vector<downstream::UtilityReport>
run_eeg_augmentation(const EegStudyConfig& config, const std::vector<downstream::Method>& methods,
                     const std::vector<std::size_t>& channel_counts,
                     const std::vector<std::pair<std::size_t, std::size_t>>& ratios) {
    const MTSDataset frames = eeg_frames(config);
    return downstream::run_augmentation(frames, methods, channel_counts, ratios,
                                        protocol_of(config));
}

} // namespace cosci::study
