#include "cosci/toygen.hpp"

#include <cmath>

#include "cosci/errors.hpp"
#include "cosci/rng.hpp"

namespace cosci {

void ToySpec::validate() const {
    if (n_per_type < 1) throw ConfigError("n_per_type must be >= 1");
    if (length < 2) throw ConfigError("length must be >= 2");
    if (!(amp_sd > 0.0)) throw ConfigError("amp_sd must be > 0");
    if (noise_sd < 0.0) throw ConfigError("noise_sd must be >= 0");
    if (!(freq_ch1 > 0.0 && freq_ch2 > 0.0)) throw ConfigError("frequencies must be > 0");
    if (!(anomaly_fraction > 0.0 && anomaly_fraction < 1.0))
        throw ConfigError("anomaly_fraction must lie in (0,1)");
}

namespace {

// Sine phase at integer time t; FreqChange doubles the frequency at t = L/2
// and keeps the phase continuous across the switch.
double phase_at(double freq, std::size_t t, std::size_t length, bool freq_change) {
    const double half = static_cast<double>(length) / 2.0;
    const double td = static_cast<double>(t);
    if (!freq_change || td < half) return 2.0 * M_PI * freq * td;
    return 2.0 * M_PI * freq * half + 2.0 * M_PI * (2.0 * freq) * (td - half);
}

} // namespace

std::pair<MTSDataset, std::vector<ToyGroundTruth>> generate_toy(const ToySpec& spec) {
    spec.validate();

    const std::size_t n = 2 * spec.n_per_type;
    const std::size_t L = spec.length;
    MTSDataset data(n, 2, L);
    std::vector<ToyGroundTruth> truth(n);
    std::vector<int> labels(n);

    const bool freq_change = spec.variant == ToyVariant::FreqChange;
    const bool anomaly = spec.variant == ToyVariant::Anomaly;
    const std::size_t anomaly_begin =
        anomaly ? L / 2 - static_cast<std::size_t>(std::floor(double(L) * spec.anomaly_fraction / 2.0))
                : 0;
    const std::size_t anomaly_end =
        anomaly ? L / 2 + static_cast<std::size_t>(std::floor(double(L) * spec.anomaly_fraction / 2.0))
                : 0;
    const double freqs[2] = {spec.freq_ch1, spec.freq_ch2};

    for (std::size_t i = 0; i < n; ++i) {
        const int type = i < spec.n_per_type ? 0 : 1;
        Rng rng(derive_seed(spec.seed, "toy-instance", i));
        const double amp_mean = type == 0 ? spec.amp_mean_pt1 : spec.amp_mean_pt2;
        const double amp = rng.normal(amp_mean, spec.amp_sd);
        truth[i] = {type, amp};
        labels[i] = type;

        for (std::size_t c = 0; c < 2; ++c) {
            auto s = data.series(i, c);
            for (std::size_t t = 0; t < L; ++t) {
                const bool masked = anomaly && t >= anomaly_begin && t < anomaly_end;
                const double noise = spec.noise_sd > 0.0 ? rng.normal(0.0, spec.noise_sd) : 0.0;
                s[t] = masked ? noise
                              : amp * std::sin(phase_at(freqs[c], t, L, freq_change)) + noise;
            }
        }
    }

    data.set_labels(std::move(labels));
    return {std::move(data), std::move(truth)};
}

} // namespace cosci
