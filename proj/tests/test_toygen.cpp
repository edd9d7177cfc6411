#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "cosci/toygen.hpp"

using namespace cosci;

namespace {

// naive periodogram peak bin over k = 1..n/2
std::size_t dominant_bin(const double* x, std::size_t n) {
    double best = -1.0;
    std::size_t best_k = 0;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        std::complex<double> acc(0, 0);
        for (std::size_t t = 0; t < n; ++t)
            acc += x[t] * std::polar(1.0, -2.0 * M_PI * double(k) * double(t) / double(n));
        const double power = std::norm(acc);
        if (power > best) {
            best = power;
            best_k = k;
        }
    }
    return best_k;
}

} // namespace

TEST_CASE("noise-free sine hits analytic values") {
    ToySpec spec;
    spec.n_per_type = 1;
    spec.length = 100;
    spec.amp_sd = 1e-15;
    spec.noise_sd = 0.0;
    auto [data, truth] = generate_toy(spec);

    CHECK(data.at(0, 0, 0) == doctest::Approx(0.0).epsilon(1e-9));
    // channel 0 frequency 0.01: t = 25 is a quarter period
    CHECK(data.at(0, 0, 25) == doctest::Approx(0.4).epsilon(1e-6));
    // patient type 2 amplitude 0.6
    CHECK(data.at(1, 0, 25) == doctest::Approx(0.6).epsilon(1e-6));
}

TEST_CASE("amplitude ground truth recovers the two patient distributions") {
    ToySpec spec;
    spec.n_per_type = 1024;
    spec.length = 16; // amplitude statistics only need the truth records
    spec.seed = 2024;
    auto [data, truth] = generate_toy(spec);

    double mean[2] = {0, 0}, sq[2] = {0, 0};
    for (const auto& t : truth) {
        mean[t.patient_type] += t.amplitude;
        sq[t.patient_type] += t.amplitude * t.amplitude;
    }
    for (int type = 0; type < 2; ++type) {
        mean[type] /= 1024.0;
        const double sd = std::sqrt(sq[type] / 1024.0 - mean[type] * mean[type]);
        const double expected_mean = type == 0 ? 0.4 : 0.6;
        CHECK(std::abs(mean[type] - expected_mean) < 0.01);
        CHECK(std::abs(sd - 0.05) < 0.01);
    }
}

TEST_CASE("labels match patient types and blocks are equal-sized") {
    ToySpec spec;
    spec.n_per_type = 8;
    spec.length = 32;
    auto [data, truth] = generate_toy(spec);
    REQUIRE(data.n_instances() == 16);
    REQUIRE(data.labeled());
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(data.label(i) == truth[i].patient_type);
        CHECK(data.label(i) == (i < 8 ? 0 : 1));
    }
}

TEST_CASE("same seed gives a bitwise-identical dataset") {
    ToySpec spec;
    spec.n_per_type = 16;
    spec.length = 64;
    spec.seed = 99;
    auto [a, ta] = generate_toy(spec);
    auto [b, tb] = generate_toy(spec);
    CHECK(a.values() == b.values());
    for (std::size_t i = 0; i < ta.size(); ++i) CHECK(ta[i].amplitude == tb[i].amplitude);
}

TEST_CASE("anomaly variant replaces the middle quarter with pure noise") {
    ToySpec spec;
    spec.variant = ToyVariant::Anomaly;
    spec.n_per_type = 64;
    spec.length = 800;
    spec.seed = 5;
    auto [data, truth] = generate_toy(spec);

    const std::size_t begin = 800 / 2 - 800 / 8;
    const std::size_t end = 800 / 2 + 800 / 8;
    double var_sum = 0.0, corr_sum = 0.0;
    for (std::size_t i = 0; i < data.n_instances(); ++i) {
        double s = 0, sq = 0, cross = 0, sine_sq = 0;
        for (std::size_t t = begin; t < end; ++t) {
            const double v = data.at(i, 0, t);
            const double sine = std::sin(2.0 * M_PI * 0.01 * double(t));
            s += v;
            sq += v * v;
            cross += v * sine;
            sine_sq += sine * sine;
        }
        const double n = double(end - begin);
        var_sum += sq / n - (s / n) * (s / n);
        corr_sum += std::abs(cross / std::sqrt(sq * sine_sq));
    }
    const double mean_var = var_sum / double(data.n_instances());
    CHECK(mean_var > 0.05 * 0.05 * 0.7);
    CHECK(mean_var < 0.05 * 0.05 * 1.3);
    CHECK(corr_sum / double(data.n_instances()) < 0.15);
}

TEST_CASE("frequency-change variant doubles the periodogram peak mid-series") {
    ToySpec spec;
    spec.variant = ToyVariant::FreqChange;
    spec.n_per_type = 1;
    spec.length = 400;
    spec.amp_sd = 1e-15;
    spec.noise_sd = 0.0;
    auto [data, truth] = generate_toy(spec);

    auto s = data.series(0, 0);
    const std::size_t half = 200;
    const std::size_t peak_first = dominant_bin(s.data(), half);
    const std::size_t peak_second = dominant_bin(s.data() + half, half);
    CHECK(peak_first == 2);  // f = 0.01 over 200 samples
    CHECK(peak_second == 4); // doubled frequency

    // phase continuity: the switch point continues the first-half phase
    const double expected_switch = 0.4 * std::sin(2.0 * M_PI * 0.01 * 200.0);
    CHECK(data.at(0, 0, 200) == doctest::Approx(expected_switch).epsilon(1e-9));
    const double expected_after =
        0.4 * std::sin(2.0 * M_PI * 0.01 * 200.0 + 2.0 * M_PI * 0.02 * 10.0);
    CHECK(data.at(0, 0, 210) == doctest::Approx(expected_after).epsilon(1e-9));
}
