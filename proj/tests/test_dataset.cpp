#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cosci/dataset.hpp"
#include "cosci/errors.hpp"
#include "cosci/rng.hpp"

using namespace cosci;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

MTSDataset random_dataset(std::size_t n, std::size_t c, std::size_t l, std::uint64_t seed,
                          bool labeled = false) {
    MTSDataset data(n, c, l);
    Rng rng(seed);
    for (double& v : data.values()) v = rng.normal(0.0, 2.0);
    if (labeled) {
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = i % 2;
        data.set_labels(std::move(labels));
    }
    return data;
}

} // namespace

TEST_CASE("load_csv places channel-concatenated columns") {
    const std::string path = temp_path("cosci_layout.csv");
    write_file(path, "0,1,2,3\n");
    MTSDataset d = load_csv(path, 2, 2);
    CHECK(d.n_instances() == 1);
    CHECK(d.at(0, 0, 0) == 0.0);
    CHECK(d.at(0, 0, 1) == 1.0);
    CHECK(d.at(0, 1, 0) == 2.0);
    CHECK(d.at(0, 1, 1) == 3.0);
    std::remove(path.c_str());
}

TEST_CASE("load_csv rejects degenerate and malformed input") {
    const std::string path = temp_path("cosci_bad.csv");

    write_file(path, "");
    CHECK_THROWS_AS(load_csv(path, 2, 2), ShapeError);

    write_file(path, "0,1,2\n");
    CHECK_THROWS_AS(load_csv(path, 2, 2), ShapeError);

    write_file(path, "0,1,2,3\n0,oops,2,3\n");
    try {
        load_csv(path, 2, 2);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }

    write_file(path, "0,nan,2,3\n");
    CHECK_THROWS_AS(load_csv(path, 2, 2), DataError);
    std::remove(path.c_str());
}

TEST_CASE("save_csv writes plain comma-separated values") {
    const std::string path = temp_path("cosci_fmt.csv");
    MTSDataset d(1, 1, 2);
    d.at(0, 0, 0) = 5.0;
    d.at(0, 0, 1) = -1.5;
    save_csv(d, path);

    std::ifstream in(path);
    std::string header, body;
    std::getline(in, header);
    std::getline(in, body);
    CHECK(header.find("channels=1") != std::string::npos);
    double a = 0, b = 0;
    CHECK(std::sscanf(body.c_str(), "%lf,%lf", &a, &b) == 2);
    CHECK(a == 5.0);
    CHECK(b == -1.5);
    std::remove(path.c_str());
}

TEST_CASE("csv round-trip reproduces values and labels") {
    const std::string path = temp_path("cosci_roundtrip.csv");

    SUBCASE("4x3x10 unlabeled") {
        MTSDataset d = random_dataset(4, 3, 10, 7);
        save_csv(d, path);
        MTSDataset back = load_csv(path, 3, 10);
        REQUIRE(back.values().size() == d.values().size());
        for (std::size_t i = 0; i < d.values().size(); ++i)
            CHECK(back.values()[i] == doctest::Approx(d.values()[i]).epsilon(1e-9));
    }
    SUBCASE("8x5x100 unlabeled") {
        MTSDataset d = random_dataset(8, 5, 100, 11);
        save_csv(d, path);
        MTSDataset back = load_csv(path, 5, 100);
        double max_err = 0.0;
        for (std::size_t i = 0; i < d.values().size(); ++i)
            max_err = std::max(max_err, std::abs(back.values()[i] - d.values()[i]));
        CHECK(max_err < 1e-9);
    }
    SUBCASE("labels round-trip exactly") {
        MTSDataset d = random_dataset(6, 2, 5, 3, true);
        save_csv(d, path);
        MTSDataset back = load_csv(path, 2, 5);
        REQUIRE(back.labeled());
        for (std::size_t i = 0; i < d.n_instances(); ++i) CHECK(back.label(i) == d.label(i));
    }
    std::remove(path.c_str());
}

TEST_CASE("zscore_filter passes constant channels through") {
    MTSDataset d(2, 1, 5);
    for (double& v : d.values()) v = 3.25;
    MTSDataset out = zscore_filter(d, 3.0);
    CHECK(out.values() == d.values());
}

TEST_CASE("zscore_filter interpolates a spike to its neighbours") {
    // one spiked series pooled with three quiet ones so the channel sigma is
    // small enough to flag the spike at threshold 3
    MTSDataset d(4, 1, 7);
    d.at(0, 0, 3) = 100.0;
    MTSDataset out = zscore_filter(d, 3.0);
    CHECK(out.at(0, 0, 3) == doctest::Approx(0.0));
    for (std::size_t t = 0; t < 7; ++t)
        if (t != 3) CHECK(out.at(0, 0, t) == d.at(0, 0, t));
}

TEST_CASE("zscore_filter matches a brute-force flag count on the EEG fixture") {
    EegFixtureSpec spec;
    spec.total_length = 20000;
    spec.n_events = 12;
    spec.seed = 42;
    auto [data, events] = generate_eeg_like(spec);

    MTSDataset out = zscore_filter(data, 3.0);

    // independent flagger: pooled per-channel z-scores
    std::size_t flagged = 0, changed = 0;
    for (std::size_t c = 0; c < data.n_channels(); ++c) {
        double sum = 0, sq = 0;
        const double count = double(data.n_instances() * data.length());
        for (std::size_t i = 0; i < data.n_instances(); ++i)
            for (double v : data.series(i, c)) {
                sum += v;
                sq += v * v;
            }
        const double mean = sum / count;
        const double sd = std::sqrt(std::max(0.0, sq / count - mean * mean));
        for (std::size_t i = 0; i < data.n_instances(); ++i)
            for (std::size_t t = 0; t < data.length(); ++t) {
                if (std::abs(data.at(i, c, t) - mean) / sd > 3.0) ++flagged;
                if (out.at(i, c, t) != data.at(i, c, t)) ++changed;
            }
    }
    CHECK(flagged > 0);
    CHECK(changed == flagged);
}

TEST_CASE("zscore_filter is idempotent on bounded noise with spikes") {
    // uniform background (max |z| well under 3) plus clear spikes: pass one
    // removes exactly the spikes, pass two finds nothing
    MTSDataset d(8, 2, 200);
    Rng rng(77);
    for (double& v : d.values()) v = rng.uniform(-1.0, 1.0);
    for (std::size_t i = 0; i < 8; ++i) {
        d.at(i, 0, 40 + i * 7) = 25.0;
        d.at(i, 1, 90 + i * 3) = -30.0;
    }
    MTSDataset once = zscore_filter(d, 3.0);
    std::size_t first_pass_changes = 0;
    for (std::size_t i = 0; i < d.values().size(); ++i)
        if (once.values()[i] != d.values()[i]) ++first_pass_changes;
    CHECK(first_pass_changes == 16);

    MTSDataset twice = zscore_filter(once, 3.0);
    CHECK(twice.values() == once.values());
}

TEST_CASE("extract_event_windows covers a single event") {
    MTSDataset d(1, 1, 1000);
    Rng rng(5);
    for (double& v : d.values()) v = rng.normal();
    std::vector<Event> events{{0, 300, 400}};
    MTSDataset frames = extract_event_windows(d, events, 800, 200);
    REQUIRE(frames.n_instances() == 1); // no negative span fits in 1000 samples
    CHECK(frames.label(0) == 1);
    CHECK(frames.length() == 800);
    // the frame must contain [100, 600), the event plus margins
    bool found = false;
    for (std::size_t start = 0; start + 800 <= 1000 && !found; ++start) {
        bool match = true;
        for (std::size_t t = 0; t < 800 && match; t += 97)
            match = frames.at(0, 0, t) == d.at(0, 0, start + t);
        if (match && start <= 100 && start + 800 >= 600) found = true;
    }
    CHECK(found);
}

TEST_CASE("extract_event_windows errors when nothing can be extracted") {
    MTSDataset d(1, 1, 100);
    CHECK_THROWS_AS(extract_event_windows(d, {}, 50, 10), DataError);
}

TEST_CASE("extract_event_windows balances classes and keeps negatives clear") {
    // 10 events on a long single-instance recording
    const std::size_t length = 100000;
    MTSDataset d(1, 2, length);
    Rng rng(9);
    for (double& v : d.values()) v = rng.normal();
    std::vector<Event> events;
    for (std::size_t k = 0; k < 10; ++k) {
        const std::size_t start = 3000 + k * 9000;
        events.push_back({0, start, start + 120});
    }
    const std::size_t window = 800, margin = 200;
    MTSDataset frames = extract_event_windows(d, events, window, margin);
    REQUIRE(frames.n_instances() == 20);
    std::size_t positives = 0;
    for (std::size_t i = 0; i < frames.n_instances(); ++i) positives += frames.label(i);
    CHECK(positives == 10);

    // brute-force overlap oracle: every negative frame must be identifiable
    // as a span with margin clearance from all events
    for (std::size_t i = 0; i < frames.n_instances(); ++i) {
        if (frames.label(i) == 1) continue;
        // locate the frame in the source by matching samples
        std::size_t located = length;
        for (std::size_t start = 0; start + window <= length; ++start) {
            bool match = true;
            for (std::size_t t = 0; t < window && match; t += 131)
                match = frames.at(i, 0, t) == d.at(0, 0, start + t);
            if (match) {
                located = start;
                break;
            }
        }
        REQUIRE(located < length);
        for (const Event& e : events) {
            const std::size_t forbid_lo = e.start - margin;
            const std::size_t forbid_hi = e.end + margin;
            const bool overlaps = located < forbid_hi && forbid_lo < located + window;
            CHECK_FALSE(overlaps);
        }
    }
}

TEST_CASE("forward_select_channels follows the scorer") {
    MTSDataset d = random_dataset(10, 4, 6, 21, true);

    SUBCASE("forced argmax picks channel 2 first") {
        auto scorer = [](const MTSDataset&, const std::vector<std::size_t>& subset) {
            for (auto c : subset)
                if (c == 2) return 1.0;
            return 0.5;
        };
        auto picked = forward_select_channels(d, 2, scorer);
        CHECK(picked[0] == 2);
    }
    SUBCASE("k = n_channels returns a permutation") {
        auto scorer = [](const MTSDataset&, const std::vector<std::size_t>& subset) {
            return double(subset.size());
        };
        auto picked = forward_select_channels(d, 4, scorer);
        std::vector<std::size_t> sorted = picked;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::vector<std::size_t>{0, 1, 2, 3});
    }
}

TEST_CASE("forward selection finds the signal channel, matching exhaustive search") {
    // only channel 0 separates the classes
    MTSDataset d(40, 3, 8);
    Rng rng(33);
    std::vector<int> labels(40);
    for (std::size_t i = 0; i < 40; ++i) {
        labels[i] = i < 20 ? 0 : 1;
        for (std::size_t c = 0; c < 3; ++c) {
            const double mean = (c == 0) ? (labels[i] == 0 ? -1.0 : 1.0) : 0.0;
            for (auto& v : d.series(i, c)) v = rng.normal(mean, 0.3);
        }
    }
    d.set_labels(std::move(labels));

    // scorer: separation of class means of the per-instance average over the
    // selected channels
    auto scorer = [](const MTSDataset& data, const std::vector<std::size_t>& subset) {
        double mean0 = 0, mean1 = 0;
        std::size_t n0 = 0, n1 = 0;
        for (std::size_t i = 0; i < data.n_instances(); ++i) {
            double avg = 0;
            for (auto c : subset)
                for (double v : data.series(i, c)) avg += v;
            avg /= double(subset.size() * data.length());
            if (data.label(i) == 0) {
                mean0 += avg;
                ++n0;
            } else {
                mean1 += avg;
                ++n1;
            }
        }
        return std::abs(mean1 / double(n1) - mean0 / double(n0));
    };

    auto picked = forward_select_channels(d, 2, scorer);
    CHECK(picked[0] == 0);

    // exhaustive oracle over singletons agrees
    double best = -1;
    std::size_t best_c = 99;
    for (std::size_t c = 0; c < 3; ++c) {
        const double s = scorer(d, {c});
        if (s > best) {
            best = s;
            best_c = c;
        }
    }
    CHECK(best_c == picked[0]);
}

TEST_CASE("split is a deterministic stratified partition") {
    SUBCASE("10 instances at 0.8 give 8/2") {
        MTSDataset d = random_dataset(10, 2, 4, 3);
        auto [train, test] = split(d, {0.8, 123});
        CHECK(train.n_instances() == 8);
        CHECK(test.n_instances() == 2);
    }
    SUBCASE("same seed twice gives identical index sets") {
        MTSDataset d = random_dataset(25, 1, 4, 4);
        auto [a_train, a_test] = split_indices(d, {0.7, 99});
        auto [b_train, b_test] = split_indices(d, {0.7, 99});
        CHECK(a_train == b_train);
        CHECK(a_test == b_test);
    }
    SUBCASE("stratification keeps 40 of each label in train") {
        MTSDataset d = random_dataset(100, 1, 4, 5, true); // alternating labels, 50/50
        auto [train, test] = split(d, {0.8, 7});
        REQUIRE(train.n_instances() == 80);
        std::size_t ones = 0;
        for (std::size_t i = 0; i < train.n_instances(); ++i) ones += train.label(i);
        CHECK(ones == 40);
    }
    SUBCASE("partition property") {
        MTSDataset d = random_dataset(37, 1, 4, 6);
        auto [train_idx, test_idx] = split_indices(d, {0.61, 13});
        std::vector<std::size_t> all = train_idx;
        all.insert(all.end(), test_idx.begin(), test_idx.end());
        std::sort(all.begin(), all.end());
        for (std::size_t i = 0; i < 37; ++i) CHECK(all[i] == i);
    }
    SUBCASE("empty side raises ConfigError") {
        MTSDataset d = random_dataset(2, 1, 4, 8);
        CHECK_THROWS_AS(split(d, {0.1, 0}), ConfigError);
    }
}

TEST_CASE("EEG fixture is labeled-window ready") {
    EegFixtureSpec spec;
    spec.total_length = 60000;
    spec.n_events = 24;
    spec.seed = 17;
    auto [data, events] = generate_eeg_like(spec);
    data.validate();
    CHECK(data.n_channels() == 5);
    CHECK(events.size() > 12);

    MTSDataset frames = extract_event_windows(data, events, 800, 200);
    CHECK(frames.labeled());
    CHECK(frames.n_instances() >= 4);
    CHECK(frames.n_instances() % 2 == 0);
}
