#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cosci/downstream.hpp"
#include "cosci/errors.hpp"
#include "cosci/rng.hpp"

using namespace cosci;
using namespace cosci::downstream;

namespace {

// single-feature fixture where the class is the sign of the series mean
MTSDataset separable_fixture(std::size_t per_class, std::size_t length, std::uint64_t seed,
                             double gap = 1.0) {
    MTSDataset d(2 * per_class, 1, length);
    std::vector<int> labels(2 * per_class);
    Rng rng(seed);
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const int label = i % 2;
        labels[i] = label;
        const double mean = label == 0 ? -gap : gap;
        for (double& v : d.series(i, 0)) v = rng.normal(mean, 0.5);
    }
    d.set_labels(std::move(labels));
    return d;
}

ClassifierSpec small_spec(std::uint64_t seed = 3) {
    ClassifierSpec spec;
    spec.hidden_dim = 8;
    spec.epochs = 6;
    spec.batch_size = 16;
    spec.lr = 5e-3;
    spec.seed = seed;
    return spec;
}

CosciConfig smoke_gan() {
    CosciConfig cfg;
    cfg.n_channels = 2;
    cfg.noise_len = 4;
    cfg.batch_size = 8;
    cfg.n_epochs = 2;
    cfg.hidden_dim = 4;
    cfg.cd_widths = {6, 4, 3};
    return cfg;
}

} // namespace

TEST_CASE("classifier learns a separable fixture") {
    MTSDataset train = separable_fixture(40, 12, 1);
    MTSDataset val = separable_fixture(20, 12, 2);
    Classifier clf = train_classifier(small_spec(), train, val);
    CHECK(evaluate(clf, val) >= 0.95);
}

TEST_CASE("zero epochs return an untrained classifier near chance") {
    MTSDataset train = separable_fixture(20, 12, 5);
    MTSDataset val = separable_fixture(20, 12, 6);
    ClassifierSpec spec = small_spec();
    spec.epochs = 0;
    Classifier clf = train_classifier(spec, train, val);
    const double acc = evaluate(clf, val);
    CHECK(acc >= 0.3);
    CHECK(acc <= 0.7);
}

TEST_CASE("classifier training is deterministic under a fixed seed") {
    MTSDataset train = separable_fixture(20, 10, 7);
    MTSDataset val = separable_fixture(10, 10, 8);
    Classifier a = train_classifier(small_spec(11), train, val);
    Classifier b = train_classifier(small_spec(11), train, val);
    for (std::size_t t = 0; t < a.params().n_tensors(); ++t)
        CHECK(a.params().tensor(t).value == b.params().tensor(t).value);
}

TEST_CASE("single-class training set is rejected") {
    MTSDataset train = separable_fixture(10, 10, 9);
    std::vector<int> labels(train.n_instances(), 1);
    train.set_labels(std::move(labels));
    MTSDataset val = separable_fixture(5, 10, 10);
    CHECK_THROWS_AS(train_classifier(small_spec(), train, val), DataError);
}

TEST_CASE("evaluate matches a confusion-matrix oracle and handles constants") {
    MTSDataset test = separable_fixture(25, 10, 12); // balanced by construction
    Classifier clf(small_spec(), 1, 10);

    SUBCASE("constant-1 classifier scores 0.5 on balanced data") {
        for (std::size_t t = 0; t < clf.params().n_tensors(); ++t)
            clf.params().tensor(t).value.setZero();
        clf.params().at("head.bias").value(0, 0) = 25.0; // sigmoid ~ 1
        CHECK(evaluate(clf, test) == doctest::Approx(0.5));
    }
    SUBCASE("accuracy equals the brute-force confusion computation") {
        const auto proba = clf.predict_proba(test);
        std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < test.n_instances(); ++i) {
            const int pred = proba[i] > 0.5 ? 1 : 0;
            if (pred == 1 && test.label(i) == 1) ++tp;
            if (pred == 0 && test.label(i) == 0) ++tn;
            if (pred == 1 && test.label(i) == 0) ++fp;
            if (pred == 0 && test.label(i) == 1) ++fn;
        }
        const double oracle =
            double(tp + tn) / double(tp + tn + fp + fn);
        CHECK(evaluate(clf, test) == doctest::Approx(oracle).epsilon(1e-15));
    }
}

TEST_CASE("label-shuffled test accuracy stays near chance") {
    MTSDataset train = separable_fixture(40, 12, 21);
    MTSDataset val = separable_fixture(20, 12, 22);
    Classifier clf = train_classifier(small_spec(23), train, val);

    MTSDataset shuffled = separable_fixture(100, 12, 24);
    std::vector<int> labels = shuffled.labels();
    Rng rng(25);
    rng.shuffle(labels);
    shuffled.set_labels(std::move(labels));

    const double acc = evaluate(clf, shuffled);
    const double sigma = std::sqrt(0.25 / double(shuffled.n_instances()));
    CHECK(std::abs(acc - 0.5) <= 3.0 * sigma);
}

TEST_CASE("TRTS/TSTR with a copying factory behaves like train-on-real") {
    MTSDataset real = separable_fixture(64, 10, 31, 1.5);

    // degenerate factory: "synthetic" data is the real class data itself
    ModelFactory copying = [](const MTSDataset& class_train, std::uint64_t) {
        MTSDataset copy = class_train;
        return SyntheticSampler([copy](std::size_t n, std::uint64_t) {
            std::vector<std::size_t> idx(n);
            for (std::size_t i = 0; i < n; ++i) idx[i] = i % copy.n_instances();
            return copy.select_instances(idx);
        });
    };

    ProtocolConfig config;
    config.gan = smoke_gan();
    config.classifier = small_spec();
    config.classifier.epochs = 12;
    config.repeats = 2;
    config.seed = 5;
    auto [trtf, tftr] = run_trts_tstr(real, copying, config);

    REQUIRE(trtf.accuracy.size() == 2);
    REQUIRE(tftr.accuracy.size() == 2);
    for (double a : trtf.accuracy) CHECK(a >= 0.9); // separable and literally real
    for (double a : tftr.accuracy) CHECK(a >= 0.9);

    // determinism of the whole report
    auto [trtf2, tftr2] = run_trts_tstr(real, copying, config);
    CHECK(trtf2.accuracy == trtf.accuracy);
    CHECK(tftr2.accuracy == tftr.accuracy);
}

TEST_CASE("all-synthetic reports carry every arm, channel count and seed") {
    MTSDataset real = separable_fixture(16, 8, 41);
    MTSDataset two_channel(real.n_instances(), 2, 8);
    for (std::size_t i = 0; i < real.n_instances(); ++i)
        for (std::size_t t = 0; t < 8; ++t) {
            two_channel.at(i, 0, t) = real.at(i, 0, t);
            two_channel.at(i, 1, t) = real.at(i, 0, t) * 0.5;
        }
    two_channel.set_labels(std::vector<int>(real.labels()));

    ProtocolConfig config;
    config.gan = smoke_gan();
    config.classifier = small_spec();
    config.classifier.epochs = 2;
    config.repeats = 2;
    config.seed = 77;

    auto reports = run_all_synthetic(two_channel, {Method::CosciCd, Method::Baseline}, {1, 2},
                                     config);
    // 2 channel counts x (2 methods + control)
    REQUIRE(reports.size() == 6);
    std::size_t controls = 0;
    for (const auto& r : reports) {
        CHECK(r.accuracy.size() == 2);
        CHECK(r.seeds.size() == 2);
        for (double a : r.accuracy) {
            CHECK(a >= 0.0);
            CHECK(a <= 1.0);
        }
        if (r.method == "real_control") ++controls;
    }
    CHECK(controls == 2); // one control per channel count
}

TEST_CASE("augmentation ratio 1:0 equals the real control bitwise") {
    MTSDataset real = separable_fixture(16, 8, 51);

    ProtocolConfig config;
    config.gan = smoke_gan();
    config.gan.n_channels = 1;
    config.classifier = small_spec();
    config.classifier.epochs = 2;
    config.repeats = 2;
    config.seed = 99;

    auto with_gan = run_augmentation(real, {Method::CosciCd}, {1}, {{1, 0}}, config);
    auto control = run_augmentation(real, {Method::RealControl}, {1}, {{1, 0}}, config);
    REQUIRE(with_gan.size() == 1);
    REQUIRE(control.size() == 1);
    CHECK(with_gan[0].accuracy == control[0].accuracy);

    auto again = run_augmentation(real, {Method::CosciCd}, {1}, {{1, 0}}, config);
    CHECK(again[0].accuracy == with_gan[0].accuracy);

    // one report row per (method, channels, ratio) with per-seed entries
    auto multi =
        run_augmentation(real, {Method::CosciCd}, {1}, {{1, 0}, {1, 1}}, config);
    REQUIRE(multi.size() == 2);
    CHECK(multi[0].augmentation_ratio == std::make_pair(std::size_t{1}, std::size_t{0}));
    CHECK(multi[1].augmentation_ratio == std::make_pair(std::size_t{1}, std::size_t{1}));
    for (const auto& r : multi) CHECK(r.accuracy.size() == config.repeats);
}
