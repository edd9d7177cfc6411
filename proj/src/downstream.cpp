#include "cosci/downstream.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numeric>

#include "cosci/errors.hpp"
#include "cosci/nn/loss.hpp"
#include "cosci/rng.hpp"

namespace cosci::downstream {

using nn::Index;
using nn::MatrixXd;
using nn::RowVectorXd;

// ---------------------------------------------------------------------------
// Classifier
// ---------------------------------------------------------------------------

Classifier::Classifier(const ClassifierSpec& spec, std::size_t n_channels, std::size_t length)
    : spec_(spec), n_channels_(n_channels), length_(length) {
    nn::LstmNetSpec net_spec;
    net_spec.input_dim = static_cast<Index>(n_channels);
    net_spec.hidden_dim = static_cast<Index>(spec.hidden_dim);
    net_spec.num_layers = static_cast<Index>(spec.num_layers);
    net_spec.output_dim = 1;
    net_ = std::make_unique<nn::LstmDiscriminator>(net_spec, static_cast<Index>(length),
                                                   derive_seed(spec.seed, "classifier-init"));
}

MatrixXd Classifier::input_block(const MTSDataset& data,
                                 const std::vector<std::size_t>& instances) const {
    const std::size_t C = n_channels_, L = length_;
    MatrixXd block(L * C, instances.size());
    for (std::size_t k = 0; k < instances.size(); ++k)
        for (std::size_t t = 0; t < L; ++t)
            for (std::size_t c = 0; c < C; ++c)
                block(static_cast<Index>(t * C + c), static_cast<Index>(k)) =
                    data.at(instances[k], c, t);
    return block;
}

std::vector<double> Classifier::predict_proba(const MTSDataset& data) {
    if (data.n_channels() != n_channels_ || data.length() != length_)
        throw ShapeError("classifier input shape mismatch");
    std::vector<std::size_t> all(data.n_instances());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const RowVectorXd p = net_->forward(input_block(data, all));
    return {p.data(), p.data() + p.size()};
}

namespace {

double labeled_accuracy(const std::vector<double>& proba, const MTSDataset& data) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.n_instances(); ++i) {
        const int predicted = proba[i] > 0.5 ? 1 : 0;
        if (predicted == data.label(i)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(data.n_instances());
}

} // namespace

Classifier train_classifier(const ClassifierSpec& spec, const MTSDataset& train,
                            const MTSDataset& val) {
    train.validate();
    val.validate();
    if (!train.labeled() || !val.labeled())
        throw DataError("classifier training needs labeled datasets");
    if (train.n_channels() != val.n_channels() || train.length() != val.length())
        throw ShapeError("train/val shape mismatch");
    {
        std::size_t ones = 0;
        for (std::size_t i = 0; i < train.n_instances(); ++i) ones += train.label(i);
        if (ones == 0 || ones == train.n_instances())
            throw DataError("classifier training set has a single class");
    }

    Classifier clf(spec, train.n_channels(), train.length());
    if (spec.epochs == 0) return clf;

    Rng shuffle_rng(derive_seed(spec.seed, "classifier-shuffle"));
    const std::size_t n = train.n_instances();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    double best_acc = labeled_accuracy(clf.predict_proba(val), val);
    auto best_state = clf.params().state();

    for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        for (std::size_t begin = 0; begin < n; begin += spec.batch_size) {
            const std::size_t m = std::min(spec.batch_size, n - begin);
            const std::vector<std::size_t> batch(order.begin() + begin,
                                                 order.begin() + begin + m);
            RowVectorXd targets(m);
            for (std::size_t k = 0; k < m; ++k)
                targets[static_cast<Index>(k)] = static_cast<double>(train.label(batch[k]));

            clf.params().zero_grad();
            const RowVectorXd p = clf.net().forward(clf.input_block(train, batch));
            const double loss = nn::bce_loss(p, targets);
            if (!std::isfinite(loss))
                throw NumericError("classifier loss is not finite at epoch " +
                                   std::to_string(epoch));
            clf.net().backward(nn::bce_loss_grad(p, targets), true, false);
            nn::adam_step(clf.params(), spec.lr);
        }
        const double acc = labeled_accuracy(clf.predict_proba(val), val);
        if (acc > best_acc) {
            best_acc = acc;
            best_state = clf.params().state();
        }
    }
    clf.params().set_state(best_state);
    return clf;
}

double evaluate(Classifier& classifier, const MTSDataset& test) {
    test.validate();
    if (!test.labeled()) throw DataError("evaluate needs a labeled test set");
    return labeled_accuracy(classifier.predict_proba(test), test);
}

// ---------------------------------------------------------------------------
// Protocol plumbing
// ---------------------------------------------------------------------------

std::string method_name(Method m) {
    switch (m) {
    case Method::CosciCd: return "cosci_cd";
    case Method::CosciNoCd: return "cosci_no_cd";
    case Method::Baseline: return "baseline";
    case Method::RealControl: return "real_control";
    }
    return "unknown";
}

void UtilityReport::finalize() {
    if (accuracy.empty()) {
        mean = sd = 0.0;
        return;
    }
    mean = std::accumulate(accuracy.begin(), accuracy.end(), 0.0) /
           static_cast<double>(accuracy.size());
    double var = 0.0;
    for (double a : accuracy) var += (a - mean) * (a - mean);
    sd = std::sqrt(var / static_cast<double>(accuracy.size()));
}

ModelFactory cosci_factory(const CosciConfig& config, bool with_cd) {
    return [config, with_cd](const MTSDataset& class_train, std::uint64_t seed) {
        CosciConfig cfg = config;
        cfg.n_channels = class_train.n_channels();
        cfg.with_cd = with_cd;
        cfg.seed = seed;
        auto model = std::make_shared<CosciModel>(CosciModel::create(cfg, class_train.length()));
        MTSDataset unlabeled = class_train;
        unlabeled.clear_labels();
        train(*model, unlabeled);
        return SyntheticSampler([model](std::size_t n, std::uint64_t sample_seed) {
            return sample(*model, n, sample_seed);
        });
    };
}

ModelFactory baseline_factory(const CosciConfig& config) {
    return [config](const MTSDataset& class_train, std::uint64_t seed) {
        CosciConfig cfg = config;
        cfg.n_channels = class_train.n_channels();
        cfg.seed = seed;
        MTSDataset unlabeled = class_train;
        unlabeled.clear_labels();
        auto model = std::make_shared<JointModel>(train_baseline_joint(cfg, unlabeled));
        return SyntheticSampler([model](std::size_t n, std::uint64_t sample_seed) {
            return sample_baseline(*model, n, sample_seed);
        });
    };
}

namespace {

struct SplitSets {
    MTSDataset train;
    MTSDataset test;
};

SplitSets checked_split(const MTSDataset& data, double fraction, std::uint64_t seed) {
    auto [train_idx, test_idx] = split_indices(data, {fraction, seed});
    // the held-out side must never leak into any training path
    std::vector<std::size_t> all = train_idx;
    all.insert(all.end(), test_idx.begin(), test_idx.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i)
        if (all[i] != i) throw StateError("split indices are not a partition");
    return {data.select_instances(train_idx), data.select_instances(test_idx)};
}

MTSDataset class_subset(const MTSDataset& data, int label) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < data.n_instances(); ++i)
        if (data.label(i) == label) idx.push_back(i);
    if (idx.empty()) throw DataError("class " + std::to_string(label) + " absent");
    return data.select_instances(idx);
}

/// Labeled synthetic set with `per_class[c]` instances per class. The method
/// tag keeps generative seeds distinct across arms while the surrounding
/// cell (split, classifier) seeds stay shared for paired comparisons.
MTSDataset sample_labeled(const ModelFactory& factory, const MTSDataset& train,
                          const std::array<std::size_t, 2>& per_class, std::uint64_t seed,
                          const std::string& method_tag) {
    const std::uint64_t gan_seed = derive_seed(seed, "gan-" + method_tag);
    MTSDataset parts[2];
    for (int label = 0; label < 2; ++label) {
        const MTSDataset class_train = class_subset(train, label);
        auto sampler = factory(class_train,
                               derive_seed(gan_seed, "class", static_cast<std::uint64_t>(label)));
        parts[label] =
            sampler(per_class[static_cast<std::size_t>(label)],
                    derive_seed(gan_seed, "sample-class", static_cast<std::uint64_t>(label)));
        parts[label].set_labels(
            std::vector<int>(parts[label].n_instances(), label));
    }
    return MTSDataset::concatenate(parts[0], parts[1]);
}

std::array<std::size_t, 2> class_counts(const MTSDataset& data) {
    std::array<std::size_t, 2> counts{0, 0};
    for (std::size_t i = 0; i < data.n_instances(); ++i)
        ++counts[static_cast<std::size_t>(data.label(i))];
    return counts;
}

/// Trains a classifier on `train_pool` with an internal stratified
/// train/validation split and returns its accuracy on `test`.
double classifier_accuracy(const ProtocolConfig& config, const MTSDataset& train_pool,
                           const MTSDataset& test, std::uint64_t seed) {
    auto [fit, val] = split(train_pool, {1.0 - config.val_fraction, derive_seed(seed, "val")});
    ClassifierSpec spec = config.classifier;
    spec.seed = derive_seed(seed, "classifier");
    Classifier clf = train_classifier(spec, fit, val);
    return evaluate(clf, test);
}

ModelFactory factory_for(Method method, const CosciConfig& gan) {
    switch (method) {
    case Method::CosciCd: return cosci_factory(gan, true);
    case Method::CosciNoCd: return cosci_factory(gan, false);
    case Method::Baseline: return baseline_factory(gan);
    case Method::RealControl: break;
    }
    throw ConfigError("real_control has no generative model");
}

} // namespace

// ---------------------------------------------------------------------------
// TRTF / TFTR
// ---------------------------------------------------------------------------

std::pair<UtilityReport, UtilityReport> run_trts_tstr(const MTSDataset& real,
                                                      const ModelFactory& factory,
                                                      const ProtocolConfig& config) {
    real.validate();
    if (!real.labeled()) throw DataError("TRTS/TSTR needs labeled data");

    UtilityReport trtf, tftr;
    trtf.protocol = "TRTF";
    tftr.protocol = "TFTR";
    trtf.n_channels = tftr.n_channels = real.n_channels();

    for (std::size_t rep = 0; rep < config.repeats; ++rep) {
        const std::uint64_t cell_seed = derive_seed(config.seed, "trts-rep", rep);
        auto sets = checked_split(real, config.train_fraction, derive_seed(cell_seed, "split"));

        const auto per_class = class_counts(sets.train);
        const MTSDataset synth =
            sample_labeled(factory, sets.train, per_class, cell_seed, "trts");

        // train-on-real, test-on-fake
        {
            auto [fit, val] =
                split(sets.train, {1.0 - config.val_fraction, derive_seed(cell_seed, "r-val")});
            ClassifierSpec spec = config.classifier;
            spec.seed = derive_seed(cell_seed, "clf-real");
            Classifier clf = train_classifier(spec, fit, val);
            trtf.accuracy.push_back(evaluate(clf, synth));
            trtf.seeds.push_back(cell_seed);
        }
        // train-on-fake, test-on-real (held-out split)
        {
            auto [fit, val] =
                split(synth, {1.0 - config.val_fraction, derive_seed(cell_seed, "f-val")});
            ClassifierSpec spec = config.classifier;
            spec.seed = derive_seed(cell_seed, "clf-fake");
            Classifier clf = train_classifier(spec, fit, val);
            tftr.accuracy.push_back(evaluate(clf, sets.test));
            tftr.seeds.push_back(cell_seed);
        }
    }
    trtf.finalize();
    tftr.finalize();
    return {std::move(trtf), std::move(tftr)};
}

// ---------------------------------------------------------------------------
// All-synthetic and augmentation
// ---------------------------------------------------------------------------

std::vector<UtilityReport> run_all_synthetic(const MTSDataset& real,
                                             const std::vector<Method>& methods,
                                             const std::vector<std::size_t>& channel_counts,
                                             const ProtocolConfig& config) {
    real.validate();
    if (!real.labeled()) throw DataError("all-synthetic experiment needs labeled data");

    std::vector<Method> arms = methods;
    if (std::find(arms.begin(), arms.end(), Method::RealControl) == arms.end())
        arms.push_back(Method::RealControl); // control arm is part of the protocol

    std::vector<UtilityReport> reports;
    for (std::size_t channels : channel_counts) {
        std::vector<std::size_t> keep(channels);
        std::iota(keep.begin(), keep.end(), std::size_t{0});
        const MTSDataset data = real.select_channels(keep);

        for (Method method : arms) {
            UtilityReport report;
            report.protocol = "AllSynthetic";
            report.method = method_name(method);
            report.n_channels = channels;
            for (std::size_t rep = 0; rep < config.repeats; ++rep) {
                // splits and classifier seeds are shared across methods so
                // arms differ only in the synthetic data they produce
                const std::uint64_t cell_seed =
                    derive_seed(config.seed, "allsynth-c" + std::to_string(channels), rep);
                auto sets =
                    checked_split(data, config.train_fraction, derive_seed(cell_seed, "split"));
                double acc = 0.0;
                if (method == Method::RealControl) {
                    acc = classifier_accuracy(config, sets.train, sets.test, cell_seed);
                } else {
                    const MTSDataset synth =
                        sample_labeled(factory_for(method, config.gan), sets.train,
                                       class_counts(sets.train), cell_seed, report.method);
                    acc = classifier_accuracy(config, synth, sets.test, cell_seed);
                }
                report.accuracy.push_back(acc);
                report.seeds.push_back(cell_seed);
            }
            report.finalize();
            reports.push_back(std::move(report));
        }
    }
    return reports;
}

std::vector<UtilityReport> run_augmentation(
    const MTSDataset& real, const std::vector<Method>& methods,
    const std::vector<std::size_t>& channel_counts,
    const std::vector<std::pair<std::size_t, std::size_t>>& ratios,
    const ProtocolConfig& config) {
    real.validate();
    if (!real.labeled()) throw DataError("augmentation experiment needs labeled data");

    std::vector<UtilityReport> reports;
    for (std::size_t channels : channel_counts) {
        std::vector<std::size_t> keep(channels);
        std::iota(keep.begin(), keep.end(), std::size_t{0});
        const MTSDataset data = real.select_channels(keep);

        for (Method method : methods) {
            for (const auto& ratio : ratios) {
                if (ratio.first != 1) throw ConfigError("augmentation ratios are 1:k");
                UtilityReport report;
                report.protocol = "Augmentation";
                report.method = method_name(method);
                report.n_channels = channels;
                report.augmentation_ratio = ratio;
                for (std::size_t rep = 0; rep < config.repeats; ++rep) {
                    const std::uint64_t cell_seed = derive_seed(
                        config.seed,
                        "aug-c" + std::to_string(channels) + "-k" + std::to_string(ratio.second),
                        rep);
                    auto sets = checked_split(data, config.train_fraction,
                                              derive_seed(cell_seed, "split"));
                    MTSDataset pool = sets.train;
                    if (method != Method::RealControl && ratio.second > 0) {
                        auto counts = class_counts(sets.train);
                        counts[0] *= ratio.second;
                        counts[1] *= ratio.second;
                        const MTSDataset synth =
                            sample_labeled(factory_for(method, config.gan), sets.train, counts,
                                           cell_seed, report.method);
                        pool = MTSDataset::concatenate(sets.train, synth);
                    }
                    report.accuracy.push_back(
                        classifier_accuracy(config, pool, sets.test, cell_seed));
                    report.seeds.push_back(cell_seed);
                }
                report.finalize();
                reports.push_back(std::move(report));
            }
        }
    }
    return reports;
}

} // namespace cosci::downstream
