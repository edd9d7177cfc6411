#include "cosci/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "cosci/dataset.hpp"
#include "cosci/downstream.hpp"
#include "cosci/errors.hpp"
#include "cosci/gan.hpp"
#include "cosci/metrics.hpp"
#include "cosci/nn/checkpoint.hpp"
#include "cosci/report.hpp"
#include "cosci/rng.hpp"
#include "cosci/study.hpp"
#include "cosci/toygen.hpp"

namespace cosci::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

namespace {

const std::set<std::string> kTopLevelKeys = {
    "criterion", "CD_type", "LSTMG", "LSTMD", "withCD", "nepochs", "batch_size", "glr",
    "dlr", "cdlr", "real_data_fraction", "gamma", "noise_len", "nsamples", "Ngroups",
    "seed", "hidden_dim", "num_layers", "cd_widths", "mlp_gen_widths", "leaky_slope",
    "dropout_p", "minimax_generator_loss", "noise_single_step",
    "toy", "eeg", "classifier", "study", "bench", "eval"};

const std::set<std::string> kToyKeys = {"variant", "n_per_type", "length", "freq_ch1",
                                        "freq_ch2", "amp_mean_pt1", "amp_mean_pt2", "amp_sd",
                                        "noise_sd", "anomaly_fraction", "seed"};

const std::set<std::string> kEegKeys = {"channels", "total_length", "n_events", "event_len",
                                        "blink_freq", "blink_amp_mean", "blink_amp_sd",
                                        "ar_coeff", "noise_sd", "window", "margin", "seed"};

const std::set<std::string> kClassifierKeys = {"hidden_dim", "num_layers", "epochs",
                                               "batch_size", "lr"};

const std::set<std::string> kStudyKeys = {"nseeds", "variants", "trts_channels"};

const std::set<std::string> kBenchKeys = {"protocols", "methods", "channel_counts", "ratios",
                                          "repeats", "train_fraction", "val_fraction"};

const std::set<std::string> kEvalKeys = {"embeddings", "perplexity", "tsne_iterations"};

void check_keys(const json& object, const std::set<std::string>& allowed,
                const std::string& where) {
    if (!object.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : object.items())
        if (!allowed.count(key))
            throw ConfigError("unknown config key '" + key + "' in " + where);
}

} // namespace

void validate_config_keys(const json& config) {
    check_keys(config, kTopLevelKeys, "the top-level config");
    if (config.contains("toy")) check_keys(config.at("toy"), kToyKeys, "toy");
    if (config.contains("eeg")) check_keys(config.at("eeg"), kEegKeys, "eeg");
    if (config.contains("classifier"))
        check_keys(config.at("classifier"), kClassifierKeys, "classifier");
    if (config.contains("study")) check_keys(config.at("study"), kStudyKeys, "study");
    if (config.contains("bench")) check_keys(config.at("bench"), kBenchKeys, "bench");
    if (config.contains("eval")) check_keys(config.at("eval"), kEvalKeys, "eval");
}

void apply_desk_preset(json& config) {
    auto set_default = [](json& obj, const char* key, json value) {
        if (!obj.contains(key)) obj[key] = std::move(value);
    };
    set_default(config, "nepochs", 30);
    set_default(config, "hidden_dim", 64);
    json& toy = config["toy"];
    set_default(toy, "n_per_type", 128);
    set_default(toy, "length", 200);
    json& eeg = config["eeg"];
    set_default(eeg, "total_length", 40000);
    set_default(eeg, "n_events", 160);
    set_default(eeg, "event_len", 30);
    set_default(eeg, "blink_freq", 0.1);
    set_default(eeg, "window", 100);
    set_default(eeg, "margin", 25);
    json& classifier = config["classifier"];
    set_default(classifier, "hidden_dim", 64);
    set_default(classifier, "epochs", 10);
    json& eval = config["eval"];
    set_default(eval, "tsne_iterations", 500);
}

// ---------------------------------------------------------------------------
// Parsed settings
// ---------------------------------------------------------------------------

namespace {

struct RunSettings {
    CosciConfig gan;
    double real_data_fraction = 1.0;
    std::size_t nsamples = 0; ///< series length for headerless inputs
    std::size_t n_channels = 0;
    std::uint64_t seed = 0;

    ToySpec toy;
    EegFixtureSpec eeg;
    std::size_t eeg_window = 800;
    std::size_t eeg_margin = 200;

    downstream::ClassifierSpec classifier;

    std::size_t study_nseeds = 1;
    std::vector<ToyVariant> study_variants{ToyVariant::SimpleSine, ToyVariant::FreqChange,
                                           ToyVariant::Anomaly};
    std::size_t trts_channels = 2;

    std::vector<std::string> bench_protocols{"all_synthetic"};
    std::vector<downstream::Method> bench_methods{downstream::Method::CosciCd,
                                                  downstream::Method::CosciNoCd,
                                                  downstream::Method::Baseline};
    std::vector<std::size_t> bench_channels{2};
    std::vector<std::pair<std::size_t, std::size_t>> bench_ratios{
        {1, 1}, {1, 2}, {1, 4}, {1, 6}, {1, 8}, {1, 10}};
    std::size_t bench_repeats = 5;
    double train_fraction = 0.8;
    double val_fraction = 0.2;

    bool eval_embeddings = false;
    double eval_perplexity = 30.0;
    std::size_t eval_tsne_iterations = 1000;
};

downstream::Method method_from(const std::string& name) {
    if (name == "cosci_cd") return downstream::Method::CosciCd;
    if (name == "cosci_no_cd") return downstream::Method::CosciNoCd;
    if (name == "baseline") return downstream::Method::Baseline;
    if (name == "real_control") return downstream::Method::RealControl;
    throw ConfigError("unknown method '" + name + "'");
}

RunSettings parse_settings(const json& config) {
    validate_config_keys(config);
    RunSettings s;
    s.gan = config.get<CosciConfig>(); // appendix-table keys
    s.seed = s.gan.seed;
    if (config.contains("real_data_fraction"))
        s.real_data_fraction = config.at("real_data_fraction").get<double>();
    if (!(s.real_data_fraction > 0.0 && s.real_data_fraction <= 1.0))
        throw ConfigError("real_data_fraction must lie in (0,1]");
    if (config.contains("nsamples")) s.nsamples = config.at("nsamples").get<std::size_t>();
    s.n_channels = s.gan.n_channels;

    if (config.contains("toy")) {
        const json& t = config.at("toy");
        if (t.contains("variant")) s.toy.variant = study::variant_from(t.at("variant"));
        if (t.contains("n_per_type")) s.toy.n_per_type = t.at("n_per_type").get<std::size_t>();
        if (t.contains("length")) s.toy.length = t.at("length").get<std::size_t>();
        if (t.contains("freq_ch1")) s.toy.freq_ch1 = t.at("freq_ch1").get<double>();
        if (t.contains("freq_ch2")) s.toy.freq_ch2 = t.at("freq_ch2").get<double>();
        if (t.contains("amp_mean_pt1")) s.toy.amp_mean_pt1 = t.at("amp_mean_pt1").get<double>();
        if (t.contains("amp_mean_pt2")) s.toy.amp_mean_pt2 = t.at("amp_mean_pt2").get<double>();
        if (t.contains("amp_sd")) s.toy.amp_sd = t.at("amp_sd").get<double>();
        if (t.contains("noise_sd")) s.toy.noise_sd = t.at("noise_sd").get<double>();
        if (t.contains("anomaly_fraction"))
            s.toy.anomaly_fraction = t.at("anomaly_fraction").get<double>();
        if (t.contains("seed")) s.toy.seed = t.at("seed").get<std::uint64_t>();
    }
    if (config.contains("eeg")) {
        const json& e = config.at("eeg");
        if (e.contains("channels")) s.eeg.n_channels = e.at("channels").get<std::size_t>();
        if (e.contains("total_length"))
            s.eeg.total_length = e.at("total_length").get<std::size_t>();
        if (e.contains("n_events")) s.eeg.n_events = e.at("n_events").get<std::size_t>();
        if (e.contains("event_len")) s.eeg.event_len = e.at("event_len").get<std::size_t>();
        if (e.contains("blink_freq")) s.eeg.blink_freq = e.at("blink_freq").get<double>();
        if (e.contains("blink_amp_mean"))
            s.eeg.blink_amp_mean = e.at("blink_amp_mean").get<double>();
        if (e.contains("blink_amp_sd")) s.eeg.blink_amp_sd = e.at("blink_amp_sd").get<double>();
        if (e.contains("ar_coeff")) s.eeg.ar_coeff = e.at("ar_coeff").get<double>();
        if (e.contains("noise_sd")) s.eeg.noise_sd = e.at("noise_sd").get<double>();
        if (e.contains("window")) s.eeg_window = e.at("window").get<std::size_t>();
        if (e.contains("margin")) s.eeg_margin = e.at("margin").get<std::size_t>();
        if (e.contains("seed")) s.eeg.seed = e.at("seed").get<std::uint64_t>();
    }
    if (config.contains("classifier")) {
        const json& c = config.at("classifier");
        if (c.contains("hidden_dim"))
            s.classifier.hidden_dim = c.at("hidden_dim").get<std::size_t>();
        if (c.contains("num_layers"))
            s.classifier.num_layers = c.at("num_layers").get<std::size_t>();
        if (c.contains("epochs")) s.classifier.epochs = c.at("epochs").get<std::size_t>();
        if (c.contains("batch_size"))
            s.classifier.batch_size = c.at("batch_size").get<std::size_t>();
        if (c.contains("lr")) s.classifier.lr = c.at("lr").get<double>();
    }
    if (config.contains("study")) {
        const json& st = config.at("study");
        if (st.contains("nseeds")) s.study_nseeds = st.at("nseeds").get<std::size_t>();
        if (st.contains("trts_channels"))
            s.trts_channels = st.at("trts_channels").get<std::size_t>();
        if (st.contains("variants")) {
            s.study_variants.clear();
            for (const auto& v : st.at("variants"))
                s.study_variants.push_back(study::variant_from(v.get<std::string>()));
        }
    }
    if (config.contains("bench")) {
        const json& b = config.at("bench");
        if (b.contains("protocols"))
            s.bench_protocols = b.at("protocols").get<std::vector<std::string>>();
        if (b.contains("methods")) {
            s.bench_methods.clear();
            for (const auto& m : b.at("methods"))
                s.bench_methods.push_back(method_from(m.get<std::string>()));
        }
        if (b.contains("channel_counts"))
            s.bench_channels = b.at("channel_counts").get<std::vector<std::size_t>>();
        if (b.contains("ratios")) {
            s.bench_ratios.clear();
            for (const auto& r : b.at("ratios")) {
                if (!r.is_array() || r.size() != 2)
                    throw ConfigError("bench.ratios entries must be [real, synth] pairs");
                s.bench_ratios.emplace_back(r[0].get<std::size_t>(), r[1].get<std::size_t>());
            }
        }
        if (b.contains("repeats")) s.bench_repeats = b.at("repeats").get<std::size_t>();
        if (b.contains("train_fraction"))
            s.train_fraction = b.at("train_fraction").get<double>();
        if (b.contains("val_fraction")) s.val_fraction = b.at("val_fraction").get<double>();
    }
    if (config.contains("eval")) {
        const json& e = config.at("eval");
        if (e.contains("embeddings")) s.eval_embeddings = e.at("embeddings").get<bool>();
        if (e.contains("perplexity")) s.eval_perplexity = e.at("perplexity").get<double>();
        if (e.contains("tsne_iterations"))
            s.eval_tsne_iterations = e.at("tsne_iterations").get<std::size_t>();
    }
    return s;
}

// ---------------------------------------------------------------------------
// Small emission helpers
// ---------------------------------------------------------------------------

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string losses_csv(const CosciModel& model) {
    std::ostringstream out;
    const std::size_t c = model.n_channels();
    out << "epoch";
    for (std::size_t i = 0; i < c; ++i) out << ",d_loss_" << i;
    for (std::size_t i = 0; i < c; ++i) out << ",g_loss_" << i;
    out << ",cd_loss\n";
    for (std::size_t e = 0; e < model.epoch_log().size(); ++e) {
        const auto& row = model.epoch_log()[e];
        out << e;
        for (double v : row.d_loss) out << ',' << csv_number(v);
        for (double v : row.g_loss) out << ',' << csv_number(v);
        out << ',' << csv_number(row.cd_loss) << '\n';
    }
    return out.str();
}

std::string corr_matrix_csv(const metrics::FeatureCorrMatrix& m) {
    std::ostringstream out;
    out << "feature";
    for (const auto& name : m.features) out << ',' << name;
    out << '\n';
    for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
        out << m.features[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < m.values.cols(); ++c)
            out << ',' << csv_number(m.values(r, c));
        out << '\n';
    }
    return out.str();
}

std::string points_csv(const std::vector<metrics::Points2d>& sets,
                       const std::vector<std::string>& set_names) {
    std::ostringstream out;
    out << "set,instance,x,y\n";
    for (std::size_t s = 0; s < sets.size(); ++s)
        for (std::size_t i = 0; i < sets[s].size(); ++i)
            out << set_names[s] << ',' << i << ',' << csv_number(sets[s][i][0]) << ','
                << csv_number(sets[s][i][1]) << '\n';
    return out.str();
}

json utility_report_json(const downstream::UtilityReport& r) {
    return {{"protocol", r.protocol},
            {"method", r.method},
            {"n_channels", r.n_channels},
            {"ratio_real", r.augmentation_ratio.first},
            {"ratio_synth", r.augmentation_ratio.second},
            {"accuracy", r.accuracy},
            {"seeds", r.seeds},
            {"mean", r.mean},
            {"sd", r.sd}};
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

MTSDataset load_input(const std::string& path, std::size_t channels, std::size_t length) {
    if (channels > 0 && length > 0) return load_csv(path, channels, length);
    return load_csv_auto(path);
}

// per-command pipelines --------------------------------------------------

int cmd_gen_toy(const RunSettings& s, report::ArtifactWriter& artifacts) {
    ToySpec toy = s.toy;
    auto [data, truth] = generate_toy(toy);

    std::ostringstream truth_csv;
    truth_csv << "instance,patient_type,amplitude\n";
    for (std::size_t i = 0; i < truth.size(); ++i)
        truth_csv << i << ',' << truth[i].patient_type << ','
                  << csv_number(truth[i].amplitude) << '\n';

    artifacts.write("data.csv", to_csv_string(data));
    artifacts.write("ground_truth.csv", truth_csv.str());
    std::printf("wrote %s/data.csv (%zu instances, %zu channels, length %zu)\n",
                artifacts.dir().c_str(), data.n_instances(), data.n_channels(), data.length());
    return 0;
}

int cmd_gen_eeg(const RunSettings& s, report::ArtifactWriter& artifacts) {
    auto [recording, events] = generate_eeg_like(s.eeg);
    artifacts.write("recording.csv", to_csv_string(recording));

    std::ostringstream events_csv;
    events_csv << "instance,start,end\n";
    for (const Event& e : events)
        events_csv << e.instance << ',' << e.start << ',' << e.end << '\n';
    artifacts.write("events.csv", events_csv.str());

    MTSDataset frames = extract_event_windows(recording, events, s.eeg_window, s.eeg_margin);
    artifacts.write("frames.csv", to_csv_string(frames));
    std::printf("wrote %zu labeled frames of length %zu\n", frames.n_instances(),
                frames.length());
    return 0;
}

int cmd_train(const RunSettings& s, const CliOptions& options,
              report::ArtifactWriter& artifacts, bool baseline) {
    if (options.data_path.empty()) throw ConfigError("train requires --data <csv>");
    MTSDataset data = load_input(options.data_path, s.n_channels, s.nsamples);
    data.clear_labels();
    if (s.real_data_fraction < 1.0)
        data = split(data, {s.real_data_fraction, derive_seed(s.seed, "train-split")}).first;

    CosciConfig cfg = s.gan;
    cfg.n_channels = data.n_channels();
    cfg.seed = s.seed;
    if (baseline) {
        JointModel model = train_baseline_joint(cfg, data);
        save_baseline(model, artifacts.dir() + "/baseline.bin");
        artifacts.note_file("baseline.bin");
        artifacts.write("losses.csv", losses_csv(model.inner));
    } else {
        CosciModel model = CosciModel::create(cfg, data.length());
        train(model, data);
        save_model(model, artifacts.dir() + "/model.bin");
        artifacts.note_file("model.bin");
        artifacts.write("losses.csv", losses_csv(model));
    }
    return 0;
}

int cmd_sample(const RunSettings& s, const CliOptions& options,
               report::ArtifactWriter& artifacts) {
    if (options.model_path.empty()) throw ConfigError("sample requires --model <checkpoint>");
    if (options.sample_count == 0) throw ConfigError("sample requires --n <count>");

    const auto [header, payload] = nn::read_checkpoint_file(options.model_path);
    MTSDataset synth(1, 1, 2);
    if (header.value("kind", "") == "joint-model") {
        JointModel model = load_baseline(options.model_path);
        synth = sample_baseline(model, options.sample_count, derive_seed(s.seed, "sample"));
    } else {
        CosciModel model = load_model(options.model_path);
        synth = sample(model, options.sample_count, derive_seed(s.seed, "sample"));
    }
    artifacts.write("synthetic.csv", to_csv_string(synth));
    std::printf("sampled %zu instances\n", synth.n_instances());
    return 0;
}

int cmd_eval(const RunSettings& s, const CliOptions& options,
             report::ArtifactWriter& artifacts) {
    if (options.real_path.empty() || options.synth_path.empty())
        throw ConfigError("eval requires --real <csv> and --synth <csv>");
    MTSDataset real = load_input(options.real_path, s.n_channels, s.nsamples);
    MTSDataset synth = load_input(options.synth_path, s.n_channels, s.nsamples);

    json report;
    const auto wds = metrics::per_channel_amplitude_wd(real, synth);
    report["per_channel_wd"] = wds;
    report["awd"] = metrics::awd(real, synth);
    if (real.n_channels() == 2) {
        report["aed_synth"] = metrics::aed(synth);
        report["aed_real"] = metrics::aed(real);
    }

    json pairs = json::array();
    for (std::size_t a = 0; a < real.n_channels(); ++a) {
        for (std::size_t b = a + 1; b < real.n_channels(); ++b) {
            const auto keep = metrics::surviving_features(real, a, b);
            const auto real_m = metrics::feature_corr_matrix(real, a, b, keep);
            const auto synth_m = metrics::feature_corr_matrix(synth, a, b, keep);
            const auto sim = metrics::matrix_similarity(real_m, synth_m);
            pairs.push_back({{"channel_a", a},
                             {"channel_b", b},
                             {"mae", sim.mae},
                             {"frobenius", sim.frobenius},
                             {"spearman_rho", sim.spearman_rho},
                             {"kendall_tau", sim.kendall_tau},
                             {"dropped_features", real_m.dropped}});
            const std::string tag = std::to_string(a) + "_" + std::to_string(b);
            artifacts.write("real_corr_" + tag + ".csv", corr_matrix_csv(real_m));
            artifacts.write("synth_corr_" + tag + ".csv", corr_matrix_csv(synth_m));
        }
    }
    report["channel_pairs"] = pairs;

    if (s.eval_embeddings) {
        const std::vector<const MTSDataset*> sets{&real, &synth};
        const std::vector<std::string> names{"real", "synthetic"};
        artifacts.write("pca.csv", points_csv(metrics::pca_project(sets).sets, names));
        metrics::TsneOptions tsne;
        tsne.perplexity = s.eval_perplexity;
        tsne.iterations = s.eval_tsne_iterations;
        tsne.seed = derive_seed(s.seed, "tsne");
        artifacts.write("tsne.csv", points_csv(metrics::tsne_embed(sets, tsne), names));
    }

    artifacts.write_json("report.json", report);
    std::printf("awd %.6f\n", report["awd"].get<double>());
    return 0;
}

int cmd_bench(const RunSettings& s, const CliOptions& options,
              report::ArtifactWriter& artifacts) {
    MTSDataset frames(1, 1, 2);
    if (!options.data_path.empty()) {
        frames = load_input(options.data_path, 0, 0);
        if (!frames.labeled()) throw DataError("bench needs a labeled dataset");
    } else {
        auto [recording, events] = generate_eeg_like(s.eeg);
        frames = extract_event_windows(recording, events, s.eeg_window, s.eeg_margin);
    }

    downstream::ProtocolConfig protocol;
    protocol.gan = s.gan;
    protocol.classifier = s.classifier;
    protocol.train_fraction = s.train_fraction;
    protocol.val_fraction = s.val_fraction;
    protocol.repeats = s.bench_repeats;
    protocol.seed = s.seed;

    json rows = json::array();
    std::ostringstream csv;
    csv << "protocol,method,n_channels,ratio_real,ratio_synth,seed,accuracy\n";
    bool any_error = false;

    auto emit = [&](const std::vector<downstream::UtilityReport>& reports) {
        for (const auto& r : reports) {
            rows.push_back(utility_report_json(r));
            for (std::size_t k = 0; k < r.accuracy.size(); ++k)
                csv << r.protocol << ',' << r.method << ',' << r.n_channels << ','
                    << r.augmentation_ratio.first << ',' << r.augmentation_ratio.second << ','
                    << r.seeds[k] << ',' << csv_number(r.accuracy[k]) << '\n';
        }
    };

    for (const std::string& proto : s.bench_protocols) {
        try {
            if (proto == "all_synthetic") {
                emit(downstream::run_all_synthetic(frames, s.bench_methods, s.bench_channels,
                                                   protocol));
            } else if (proto == "augmentation") {
                emit(downstream::run_augmentation(frames, s.bench_methods, s.bench_channels,
                                                  s.bench_ratios, protocol));
            } else if (proto == "trts") {
                std::vector<std::size_t> keep(
                    std::min(s.trts_channels, frames.n_channels()));
                std::iota(keep.begin(), keep.end(), std::size_t{0});
                const MTSDataset data = frames.select_channels(keep);
                for (bool with_cd : {true, false}) {
                    auto factory = downstream::cosci_factory(s.gan, with_cd);
                    auto [trtf, tftr] = downstream::run_trts_tstr(data, factory, protocol);
                    trtf.method = with_cd ? "cosci_cd" : "cosci_no_cd";
                    tftr.method = trtf.method;
                    emit({trtf, tftr});
                }
            } else {
                throw ConfigError("unknown bench protocol '" + proto + "'");
            }
        } catch (const Error& e) {
            any_error = true;
            rows.push_back({{"protocol", proto}, {"error", e.what()}});
        }
    }

    artifacts.write("bench.csv", csv.str());
    artifacts.write_json("bench.json", rows);
    return any_error ? 1 : 0;
}

int cmd_repro_toy_tables(const RunSettings& s, const CliOptions& options,
                         report::ArtifactWriter& artifacts, bool table2) {
    study::ToyStudyConfig cfg;
    cfg.toy = s.toy;
    cfg.gan = s.gan;
    cfg.variants = s.study_variants;
    cfg.jobs = options.jobs;
    cfg.seeds.clear();
    for (std::size_t k = 0; k < s.study_nseeds; ++k)
        cfg.seeds.push_back(derive_seed(s.seed, "study-seed", k));

    const auto results = study::run_toy_study(cfg);

    json cells = json::array();
    for (const auto& r : results)
        cells.push_back({{"variant", r.variant},
                         {"method", r.with_cd ? "with_cd" : "without_cd"},
                         {"seed", r.seed},
                         {"awd", r.awd},
                         {"aed", r.aed},
                         {"per_channel_wd", r.per_channel_wd},
                         {"mae", r.similarity.mae},
                         {"frobenius", r.similarity.frobenius},
                         {"spearman_rho", r.similarity.spearman_rho},
                         {"kendall_tau", r.similarity.kendall_tau}});
    artifacts.write_json("study.json", cells);

    std::ostringstream csv;
    if (!table2)
        csv << "variant,method,awd_median,aed_median\n";
    else
        csv << "variant,method,mae_median,frobenius_median,spearman_median,kendall_median\n";

    for (ToyVariant variant : cfg.variants) {
        for (bool with_cd : {false, true}) {
            std::vector<double> awds, aeds, maes, frobs, rhos, taus;
            for (const auto& r : results) {
                if (r.variant != study::variant_name(variant) || r.with_cd != with_cd) continue;
                awds.push_back(r.awd);
                aeds.push_back(r.aed);
                maes.push_back(r.similarity.mae);
                frobs.push_back(r.similarity.frobenius);
                rhos.push_back(r.similarity.spearman_rho);
                taus.push_back(r.similarity.kendall_tau);
            }
            csv << study::variant_name(variant) << ','
                << (with_cd ? "with_cd" : "without_cd");
            if (!table2) {
                csv << ',' << csv_number(median_of(awds)) << ',' << csv_number(median_of(aeds));
            } else {
                csv << ',' << csv_number(median_of(maes)) << ',' << csv_number(median_of(frobs))
                    << ',' << csv_number(median_of(rhos)) << ',' << csv_number(median_of(taus));
            }
            csv << '\n';
        }
    }
    artifacts.write(table2 ? "table2.csv" : "table1.csv", csv.str());
    std::printf("%s\n", csv.str().c_str());
    return 0;
}

int cmd_repro_table3(const RunSettings& s, report::ArtifactWriter& artifacts) {
    study::EegStudyConfig cfg;
    cfg.fixture = s.eeg;
    cfg.window = s.eeg_window;
    cfg.margin = s.eeg_margin;
    cfg.trts_channels = s.trts_channels;
    cfg.gan = s.gan;
    cfg.classifier = s.classifier;
    cfg.train_fraction = s.train_fraction;
    cfg.val_fraction = s.val_fraction;
    cfg.repeats = s.bench_repeats;
    cfg.seed = s.seed;

    const auto result = study::run_table3(cfg);
    json report = {{"trtf_with_cd", utility_report_json(result.trtf_with_cd)},
                   {"tftr_with_cd", utility_report_json(result.tftr_with_cd)},
                   {"trtf_without_cd", utility_report_json(result.trtf_without_cd)},
                   {"tftr_without_cd", utility_report_json(result.tftr_without_cd)}};
    artifacts.write_json("table3.json", report);

    std::ostringstream csv;
    csv << "experiment,method,accuracy_mean,accuracy_sd\n";
    auto row = [&](const char* experiment, const downstream::UtilityReport& r) {
        csv << experiment << ',' << r.method << ',' << csv_number(r.mean) << ','
            << csv_number(r.sd) << '\n';
    };
    row("TRTF", result.trtf_with_cd);
    row("TRTF", result.trtf_without_cd);
    row("TFTR", result.tftr_with_cd);
    row("TFTR", result.tftr_without_cd);
    artifacts.write("table3.csv", csv.str());
    std::printf("%s\n", csv.str().c_str());
    return 0;
}

} // namespace

int run_command(const std::string& command, json config, const CliOptions& options) {
    if (options.desk_scale) apply_desk_preset(config);
    if (options.seed_override) config["seed"] = *options.seed_override;
    RunSettings settings = parse_settings(config);
    // the fixture generators inherit the run seed unless pinned explicitly
    if (!config.contains("toy") || !config.at("toy").contains("seed"))
        settings.toy.seed = derive_seed(settings.seed, "toy-data");
    if (!config.contains("eeg") || !config.at("eeg").contains("seed"))
        settings.eeg.seed = derive_seed(settings.seed, "eeg-data");

    report::ArtifactWriter artifacts(options.out_dir);
    const auto start = std::chrono::steady_clock::now();

    int status = 0;
    if (command == "gen-toy") status = cmd_gen_toy(settings, artifacts);
    else if (command == "gen-eeg") status = cmd_gen_eeg(settings, artifacts);
    else if (command == "train") status = cmd_train(settings, options, artifacts, false);
    else if (command == "train-baseline") status = cmd_train(settings, options, artifacts, true);
    else if (command == "sample") status = cmd_sample(settings, options, artifacts);
    else if (command == "eval") status = cmd_eval(settings, options, artifacts);
    else if (command == "bench") status = cmd_bench(settings, options, artifacts);
    else if (command == "repro-table1")
        status = cmd_repro_toy_tables(settings, options, artifacts, false);
    else if (command == "repro-table2")
        status = cmd_repro_toy_tables(settings, options, artifacts, true);
    else if (command == "repro-table3") status = cmd_repro_table3(settings, artifacts);
    else throw ConfigError("unknown command '" + command + "'");

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    artifacts.finish(command, config, settings.seed, wall);
    return status;
}

} // namespace cosci::cli
