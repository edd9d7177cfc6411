#include "cosci/gan.hpp"

#include <cmath>

#include "cosci/errors.hpp"
#include "cosci/nn/checkpoint.hpp"
#include "cosci/nn/loss.hpp"
#include "cosci/rng.hpp"

namespace cosci {

using nn::Index;
using nn::MatrixXd;
using nn::RowVectorXd;

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

void CosciConfig::validate() const {
    if (n_channels < 1) throw ConfigError("n_channels must be >= 1");
    if (noise_len < 1) throw ConfigError("noise_len must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
    if (!(glr >= 0.0 && dlr >= 0.0 && cdlr >= 0.0))
        throw ConfigError("learning rates must be >= 0");
    if (hidden_dim < 1 || num_layers < 1) throw ConfigError("network dims must be >= 1");
    if (!(dropout_p >= 0.0 && dropout_p < 1.0)) throw ConfigError("dropout_p must lie in [0,1)");
}

namespace {

std::string to_string(CdType t) { return t == CdType::Mlp ? "MLP" : "LSTM"; }
std::string to_string(Criterion c) { return c == Criterion::Bce ? "BCE" : "MSE"; }

CdType cd_type_from(const std::string& s) {
    if (s == "MLP") return CdType::Mlp;
    if (s == "LSTM") return CdType::Lstm;
    throw ConfigError("CD_type must be MLP or LSTM, got '" + s + "'");
}

Criterion criterion_from(const std::string& s) {
    if (s == "BCE") return Criterion::Bce;
    if (s == "MSE") return Criterion::Mse;
    throw ConfigError("criterion must be BCE or MSE, got '" + s + "'");
}

} // namespace

// Field names follow the conventional hyper-parameter table of the method.
void to_json(nlohmann::json& j, const CosciConfig& c) {
    j = nlohmann::json{{"criterion", to_string(c.criterion)},
                       {"CD_type", to_string(c.cd_type)},
                       {"LSTMG", c.generator_net == ChannelNetType::Lstm},
                       {"LSTMD", c.discriminator_net == ChannelNetType::Lstm},
                       {"withCD", c.with_cd},
                       {"nepochs", c.n_epochs},
                       {"batch_size", c.batch_size},
                       {"glr", c.glr},
                       {"dlr", c.dlr},
                       {"cdlr", c.cdlr},
                       {"gamma", c.gamma},
                       {"noise_len", c.noise_len},
                       {"Ngroups", c.n_channels},
                       {"seed", c.seed},
                       {"hidden_dim", c.hidden_dim},
                       {"num_layers", c.num_layers},
                       {"cd_widths", c.cd_widths},
                       {"mlp_gen_widths", c.mlp_gen_widths},
                       {"leaky_slope", c.leaky_slope},
                       {"dropout_p", c.dropout_p},
                       {"minimax_generator_loss", c.minimax_generator_loss},
                       {"noise_single_step", c.noise_single_step}};
}

void from_json(const nlohmann::json& j, CosciConfig& c) {
    c = CosciConfig{};
    if (j.contains("criterion")) c.criterion = criterion_from(j.at("criterion"));
    if (j.contains("CD_type")) c.cd_type = cd_type_from(j.at("CD_type"));
    if (j.contains("LSTMG"))
        c.generator_net = j.at("LSTMG").get<bool>() ? ChannelNetType::Lstm : ChannelNetType::Mlp;
    if (j.contains("LSTMD"))
        c.discriminator_net =
            j.at("LSTMD").get<bool>() ? ChannelNetType::Lstm : ChannelNetType::Mlp;
    if (j.contains("withCD")) c.with_cd = j.at("withCD").get<bool>();
    if (j.contains("nepochs")) c.n_epochs = j.at("nepochs").get<std::size_t>();
    if (j.contains("batch_size")) c.batch_size = j.at("batch_size").get<std::size_t>();
    if (j.contains("glr")) c.glr = j.at("glr").get<double>();
    if (j.contains("dlr")) c.dlr = j.at("dlr").get<double>();
    if (j.contains("cdlr")) c.cdlr = j.at("cdlr").get<double>();
    if (j.contains("gamma")) c.gamma = j.at("gamma").get<double>();
    if (j.contains("noise_len")) c.noise_len = j.at("noise_len").get<std::size_t>();
    if (j.contains("Ngroups")) c.n_channels = j.at("Ngroups").get<std::size_t>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("hidden_dim")) c.hidden_dim = j.at("hidden_dim").get<std::size_t>();
    if (j.contains("num_layers")) c.num_layers = j.at("num_layers").get<std::size_t>();
    if (j.contains("cd_widths")) c.cd_widths = j.at("cd_widths").get<std::vector<Index>>();
    if (j.contains("mlp_gen_widths"))
        c.mlp_gen_widths = j.at("mlp_gen_widths").get<std::vector<Index>>();
    if (j.contains("leaky_slope")) c.leaky_slope = j.at("leaky_slope").get<double>();
    if (j.contains("dropout_p")) c.dropout_p = j.at("dropout_p").get<double>();
    if (j.contains("minimax_generator_loss"))
        c.minimax_generator_loss = j.at("minimax_generator_loss").get<bool>();
    if (j.contains("noise_single_step"))
        c.noise_single_step = j.at("noise_single_step").get<bool>();
    c.validate();
}

// ---------------------------------------------------------------------------
// Model construction
// ---------------------------------------------------------------------------

namespace {

std::unique_ptr<nn::GeneratorNet> make_generator(const CosciConfig& cfg, std::size_t out_len,
                                                 std::uint64_t init_seed) {
    const auto noise_len = static_cast<Index>(cfg.noise_len);
    if (cfg.generator_net == ChannelNetType::Lstm) {
        nn::LstmNetSpec spec;
        spec.input_dim = cfg.noise_single_step ? noise_len : 1;
        spec.hidden_dim = static_cast<Index>(cfg.hidden_dim);
        spec.num_layers = static_cast<Index>(cfg.num_layers);
        spec.output_dim = static_cast<Index>(out_len);
        return std::make_unique<nn::LstmGenerator>(spec, noise_len, init_seed);
    }
    nn::MlpGenSpec spec;
    spec.input_dim = noise_len;
    spec.widths = cfg.mlp_gen_widths;
    spec.output_dim = static_cast<Index>(out_len);
    spec.leaky_slope = cfg.leaky_slope;
    return std::make_unique<nn::MlpGenerator>(spec, init_seed);
}

std::unique_ptr<nn::DiscriminatorNet> make_channel_disc(const CosciConfig& cfg,
                                                        std::size_t series_len,
                                                        std::uint64_t init_seed) {
    if (cfg.discriminator_net == ChannelNetType::Lstm) {
        nn::LstmNetSpec spec;
        spec.input_dim = 1;
        spec.hidden_dim = static_cast<Index>(cfg.hidden_dim);
        spec.num_layers = static_cast<Index>(cfg.num_layers);
        spec.output_dim = 1;
        return std::make_unique<nn::LstmDiscriminator>(spec, static_cast<Index>(series_len),
                                                       init_seed);
    }
    // MLP channel discriminators reuse the LLD structure without dropout.
    nn::MlpDiscSpec spec;
    spec.input_dim = static_cast<Index>(series_len);
    spec.lld_widths = cfg.cd_widths;
    spec.leaky_slope = cfg.leaky_slope;
    spec.dropout_p = 0.0;
    return std::make_unique<nn::MlpDiscriminator>(spec, init_seed);
}

std::unique_ptr<nn::DiscriminatorNet> make_central(const CosciConfig& cfg, std::size_t full_len,
                                                   std::uint64_t init_seed) {
    if (cfg.cd_type == CdType::Mlp) {
        nn::MlpDiscSpec spec;
        spec.input_dim = static_cast<Index>(full_len);
        spec.lld_widths = cfg.cd_widths;
        spec.leaky_slope = cfg.leaky_slope;
        spec.dropout_p = cfg.dropout_p;
        return std::make_unique<nn::MlpDiscriminator>(spec, init_seed);
    }
    nn::LstmNetSpec spec;
    spec.input_dim = 1;
    spec.hidden_dim = static_cast<Index>(cfg.hidden_dim);
    spec.num_layers = static_cast<Index>(cfg.num_layers);
    spec.output_dim = 1;
    return std::make_unique<nn::LstmDiscriminator>(spec, static_cast<Index>(full_len), init_seed);
}

} // namespace

CosciModel CosciModel::create(const CosciConfig& config, std::size_t length) {
    config.validate();
    if (length < 2) throw ConfigError("series length must be >= 2");

    CosciModel model;
    model.config_ = config;
    model.length_ = length;
    for (std::size_t i = 0; i < config.n_channels; ++i) {
        model.generators_.push_back(
            make_generator(config, length, derive_seed(config.seed, "gen", i)));
        model.discriminators_.push_back(
            make_channel_disc(config, length, derive_seed(config.seed, "disc", i)));
    }
    if (config.with_cd)
        model.central_ =
            make_central(config, config.n_channels * length, derive_seed(config.seed, "cd"));
    return model;
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

namespace {

double crit_loss(Criterion c, const RowVectorXd& pred, double target) {
    const RowVectorXd t = nn::constant_targets(pred.size(), target);
    return c == Criterion::Bce ? nn::bce_loss(pred, t) : nn::mse_loss(pred, t);
}

RowVectorXd crit_grad(Criterion c, const RowVectorXd& pred, double target) {
    const RowVectorXd t = nn::constant_targets(pred.size(), target);
    return c == Criterion::Bce ? nn::bce_loss_grad(pred, t) : nn::mse_loss_grad(pred, t);
}

// Generator loss against a discriminator output: non-saturating -log D(G(z))
// by default, or the literal minimax log(1 - D(G(z))).
double gen_loss(Criterion c, bool minimax, const RowVectorXd& pred) {
    return minimax ? -crit_loss(c, pred, 0.0) : crit_loss(c, pred, 1.0);
}

RowVectorXd gen_loss_grad(Criterion c, bool minimax, const RowVectorXd& pred) {
    return minimax ? RowVectorXd(-crit_grad(c, pred, 0.0)) : crit_grad(c, pred, 1.0);
}

void check_finite(double loss, const char* what, std::size_t epoch, std::size_t batch) {
    if (!std::isfinite(loss))
        throw NumericError(std::string(what) + " loss is not finite at epoch " +
                           std::to_string(epoch) + ", batch " + std::to_string(batch));
}

// Real channel block: series of `channel` for the given instances, column per
// instance.
MatrixXd channel_block(const MTSDataset& data, const std::vector<std::size_t>& instances,
                       std::size_t channel) {
    MatrixXd block(data.length(), instances.size());
    for (std::size_t k = 0; k < instances.size(); ++k) {
        auto s = data.series(instances[k], channel);
        for (std::size_t t = 0; t < s.size(); ++t) block(static_cast<Index>(t), k) = s[t];
    }
    return block;
}

MatrixXd draw_noise(Rng& rng, std::size_t noise_len, std::size_t batch) {
    MatrixXd z(noise_len, batch);
    for (Index col = 0; col < z.cols(); ++col)     // one vector per batch element
        for (Index row = 0; row < z.rows(); ++row) z(row, col) = rng.normal();
    return z;
}

} // namespace

void train(CosciModel& model, const MTSDataset& data) {
    data.validate();
    const CosciConfig& cfg = model.config();
    if (data.n_channels() != cfg.n_channels)
        throw ConfigError("dataset has " + std::to_string(data.n_channels()) +
                          " channels, model expects " + std::to_string(cfg.n_channels));
    if (data.length() != model.length())
        throw ConfigError("dataset length does not match the model");

    const std::size_t C = cfg.n_channels;
    const std::size_t N = data.n_instances();
    const std::size_t L = model.length();

    Rng shuffle_rng(derive_seed(cfg.seed, "shuffle"));
    Rng noise_rng(derive_seed(cfg.seed, "noise"));
    Rng dropout_rng(derive_seed(cfg.seed, "cd-dropout"));

    std::vector<std::size_t> order(N);
    for (std::size_t i = 0; i < N; ++i) order[i] = i;

    std::vector<MatrixXd> fakes(C);
    MatrixXd full_real, full_fake;

    for (std::size_t epoch = 0; epoch < cfg.n_epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        EpochLosses sums;
        sums.d_loss.assign(C, 0.0);
        sums.g_loss.assign(C, 0.0);
        std::size_t n_batches = 0;

        for (std::size_t begin = 0; begin < N; begin += cfg.batch_size) {
            const std::size_t m = std::min(cfg.batch_size, N - begin);
            const std::vector<std::size_t> batch(order.begin() + begin,
                                                 order.begin() + begin + m);
            const MatrixXd noise = draw_noise(noise_rng, cfg.noise_len, m);

            // (1) all fakes from the shared noise; caches stay valid through
            // the generator step because generator parameters only change at
            // the end of the batch.
            for (std::size_t i = 0; i < C; ++i) fakes[i] = model.generator(i).forward(noise);

            // (2) channel discriminator steps
            for (std::size_t i = 0; i < C; ++i) {
                auto& disc = model.discriminator(i);
                const MatrixXd real = channel_block(data, batch, i);
                disc.params().zero_grad();
                RowVectorXd p_real = disc.forward(real);
                const double l_real = crit_loss(cfg.criterion, p_real, 1.0);
                disc.backward(crit_grad(cfg.criterion, p_real, 1.0), true, false);
                RowVectorXd p_fake = disc.forward(fakes[i]);
                const double l_fake = crit_loss(cfg.criterion, p_fake, 0.0);
                disc.backward(crit_grad(cfg.criterion, p_fake, 0.0), true, false);
                check_finite(l_real + l_fake, "discriminator", epoch, begin / cfg.batch_size);
                nn::adam_step(disc.params(), cfg.dlr);
                sums.d_loss[i] += l_real + l_fake;
            }

            // (3) central discriminator step on full instances, channel-major
            // concatenation matching the CSV layout
            if (cfg.with_cd) {
                full_real.resize(C * L, m);
                full_fake.resize(C * L, m);
                for (std::size_t i = 0; i < C; ++i) {
                    full_real.middleRows(static_cast<Index>(i * L), static_cast<Index>(L)) =
                        channel_block(data, batch, i);
                    full_fake.middleRows(static_cast<Index>(i * L), static_cast<Index>(L)) =
                        fakes[i];
                }
                auto& cd = model.central();
                cd.params().zero_grad();
                RowVectorXd p_real = cd.forward(full_real, true, &dropout_rng);
                const double l_real = crit_loss(cfg.criterion, p_real, 1.0);
                cd.backward(crit_grad(cfg.criterion, p_real, 1.0), true, false);
                RowVectorXd p_fake = cd.forward(full_fake, true, &dropout_rng);
                const double l_fake = crit_loss(cfg.criterion, p_fake, 0.0);
                cd.backward(crit_grad(cfg.criterion, p_fake, 0.0), true, false);
                check_finite(l_real + l_fake, "central discriminator", epoch,
                             begin / cfg.batch_size);
                nn::adam_step(cd.params(), cfg.cdlr);
                sums.cd_loss += l_real + l_fake;
            }

            // (4) generator steps; the CD and channel discriminators are
            // fixed here (their gradients are discarded) and generator i only
            // receives the CD gradient through channel i's slice.
            MatrixXd d_full;
            double cd_gen_loss = 0.0;
            if (cfg.with_cd) {
                auto& cd = model.central();
                RowVectorXd p = cd.forward(full_fake, true, &dropout_rng);
                cd_gen_loss = gen_loss(cfg.criterion, cfg.minimax_generator_loss, p);
                d_full = cd.backward(
                    gen_loss_grad(cfg.criterion, cfg.minimax_generator_loss, p), false, true);
            }
            for (std::size_t i = 0; i < C; ++i) {
                auto& disc = model.discriminator(i);
                RowVectorXd p = disc.forward(fakes[i]);
                const double l_channel =
                    gen_loss(cfg.criterion, cfg.minimax_generator_loss, p);
                MatrixXd d_series = disc.backward(
                    gen_loss_grad(cfg.criterion, cfg.minimax_generator_loss, p), false, true);
                if (cfg.with_cd)
                    d_series += cfg.gamma *
                                d_full.middleRows(static_cast<Index>(i * L),
                                                  static_cast<Index>(L));
                auto& gen = model.generator(i);
                gen.params().zero_grad();
                gen.backward(d_series);
                const double l_total =
                    l_channel + (cfg.with_cd ? cfg.gamma * cd_gen_loss : 0.0);
                check_finite(l_total, "generator", epoch, begin / cfg.batch_size);
                nn::adam_step(gen.params(), cfg.glr);
                sums.g_loss[i] += l_total;
            }
            ++n_batches;
        }

        if (n_batches > 0) {
            for (std::size_t i = 0; i < C; ++i) {
                sums.d_loss[i] /= static_cast<double>(n_batches);
                sums.g_loss[i] /= static_cast<double>(n_batches);
            }
            sums.cd_loss /= static_cast<double>(n_batches);
        }
        model.epoch_log().push_back(std::move(sums));
    }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

MTSDataset sample(CosciModel& model, std::size_t n, const NoiseSource& noise) {
    if (n == 0) throw ShapeError("cannot sample an empty dataset (n >= 1 required)");
    const std::size_t C = model.n_channels();
    const std::size_t L = model.length();

    MatrixXd z(model.config().noise_len, n);
    for (std::size_t k = 0; k < n; ++k) {
        Eigen::VectorXd v = noise(k); // exactly one draw per instance
        if (v.size() != z.rows()) throw ShapeError("noise source returned a wrong-length vector");
        z.col(static_cast<Index>(k)) = v;
    }

    MTSDataset out(n, C, L);
    for (std::size_t i = 0; i < C; ++i) {
        const MatrixXd& y = model.generator(i).forward(z);
        for (std::size_t k = 0; k < n; ++k) {
            auto s = out.series(k, i);
            for (std::size_t t = 0; t < L; ++t)
                s[t] = y(static_cast<Index>(t), static_cast<Index>(k));
        }
    }
    return out;
}

MTSDataset sample(CosciModel& model, std::size_t n, std::uint64_t seed) {
    auto rng = std::make_shared<Rng>(derive_seed(seed, "sample-noise"));
    const std::size_t noise_len = model.config().noise_len;
    return sample(model, n, [rng, noise_len](std::size_t) {
        Eigen::VectorXd v(noise_len);
        for (Index i = 0; i < v.size(); ++i) v[i] = rng->normal();
        return v;
    });
}

// ---------------------------------------------------------------------------
// Joint baseline
// ---------------------------------------------------------------------------

namespace {

MTSDataset flatten_channels(const MTSDataset& data) {
    MTSDataset flat(data.n_instances(), 1, data.n_channels() * data.length());
    for (std::size_t i = 0; i < data.n_instances(); ++i) {
        auto row = data.instance_row(i);
        std::copy(row.begin(), row.end(), flat.series(i, 0).begin());
    }
    return flat;
}

} // namespace

JointModel train_baseline_joint(const CosciConfig& config, const MTSDataset& data) {
    data.validate();
    if (data.n_channels() != config.n_channels)
        throw ConfigError("baseline config channel count does not match the dataset");
    CosciConfig joint = config;
    joint.n_channels = 1;
    joint.with_cd = false;
    JointModel model{CosciModel::create(joint, data.n_channels() * data.length()),
                     data.n_channels()};
    const MTSDataset flat = flatten_channels(data);
    train(model.inner, flat);
    return model;
}

MTSDataset sample_baseline(JointModel& model, std::size_t n, std::uint64_t seed) {
    MTSDataset flat = sample(model.inner, n, seed);
    const std::size_t C = model.out_channels;
    const std::size_t L = flat.length() / C;
    MTSDataset out(n, C, L);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = flat.series(i, 0);
        for (std::size_t c = 0; c < C; ++c)
            std::copy(row.begin() + static_cast<std::ptrdiff_t>(c * L),
                      row.begin() + static_cast<std::ptrdiff_t>((c + 1) * L),
                      out.series(i, c).begin());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Checkpointing
// ---------------------------------------------------------------------------

namespace {

nlohmann::json epoch_log_to_json(const std::vector<EpochLosses>& log) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : log)
        out.push_back({{"d_loss", e.d_loss}, {"g_loss", e.g_loss}, {"cd_loss", e.cd_loss}});
    return out;
}

std::vector<EpochLosses> epoch_log_from_json(const nlohmann::json& j) {
    std::vector<EpochLosses> out;
    for (const auto& e : j) {
        EpochLosses losses;
        losses.d_loss = e.at("d_loss").get<std::vector<double>>();
        losses.g_loss = e.at("g_loss").get<std::vector<double>>();
        losses.cd_loss = e.at("cd_loss").get<double>();
        out.push_back(std::move(losses));
    }
    return out;
}

nlohmann::json model_header(const CosciModel& model, const char* kind) {
    // const_cast: net accessors are non-const but headers only read
    auto& m = const_cast<CosciModel&>(model);
    nlohmann::json nets = nlohmann::json::array();
    for (std::size_t i = 0; i < model.n_channels(); ++i)
        nets.push_back(nn::net_header(m.generator(i).params(), "gen" + std::to_string(i)));
    for (std::size_t i = 0; i < model.n_channels(); ++i)
        nets.push_back(nn::net_header(m.discriminator(i).params(), "disc" + std::to_string(i)));
    if (model.has_central()) nets.push_back(nn::net_header(m.central().params(), "cd"));
    return {{"kind", kind},
            {"length", model.length()},
            {"config", model.config()},
            {"epoch_log", epoch_log_to_json(model.epoch_log())},
            {"nets", std::move(nets)}};
}

std::vector<double> model_payload(const CosciModel& model) {
    auto& m = const_cast<CosciModel&>(model);
    std::vector<double> payload;
    for (std::size_t i = 0; i < model.n_channels(); ++i)
        nn::append_net_payload(m.generator(i).params(), payload);
    for (std::size_t i = 0; i < model.n_channels(); ++i)
        nn::append_net_payload(m.discriminator(i).params(), payload);
    if (model.has_central()) nn::append_net_payload(m.central().params(), payload);
    return payload;
}

CosciModel model_from_checkpoint(const nlohmann::json& header,
                                 const std::vector<double>& payload, const std::string& path) {
    CosciConfig config = header.at("config").get<CosciConfig>();
    CosciModel model = CosciModel::create(config, header.at("length").get<std::size_t>());
    model.epoch_log() = epoch_log_from_json(header.at("epoch_log"));

    const auto& nets = header.at("nets");
    const std::size_t expected = config.n_channels * 2 + (config.with_cd ? 1 : 0);
    if (nets.size() != expected) throw CorruptFileError(path + ": wrong network count");

    const double* cursor = payload.data();
    const double* end = cursor + payload.size();
    std::size_t idx = 0;
    for (std::size_t i = 0; i < config.n_channels; ++i)
        nn::read_net_payload(model.generator(i).params(), nets[idx++], cursor, end);
    for (std::size_t i = 0; i < config.n_channels; ++i)
        nn::read_net_payload(model.discriminator(i).params(), nets[idx++], cursor, end);
    if (config.with_cd) nn::read_net_payload(model.central().params(), nets[idx++], cursor, end);
    if (cursor != end) throw CorruptFileError(path + ": trailing bytes in checkpoint");
    return model;
}

} // namespace

void save_model(const CosciModel& model, const std::string& path) {
    nn::write_checkpoint_file(path, model_header(model, "cosci-model"), model_payload(model));
}

CosciModel load_model(const std::string& path) {
    auto [header, payload] = nn::read_checkpoint_file(path);
    if (header.value("kind", "") != "cosci-model")
        throw CorruptFileError(path + " does not hold a model checkpoint");
    return model_from_checkpoint(header, payload, path);
}

void save_baseline(const JointModel& model, const std::string& path) {
    nlohmann::json header = model_header(model.inner, "joint-model");
    header["out_channels"] = model.out_channels;
    nn::write_checkpoint_file(path, header, model_payload(model.inner));
}

JointModel load_baseline(const std::string& path) {
    auto [header, payload] = nn::read_checkpoint_file(path);
    if (header.value("kind", "") != "joint-model")
        throw CorruptFileError(path + " does not hold a baseline checkpoint");
    JointModel model{model_from_checkpoint(header, payload, path),
                     header.at("out_channels").get<std::size_t>()};
    return model;
}

} // namespace cosci
