#include "cosci/nn/nets.hpp"

#include <cmath>
#include <limits>

#include "cosci/errors.hpp"

namespace cosci::nn {

// ---------------------------------------------------------------------------
// Specs
// ---------------------------------------------------------------------------

void LstmNetSpec::validate() const {
    if (input_dim < 1 || hidden_dim < 1 || num_layers < 1 || output_dim < 1)
        throw ConfigError("LSTM net dimensions must all be >= 1");
}

void MlpDiscSpec::validate() const {
    if (input_dim < 1) throw ConfigError("MLP input_dim must be >= 1");
    if (lld_widths.empty()) throw ConfigError("MLP needs at least one LLD block");
    for (std::size_t i = 0; i < lld_widths.size(); ++i) {
        if (lld_widths[i] < 1) throw ConfigError("MLP widths must be >= 1");
        if (i > 0 && lld_widths[i] >= lld_widths[i - 1])
            throw ConfigError("MLP LLD widths must be strictly decreasing");
    }
    if (!(dropout_p >= 0.0 && dropout_p < 1.0)) throw ConfigError("dropout_p must lie in [0,1)");
}

void MlpGenSpec::validate() const {
    if (input_dim < 1 || output_dim < 1) throw ConfigError("MLP generator dims must be >= 1");
    for (Index w : widths)
        if (w < 1) throw ConfigError("MLP widths must be >= 1");
}

// ---------------------------------------------------------------------------
// Linear
// ---------------------------------------------------------------------------

Linear::Linear(NetParams& params, const std::string& prefix, Index in, Index out)
    : weight_(&params.add(prefix + ".weight", out, in, in)),
      bias_(&params.add(prefix + ".bias", out, 1, in)) {}

const MatrixXd& Linear::forward(const MatrixXd& x) {
    if (x.rows() != weight_->cols())
        throw ShapeError("linear layer expects " + std::to_string(weight_->cols()) +
                         " rows, got " + std::to_string(x.rows()));
    x_ = x;
    y_.noalias() = weight_->value * x;
    y_.colwise() += bias_->value.col(0);
    has_forward_ = true;
    return y_;
}

MatrixXd Linear::backward(const MatrixXd& d_y, bool accumulate_param_grads,
                          bool need_input_grad) {
    if (!has_forward_) throw StateError("linear backward called before forward");
    if (d_y.rows() != weight_->rows() || d_y.cols() != x_.cols())
        throw ShapeError("linear backward gradient shape mismatch");
    if (accumulate_param_grads) {
        weight_->grad.noalias() += d_y * x_.transpose();
        bias_->grad.col(0) += d_y.rowwise().sum();
    }
    MatrixXd d_x;
    if (need_input_grad) d_x.noalias() = weight_->value.transpose() * d_y;
    return d_x;
}

// ---------------------------------------------------------------------------
// LstmLayer
// ---------------------------------------------------------------------------

LstmLayer::LstmLayer(NetParams& params, const std::string& prefix, Index input_dim,
                     Index hidden_dim)
    : w_input_(&params.add(prefix + ".w_input", 4 * hidden_dim, input_dim,
                           input_dim + hidden_dim)),
      w_hidden_(&params.add(prefix + ".w_hidden", 4 * hidden_dim, hidden_dim,
                            input_dim + hidden_dim)),
      bias_(&params.add(prefix + ".bias", 4 * hidden_dim, 1, input_dim + hidden_dim)),
      input_(input_dim), hidden_(hidden_dim) {}

const MatrixXd& LstmLayer::forward(const MatrixXd& x_seq) {
    if (x_seq.rows() % input_ != 0)
        throw ShapeError("LSTM input rows not a multiple of input_dim");
    seq_len_ = x_seq.rows() / input_;
    if (seq_len_ < 1) throw ShapeError("LSTM needs at least one timestep");
    batch_ = x_seq.cols();
    const Index H = hidden_;

    x_ = x_seq;
    gates_.resize(seq_len_ * 4 * H, batch_);
    c_.resize(seq_len_ * H, batch_);
    tc_.resize(seq_len_ * H, batch_);
    h_.resize(seq_len_ * H, batch_);
    z_.resize(4 * H, batch_);

    for (Index t = 0; t < seq_len_; ++t) {
        z_.noalias() = w_input_->value * x_.middleRows(t * input_, input_);
        if (t > 0) z_.noalias() += w_hidden_->value * h_.middleRows((t - 1) * H, H);
        z_.colwise() += bias_->value.col(0);

        auto gate_i = gates_.middleRows(t * 4 * H, H);
        auto gate_f = gates_.middleRows(t * 4 * H + H, H);
        auto gate_g = gates_.middleRows(t * 4 * H + 2 * H, H);
        auto gate_o = gates_.middleRows(t * 4 * H + 3 * H, H);
        gate_i.array() = (1.0 + (-z_.middleRows(0, H).array()).exp()).inverse();
        gate_f.array() = (1.0 + (-z_.middleRows(H, H).array()).exp()).inverse();
        gate_g.array() = z_.middleRows(2 * H, H).array().tanh();
        gate_o.array() = (1.0 + (-z_.middleRows(3 * H, H).array()).exp()).inverse();

        auto c_t = c_.middleRows(t * H, H);
        c_t.array() = gate_i.array() * gate_g.array();
        if (t > 0) c_t.array() += gate_f.array() * c_.middleRows((t - 1) * H, H).array();
        tc_.middleRows(t * H, H).array() = c_t.array().tanh();
        h_.middleRows(t * H, H).array() =
            gate_o.array() * tc_.middleRows(t * H, H).array();
    }
    has_forward_ = true;
    return h_;
}

MatrixXd LstmLayer::backward(const MatrixXd& d_h_seq, bool accumulate_param_grads,
                             bool need_input_grad) {
    if (!has_forward_) throw StateError("LSTM backward called before forward");
    const Index H = hidden_;
    if (d_h_seq.rows() != seq_len_ * H || d_h_seq.cols() != batch_)
        throw ShapeError("LSTM backward gradient shape mismatch");

    MatrixXd d_x;
    if (need_input_grad) d_x.resize(seq_len_ * input_, batch_);

    MatrixXd dh_carry = MatrixXd::Zero(H, batch_);
    MatrixXd dc_next = MatrixXd::Zero(H, batch_);
    MatrixXd dh(H, batch_), dc(H, batch_), dz(4 * H, batch_);

    for (Index t = seq_len_ - 1; t >= 0; --t) {
        const auto gate_i = gates_.middleRows(t * 4 * H, H).array();
        const auto gate_f = gates_.middleRows(t * 4 * H + H, H).array();
        const auto gate_g = gates_.middleRows(t * 4 * H + 2 * H, H).array();
        const auto gate_o = gates_.middleRows(t * 4 * H + 3 * H, H).array();
        const auto tc_t = tc_.middleRows(t * H, H).array();

        dh = d_h_seq.middleRows(t * H, H) + dh_carry;
        dc.array() = dc_next.array() + dh.array() * gate_o * (1.0 - tc_t.square());

        dz.middleRows(3 * H, H).array() = dh.array() * tc_t * gate_o * (1.0 - gate_o);
        dz.middleRows(0, H).array() = dc.array() * gate_g * gate_i * (1.0 - gate_i);
        dz.middleRows(2 * H, H).array() = dc.array() * gate_i * (1.0 - gate_g.square());
        if (t > 0) {
            dz.middleRows(H, H).array() =
                dc.array() * c_.middleRows((t - 1) * H, H).array() * gate_f * (1.0 - gate_f);
        } else {
            dz.middleRows(H, H).setZero(); // c_{-1} = 0
        }

        if (accumulate_param_grads) {
            w_input_->grad.noalias() += dz * x_.middleRows(t * input_, input_).transpose();
            if (t > 0)
                w_hidden_->grad.noalias() += dz * h_.middleRows((t - 1) * H, H).transpose();
            bias_->grad.col(0) += dz.rowwise().sum();
        }
        if (need_input_grad)
            d_x.middleRows(t * input_, input_).noalias() = w_input_->value.transpose() * dz;
        dh_carry.noalias() = w_hidden_->value.transpose() * dz;
        dc_next.array() = dc.array() * gate_f;
    }
    return d_x;
}

MatrixXd LstmLayer::h_last() const {
    if (!has_forward_) throw StateError("LSTM h_last before forward");
    return h_.middleRows((seq_len_ - 1) * hidden_, hidden_);
}

// ---------------------------------------------------------------------------
// LstmStack
// ---------------------------------------------------------------------------

LstmStack::LstmStack(NetParams& params, const std::string& prefix, Index input_dim,
                     Index hidden_dim, Index num_layers) {
    layers_.reserve(static_cast<std::size_t>(num_layers));
    for (Index l = 0; l < num_layers; ++l)
        layers_.emplace_back(params, prefix + ".l" + std::to_string(l),
                             l == 0 ? input_dim : hidden_dim, hidden_dim);
}

MatrixXd LstmStack::forward(const MatrixXd& x_seq) {
    const MatrixXd* current = &x_seq;
    for (auto& layer : layers_) current = &layer.forward(*current);
    return layers_.back().h_last();
}

MatrixXd LstmStack::backward_last(const MatrixXd& d_h_last, bool accumulate_param_grads,
                                  bool need_input_grad) {
    auto& top = layers_.back();
    const Index H = top.hidden_dim();
    MatrixXd d_seq = MatrixXd::Zero(top.seq_len() * H, d_h_last.cols());
    d_seq.bottomRows(H) = d_h_last;
    for (std::size_t l = layers_.size(); l-- > 0;) {
        const bool want_input = l > 0 || need_input_grad;
        MatrixXd d_in = layers_[l].backward(d_seq, accumulate_param_grads, want_input);
        d_seq = std::move(d_in);
    }
    return d_seq;
}

// ---------------------------------------------------------------------------
// Dropout
// ---------------------------------------------------------------------------

const MatrixXd& Dropout::forward(const MatrixXd& x, bool training, Rng* rng) {
    if (!training || p_ == 0.0) {
        identity_ = true;
        y_ = x;
        return y_;
    }
    if (rng == nullptr) throw StateError("training-mode dropout needs an RNG");
    identity_ = false;
    const double keep = 1.0 - p_;
    mask_.resize(x.rows(), x.cols());
    for (Index j = 0; j < x.cols(); ++j)
        for (Index i = 0; i < x.rows(); ++i)
            mask_(i, j) = rng->uniform01() < keep ? 1.0 / keep : 0.0;
    y_ = x.cwiseProduct(mask_);
    return y_;
}

MatrixXd Dropout::backward(const MatrixXd& d_y) const {
    if (identity_) return d_y;
    return d_y.cwiseProduct(mask_);
}

// ---------------------------------------------------------------------------
// LstmGenerator
// ---------------------------------------------------------------------------

LstmGenerator::LstmGenerator(const LstmNetSpec& spec, Index noise_len, std::uint64_t init_seed)
    : GeneratorNet(init_seed), noise_len_(noise_len) {
    spec.validate();
    if (noise_len % spec.input_dim != 0)
        throw ConfigError("noise_len must be a multiple of the generator input_dim");
    lstm_ = std::make_unique<LstmStack>(params_, "lstm", spec.input_dim, spec.hidden_dim,
                                        spec.num_layers);
    head_ = std::make_unique<Linear>(params_, "head", spec.hidden_dim, spec.output_dim);
}

const MatrixXd& LstmGenerator::forward(const MatrixXd& noise) {
    if (noise.rows() != noise_len_)
        throw ShapeError("generator expects noise of length " + std::to_string(noise_len_));
    return head_->forward(lstm_->forward(noise));
}

void LstmGenerator::backward(const MatrixXd& d_out) {
    MatrixXd d_h = head_->backward(d_out, true, true);
    lstm_->backward_last(d_h, true, false);
}

// ---------------------------------------------------------------------------
// LstmDiscriminator
// ---------------------------------------------------------------------------

LstmDiscriminator::LstmDiscriminator(const LstmNetSpec& spec, Index seq_len,
                                     std::uint64_t init_seed)
    : DiscriminatorNet(init_seed), seq_len_(seq_len), spec_input_dim_(spec.input_dim) {
    spec.validate();
    if (spec.output_dim != 1)
        throw ConfigError("discriminator head must emit a single logit");
    lstm_ = std::make_unique<LstmStack>(params_, "lstm", spec.input_dim, spec.hidden_dim,
                                        spec.num_layers);
    head_ = std::make_unique<Linear>(params_, "head", spec.hidden_dim, 1);
}

RowVectorXd LstmDiscriminator::forward(const MatrixXd& input, bool, Rng*) {
    if (input.rows() != input_dim())
        throw ShapeError("discriminator expects input of length " + std::to_string(input_dim()));
    const MatrixXd& logit = head_->forward(lstm_->forward(input));
    prob_ = (1.0 + (-logit.row(0).array()).exp()).inverse().matrix();
    has_forward_ = true;
    return prob_;
}

MatrixXd LstmDiscriminator::backward(const RowVectorXd& d_prob, bool accumulate_param_grads,
                                     bool need_input_grad) {
    if (!has_forward_) throw StateError("discriminator backward called before forward");
    MatrixXd d_logit(1, d_prob.cols());
    d_logit.row(0).array() = d_prob.array() * prob_.array() * (1.0 - prob_.array());
    MatrixXd d_h = head_->backward(d_logit, accumulate_param_grads, true);
    return lstm_->backward_last(d_h, accumulate_param_grads, need_input_grad);
}

// ---------------------------------------------------------------------------
// MlpDiscriminator
// ---------------------------------------------------------------------------

MlpDiscriminator::MlpDiscriminator(const MlpDiscSpec& spec, std::uint64_t init_seed)
    : DiscriminatorNet(init_seed), in_dim_(spec.input_dim), leaky_slope_(spec.leaky_slope) {
    spec.validate();
    Index in = spec.input_dim;
    for (std::size_t b = 0; b < spec.lld_widths.size(); ++b) {
        blocks_.emplace_back(params_, "lld" + std::to_string(b), in, spec.lld_widths[b]);
        dropouts_.emplace_back(spec.dropout_p);
        in = spec.lld_widths[b];
    }
    head_ = std::make_unique<Linear>(params_, "head", in, 1);
    pre_act_.resize(blocks_.size());
}

RowVectorXd MlpDiscriminator::forward(const MatrixXd& input, bool training, Rng* dropout_rng) {
    if (input.rows() != in_dim_)
        throw ShapeError("MLP discriminator expects input of length " + std::to_string(in_dim_));
    MatrixXd x = input;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        pre_act_[b] = blocks_[b].forward(x);
        MatrixXd activated = (pre_act_[b].array().max(0.0) +
                              leaky_slope_ * pre_act_[b].array().min(0.0)).matrix();
        x = dropouts_[b].forward(activated, training, dropout_rng);
    }
    const MatrixXd& logit = head_->forward(x);
    prob_ = (1.0 + (-logit.row(0).array()).exp()).inverse().matrix();
    has_forward_ = true;
    return prob_;
}

MatrixXd MlpDiscriminator::backward(const RowVectorXd& d_prob, bool accumulate_param_grads,
                                    bool need_input_grad) {
    if (!has_forward_) throw StateError("discriminator backward called before forward");
    MatrixXd d(1, d_prob.cols());
    d.row(0).array() = d_prob.array() * prob_.array() * (1.0 - prob_.array());
    d = head_->backward(d, accumulate_param_grads, true);
    for (std::size_t b = blocks_.size(); b-- > 0;) {
        d = dropouts_[b].backward(d);
        d.array() *= (pre_act_[b].array() > 0.0).cast<double>() * (1.0 - leaky_slope_) +
                     leaky_slope_;
        d = blocks_[b].backward(d, accumulate_param_grads, b > 0 || need_input_grad);
    }
    return d;
}

double MlpDiscriminator::last_min_preact() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& pre : pre_act_)
        if (pre.size() > 0) m = std::min(m, pre.cwiseAbs().minCoeff());
    return m;
}

// ---------------------------------------------------------------------------
// MlpGenerator
// ---------------------------------------------------------------------------

MlpGenerator::MlpGenerator(const MlpGenSpec& spec, std::uint64_t init_seed)
    : GeneratorNet(init_seed), in_dim_(spec.input_dim), out_dim_(spec.output_dim),
      leaky_slope_(spec.leaky_slope) {
    spec.validate();
    Index in = spec.input_dim;
    std::size_t idx = 0;
    for (Index w : spec.widths) {
        layers_.emplace_back(params_, "fc" + std::to_string(idx++), in, w);
        in = w;
    }
    layers_.emplace_back(params_, "fc" + std::to_string(idx), in, spec.output_dim);
    pre_act_.resize(layers_.size() - 1);
}

const MatrixXd& MlpGenerator::forward(const MatrixXd& noise) {
    if (noise.rows() != in_dim_)
        throw ShapeError("MLP generator expects noise of length " + std::to_string(in_dim_));
    MatrixXd x = noise;
    for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
        pre_act_[l] = layers_[l].forward(x);
        x = (pre_act_[l].array().max(0.0) + leaky_slope_ * pre_act_[l].array().min(0.0))
                .matrix();
    }
    y_ = layers_.back().forward(x);
    has_forward_ = true;
    return y_;
}

double MlpGenerator::last_min_preact() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& pre : pre_act_)
        if (pre.size() > 0) m = std::min(m, pre.cwiseAbs().minCoeff());
    return m;
}

void MlpGenerator::backward(const MatrixXd& d_out) {
    if (!has_forward_) throw StateError("generator backward called before forward");
    MatrixXd d = layers_.back().backward(d_out, true, true);
    for (std::size_t l = layers_.size() - 1; l-- > 0;) {
        d.array() *= (pre_act_[l].array() > 0.0).cast<double>() * (1.0 - leaky_slope_) +
                     leaky_slope_;
        d = layers_[l].backward(d, true, l > 0);
    }
}

} // namespace cosci::nn
