#ifndef COSCI_NN_NETS_HPP
#define COSCI_NN_NETS_HPP

#include <memory>
#include <string>
#include <vector>

#include "cosci/nn/params.hpp"
#include "cosci/rng.hpp"

namespace cosci::nn {

using Eigen::RowVectorXd;

// ---------------------------------------------------------------------------
// Network specs
// ---------------------------------------------------------------------------

struct LstmNetSpec {
    Index input_dim = 1;   ///< features per timestep
    Index hidden_dim = 256;
    Index num_layers = 1;
    Index output_dim = 1;  ///< width of the linear head
    void validate() const;
};

struct MlpDiscSpec {
    Index input_dim = 1;
    std::vector<Index> lld_widths{256, 128, 64}; ///< strictly decreasing
    double leaky_slope = 0.1;
    double dropout_p = 0.3;
    void validate() const;
};

struct MlpGenSpec {
    Index input_dim = 1;
    std::vector<Index> widths{256, 256};
    Index output_dim = 1;
    double leaky_slope = 0.1;
    void validate() const;
};

// ---------------------------------------------------------------------------
// Layers
//
// All layers run on batches stored column-wise: an input of D features for B
// instances is a D x B matrix. Sequences are stacked row-blocks: T timesteps
// of D features form a (T*D) x B matrix. Each layer caches its forward pass;
// backward() before forward() raises StateError.
// ---------------------------------------------------------------------------

class Linear {
public:
    Linear(NetParams& params, const std::string& prefix, Index in, Index out);

    const MatrixXd& forward(const MatrixXd& x);
    /// Returns dL/dx when need_input_grad, otherwise an empty matrix.
    MatrixXd backward(const MatrixXd& d_y, bool accumulate_param_grads = true,
                      bool need_input_grad = true);

    Index in_dim() const { return weight_->cols(); }
    Index out_dim() const { return weight_->rows(); }

private:
    Tensor* weight_;
    Tensor* bias_;
    MatrixXd x_;
    MatrixXd y_;
    bool has_forward_ = false;
};

/// Single LSTM layer unrolled over the full sequence (BPTT). Gate layout is
/// [input; forget; cell; output] with one merged bias. Initial hidden and
/// cell states are zero. fan_in for initialization is input_dim + hidden_dim,
/// the total inputs feeding each gate unit.
class LstmLayer {
public:
    LstmLayer(NetParams& params, const std::string& prefix, Index input_dim, Index hidden_dim);

    /// x_seq: (T*input_dim) x B. Returns the hidden sequence, (T*H) x B.
    const MatrixXd& forward(const MatrixXd& x_seq);

    /// d_h_seq: gradient on every hidden state, (T*H) x B.
    /// Returns dL/dx_seq when need_input_grad, otherwise an empty matrix.
    MatrixXd backward(const MatrixXd& d_h_seq, bool accumulate_param_grads = true,
                      bool need_input_grad = true);

    MatrixXd h_last() const;
    Index hidden_dim() const { return hidden_; }
    Index input_dim() const { return input_; }
    Index seq_len() const { return seq_len_; }

private:
    Tensor* w_input_;  // 4H x input_dim
    Tensor* w_hidden_; // 4H x H
    Tensor* bias_;     // 4H x 1
    Index input_;
    Index hidden_;
    Index seq_len_ = 0;
    Index batch_ = 0;
    MatrixXd x_;     // cached input
    MatrixXd gates_; // post-activation gates, (T*4H) x B
    MatrixXd c_;     // cell states, (T*H) x B
    MatrixXd tc_;    // tanh(cell), (T*H) x B
    MatrixXd h_;     // hidden states, (T*H) x B
    MatrixXd z_;     // scratch pre-activations, 4H x B
    bool has_forward_ = false;
};

/// Stack of LSTM layers; layer l consumes the full hidden sequence of l-1.
class LstmStack {
public:
    LstmStack(NetParams& params, const std::string& prefix, Index input_dim, Index hidden_dim,
              Index num_layers);

    /// Returns the top layer's final hidden state, H x B.
    MatrixXd forward(const MatrixXd& x_seq);

    /// Backward from a gradient on the final hidden state only.
    /// Returns dL/dx_seq when need_input_grad.
    MatrixXd backward_last(const MatrixXd& d_h_last, bool accumulate_param_grads = true,
                           bool need_input_grad = false);

    Index hidden_dim() const { return layers_.back().hidden_dim(); }

private:
    std::vector<LstmLayer> layers_;
};

/// Inverted dropout: active only in training mode, scales kept units by
/// 1/(1-p) so evaluation needs no rescaling.
class Dropout {
public:
    explicit Dropout(double p) : p_(p) {}

    const MatrixXd& forward(const MatrixXd& x, bool training, Rng* rng);
    MatrixXd backward(const MatrixXd& d_y) const;

private:
    double p_;
    MatrixXd mask_;
    MatrixXd y_;
    bool identity_ = true;
};

// ---------------------------------------------------------------------------
// Networks
// ---------------------------------------------------------------------------

class Net {
public:
    explicit Net(std::uint64_t init_seed) : params_(init_seed) {}
    virtual ~Net() = default;
    Net(const Net&) = delete;
    Net& operator=(const Net&) = delete;

    NetParams& params() { return params_; }
    const NetParams& params() const { return params_; }

protected:
    NetParams params_;
};

/// Maps a noise block (noise_len x B) to a series block (out_len x B).
class GeneratorNet : public Net {
public:
    using Net::Net;
    virtual const MatrixXd& forward(const MatrixXd& noise) = 0;
    /// Accumulates parameter gradients from dL/d(output).
    virtual void backward(const MatrixXd& d_out) = 0;
    virtual Index output_dim() const = 0;
    virtual Index noise_len() const = 0;
};

/// Maps an input block (input_dim x B) to probabilities (1 x B).
class DiscriminatorNet : public Net {
public:
    using Net::Net;
    virtual RowVectorXd forward(const MatrixXd& input, bool training = false,
                                Rng* dropout_rng = nullptr) = 0;
    /// Backward from dL/d(probability). Returns dL/d(input) when
    /// need_input_grad; parameter gradients accumulate when requested.
    virtual MatrixXd backward(const RowVectorXd& d_prob, bool accumulate_param_grads = true,
                              bool need_input_grad = false) = 0;
    virtual Index input_dim() const = 0;
};

/// LSTM over the noise sequence, final hidden state through a linear head.
/// The noise block is consumed as a length-noise_len sequence of scalars
/// unless the spec's input_dim says otherwise (input_dim = noise_len means a
/// single timestep of full width).
class LstmGenerator : public GeneratorNet {
public:
    LstmGenerator(const LstmNetSpec& spec, Index noise_len, std::uint64_t init_seed);

    const MatrixXd& forward(const MatrixXd& noise) override;
    void backward(const MatrixXd& d_out) override;
    Index output_dim() const override { return head_->out_dim(); }
    Index noise_len() const override { return noise_len_; }

private:
    Index noise_len_;
    std::unique_ptr<LstmStack> lstm_;
    std::unique_ptr<Linear> head_;
};

/// LSTM over the input sequence, linear head to one logit, sigmoid.
class LstmDiscriminator : public DiscriminatorNet {
public:
    LstmDiscriminator(const LstmNetSpec& spec, Index seq_len, std::uint64_t init_seed);

    RowVectorXd forward(const MatrixXd& input, bool training = false,
                        Rng* dropout_rng = nullptr) override;
    MatrixXd backward(const RowVectorXd& d_prob, bool accumulate_param_grads = true,
                      bool need_input_grad = false) override;
    Index input_dim() const override { return seq_len_ * spec_input_dim_; }

private:
    Index seq_len_;
    Index spec_input_dim_;
    std::unique_ptr<LstmStack> lstm_;
    std::unique_ptr<Linear> head_;
    RowVectorXd prob_;
    bool has_forward_ = false;
};

/// Three Linear-LeakyReLU-Dropout blocks, then linear to one logit, sigmoid.
class MlpDiscriminator : public DiscriminatorNet {
public:
    MlpDiscriminator(const MlpDiscSpec& spec, std::uint64_t init_seed);

    RowVectorXd forward(const MatrixXd& input, bool training = false,
                        Rng* dropout_rng = nullptr) override;
    MatrixXd backward(const RowVectorXd& d_prob, bool accumulate_param_grads = true,
                      bool need_input_grad = false) override;
    Index input_dim() const override { return in_dim_; }

    /// Smallest |pre-activation| seen in the last forward pass; finite
    /// differencing is only valid with margin from the LeakyReLU kinks.
    double last_min_preact() const;

private:
    Index in_dim_;
    double leaky_slope_;
    std::vector<Linear> blocks_;
    std::vector<Dropout> dropouts_;
    std::unique_ptr<Linear> head_;
    std::vector<MatrixXd> pre_act_; // linear outputs, for the LeakyReLU backward
    RowVectorXd prob_;
    bool has_forward_ = false;
};

/// MLP analogue of the LSTM generator: the noise block is consumed as one
/// flat vector through LeakyReLU-separated linear layers.
class MlpGenerator : public GeneratorNet {
public:
    MlpGenerator(const MlpGenSpec& spec, std::uint64_t init_seed);

    const MatrixXd& forward(const MatrixXd& noise) override;
    void backward(const MatrixXd& d_out) override;
    Index output_dim() const override { return out_dim_; }
    Index noise_len() const override { return in_dim_; }
    double last_min_preact() const;

private:
    Index in_dim_;
    Index out_dim_;
    double leaky_slope_;
    std::vector<Linear> layers_;
    std::vector<MatrixXd> pre_act_;
    MatrixXd y_;
    bool has_forward_ = false;
};

} // namespace cosci::nn

#endif // COSCI_NN_NETS_HPP
