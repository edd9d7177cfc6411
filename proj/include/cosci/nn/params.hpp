#ifndef COSCI_NN_PARAMS_HPP
#define COSCI_NN_PARAMS_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace cosci::nn {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// One named parameter array with its gradient buffer and Adam moments.
struct Tensor {
    std::string name;
    MatrixXd value;
    MatrixXd grad;
    MatrixXd adam_m;
    MatrixXd adam_v;

    Index rows() const { return value.rows(); }
    Index cols() const { return value.cols(); }
    Index size() const { return value.size(); }
};

/// Flat parameter store for one network. Tensors are created once at network
/// construction and initialized uniformly in +-1/sqrt(fan_in) from a stream
/// derived from (init_seed, tensor name), so the same seed always yields the
/// same network regardless of construction order.
class NetParams {
public:
    explicit NetParams(std::uint64_t init_seed = 0) : init_seed_(init_seed) {}

    NetParams(const NetParams&) = delete;
    NetParams& operator=(const NetParams&) = delete;

    /// Adds a tensor initialized uniformly in +-1/sqrt(fan_in).
    Tensor& add(const std::string& name, Index rows, Index cols, Index fan_in);

    /// Adds a zero-initialized tensor.
    Tensor& add_zero(const std::string& name, Index rows, Index cols);

    Tensor& at(const std::string& name);
    const Tensor& at(const std::string& name) const;
    bool has(const std::string& name) const { return index_.count(name) != 0; }

    std::size_t n_tensors() const { return tensors_.size(); }
    Tensor& tensor(std::size_t i) { return *tensors_[i]; }
    const Tensor& tensor(std::size_t i) const { return *tensors_[i]; }

    std::size_t n_params() const;

    void zero_grad();

    /// True when every parameter value is finite.
    bool values_finite() const;

    std::uint64_t init_seed() const { return init_seed_; }

    /// Adam step counter (number of optimizer steps taken).
    long step = 0;

    /// Copy of all parameter values, for snapshots.
    std::vector<MatrixXd> state() const;
    /// Restores a snapshot taken with state().
    void set_state(const std::vector<MatrixXd>& state);

private:
    std::uint64_t init_seed_;
    std::vector<std::unique_ptr<Tensor>> tensors_; // stable addresses
    std::unordered_map<std::string, std::size_t> index_;
};

/// Standard Adam update with bias correction on every tensor of `params`;
/// increments the step counter. Throws NumericError (naming the tensor) on a
/// non-finite gradient.
void adam_step(NetParams& params, double lr, double beta1 = 0.9, double beta2 = 0.999,
               double eps = 1e-8);

} // namespace cosci::nn

#endif // COSCI_NN_PARAMS_HPP
