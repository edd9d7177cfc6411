#include "cosci/nn/params.hpp"

#include <cmath>

#include "cosci/errors.hpp"
#include "cosci/rng.hpp"

namespace cosci::nn {

Tensor& NetParams::add(const std::string& name, Index rows, Index cols, Index fan_in) {
    Tensor& t = add_zero(name, rows, cols);
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Rng rng(derive_seed(init_seed_, "init:" + name));
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) t.value(i, j) = rng.uniform(-bound, bound);
    return t;
}

Tensor& NetParams::add_zero(const std::string& name, Index rows, Index cols) {
    if (index_.count(name)) throw StateError("duplicate tensor name: " + name);
    auto t = std::make_unique<Tensor>();
    t->name = name;
    t->value = MatrixXd::Zero(rows, cols);
    t->grad = MatrixXd::Zero(rows, cols);
    t->adam_m = MatrixXd::Zero(rows, cols);
    t->adam_v = MatrixXd::Zero(rows, cols);
    index_[name] = tensors_.size();
    tensors_.push_back(std::move(t));
    return *tensors_.back();
}

Tensor& NetParams::at(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw StateError("unknown tensor: " + name);
    return *tensors_[it->second];
}

const Tensor& NetParams::at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw StateError("unknown tensor: " + name);
    return *tensors_[it->second];
}

std::size_t NetParams::n_params() const {
    std::size_t n = 0;
    for (const auto& t : tensors_) n += static_cast<std::size_t>(t->size());
    return n;
}

void NetParams::zero_grad() {
    for (auto& t : tensors_) t->grad.setZero();
}

bool NetParams::values_finite() const {
    for (const auto& t : tensors_)
        if (!t->value.allFinite()) return false;
    return true;
}

std::vector<MatrixXd> NetParams::state() const {
    std::vector<MatrixXd> out;
    out.reserve(tensors_.size());
    for (const auto& t : tensors_) out.push_back(t->value);
    return out;
}

void NetParams::set_state(const std::vector<MatrixXd>& state) {
    if (state.size() != tensors_.size()) throw ShapeError("snapshot tensor count mismatch");
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state[i].rows() != tensors_[i]->value.rows() ||
            state[i].cols() != tensors_[i]->value.cols())
            throw ShapeError("snapshot shape mismatch for " + tensors_[i]->name);
        tensors_[i]->value = state[i];
    }
}

void adam_step(NetParams& params, double lr, double beta1, double beta2, double eps) {
    for (std::size_t i = 0; i < params.n_tensors(); ++i) {
        const Tensor& t = params.tensor(i);
        if (!t.grad.allFinite())
            throw NumericError("non-finite gradient in tensor '" + t.name + "'");
    }
    params.step += 1;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(params.step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(params.step));
    for (std::size_t i = 0; i < params.n_tensors(); ++i) {
        Tensor& t = params.tensor(i);
        t.adam_m = beta1 * t.adam_m + (1.0 - beta1) * t.grad;
        t.adam_v.array() = beta2 * t.adam_v.array() + (1.0 - beta2) * t.grad.array().square();
        t.value.array() -=
            lr * (t.adam_m.array() / bc1) / ((t.adam_v.array() / bc2).sqrt() + eps);
    }
}

} // namespace cosci::nn
