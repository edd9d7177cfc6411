#include "cosci/nn/loss.hpp"

#include "cosci/errors.hpp"

namespace cosci::nn {

namespace {

void check_pair(const Eigen::RowVectorXd& pred, const Eigen::RowVectorXd& target) {
    if (pred.size() != target.size())
        throw ShapeError("loss: prediction and target lengths differ (" +
                         std::to_string(pred.size()) + " vs " + std::to_string(target.size()) +
                         ")");
    if (pred.size() == 0) throw ShapeError("loss: empty prediction vector");
}

} // namespace

double bce_loss(const Eigen::RowVectorXd& pred, const Eigen::RowVectorXd& target) {
    check_pair(pred, target);
    const auto p = pred.array().max(kProbClamp).min(1.0 - kProbClamp);
    return -(target.array() * p.log() + (1.0 - target.array()) * (1.0 - p).log()).mean();
}

Eigen::RowVectorXd bce_loss_grad(const Eigen::RowVectorXd& pred,
                                 const Eigen::RowVectorXd& target) {
    check_pair(pred, target);
    const double inv_n = 1.0 / static_cast<double>(pred.size());
    Eigen::RowVectorXd grad(pred.size());
    for (Eigen::Index i = 0; i < pred.size(); ++i) {
        const double p = pred[i];
        if (p < kProbClamp || p > 1.0 - kProbClamp) {
            grad[i] = 0.0; // clamped region: forward is constant in p
        } else {
            grad[i] = inv_n * (-target[i] / p + (1.0 - target[i]) / (1.0 - p));
        }
    }
    return grad;
}

double mse_loss(const Eigen::RowVectorXd& pred, const Eigen::RowVectorXd& target) {
    check_pair(pred, target);
    return (pred - target).array().square().mean();
}

Eigen::RowVectorXd mse_loss_grad(const Eigen::RowVectorXd& pred,
                                 const Eigen::RowVectorXd& target) {
    check_pair(pred, target);
    return 2.0 / static_cast<double>(pred.size()) * (pred - target);
}

} // namespace cosci::nn
