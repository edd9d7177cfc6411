#ifndef COSCI_NN_LOSS_HPP
#define COSCI_NN_LOSS_HPP

#include <Eigen/Dense>

namespace cosci::nn {

/// Clamp bound applied to probabilities before taking logs.
inline constexpr double kProbClamp = 1e-7;

/// Mean binary cross-entropy of predicted probabilities against {0,1}
/// targets; predictions are clamped to [1e-7, 1-1e-7] so the loss is finite
/// for saturated inputs.
double bce_loss(const Eigen::RowVectorXd& pred, const Eigen::RowVectorXd& target);

/// dL/dpred of bce_loss. Consistent with the clamped forward: entries whose
/// prediction sits outside the clamp interval get zero gradient.
Eigen::RowVectorXd bce_loss_grad(const Eigen::RowVectorXd& pred,
                                 const Eigen::RowVectorXd& target);

/// Mean squared error and its gradient (the least-squares GAN criterion).
double mse_loss(const Eigen::RowVectorXd& pred, const Eigen::RowVectorXd& target);
Eigen::RowVectorXd mse_loss_grad(const Eigen::RowVectorXd& pred,
                                 const Eigen::RowVectorXd& target);

inline Eigen::RowVectorXd constant_targets(Eigen::Index n, double value) {
    return Eigen::RowVectorXd::Constant(n, value);
}

} // namespace cosci::nn

#endif // COSCI_NN_LOSS_HPP
