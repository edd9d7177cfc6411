#ifndef COSCI_NN_GRADCHECK_HPP
#define COSCI_NN_GRADCHECK_HPP

#include <cstdint>
#include <string>

#include "cosci/nn/nets.hpp"

namespace cosci::nn {

enum class NetKind { Linear, LstmGenerator, LstmDiscriminator, MlpDiscriminator, MlpGenerator };

struct GradCheckReport {
    /// Worst per-tensor norm-relative error,
    /// ||analytic - fd||_2 / (||analytic||_2 + ||fd||_2).
    double max_rel_error = 0.0;
    /// Entry with the largest absolute deviation, for diagnostics.
    std::string worst_tensor;
    Index worst_row = 0;
    Index worst_col = 0;
    std::size_t n_params = 0;

    bool passes(double tolerance) const { return max_rel_error < tolerance; }
};

/// Compares every analytic parameter gradient against central finite
/// differences on a small randomized instance of the given network family
/// (dropout disabled). Discriminators are checked through BCE against random
/// binary targets, generators through MSE against a random target block.
GradCheckReport grad_check(NetKind kind, std::uint64_t seed, double fd_step = 1e-5);

} // namespace cosci::nn

#endif // COSCI_NN_GRADCHECK_HPP
