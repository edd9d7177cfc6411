#include "cosci/nn/gradcheck.hpp"

#include <functional>
#include <memory>

#include "cosci/nn/loss.hpp"

namespace cosci::nn {

namespace {

MatrixXd random_matrix(Index rows, Index cols, Rng& rng) {
    MatrixXd m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
    return m;
}

RowVectorXd random_targets(Index n, Rng& rng) {
    RowVectorXd t(n);
    for (Index i = 0; i < n; ++i) t[i] = rng.uniform01() < 0.5 ? 0.0 : 1.0;
    return t;
}

} // namespace

GradCheckReport grad_check(NetKind kind, std::uint64_t seed, double fd_step) {
    Rng rng(derive_seed(seed, "gradcheck"));
    const Index batch = 3;

    // One scalar loss per network family; backward() leaves analytic
    // gradients in the parameter store.
    std::function<double()> loss;
    std::function<void()> backward;
    NetParams* params = nullptr;

    std::unique_ptr<GeneratorNet> gen;
    std::unique_ptr<DiscriminatorNet> disc;
    std::unique_ptr<NetParams> linear_params;
    std::unique_ptr<Linear> linear;

    switch (kind) {
    case NetKind::Linear: {
        linear_params = std::make_unique<NetParams>(derive_seed(seed, "net"));
        linear = std::make_unique<Linear>(*linear_params, "fc", 5, 4);
        const MatrixXd input = random_matrix(5, batch, rng);
        const MatrixXd target = random_matrix(4, batch, rng);
        params = linear_params.get();
        loss = [&, input, target] {
            return (linear->forward(input) - target).array().square().mean();
        };
        backward = [&, input, target] {
            const MatrixXd& y = linear->forward(input);
            const MatrixXd d = 2.0 / static_cast<double>(y.size()) * (y - target);
            linear->backward(d, true, false);
        };
        break;
    }
    case NetKind::LstmGenerator:
    case NetKind::MlpGenerator: {
        const Index noise_len = 6, out_len = 3;
        if (kind == NetKind::LstmGenerator) {
            LstmNetSpec spec{1, 4, 2, out_len};
            gen = std::make_unique<LstmGenerator>(spec, noise_len, derive_seed(seed, "net"));
        } else {
            MlpGenSpec spec{noise_len, {7, 5}, out_len, 0.1};
            gen = std::make_unique<MlpGenerator>(spec, derive_seed(seed, "net"));
        }
        MatrixXd noise = random_matrix(noise_len, batch, rng);
        if (auto* mlp = dynamic_cast<MlpGenerator*>(gen.get())) {
            // keep pre-activations away from the LeakyReLU kinks, where
            // finite differences are meaningless
            for (int attempt = 0; attempt < 100; ++attempt) {
                mlp->forward(noise);
                if (mlp->last_min_preact() > 100.0 * fd_step) break;
                noise = random_matrix(noise_len, batch, rng);
            }
        }
        const MatrixXd target = random_matrix(out_len, batch, rng);
        params = &gen->params();
        loss = [&, noise, target] {
            return (gen->forward(noise) - target).array().square().mean();
        };
        backward = [&, noise, target] {
            const MatrixXd& y = gen->forward(noise);
            gen->backward(2.0 / static_cast<double>(y.size()) * (y - target));
        };
        break;
    }
    case NetKind::LstmDiscriminator:
    case NetKind::MlpDiscriminator: {
        const Index len = 9;
        if (kind == NetKind::LstmDiscriminator) {
            LstmNetSpec spec{1, 4, 2, 1};
            disc = std::make_unique<LstmDiscriminator>(spec, len, derive_seed(seed, "net"));
        } else {
            MlpDiscSpec spec{len, {8, 6, 4}, 0.1, 0.3};
            disc = std::make_unique<MlpDiscriminator>(spec, derive_seed(seed, "net"));
        }
        MatrixXd input = random_matrix(len, batch, rng);
        if (auto* mlp = dynamic_cast<MlpDiscriminator*>(disc.get())) {
            for (int attempt = 0; attempt < 100; ++attempt) {
                mlp->forward(input);
                if (mlp->last_min_preact() > 100.0 * fd_step) break;
                input = random_matrix(len, batch, rng);
            }
        }
        const RowVectorXd target = random_targets(batch, rng);
        params = &disc->params();
        loss = [&, input, target] { return bce_loss(disc->forward(input), target); };
        backward = [&, input, target] {
            const RowVectorXd p = disc->forward(input);
            disc->backward(bce_loss_grad(p, target), true, false);
        };
        break;
    }
    }

    params->zero_grad();
    backward();

    // Per tensor: || analytic - fd ||_2 / max(||analytic||_2 + ||fd||_2, eps),
    // the norm-relative form that stays well conditioned when individual
    // entries are near zero. The worst single entry is kept for diagnostics.
    GradCheckReport report;
    report.n_params = params->n_params();
    double worst_entry_diff = -1.0;
    for (std::size_t ti = 0; ti < params->n_tensors(); ++ti) {
        Tensor& t = params->tensor(ti);
        double diff_sq = 0.0, analytic_sq = 0.0, fd_sq = 0.0;
        for (Index j = 0; j < t.cols(); ++j) {
            for (Index i = 0; i < t.rows(); ++i) {
                const double saved = t.value(i, j);
                t.value(i, j) = saved + fd_step;
                const double up = loss();
                t.value(i, j) = saved - fd_step;
                const double down = loss();
                t.value(i, j) = saved;
                const double fd = (up - down) / (2.0 * fd_step);
                const double analytic = t.grad(i, j);
                diff_sq += (analytic - fd) * (analytic - fd);
                analytic_sq += analytic * analytic;
                fd_sq += fd * fd;
                if (std::abs(analytic - fd) > worst_entry_diff) {
                    worst_entry_diff = std::abs(analytic - fd);
                    report.worst_tensor = t.name;
                    report.worst_row = i;
                    report.worst_col = j;
                }
            }
        }
        const double rel = std::sqrt(diff_sq) /
                           std::max(std::sqrt(analytic_sq) + std::sqrt(fd_sq), 1e-12);
        report.max_rel_error = std::max(report.max_rel_error, rel);
    }
    return report;
}

} // namespace cosci::nn
