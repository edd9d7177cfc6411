#include "cosci/metrics.hpp"

#include <cmath>

#include "cosci/errors.hpp"
#include "cosci/rng.hpp"

namespace cosci::metrics {

namespace {

Eigen::MatrixXd pooled_flat(const std::vector<const MTSDataset*>& data_sets) {
    std::size_t total = 0;
    for (const MTSDataset* set : data_sets) total += set->n_instances();
    const MTSDataset& first = *data_sets.front();
    const std::size_t d = first.n_channels() * first.length();
    Eigen::MatrixXd x(total, d);
    std::size_t row = 0;
    for (const MTSDataset* set : data_sets) {
        if (set->n_channels() != first.n_channels() || set->length() != first.length())
            throw ShapeError("all datasets must share channel count and length");
        for (std::size_t i = 0; i < set->n_instances(); ++i) {
            const auto values = set->instance_row(i);
            for (std::size_t k = 0; k < d; ++k)
                x(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k)) = values[k];
            ++row;
        }
    }
    return x;
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& x) {
    const Eigen::VectorXd norms = x.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = -2.0 * x * x.transpose();
    d2.colwise() += norms;
    d2.rowwise() += norms.transpose();
    d2.diagonal().setZero();
    return d2.cwiseMax(0.0);
}

} // namespace

Eigen::MatrixXd tsne_conditional_affinities(const Eigen::MatrixXd& squared_distances,
                                            double perplexity) {
    const Eigen::Index n = squared_distances.rows();
    if (squared_distances.cols() != n) throw ShapeError("distance matrix must be square");
    const double target_entropy = std::log(perplexity);

    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double beta = 1.0;
        double beta_min = -std::numeric_limits<double>::infinity();
        double beta_max = std::numeric_limits<double>::infinity();

        Eigen::VectorXd row(n);
        for (int iter = 0; iter < 200; ++iter) {
            // H(P_i) and P_{j|i} at the current bandwidth
            double sum = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                row[j] = j == i ? 0.0 : std::exp(-beta * squared_distances(i, j));
                sum += row[j];
            }
            double entropy = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (row[j] <= 0.0) continue;
                const double pj = row[j] / sum;
                entropy -= pj * std::log(pj);
            }
            const double diff = entropy - target_entropy;
            if (std::abs(diff) < 1e-5) break;
            if (diff > 0.0) { // entropy too high: sharpen
                beta_min = beta;
                beta = std::isinf(beta_max) ? beta * 2.0 : (beta + beta_max) / 2.0;
            } else {
                beta_max = beta;
                beta = std::isinf(beta_min) ? beta / 2.0 : (beta + beta_min) / 2.0;
            }
        }
        const double sum = row.sum();
        for (Eigen::Index j = 0; j < n; ++j) p(i, j) = row[j] / sum;
    }
    return p;
}

std::vector<Points2d> tsne_embed(const std::vector<const MTSDataset*>& data_sets,
                                 const TsneOptions& options) {
    if (data_sets.empty()) throw ShapeError("tsne_embed needs at least one dataset");
    const Eigen::MatrixXd x = pooled_flat(data_sets);
    const Eigen::Index n = x.rows();
    if (static_cast<double>(n) < 3.0 * options.perplexity)
        throw ConfigError("perplexity infeasible: need at least 3 * perplexity instances");

    // symmetrized affinities with the reference floor
    const Eigen::MatrixXd cond = tsne_conditional_affinities(squared_distances(x),
                                                             options.perplexity);
    Eigen::MatrixXd p = (cond + cond.transpose()) / (2.0 * static_cast<double>(n));
    p = p.cwiseMax(1e-12);
    p.diagonal().setZero();

    const std::size_t stop_lying =
        std::min<std::size_t>(250, options.iterations);
    const std::size_t momentum_switch = std::min<std::size_t>(250, options.iterations);
    p *= options.early_exaggeration;

    Rng rng(derive_seed(options.seed, "tsne-init"));
    Eigen::MatrixXd y(n, 2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (int c = 0; c < 2; ++c) y(i, c) = rng.normal(0.0, 1e-4);

    Eigen::MatrixXd velocity = Eigen::MatrixXd::Zero(n, 2);
    Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, 2);
    Eigen::MatrixXd grad(n, 2);

    for (std::size_t iter = 0; iter < options.iterations; ++iter) {
        if (iter == stop_lying) p /= options.early_exaggeration;
        const double momentum = iter < momentum_switch ? 0.5 : 0.8;

        // q_ij ~ (1 + ||y_i - y_j||^2)^-1
        double z = 0.0;
        Eigen::MatrixXd w(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            w(i, i) = 0.0;
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double dx = y(i, 0) - y(j, 0);
                const double dy = y(i, 1) - y(j, 1);
                const double weight = 1.0 / (1.0 + dx * dx + dy * dy);
                w(i, j) = weight;
                w(j, i) = weight;
                z += 2.0 * weight;
            }
        }

        grad.setZero();
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i == j) continue;
                const double q = w(i, j) / z;
                const double mult = 4.0 * (p(i, j) - q) * w(i, j);
                grad(i, 0) += mult * (y(i, 0) - y(j, 0));
                grad(i, 1) += mult * (y(i, 1) - y(j, 1));
            }
        }

        // delta-bar-delta gains as in the reference implementation
        for (Eigen::Index i = 0; i < n; ++i) {
            for (int c = 0; c < 2; ++c) {
                const bool same_sign = (grad(i, c) > 0.0) == (velocity(i, c) > 0.0);
                gains(i, c) = same_sign ? gains(i, c) * 0.8 : gains(i, c) + 0.2;
                gains(i, c) = std::max(gains(i, c), 0.01);
                velocity(i, c) = momentum * velocity(i, c) -
                                 options.learning_rate * gains(i, c) * grad(i, c);
                y(i, c) += velocity(i, c);
            }
        }
        y.rowwise() -= y.colwise().mean();
    }

    std::vector<Points2d> out;
    std::size_t row = 0;
    for (const MTSDataset* set : data_sets) {
        Points2d points(set->n_instances());
        for (std::size_t i = 0; i < set->n_instances(); ++i) {
            points[i] = {y(static_cast<Eigen::Index>(row), 0),
                         y(static_cast<Eigen::Index>(row), 1)};
            ++row;
        }
        out.push_back(std::move(points));
    }
    return out;
}

} // namespace cosci::metrics
