#include "cosci/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "cosci/errors.hpp"

namespace cosci::metrics {

// ---------------------------------------------------------------------------
// Wasserstein / amplitudes
// ---------------------------------------------------------------------------

double wasserstein1d(std::span<const double> sample_a, std::span<const double> sample_b) {
    if (sample_a.empty() || sample_b.empty())
        throw DataError("wasserstein1d requires nonempty samples");

    std::vector<double> a(sample_a.begin(), sample_a.end());
    std::vector<double> b(sample_b.begin(), sample_b.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    // integral of |F_a - F_b| over the merged support
    std::vector<double> all;
    all.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(all));

    double distance = 0.0;
    std::size_t ia = 0, ib = 0;
    for (std::size_t k = 0; k + 1 < all.size(); ++k) {
        while (ia < a.size() && a[ia] <= all[k]) ++ia;
        while (ib < b.size() && b[ib] <= all[k]) ++ib;
        const double cdf_a = static_cast<double>(ia) / static_cast<double>(a.size());
        const double cdf_b = static_cast<double>(ib) / static_cast<double>(b.size());
        distance += std::abs(cdf_a - cdf_b) * (all[k + 1] - all[k]);
    }
    return distance;
}

double estimate_amplitude(std::span<const double> series) {
    if (series.size() < 2) throw ShapeError("amplitude estimate needs length >= 2");
    const double n = static_cast<double>(series.size());
    double sum = 0.0;
    for (double v : series) sum += v;
    const double mean = sum / n;
    double sq = 0.0;
    for (double v : series) sq += (v - mean) * (v - mean);
    return std::sqrt(2.0 * sq / n);
}

std::vector<double> channel_amplitudes(const MTSDataset& data, std::size_t channel) {
    if (channel >= data.n_channels()) throw ShapeError("channel index out of range");
    std::vector<double> out(data.n_instances());
    for (std::size_t i = 0; i < data.n_instances(); ++i)
        out[i] = estimate_amplitude(data.series(i, channel));
    return out;
}

std::vector<double> per_channel_amplitude_wd(const MTSDataset& real, const MTSDataset& synth) {
    if (real.n_channels() != synth.n_channels())
        throw ShapeError("channel count mismatch between real and synthetic data");
    std::vector<double> out(real.n_channels());
    for (std::size_t c = 0; c < real.n_channels(); ++c)
        out[c] = wasserstein1d(channel_amplitudes(real, c), channel_amplitudes(synth, c));
    return out;
}

double awd(const MTSDataset& real, const MTSDataset& synth) {
    const auto wds = per_channel_amplitude_wd(real, synth);
    return std::accumulate(wds.begin(), wds.end(), 0.0) / static_cast<double>(wds.size());
}

double aed(const MTSDataset& synth) {
    if (synth.n_channels() != 2) throw ShapeError("aed is defined for two-channel datasets");
    const auto a1 = channel_amplitudes(synth, 0);
    const auto a2 = channel_amplitudes(synth, 1);
    double total = 0.0;
    for (std::size_t i = 0; i < a1.size(); ++i) total += std::abs(a1[i] - a2[i]);
    return total / (std::sqrt(2.0) * static_cast<double>(a1.size()));
}

// ---------------------------------------------------------------------------
// Feature bank
// ---------------------------------------------------------------------------

const std::array<std::string, kNumFeatures>& feature_names() {
    static const std::array<std::string, kNumFeatures> names = {
        "mean",
        "stdev",
        "skewness",
        "kurtosis_excess",
        "acf_lag1",
        "acf_first_below_1e",
        "dominant_freq_bin",
        "spectral_centroid",
        "amplitude",
        "trend_slope",
        "mean_crossing_rate",
        "longest_run_above_mean",
        "hist5_mode_bin",
        "hist10_entropy",
        "high_diff_fraction",
    };
    return names;
}

namespace {

// power spectrum |DFT|^2 of the mean-removed series for bins 1..L/2
std::vector<double> half_spectrum(std::span<const double> x, double mean) {
    const std::size_t n = x.size();
    std::vector<double> power(n / 2 + 1, 0.0);
    for (std::size_t k = 1; k <= n / 2; ++k) {
        std::complex<double> acc(0.0, 0.0);
        const double w = -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        for (std::size_t t = 0; t < n; ++t)
            acc += (x[t] - mean) * std::polar(1.0, w * static_cast<double>(t));
        power[k] = std::norm(acc);
    }
    return power;
}

} // namespace

std::array<double, kNumFeatures> feature_vector(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 8) throw ShapeError("feature_vector requires length >= 8");
    const double nd = static_cast<double>(n);

    double sum = 0.0;
    for (double v : series) sum += v;
    const double mean = sum / nd;

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : series) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= nd;
    m3 /= nd;
    m4 /= nd;
    const double sd = std::sqrt(m2);
    const bool constant = sd == 0.0;

    std::array<double, kNumFeatures> f{};
    f[0] = mean;
    f[1] = sd;
    f[2] = constant ? 0.0 : m3 / (sd * sd * sd);
    f[3] = constant ? 0.0 : m4 / (m2 * m2) - 3.0;

    // autocorrelation features
    auto acf = [&](std::size_t lag) {
        double acc = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t)
            acc += (series[t] - mean) * (series[t + lag] - mean);
        return acc / (m2 * nd);
    };
    f[4] = constant ? 0.0 : acf(1);
    if (constant) {
        f[5] = 0.0;
    } else {
        const double threshold = 1.0 / M_E;
        std::size_t lag = n - 1;
        for (std::size_t tau = 1; tau < n; ++tau) {
            if (acf(tau) < threshold) {
                lag = tau;
                break;
            }
        }
        f[5] = static_cast<double>(lag);
    }

    // spectral features on the mean-removed series
    if (constant) {
        f[6] = 0.0;
        f[7] = 0.0;
    } else {
        const auto power = half_spectrum(series, mean);
        double best = 0.0, total = 0.0, weighted = 0.0;
        std::size_t best_k = 0;
        for (std::size_t k = 1; k < power.size(); ++k) {
            total += power[k];
            weighted += static_cast<double>(k) * power[k];
            if (power[k] > best) {
                best = power[k];
                best_k = k;
            }
        }
        f[6] = static_cast<double>(best_k);
        f[7] = total > 0.0 ? weighted / total : 0.0;
    }

    f[8] = std::sqrt(2.0) * sd;

    // least-squares trend slope against t = 0..n-1
    const double t_mean = (nd - 1.0) / 2.0;
    double s_tt = 0.0, s_tx = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double dt = static_cast<double>(t) - t_mean;
        s_tt += dt * dt;
        s_tx += dt * (series[t] - mean);
    }
    f[9] = s_tx / s_tt;

    // crossings and runs about the mean
    std::size_t crossings = 0, run = 0, longest = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (t + 1 < n && (series[t] - mean) * (series[t + 1] - mean) < 0.0) ++crossings;
        if (series[t] > mean) {
            ++run;
            longest = std::max(longest, run);
        } else {
            run = 0;
        }
    }
    f[10] = static_cast<double>(crossings) / nd;
    f[11] = static_cast<double>(longest) / nd;

    // histogram features
    const auto [min_it, max_it] = std::minmax_element(series.begin(), series.end());
    const double lo = *min_it, hi = *max_it;
    if (hi == lo) {
        f[12] = 0.0;
        f[13] = 0.0;
    } else {
        auto bin_of = [&](double v, std::size_t bins) {
            auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
            return std::min(b, bins - 1);
        };
        std::array<std::size_t, 5> hist5{};
        std::array<std::size_t, 10> hist10{};
        for (double v : series) {
            ++hist5[bin_of(v, 5)];
            ++hist10[bin_of(v, 10)];
        }
        f[12] = static_cast<double>(
            std::max_element(hist5.begin(), hist5.end()) - hist5.begin());
        double entropy = 0.0;
        for (std::size_t count : hist10) {
            if (count == 0) continue;
            const double p = static_cast<double>(count) / nd;
            entropy -= p * std::log(p);
        }
        f[13] = entropy;
    }

    // fraction of |first differences| above their own sd
    double d_sum = 0.0, d_sq = 0.0;
    for (std::size_t t = 0; t + 1 < n; ++t) {
        const double d = std::abs(series[t + 1] - series[t]);
        d_sum += d;
        d_sq += d * d;
    }
    const double dn = nd - 1.0;
    const double d_mean = d_sum / dn;
    const double d_sd = std::sqrt(std::max(0.0, d_sq / dn - d_mean * d_mean));
    if (d_sd == 0.0) {
        f[14] = 0.0;
    } else {
        std::size_t above = 0;
        for (std::size_t t = 0; t + 1 < n; ++t)
            if (std::abs(series[t + 1] - series[t]) > d_sd) ++above;
        f[14] = static_cast<double>(above) / dn;
    }
    return f;
}

// ---------------------------------------------------------------------------
// Feature correlation matrices
// ---------------------------------------------------------------------------

namespace {

// N x F feature table of one channel
Eigen::MatrixXd feature_table(const MTSDataset& data, std::size_t channel) {
    Eigen::MatrixXd table(data.n_instances(), kNumFeatures);
    for (std::size_t i = 0; i < data.n_instances(); ++i) {
        const auto f = feature_vector(data.series(i, channel));
        for (std::size_t k = 0; k < kNumFeatures; ++k)
            table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = f[k];
    }
    return table;
}

// Pearson correlation of two columns; false when undefined (zero variance)
std::pair<double, bool> pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double n = static_cast<double>(x.size());
    const double mx = x.mean(), my = y.mean();
    const double vx = (x.array() - mx).square().sum() / n;
    const double vy = (y.array() - my).square().sum() / n;
    if (vx <= 0.0 || vy <= 0.0) return {0.0, false};
    const double cov = ((x.array() - mx) * (y.array() - my)).sum() / n;
    return {cov / std::sqrt(vx * vy), true};
}

} // namespace

std::vector<std::size_t> surviving_features(const MTSDataset& data, std::size_t channel_a,
                                            std::size_t channel_b) {
    data.validate();
    const Eigen::MatrixXd ta = feature_table(data, channel_a);
    const Eigen::MatrixXd tb = feature_table(data, channel_b);
    // "constant" must tolerate float noise: a feature whose spread is below
    // 1e-9 relative to its magnitude carries no usable variation
    auto varies = [&](const Eigen::MatrixXd& table, std::size_t k) {
        const auto col = table.col(static_cast<Eigen::Index>(k));
        const double mean = col.mean();
        const double sd =
            std::sqrt((col.array() - mean).square().sum() / static_cast<double>(col.size()));
        return sd > 1e-9 * (1.0 + std::abs(mean));
    };
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < kNumFeatures; ++k)
        if (varies(ta, k) && varies(tb, k)) keep.push_back(k);
    return keep;
}

FeatureCorrMatrix feature_corr_matrix(const MTSDataset& data, std::size_t channel_a,
                                      std::size_t channel_b) {
    return feature_corr_matrix(data, channel_a, channel_b,
                               surviving_features(data, channel_a, channel_b));
}

FeatureCorrMatrix feature_corr_matrix(const MTSDataset& data, std::size_t channel_a,
                                      std::size_t channel_b,
                                      const std::vector<std::size_t>& keep) {
    data.validate();
    if (data.n_instances() < 3)
        throw DataError("feature correlations need at least 3 instances");
    if (channel_a >= data.n_channels() || channel_b >= data.n_channels())
        throw ShapeError("channel index out of range");
    if (keep.size() < 2) throw DataError("fewer than 2 surviving features");

    const Eigen::MatrixXd ta = feature_table(data, channel_a);
    const Eigen::MatrixXd tb = feature_table(data, channel_b);

    FeatureCorrMatrix out;
    out.channel_a = channel_a;
    out.channel_b = channel_b;
    const auto& names = feature_names();
    std::vector<bool> kept(kNumFeatures, false);
    for (std::size_t k : keep) {
        if (k >= kNumFeatures) throw ShapeError("bad feature index in keep list");
        kept[k] = true;
        out.features.push_back(names[k]);
    }
    for (std::size_t k = 0; k < kNumFeatures; ++k)
        if (!kept[k]) out.dropped.push_back(names[k]);

    const auto f_count = static_cast<Eigen::Index>(keep.size());
    out.values.resize(f_count, f_count);
    out.undefined.assign(static_cast<std::size_t>(f_count * f_count), 0);
    for (Eigen::Index r = 0; r < f_count; ++r) {
        for (Eigen::Index c = 0; c < f_count; ++c) {
            const auto [rho, ok] =
                pearson(ta.col(static_cast<Eigen::Index>(keep[static_cast<std::size_t>(r)])),
                        tb.col(static_cast<Eigen::Index>(keep[static_cast<std::size_t>(c)])));
            out.values(r, c) = rho;
            if (!ok) out.undefined[static_cast<std::size_t>(r * f_count + c)] = 1;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rank correlations and matrix similarity
// ---------------------------------------------------------------------------

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) throw ShapeError("spearman: length mismatch");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double cov = 0, vx = 0, vy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cov += (rx[i] - mx) * (ry[i] - my);
        vx += (rx[i] - mx) * (rx[i] - mx);
        vy += (ry[i] - my) * (ry[i] - my);
    }
    if (vx == 0.0 || vy == 0.0) return 0.0;
    return cov / std::sqrt(vx * vy);
}

namespace {

// merge sort counting inversions in-place
long long count_inversions(std::vector<double>& v, std::vector<double>& scratch,
                           std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = (lo + hi) / 2;
    long long count = count_inversions(v, scratch, lo, mid) +
                      count_inversions(v, scratch, mid, hi);
    std::size_t a = lo, b = mid, out = lo;
    while (a < mid && b < hi) {
        if (v[b] < v[a]) {
            count += static_cast<long long>(mid - a);
            scratch[out++] = v[b++];
        } else {
            scratch[out++] = v[a++];
        }
    }
    while (a < mid) scratch[out++] = v[a++];
    while (b < hi) scratch[out++] = v[b++];
    std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
              scratch.begin() + static_cast<std::ptrdiff_t>(hi),
              v.begin() + static_cast<std::ptrdiff_t>(lo));
    return count;
}

long long tie_pairs(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    long long pairs = 0;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
        const long long t = static_cast<long long>(j - i + 1);
        pairs += t * (t - 1) / 2;
        i = j + 1;
    }
    return pairs;
}

} // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ShapeError("kendall: length mismatch");
    const std::size_t n = x.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    const long long total = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;

    // tie counts: in x, in y, and jointly
    long long ties_x = 0, ties_joint = 0;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
            const long long t = static_cast<long long>(j - i + 1);
            ties_x += t * (t - 1) / 2;
            std::size_t a = i;
            while (a <= j) {
                std::size_t b = a;
                while (b + 1 <= j && y[order[b + 1]] == y[order[a]]) ++b;
                const long long tj = static_cast<long long>(b - a + 1);
                ties_joint += tj * (tj - 1) / 2;
                a = b + 1;
            }
            i = j + 1;
        }
    }
    std::vector<double> y_sorted_by_x(n);
    for (std::size_t i = 0; i < n; ++i) y_sorted_by_x[i] = y[order[i]];
    const long long ties_y = tie_pairs(y_sorted_by_x);

    std::vector<double> scratch(n);
    const long long discordant = count_inversions(y_sorted_by_x, scratch, 0, n);

    const double denom = std::sqrt(static_cast<double>(total - ties_x)) *
                         std::sqrt(static_cast<double>(total - ties_y));
    if (denom == 0.0) return 0.0;
    const long long con_minus_dis = total - ties_x - ties_y + ties_joint - 2 * discordant;
    return static_cast<double>(con_minus_dis) / denom;
}

MatrixSimilarity matrix_similarity(const FeatureCorrMatrix& real_m,
                                   const FeatureCorrMatrix& synth_m) {
    if (real_m.features != synth_m.features)
        throw ShapeError("matrix_similarity requires identical feature lists");
    if (real_m.values.rows() != synth_m.values.rows() ||
        real_m.values.cols() != synth_m.values.cols())
        throw ShapeError("matrix_similarity shape mismatch");

    const Eigen::MatrixXd diff = real_m.values - synth_m.values;
    MatrixSimilarity out;
    out.mae = diff.cwiseAbs().mean();
    out.frobenius = diff.norm();

    std::vector<double> flat_real, flat_synth;
    flat_real.reserve(static_cast<std::size_t>(real_m.values.size()));
    flat_synth.reserve(static_cast<std::size_t>(real_m.values.size()));
    for (Eigen::Index r = 0; r < real_m.values.rows(); ++r) {
        for (Eigen::Index c = 0; c < real_m.values.cols(); ++c) {
            flat_real.push_back(real_m.values(r, c));
            flat_synth.push_back(synth_m.values(r, c));
        }
    }
    out.spearman_rho = spearman_rho(flat_real, flat_synth);
    out.kendall_tau = kendall_tau(flat_real, flat_synth);
    return out;
}

// ---------------------------------------------------------------------------
// PCA
// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXd flatten_instances(const MTSDataset& data) {
    const std::size_t d = data.n_channels() * data.length();
    Eigen::MatrixXd out(data.n_instances(), d);
    for (std::size_t i = 0; i < data.n_instances(); ++i) {
        const auto row = data.instance_row(i);
        for (std::size_t k = 0; k < d; ++k)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k];
    }
    return out;
}

} // namespace

PcaProjection pca_project(const std::vector<const MTSDataset*>& data_sets) {
    if (data_sets.empty()) throw ShapeError("pca_project needs at least one dataset");
    const MTSDataset& real = *data_sets.front();
    if (real.n_instances() < 3) throw DataError("PCA needs at least 3 instances");
    for (const MTSDataset* set : data_sets)
        if (set->n_channels() != real.n_channels() || set->length() != real.length())
            throw ShapeError("all datasets must share channel count and length");

    const Eigen::MatrixXd x = flatten_instances(real);
    const Eigen::VectorXd mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
    const Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(x.rows() - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw NumericError("PCA eigendecomposition failed");
    const Eigen::Index d = cov.rows();

    PcaProjection out;
    out.mean = mean;
    out.components.resize(d, 2);
    // eigenvalues come out ascending; take the top two, sign-fixed
    out.eigenvalue_1 = solver.eigenvalues()(d - 1);
    out.eigenvalue_2 = solver.eigenvalues()(d - 2);
    out.components.col(0) = solver.eigenvectors().col(d - 1);
    out.components.col(1) = solver.eigenvectors().col(d - 2);
    for (int c = 0; c < 2; ++c) {
        Eigen::Index argmax = 0;
        out.components.col(c).cwiseAbs().maxCoeff(&argmax);
        if (out.components(argmax, c) < 0.0) out.components.col(c) = -out.components.col(c);
    }

    for (const MTSDataset* set : data_sets) {
        const Eigen::MatrixXd flat = flatten_instances(*set);
        const Eigen::MatrixXd proj =
            (flat.rowwise() - mean.transpose()) * out.components;
        Points2d points(set->n_instances());
        for (std::size_t i = 0; i < set->n_instances(); ++i)
            points[i] = {proj(static_cast<Eigen::Index>(i), 0),
                         proj(static_cast<Eigen::Index>(i), 1)};
        out.sets.push_back(std::move(points));
    }
    return out;
}

} // namespace cosci::metrics
