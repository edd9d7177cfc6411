#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "cosci/errors.hpp"
#include "cosci/metrics.hpp"
#include "cosci/rng.hpp"
#include "cosci/toygen.hpp"
#include "oracles.hpp"

using namespace cosci;
using namespace cosci::metrics;

namespace {

std::vector<double> random_sample(std::size_t n, Rng& rng, double scale = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal(0.0, scale);
    return v;
}

// dataset of pure sines with per-instance amplitudes, whole cycles in L
MTSDataset sine_dataset(const std::vector<double>& amp_ch1, const std::vector<double>& amp_ch2,
                        std::size_t length = 200, double freq = 0.01) {
    MTSDataset d(amp_ch1.size(), 2, length);
    for (std::size_t i = 0; i < amp_ch1.size(); ++i)
        for (std::size_t t = 0; t < length; ++t) {
            const double s = std::sin(2.0 * M_PI * freq * double(t));
            d.at(i, 0, t) = amp_ch1[i] * s;
            d.at(i, 1, t) = amp_ch2[i] * s;
        }
    return d;
}

} // namespace

TEST_CASE("wasserstein1d basic values") {
    std::vector<double> a{0.0}, b{1.0};
    CHECK(wasserstein1d(a, a) == 0.0);
    CHECK(wasserstein1d(a, b) == doctest::Approx(1.0));
    std::vector<double> c{0.0, 1.0}, d{0.5, 1.5};
    CHECK(wasserstein1d(c, d) == doctest::Approx(0.5));
    CHECK_THROWS_AS(wasserstein1d({}, b), DataError);
}

TEST_CASE("wasserstein1d matches the LP transport oracle") {
    Rng rng(314);
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t na = 2 + rng.uniform_index(28);
        const std::size_t nb = 2 + rng.uniform_index(28);
        const auto a = random_sample(na, rng, 2.0);
        const auto b = random_sample(nb, rng, 1.5);
        const double fast = wasserstein1d(a, b);
        const double lp = oracles::transport_wasserstein(a, b);
        CHECK(fast == doctest::Approx(lp).epsilon(1e-9));
    }
    // equal sizes reduce to the mean |sorted difference|
    for (int rep = 0; rep < 5; ++rep) {
        auto a = random_sample(100, rng);
        auto b = random_sample(100, rng);
        const double w = wasserstein1d(a, b);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        double direct = 0.0;
        for (std::size_t i = 0; i < 100; ++i) direct += std::abs(a[i] - b[i]);
        CHECK(w == doctest::Approx(direct / 100.0).epsilon(1e-12));
        CHECK(w == doctest::Approx(oracles::transport_wasserstein(a, b)).epsilon(1e-9));
    }
}

TEST_CASE("wasserstein1d is a metric on random triples") {
    Rng rng(99);
    for (int rep = 0; rep < 10; ++rep) {
        const auto a = random_sample(12, rng);
        const auto b = random_sample(17, rng);
        const auto c = random_sample(9, rng);
        const double ab = wasserstein1d(a, b);
        const double ba = wasserstein1d(b, a);
        const double ac = wasserstein1d(a, c);
        const double cb = wasserstein1d(c, b);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        CHECK(ab >= 0.0);
        CHECK(ab <= ac + cb + 1e-12);
    }
}

TEST_CASE("estimate_amplitude recovers sine amplitudes") {
    std::vector<double> sine(1000);
    for (std::size_t t = 0; t < sine.size(); ++t)
        sine[t] = 0.7 * std::sin(2.0 * M_PI * 0.01 * double(t) + 0.3);
    CHECK(estimate_amplitude(sine) == doctest::Approx(0.7).epsilon(0.01));

    std::vector<double> flat(50, 3.0);
    CHECK(estimate_amplitude(flat) == 0.0);
}

TEST_CASE("estimate_amplitude on noisy toy series averages near the truth") {
    ToySpec spec;
    spec.n_per_type = 1024;
    spec.length = 800;
    spec.seed = 3;
    auto [data, truth] = generate_toy(spec);
    double mean_est = 0.0;
    for (std::size_t i = 0; i < spec.n_per_type; ++i) // patient type 1: A ~ N(0.4, 0.05)
        mean_est += estimate_amplitude(data.series(i, 0));
    mean_est /= double(spec.n_per_type);
    CHECK(std::abs(mean_est - 0.4) < 0.03);
}

TEST_CASE("awd is zero on itself and tracks location shifts") {
    Rng rng(5);
    std::vector<double> amps(64), shifted(64);
    for (std::size_t i = 0; i < 64; ++i) {
        amps[i] = 0.4 + 0.05 * rng.normal();
        shifted[i] = amps[i] + 0.1;
    }
    MTSDataset real = sine_dataset(amps, amps);
    MTSDataset synth = sine_dataset(shifted, shifted);
    CHECK(awd(real, real) == 0.0);
    CHECK(awd(real, synth) == doctest::Approx(0.1).epsilon(1e-9));

    MTSDataset three(4, 3, 10);
    CHECK_THROWS_AS(awd(real, three), ShapeError);
}

TEST_CASE("aed measures distance to the slope-1 line") {
    std::vector<double> a1(16), a2(16);
    for (std::size_t i = 0; i < 16; ++i) {
        a1[i] = 0.4;
        a2[i] = 0.6;
    }
    MTSDataset d = sine_dataset(a1, a2);
    CHECK(aed(d) == doctest::Approx(0.2 / std::sqrt(2.0)).epsilon(1e-9));

    MTSDataset same = sine_dataset(a1, a1);
    CHECK(aed(same) == doctest::Approx(0.0));

    // invariant to instance order
    Rng rng(8);
    std::vector<double> ra(20), rb(20);
    for (std::size_t i = 0; i < 20; ++i) {
        ra[i] = 0.3 + 0.1 * rng.uniform01();
        rb[i] = 0.3 + 0.1 * rng.uniform01();
    }
    MTSDataset base = sine_dataset(ra, rb);
    std::vector<std::size_t> perm(20);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(perm);
    MTSDataset permuted = base.select_instances(perm);
    CHECK(aed(base) == doctest::Approx(aed(permuted)).epsilon(1e-12));

    MTSDataset three(4, 3, 10);
    CHECK_THROWS_AS(aed(three), ShapeError);
}

TEST_CASE("feature_vector fallbacks and analytic features") {
    SUBCASE("constant series") {
        std::vector<double> flat(64, 2.5);
        const auto f = feature_vector(flat);
        CHECK(f[0] == 2.5);  // mean
        CHECK(f[1] == 0.0);  // sd
        CHECK(f[10] == 0.0); // crossings
        CHECK(f[13] == 0.0); // entropy
    }
    SUBCASE("dominant frequency bin of a pure sine") {
        std::vector<double> sine(800);
        for (std::size_t t = 0; t < 800; ++t)
            sine[t] = std::sin(2.0 * M_PI * 0.01 * double(t));
        const auto f = feature_vector(sine);
        CHECK(f[6] == doctest::Approx(8.0)); // round(0.01 * 800)

        // independent DFT argmax oracle
        double best = -1.0;
        std::size_t best_k = 0;
        for (std::size_t k = 1; k <= 400; ++k) {
            std::complex<double> acc(0, 0);
            for (std::size_t t = 0; t < 800; ++t)
                acc += sine[t] * std::polar(1.0, -2.0 * M_PI * double(k) * double(t) / 800.0);
            if (std::norm(acc) > best) {
                best = std::norm(acc);
                best_k = k;
            }
        }
        CHECK(f[6] == doctest::Approx(double(best_k)));
    }
    SUBCASE("trend slope of a ramp matches least squares") {
        const double b = -0.37;
        std::vector<double> ramp(100);
        for (std::size_t t = 0; t < 100; ++t) ramp[t] = 1.2 + b * double(t);
        const auto f = feature_vector(ramp);
        CHECK(f[9] == doctest::Approx(b).epsilon(1e-9));
    }
    SUBCASE("length below 8 is rejected") {
        std::vector<double> tiny(7, 1.0);
        CHECK_THROWS_AS(feature_vector(tiny), ShapeError);
    }
}

TEST_CASE("feature_vector translation behaviour is per-feature exact") {
    Rng rng(21);
    std::vector<double> x = random_sample(128, rng);
    auto base = feature_vector(x);
    std::vector<double> shifted = x;
    for (double& v : shifted) v += 5.0;
    auto moved = feature_vector(shifted);

    CHECK(moved[0] == doctest::Approx(base[0] + 5.0).epsilon(1e-12)); // mean is covariant
    for (std::size_t k = 1; k < kNumFeatures; ++k) // everything else is invariant
        CHECK(moved[k] == doctest::Approx(base[k]).epsilon(1e-6));
}

TEST_CASE("feature correlation matrices and the real-set drop list") {
    // sines with varying amplitude: frequency-derived features are constant
    // across instances and must be dropped
    Rng rng(31);
    std::vector<double> amps(40);
    for (double& a : amps) a = 0.3 + 0.3 * rng.uniform01();
    MTSDataset d = sine_dataset(amps, amps, 200, 0.01);

    const auto keep = surviving_features(d, 0, 1);
    CHECK(keep.size() >= 2);
    FeatureCorrMatrix self = feature_corr_matrix(d, 0, 0);
    for (Eigen::Index k = 0; k < self.values.rows(); ++k)
        CHECK(self.values(k, k) == doctest::Approx(1.0).epsilon(1e-9));

    const auto& dropped = self.dropped;
    CHECK(std::find(dropped.begin(), dropped.end(), "dominant_freq_bin") != dropped.end());
    CHECK(std::find(dropped.begin(), dropped.end(), "acf_first_below_1e") != dropped.end());
    CHECK(std::find(dropped.begin(), dropped.end(), "hist10_entropy") != dropped.end());

    // channel 2 = 2 x channel 1: correlations are unchanged because every
    // bank feature is either scale-invariant or positively homogeneous
    MTSDataset scaled = d;
    for (std::size_t i = 0; i < d.n_instances(); ++i)
        for (std::size_t t = 0; t < d.length(); ++t) scaled.at(i, 1, t) = 2.0 * d.at(i, 0, t);
    FeatureCorrMatrix cross = feature_corr_matrix(scaled, 0, 1, keep);
    FeatureCorrMatrix self_keep = feature_corr_matrix(d, 0, 0, keep);
    CHECK((cross.values - self_keep.values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("matrix_similarity identities, reversal and the Kendall oracle") {
    Rng rng(47);
    auto random_matrix = [&](std::size_t f) {
        FeatureCorrMatrix m;
        m.features.resize(f, "");
        for (std::size_t i = 0; i < f; ++i) m.features[i] = "f" + std::to_string(i);
        m.values.resize(f, f);
        for (Eigen::Index r = 0; r < m.values.rows(); ++r)
            for (Eigen::Index c = 0; c < m.values.cols(); ++c)
                m.values(r, c) = rng.uniform(-1.0, 1.0);
        m.undefined.assign(f * f, 0);
        return m;
    };

    FeatureCorrMatrix m = random_matrix(5);
    const auto self = matrix_similarity(m, m);
    CHECK(self.mae == 0.0);
    CHECK(self.frobenius == 0.0);
    CHECK(self.spearman_rho == doctest::Approx(1.0));
    CHECK(self.kendall_tau == doctest::Approx(1.0));

    FeatureCorrMatrix negated = m;
    negated.values = -m.values;
    const auto reversed = matrix_similarity(m, negated);
    CHECK(reversed.spearman_rho == doctest::Approx(-1.0));
    CHECK(reversed.kendall_tau == doctest::Approx(-1.0));

    for (int rep = 0; rep < 20; ++rep) {
        FeatureCorrMatrix a = random_matrix(4);
        FeatureCorrMatrix b = random_matrix(4);
        const auto sim = matrix_similarity(a, b);
        std::vector<double> flat_a(a.values.data(), a.values.data() + 16);
        std::vector<double> flat_b(b.values.data(), b.values.data() + 16);
        // column-major vs row-major flattening is irrelevant to the oracle as
        // long as both use the same order; compare with matching order
        std::vector<double> ra, rb;
        for (Eigen::Index r = 0; r < 4; ++r)
            for (Eigen::Index c = 0; c < 4; ++c) {
                ra.push_back(a.values(r, c));
                rb.push_back(b.values(r, c));
            }
        CHECK(sim.kendall_tau == doctest::Approx(oracles::kendall_tau_pair_count(ra, rb))
                                     .epsilon(1e-15));
    }

    FeatureCorrMatrix other = random_matrix(6);
    CHECK_THROWS_AS(matrix_similarity(m, other), ShapeError);
}

TEST_CASE("kendall tau handles ties like the pair-count oracle") {
    std::vector<double> x{1, 1, 2, 3, 3, 3, 4};
    std::vector<double> y{2, 2, 1, 5, 5, 4, 7};
    CHECK(kendall_tau(x, y) ==
          doctest::Approx(oracles::kendall_tau_pair_count(x, y)).epsilon(1e-15));
}

TEST_CASE("pca projects exactly on rank-2 data") {
    Rng rng(66);
    const std::size_t n = 40, channels = 2, length = 30;
    const std::size_t dim = channels * length;

    // two fixed orthogonal directions
    Eigen::VectorXd v1(dim), v2(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        v1[k] = std::sin(0.1 * double(k + 1));
        v2[k] = std::cos(0.35 * double(k + 1));
    }
    v1.normalize();
    v2 -= v1 * v1.dot(v2);
    v2.normalize();

    MTSDataset d(n, channels, length);
    std::vector<Eigen::VectorXd> rows;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = rng.normal(0.0, 3.0);
        const double b = rng.normal(0.0, 1.0);
        Eigen::VectorXd row = a * v1 + b * v2;
        rows.push_back(row);
        for (std::size_t k = 0; k < dim; ++k)
            d.at(i, k / length, k % length) = row[k];
    }

    auto proj = pca_project({&d});
    REQUIRE(proj.sets.size() == 1);

    // reconstruction from the two components is exact on rank-2 data
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::VectorXd rebuilt = proj.mean + proj.components.col(0) * proj.sets[0][i][0] +
                                  proj.components.col(1) * proj.sets[0][i][1];
        worst = std::max(worst, (rebuilt - rows[i]).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-8);

    // projected variance equals the top-2 eigenvalue sum
    double var = 0.0;
    double mean0 = 0.0, mean1 = 0.0;
    for (const auto& p : proj.sets[0]) {
        mean0 += p[0];
        mean1 += p[1];
    }
    mean0 /= double(n);
    mean1 /= double(n);
    for (const auto& p : proj.sets[0])
        var += (p[0] - mean0) * (p[0] - mean0) + (p[1] - mean1) * (p[1] - mean1);
    var /= double(n - 1);
    CHECK(var == doctest::Approx(proj.eigenvalue_1 + proj.eigenvalue_2).epsilon(1e-8));
}

TEST_CASE("pca maps duplicated instances to duplicated points") {
    Rng rng(13);
    MTSDataset d(6, 1, 12);
    for (double& v : d.values()) v = rng.normal();
    for (std::size_t t = 0; t < 12; ++t) d.at(5, 0, t) = d.at(2, 0, t);
    auto proj = pca_project({&d});
    CHECK(proj.sets[0][5][0] == doctest::Approx(proj.sets[0][2][0]).epsilon(1e-12));
    CHECK(proj.sets[0][5][1] == doctest::Approx(proj.sets[0][2][1]).epsilon(1e-12));

    MTSDataset tiny(2, 1, 12);
    CHECK_THROWS_AS(pca_project({&tiny}), DataError);
}

TEST_CASE("tsne keeps far clusters separable and calibrates perplexity") {
    Rng rng(2023);
    const std::size_t per_cluster = 40;
    MTSDataset a(per_cluster, 1, 10), b(per_cluster, 1, 10);
    for (std::size_t i = 0; i < per_cluster; ++i)
        for (std::size_t t = 0; t < 10; ++t) {
            a.at(i, 0, t) = rng.normal(0.0, 0.3);
            b.at(i, 0, t) = rng.normal(20.0, 0.3);
        }

    TsneOptions options;
    options.perplexity = 10;
    options.iterations = 500;
    options.seed = 5;
    auto embedded = tsne_embed({&a, &b}, options);
    REQUIRE(embedded.size() == 2);

    // project onto the line between the embedded cluster means and check for
    // a clean margin
    double m_a[2] = {0, 0}, m_b[2] = {0, 0};
    for (const auto& p : embedded[0]) {
        m_a[0] += p[0];
        m_a[1] += p[1];
    }
    for (const auto& p : embedded[1]) {
        m_b[0] += p[0];
        m_b[1] += p[1];
    }
    const double dir[2] = {m_b[0] - m_a[0], m_b[1] - m_a[1]};
    double max_a = -1e30, min_b = 1e30;
    for (const auto& p : embedded[0]) max_a = std::max(max_a, p[0] * dir[0] + p[1] * dir[1]);
    for (const auto& p : embedded[1]) min_b = std::min(min_b, p[0] * dir[0] + p[1] * dir[1]);
    CHECK(max_a < min_b);

    // determinism
    auto again = tsne_embed({&a, &b}, options);
    CHECK(again[0][7][0] == embedded[0][7][0]);
    CHECK(again[1][3][1] == embedded[1][3][1]);

    // infeasible perplexity
    TsneOptions bad = options;
    bad.perplexity = 100.0;
    CHECK_THROWS_AS(tsne_embed({&a, &b}, bad), ConfigError);
}

TEST_CASE("tsne conditional affinities hit the target entropy") {
    Rng rng(17);
    const Eigen::Index n = 60;
    Eigen::MatrixXd x(n, 4);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < 4; ++j) x(i, j) = rng.normal();
    Eigen::MatrixXd d2(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) d2(i, j) = (x.row(i) - x.row(j)).squaredNorm();

    const double perplexity = 12.0;
    const Eigen::MatrixXd p = tsne_conditional_affinities(d2, perplexity);
    for (Eigen::Index i = 0; i < n; ++i) {
        double entropy = 0.0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (p(i, j) > 0.0) entropy -= p(i, j) * std::log(p(i, j));
        CHECK(entropy == doctest::Approx(std::log(perplexity)).epsilon(1e-4));
        CHECK(p.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}
