#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bioen/sampler.hpp"

using namespace bioen;

TEST_CASE("log_density basics") {
    const EnsembleSpec j1{Family::Jacobi, 0.7, 2.0, 1};
    CHECK(log_density(j1, {0.4}) == Catch::Approx(0.7 * std::log(0.4)).epsilon(1e-14));

    const EnsembleSpec j2{Family::Jacobi, 0.0, 1.0, 2};
    CHECK(log_density(j2, {0.2, 0.7}) == Catch::Approx(2.0 * std::log(0.5)).epsilon(1e-13));

    const EnsembleSpec j3{Family::Jacobi, 1.0, 2.0, 3};
    const double a = log_density(j3, {0.2, 0.5, 0.8});
    const double b = log_density(j3, {0.8, 0.2, 0.5});
    CHECK(a == Catch::Approx(b).epsilon(1e-13));

    CHECK(log_density(j2, {0.4, 0.4}) == -std::numeric_limits<double>::infinity());
    CHECK(log_density(j2, {-0.1, 0.4}) == -std::numeric_limits<double>::infinity());

    // Hermite density invariant under global sign flip
    const EnsembleSpec h{Family::Hermite, 0.5, 2.0, 3};
    CHECK(log_density(h, {-1.2, 0.3, 0.9}) == Catch::Approx(log_density(h, {1.2, -0.3, -0.9})).epsilon(1e-13));
}

TEST_CASE("incremental update consistency") {
    std::mt19937 gen(77);
    std::uniform_real_distribution<double> u01(0.05, 0.95);
    for (Family f : {Family::Jacobi, Family::Laguerre, Family::Hermite}) {
        const EnsembleSpec spec{f, 0.8, 1.7, 4};
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> pts(4);
            for (auto& p : pts) {
                const double q = u01(gen);
                p = f == Family::Jacobi ? q : f == Family::Laguerre ? 3.0 * q : 4.0 * (q - 0.5);
            }
            const int i = static_cast<int>(gen() % 4);
            const double q = u01(gen);
            const double xn = f == Family::Jacobi ? q : f == Family::Laguerre ? 3.0 * q : 4.0 * (q - 0.5);
            const double before = log_density(spec, pts);
            const double delta = log_density_delta(spec, pts, i, xn);
            auto moved = pts;
            moved[static_cast<std::size_t>(i)] = xn;
            const double after = log_density(spec, moved);
            CHECK(delta == Catch::Approx(after - before).margin(1e-10));
        }
    }
}

TEST_CASE("determinism: fixed seed gives bit-identical batches") {
    const EnsembleSpec spec{Family::Jacobi, 1.0, 2.0, 3};
    ChainConfig cfg;
    cfg.steps = 4000;
    cfg.burn_in = 1000;
    cfg.thin = 3;
    cfg.seed = 7;
    cfg.chains = 2;
    const auto b1 = sample(spec, cfg);
    const auto b2 = sample(spec, cfg);
    REQUIRE(b1.configurations.size() == b2.configurations.size());
    for (std::size_t i = 0; i < b1.configurations.size(); ++i)
        for (std::size_t k = 0; k < b1.configurations[i].size(); ++k)
            CHECK(b1.configurations[i][k] == b2.configurations[i][k]);
    CHECK(b1.acceptance_rate == b2.acceptance_rate);
    // configurations sorted ascending and inside the interval
    for (const auto& c : b1.configurations) {
        CHECK(std::is_sorted(c.begin(), c.end()));
        for (double x : c) {
            CHECK(x > 0.0);
            CHECK(x < 1.0);
        }
    }
}

TEST_CASE("N=1 Jacobi alpha=0 samples are uniform (KS test)") {
    const EnsembleSpec spec{Family::Jacobi, 0.0, 1.0, 1};
    ChainConfig cfg;
    cfg.thin = 20;
    cfg.burn_in = 2000;
    cfg.steps = cfg.burn_in + 100000 * cfg.thin;
    cfg.seed = 2025;
    cfg.chains = 1;
    cfg.proposal_scale = 0.6;
    const auto batch = sample(spec, cfg);
    std::vector<double> xs;
    xs.reserve(batch.configurations.size());
    for (const auto& c : batch.configurations) xs.push_back(c[0]);
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        ks = std::max(ks, std::fabs((i + 1.0) / n - xs[i]));
        ks = std::max(ks, std::fabs(xs[i] - i / n));
    }
    CHECK(xs.size() == 100000);
    CHECK(ks < 1.63 / std::sqrt(n)); // 1% critical value
}

TEST_CASE("N=1 Laguerre mean matches Gamma(alpha+1) within 3 SE") {
    const double alpha = 0.7;
    const EnsembleSpec spec{Family::Laguerre, alpha, 1.0, 1};
    ChainConfig cfg;
    cfg.thin = 10;
    cfg.burn_in = 2000;
    cfg.steps = cfg.burn_in + 50000 * cfg.thin;
    cfg.seed = 11;
    cfg.chains = 2;
    const auto batch = sample(spec, cfg);
    // batch means across 20 segments for an autocorrelation-honest SE
    const std::size_t nseg = 20;
    const std::size_t seg = batch.configurations.size() / nseg;
    std::vector<double> means(nseg, 0.0);
    for (std::size_t s = 0; s < nseg; ++s) {
        for (std::size_t i = s * seg; i < (s + 1) * seg; ++i) means[s] += batch.configurations[i][0];
        means[s] /= static_cast<double>(seg);
    }
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= static_cast<double>(nseg);
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= static_cast<double>(nseg - 1);
    const double se = std::sqrt(var / static_cast<double>(nseg));
    CHECK(std::fabs(mean - (alpha + 1.0)) <= 3.0 * se);
}

TEST_CASE("detailed balance smoke test on discretized N=1 chain") {
    const EnsembleSpec spec{Family::Jacobi, 0.0, 1.0, 1};
    ChainConfig cfg;
    cfg.thin = 1;
    cfg.burn_in = 1000;
    cfg.steps = cfg.burn_in + 200000;
    cfg.seed = 5;
    cfg.chains = 1;
    cfg.proposal_scale = 0.4;
    const auto batch = sample(spec, cfg);
    const int cells = 6;
    std::vector<std::vector<long>> F(cells, std::vector<long>(cells, 0));
    for (std::size_t i = 1; i < batch.configurations.size(); ++i) {
        const int a = std::min(cells - 1, static_cast<int>(batch.configurations[i - 1][0] * cells));
        const int b = std::min(cells - 1, static_cast<int>(batch.configurations[i][0] * cells));
        ++F[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    for (int a = 0; a < cells; ++a)
        for (int b = a + 1; b < cells; ++b) {
            const double fab = static_cast<double>(F[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
            const double fba = static_cast<double>(F[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]);
            if (fab + fba < 50) continue;
            const double z = std::fabs(fab - fba) / std::sqrt(fab + fba);
            CHECK(z < 5.0);
        }
}

TEST_CASE("empirical_rho1: N=1 Laguerre alpha=0 matches exp(-x)") {
    const EnsembleSpec spec{Family::Laguerre, 0.0, 1.0, 1};
    ChainConfig cfg;
    cfg.thin = 5;
    cfg.burn_in = 2000;
    cfg.steps = cfg.burn_in + 50000 * cfg.thin;
    cfg.seed = 17;
    cfg.chains = 4;
    const auto batch = sample(spec, cfg);
    const auto h = empirical_rho1(batch, 12, 0.0, 4.0);
    int ok = 0, total = 0;
    for (std::size_t b = 0; b < h.centers.size(); ++b) {
        const double pred = std::exp(-h.centers[b]);
        // bin-averaged prediction differs from midpoint value by O(width^2); use 3 sigma + small bias slack
        const double sigma = std::max(h.sigma_batch[b], h.sigma_poisson[b]);
        ++total;
        if (std::fabs(h.densities[b] - pred) <= 3.0 * sigma + 2e-3) ++ok;
    }
    CHECK(ok >= total - 1);
    CHECK_THROWS_AS(empirical_rho1(batch, 4, 0.0, 4.0), std::domain_error);
}

TEST_CASE("empirical_rho1 mass and determinantal prediction for N=3 Jacobi") {
    const EnsembleSpec spec{Family::Jacobi, 1.0, 2.0, 3};
    ChainConfig cfg;
    cfg.thin = 5;
    cfg.burn_in = 5000;
    cfg.steps = cfg.burn_in + 40000 * cfg.thin;
    cfg.seed = 23;
    cfg.chains = 4;
    const auto batch = sample(spec, cfg);
    const auto h = empirical_rho1(batch, 20, 0.0, 1.0);
    double mass = 0.0;
    for (double d : h.densities) mass += d * h.bin_width;
    CHECK(mass == Catch::Approx(3.0).margin(1e-9)); // all points lie in (0,1)
    int ok = 0;
    for (std::size_t b = 0; b < h.centers.size(); ++b) {
        const double x = h.centers[b];
        const double pred = weight(spec, x) * kernel_value(spec, x, x);
        const double sigma = std::max(h.sigma_batch[b], h.sigma_poisson[b]);
        if (std::fabs(h.densities[b] - pred) <= 3.0 * sigma + 0.01) ++ok;
    }
    CHECK(ok >= 18); // >= 90% of 20 bins
}

TEST_CASE("empirical_rho2 symmetry, repulsion, prediction") {
    const EnsembleSpec spec{Family::Jacobi, 1.0, 2.0, 3};
    ChainConfig cfg;
    cfg.thin = 5;
    cfg.burn_in = 5000;
    cfg.steps = cfg.burn_in + 40000 * cfg.thin;
    cfg.seed = 29;
    cfg.chains = 4;
    const auto batch = sample(spec, cfg);
    const auto h2 = empirical_rho2(batch, 8, 0.0, 1.0);
    // exact axis-swap symmetry of ordered-pair counts
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
            CHECK(h2.counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]
                  == h2.counts[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]);
    // diagonal suppression relative to the product of marginals
    const auto h1 = empirical_rho1(batch, 8, 0.0, 1.0);
    double diag_ratio = 0.0;
    for (int b = 3; b < 8; ++b) {
        const double prod = h1.densities[static_cast<std::size_t>(b)] * h1.densities[static_cast<std::size_t>(b)];
        if (prod > 1.0)
            diag_ratio = std::max(diag_ratio,
                                  h2.densities[static_cast<std::size_t>(b)][static_cast<std::size_t>(b)] / prod);
    }
    CHECK(diag_ratio < 0.85);
    // determinantal prediction on occupied bins
    int ok = 0, total = 0;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            if (h2.counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] < 100) continue;
            const double x = h2.centers[static_cast<std::size_t>(a)];
            const double y = h2.centers[static_cast<std::size_t>(b)];
            const double pred = weight(spec, x) * weight(spec, y)
                                * (kernel_value(spec, x, x) * kernel_value(spec, y, y)
                                   - kernel_value(spec, x, y) * kernel_value(spec, y, x));
            const double sigma = std::max(h2.sigma_batch[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)],
                                          h2.sigma_poisson[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
            ++total;
            if (std::fabs(h2.densities[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] - pred)
                <= 4.0 * sigma + 0.05)
                ++ok;
        }
    CHECK(total > 10);
    CHECK(ok >= (total * 85) / 100);
    CHECK_THROWS_AS(empirical_rho2(batch, 16, 0.0, 1.0), std::domain_error);
}

TEST_CASE("hermite sampler sign-flip symmetry of marginals") {
    const EnsembleSpec spec{Family::Hermite, 0.5, 2.0, 2};
    ChainConfig cfg;
    cfg.thin = 5;
    cfg.burn_in = 3000;
    cfg.steps = cfg.burn_in + 30000 * cfg.thin;
    cfg.seed = 37;
    cfg.chains = 4;
    const auto batch = sample(spec, cfg);
    const auto h = empirical_rho1(batch, 10, -3.0, 3.0);
    for (int b = 0; b < 5; ++b) {
        const int m = 9 - b;
        const double sigma = std::max({h.sigma_batch[static_cast<std::size_t>(b)],
                                       h.sigma_batch[static_cast<std::size_t>(m)], 1e-4});
        CHECK(std::fabs(h.densities[static_cast<std::size_t>(b)] - h.densities[static_cast<std::size_t>(m)])
              <= 4.0 * sigma);
    }
}

TEST_CASE("binary round trip and CSV shape") {
    const EnsembleSpec spec{Family::Jacobi, 1.0, 2.0, 3};
    ChainConfig cfg;
    cfg.steps = 3000;
    cfg.burn_in = 500;
    cfg.thin = 5;
    cfg.seed = 3;
    cfg.chains = 2;
    const auto batch = sample(spec, cfg);

    std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
    write_binary(batch, bin);
    const auto back = read_binary(bin);
    CHECK(back.version == 1);
    CHECK(back.n_points == 3);
    REQUIRE(back.configurations.size() == batch.configurations.size());
    for (std::size_t i = 0; i < back.configurations.size(); ++i)
        for (int k = 0; k < 3; ++k)
            CHECK(back.configurations[i][static_cast<std::size_t>(k)] == batch.configurations[i][static_cast<std::size_t>(k)]);

    std::ostringstream csv;
    write_csv(batch, csv);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "chain,step,x_1,x_2,x_3");
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == batch.configurations.size());

    std::stringstream badmagic(std::ios::in | std::ios::out | std::ios::binary);
    badmagic << "NOPE";
    CHECK_THROWS_AS(read_binary(badmagic), std::runtime_error);
}

TEST_CASE("chain config validation") {
    ChainConfig bad;
    bad.burn_in = bad.steps;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = {};
    bad.thin = 0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}
