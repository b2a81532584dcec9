#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bioen/io.hpp"
#include "bioen/kernels.hpp"

namespace bioen {

/// Counter-seeded PRNG stream: SplitMix64 expands (seed, chain) into the
/// xoshiro256++ state. Stream algorithm is fixed ("bioen-rng-1"); identical
/// (seed, chain) pairs give bit-identical integer streams on any platform.
inline constexpr const char* kRngStreamVersion = "bioen-rng-1(splitmix64/xoshiro256++)";

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t chain_index) {
        std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (chain_index + 1));
        for (auto& word : s_) word = splitmix64(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in (0,1]; never exactly 0, safe under log.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
    }

    /// Standard normal via Box-Muller (cosine branch; two uniforms per draw).
    double next_normal() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi_v * u2);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t s_[4];
};

struct ChainConfig {
    int steps = 1'050'000;     // total sweeps per chain, burn-in included
    int burn_in = 50'000;
    int thin = 5;
    double proposal_scale = 0.25;
    std::uint64_t seed = 0;
    int chains = 4;

    void validate() const {
        if (steps < 1) throw std::domain_error("ChainConfig: steps must be >= 1");
        if (burn_in < 0 || burn_in >= steps)
            throw std::domain_error("ChainConfig: burn_in must satisfy 0 <= burn_in < steps");
        if (thin < 1) throw std::domain_error("ChainConfig: thin must be >= 1");
        if (!(proposal_scale > 0.0)) throw std::domain_error("ChainConfig: proposal_scale must be > 0");
        if (chains < 1) throw std::domain_error("ChainConfig: chains must be >= 1");
    }

    int kept_per_chain() const { return (steps - burn_in) / thin; }
};

/// Unnormalized log density of the N-point ensemble:
///   sum_i log w(x_i) + sum_{i<j} [log|x_i-x_j| + log|x_i^theta - x_j^theta|]
/// with signed powers for Hermite. The pair product is nonnegative since
/// t -> t^theta is monotone, so absolute values lose no sign information.
/// Coincident points (or points outside the interval) give -inf, which the
/// Metropolis step simply rejects.
inline double log_density(const EnsembleSpec& spec, const std::vector<double>& points) {
    double s = 0.0;
    for (double x : points) s += log_weight(spec, x);
    const int n = static_cast<int>(points.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d1 = points[i] - points[j];
            if (d1 == 0.0) return -std::numeric_limits<double>::infinity();
            const double d2 = signed_pow(points[i], spec.theta) - signed_pow(points[j], spec.theta);
            s += std::log(std::fabs(d1)) + std::log(std::fabs(d2));
        }
    return s;
}

/// Change of log_density when coordinate i moves to xi_new; O(N) instead of a
/// full recomputation.
inline double log_density_delta(const EnsembleSpec& spec, const std::vector<double>& points,
                                int i, double xi_new) {
    const double xi_old = points[i];
    double d = log_weight(spec, xi_new) - log_weight(spec, xi_old);
    const double ti_new = signed_pow(xi_new, spec.theta);
    const double ti_old = signed_pow(xi_old, spec.theta);
    for (int j = 0; j < static_cast<int>(points.size()); ++j) {
        if (j == i) continue;
        const double a1 = xi_new - points[j];
        if (a1 == 0.0) return -std::numeric_limits<double>::infinity();
        const double a2 = ti_new - signed_pow(points[j], spec.theta);
        d += std::log(std::fabs(a1)) + std::log(std::fabs(a2));
        d -= std::log(std::fabs(xi_old - points[j])) + std::log(std::fabs(ti_old - signed_pow(points[j], spec.theta)));
    }
    return d;
}

/// MCMC output: kept configurations (each sorted ascending), ordered chain
/// by chain, with the acceptance rate of the measurement phase.
struct SampleBatch {
    std::vector<std::vector<double>> configurations;
    double acceptance_rate = 0.0;
    EnsembleSpec spec;
    ChainConfig config;
    int kept_per_chain = 0;

    int chain_of(std::size_t index) const { return static_cast<int>(index) / kept_per_chain; }
};

namespace detail {

// Fold a proposed Jacobi coordinate back into (0,1) by reflection; the map is
// an involution on each period so the proposal stays symmetric.
inline double reflect_into_01(double x) {
    x = std::fmod(x, 2.0);
    if (x < 0.0) x += 2.0;
    if (x > 1.0) x = 2.0 - x;
    return x;
}

struct ChainResult {
    std::vector<std::vector<double>> kept;
    long accepted = 0;
    long proposed = 0;
};

inline std::vector<double> initial_configuration(const EnsembleSpec& spec) {
    std::vector<double> x(static_cast<std::size_t>(spec.n_points));
    for (int i = 0; i < spec.n_points; ++i) {
        const double q = (i + 1.0) / (spec.n_points + 1.0);
        switch (spec.family) {
            case Family::Jacobi: x[static_cast<std::size_t>(i)] = q; break;
            case Family::Laguerre: x[static_cast<std::size_t>(i)] = (spec.alpha + 1.0) * (0.3 + 2.0 * q); break;
            case Family::Hermite: x[static_cast<std::size_t>(i)] = 3.0 * (q - 0.5); break;
        }
    }
    return x;
}

inline ChainResult run_chain(const EnsembleSpec& spec, const ChainConfig& cfg,
                             std::uint64_t chain_index) {
    RngStream rng(cfg.seed, chain_index);
    std::vector<double> x = initial_configuration(spec);
    const int n = spec.n_points;
    double scale = cfg.proposal_scale;
    ChainResult out;
    out.kept.reserve(static_cast<std::size_t>(cfg.kept_per_chain()));
    long tune_accepted = 0, tune_proposed = 0;
    for (int sweep = 1; sweep <= cfg.steps; ++sweep) {
        const bool measuring = sweep > cfg.burn_in;
        for (int c = 0; c < n; ++c) {
            const int i = n == 1 ? 0 : static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
            double xp = 0.0;
            double log_jacobian = 0.0; // proposal asymmetry correction
            switch (spec.family) {
                case Family::Jacobi:
                    xp = reflect_into_01(x[static_cast<std::size_t>(i)] + scale * (2.0 * rng.next_uniform() - 1.0));
                    break;
                case Family::Laguerre: {
                    // random walk in log coordinates; Jacobian e^{l'} / e^{l}
                    const double l = std::log(x[static_cast<std::size_t>(i)]);
                    const double lp = l + scale * rng.next_normal();
                    xp = std::exp(lp);
                    log_jacobian = lp - l;
                    break;
                }
                case Family::Hermite:
                    xp = x[static_cast<std::size_t>(i)] + scale * rng.next_normal();
                    break;
            }
            const double delta = log_density_delta(spec, x, i, xp) + log_jacobian;
            const bool accept = delta >= 0.0 || std::log(rng.next_uniform()) < delta;
            if (accept) x[static_cast<std::size_t>(i)] = xp;
            if (measuring) {
                ++out.proposed;
                if (accept) ++out.accepted;
            } else {
                ++tune_proposed;
                if (accept) ++tune_accepted;
            }
        }
        if (!measuring && sweep % 200 == 0 && tune_proposed > 0) {
            // keep acceptance inside 30..50% during burn-in, frozen afterwards
            const double rate = static_cast<double>(tune_accepted) / tune_proposed;
            if (rate < 0.30) scale = std::max(1e-3, scale * 0.85);
            if (rate > 0.50) scale = std::min(10.0, scale * 1.2);
            tune_accepted = tune_proposed = 0;
        }
        if (measuring && (sweep - cfg.burn_in) % cfg.thin == 0 &&
            static_cast<int>(out.kept.size()) < cfg.kept_per_chain()) {
            std::vector<double> snap = x;
            std::sort(snap.begin(), snap.end());
            out.kept.push_back(std::move(snap));
        }
    }
    return out;
}

} // namespace detail

/// Single-site random-walk Metropolis on the ensemble density. Chains run
/// independently (in parallel) and are deterministic given (seed, chain).
inline SampleBatch sample(const EnsembleSpec& spec, const ChainConfig& config) {
    config.validate();
    std::vector<detail::ChainResult> results(static_cast<std::size_t>(config.chains));
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(config.chains));
    for (int c = 0; c < config.chains; ++c)
        workers.emplace_back([&, c] { results[static_cast<std::size_t>(c)] = detail::run_chain(spec, config, static_cast<std::uint64_t>(c)); });
    for (auto& w : workers) w.join();
    SampleBatch batch{{}, 0.0, spec, config, config.kept_per_chain()};
    long accepted = 0, proposed = 0;
    for (auto& r : results) {
        accepted += r.accepted;
        proposed += r.proposed;
        for (auto& cfg : r.kept) batch.configurations.push_back(std::move(cfg));
    }
    batch.acceptance_rate = proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0;
    return batch;
}

/// One-dimensional correlation histogram, normalized so the densities
/// integrate to N. sigma_poisson is the per-bin Poisson approximation;
/// sigma_batch is the batch-means standard error (8 batches per chain), the
/// honest error under MCMC autocorrelation.
struct Histogram1D {
    double lo = 0.0, hi = 0.0;
    std::vector<double> centers;
    std::vector<double> densities;
    std::vector<double> sigma_poisson;
    std::vector<double> sigma_batch;
    std::vector<long> counts;
    double bin_width = 0.0;
    std::size_t n_configurations = 0;
};

inline Histogram1D empirical_rho1(const SampleBatch& batch, int bins, double lo, double hi) {
    if (bins < 5) throw std::domain_error("empirical_rho1: bins must be >= 5");
    if (!(hi > lo)) throw std::domain_error("empirical_rho1: empty range");
    if (batch.configurations.empty()) throw std::domain_error("empirical_rho1: empty batch");
    Histogram1D h;
    h.lo = lo;
    h.hi = hi;
    h.bin_width = (hi - lo) / bins;
    h.n_configurations = batch.configurations.size();
    h.centers.resize(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) h.centers[static_cast<std::size_t>(b)] = lo + (b + 0.5) * h.bin_width;
    h.counts.assign(static_cast<std::size_t>(bins), 0);

    const std::size_t per_chain = static_cast<std::size_t>(batch.kept_per_chain);
    const std::size_t batches_per_chain = std::min<std::size_t>(8, std::max<std::size_t>(1, per_chain));
    const std::size_t batch_len = std::max<std::size_t>(1, per_chain / batches_per_chain);
    const std::size_t nb = static_cast<std::size_t>(batch.config.chains) * batches_per_chain;
    std::vector<std::vector<long>> batch_counts(nb, std::vector<long>(static_cast<std::size_t>(bins), 0));
    std::vector<long> batch_cfgs(nb, 0);
    for (std::size_t s = 0; s < batch.configurations.size(); ++s) {
        const std::size_t chain = s / per_chain;
        const std::size_t b_idx = std::min(batches_per_chain - 1, (s % per_chain) / batch_len)
                                  + chain * batches_per_chain;
        ++batch_cfgs[b_idx];
        for (double x : batch.configurations[s]) {
            if (x < lo || x >= hi) continue;
            const int b = static_cast<int>((x - lo) / h.bin_width);
            if (b < 0 || b >= bins) continue;
            ++h.counts[static_cast<std::size_t>(b)];
            ++batch_counts[b_idx][static_cast<std::size_t>(b)];
        }
    }
    const double denom = static_cast<double>(h.n_configurations) * h.bin_width;
    h.densities.resize(static_cast<std::size_t>(bins));
    h.sigma_poisson.resize(static_cast<std::size_t>(bins));
    h.sigma_batch.resize(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) {
        const double c = static_cast<double>(h.counts[static_cast<std::size_t>(b)]);
        h.densities[static_cast<std::size_t>(b)] = c / denom;
        h.sigma_poisson[static_cast<std::size_t>(b)] = std::sqrt(std::max(c, 1.0)) / denom;
        // batch means: density per batch, spread across batches
        double mean = 0.0;
        std::vector<double> d(nb, 0.0);
        for (std::size_t k = 0; k < nb; ++k) {
            if (batch_cfgs[k] > 0)
                d[k] = static_cast<double>(batch_counts[k][static_cast<std::size_t>(b)]) /
                       (static_cast<double>(batch_cfgs[k]) * h.bin_width);
            mean += d[k];
        }
        mean /= static_cast<double>(nb);
        double var = 0.0;
        for (std::size_t k = 0; k < nb; ++k) var += (d[k] - mean) * (d[k] - mean);
        var /= nb > 1 ? static_cast<double>(nb - 1) : 1.0;
        h.sigma_batch[static_cast<std::size_t>(b)] = std::sqrt(var / static_cast<double>(nb));
    }
    return h;
}

/// Two-dimensional correlation histogram over ordered pairs (i != j),
/// normalized so the densities integrate to N(N-1). Coarse bins keep the
/// per-bin counts meaningful.
struct Histogram2D {
    double lo = 0.0, hi = 0.0;
    std::vector<double> centers;
    std::vector<std::vector<double>> densities;     // [bx][by]
    std::vector<std::vector<double>> sigma_poisson; // [bx][by]
    std::vector<std::vector<double>> sigma_batch;   // [bx][by]
    std::vector<std::vector<long>> counts;
    double bin_width = 0.0;
    std::size_t n_configurations = 0;
};

inline Histogram2D empirical_rho2(const SampleBatch& batch, int bins, double lo, double hi) {
    if (bins < 2 || bins > 15)
        throw std::domain_error("empirical_rho2: bins per axis must be in [2,15]");
    if (!(hi > lo)) throw std::domain_error("empirical_rho2: empty range");
    if (batch.configurations.empty()) throw std::domain_error("empirical_rho2: empty batch");
    Histogram2D h;
    h.lo = lo;
    h.hi = hi;
    h.bin_width = (hi - lo) / bins;
    h.n_configurations = batch.configurations.size();
    h.centers.resize(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) h.centers[static_cast<std::size_t>(b)] = lo + (b + 0.5) * h.bin_width;
    h.counts.assign(static_cast<std::size_t>(bins), std::vector<long>(static_cast<std::size_t>(bins), 0));

    const std::size_t per_chain = static_cast<std::size_t>(batch.kept_per_chain);
    const std::size_t batches_per_chain = std::min<std::size_t>(8, std::max<std::size_t>(1, per_chain));
    const std::size_t batch_len = std::max<std::size_t>(1, per_chain / batches_per_chain);
    const std::size_t nb = static_cast<std::size_t>(batch.config.chains) * batches_per_chain;
    std::vector<std::vector<long>> batch_counts(nb,
        std::vector<long>(static_cast<std::size_t>(bins) * bins, 0));
    std::vector<long> batch_cfgs(nb, 0);
    auto bin_of = [&](double x) -> int {
        if (x < lo || x >= hi) return -1;
        const int b = static_cast<int>((x - lo) / h.bin_width);
        return (b >= 0 && b < bins) ? b : -1;
    };
    for (std::size_t s = 0; s < batch.configurations.size(); ++s) {
        const std::size_t chain = s / per_chain;
        const std::size_t k_idx = std::min(batches_per_chain - 1, (s % per_chain) / batch_len)
                                  + chain * batches_per_chain;
        ++batch_cfgs[k_idx];
        const auto& cfg = batch.configurations[s];
        for (std::size_t i = 0; i < cfg.size(); ++i)
            for (std::size_t j = 0; j < cfg.size(); ++j) {
                if (i == j) continue;
                const int bx = bin_of(cfg[i]), by = bin_of(cfg[j]);
                if (bx < 0 || by < 0) continue;
                ++h.counts[static_cast<std::size_t>(bx)][static_cast<std::size_t>(by)];
                ++batch_counts[k_idx][static_cast<std::size_t>(bx) * bins + by];
            }
    }
    const double denom = static_cast<double>(h.n_configurations) * h.bin_width * h.bin_width;
    h.densities.assign(static_cast<std::size_t>(bins), std::vector<double>(static_cast<std::size_t>(bins), 0.0));
    h.sigma_poisson = h.densities;
    h.sigma_batch = h.densities;
    for (int bx = 0; bx < bins; ++bx)
        for (int by = 0; by < bins; ++by) {
            const double c = static_cast<double>(h.counts[static_cast<std::size_t>(bx)][static_cast<std::size_t>(by)]);
            h.densities[static_cast<std::size_t>(bx)][static_cast<std::size_t>(by)] = c / denom;
            h.sigma_poisson[static_cast<std::size_t>(bx)][static_cast<std::size_t>(by)] =
                std::sqrt(std::max(c, 1.0)) / denom;
            double mean = 0.0;
            std::vector<double> d(nb, 0.0);
            for (std::size_t k = 0; k < nb; ++k) {
                if (batch_cfgs[k] > 0)
                    d[k] = static_cast<double>(batch_counts[k][static_cast<std::size_t>(bx) * bins + by]) /
                           (static_cast<double>(batch_cfgs[k]) * h.bin_width * h.bin_width);
                mean += d[k];
            }
            mean /= static_cast<double>(nb);
            double var = 0.0;
            for (std::size_t k = 0; k < nb; ++k) var += (d[k] - mean) * (d[k] - mean);
            var /= nb > 1 ? static_cast<double>(nb - 1) : 1.0;
            h.sigma_batch[static_cast<std::size_t>(bx)][static_cast<std::size_t>(by)] =
                std::sqrt(var / static_cast<double>(nb));
        }
    return h;
}

/// Columnar CSV: chain, step, x_1..x_N.
inline void write_csv(const SampleBatch& batch, std::ostream& os) {
    os << "chain,step";
    for (int i = 1; i <= batch.spec.n_points; ++i) os << ",x_" << i;
    os << '\n';
    for (std::size_t s = 0; s < batch.configurations.size(); ++s) {
        os << batch.chain_of(s) << ',' << (s % static_cast<std::size_t>(batch.kept_per_chain));
        for (double x : batch.configurations[s]) os << ',' << format_double(x);
        os << '\n';
    }
}

/// Compact binary container: magic "BIOE", u16 version (=1), u32 N,
/// u64 configuration count, then count*N little-endian f64 (each
/// configuration ascending), chain-major order.
inline void write_binary(const SampleBatch& batch, std::ostream& os) {
    os.write("BIOE", 4);
    detail::write_u16_le(os, 1);
    detail::write_u32_le(os, static_cast<std::uint32_t>(batch.spec.n_points));
    detail::write_u64_le(os, static_cast<std::uint64_t>(batch.configurations.size()));
    for (const auto& cfg : batch.configurations)
        for (double x : cfg) detail::write_f64_le(os, x);
}

struct BinarySamples {
    std::uint16_t version = 0;
    std::uint32_t n_points = 0;
    std::vector<std::vector<double>> configurations;
};

inline BinarySamples read_binary(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != "BIOE")
        throw std::runtime_error("read_binary: bad magic (expected BIOE)");
    BinarySamples out;
    out.version = detail::read_u16_le(is);
    if (out.version != 1) throw std::runtime_error("read_binary: unsupported version");
    out.n_points = detail::read_u32_le(is);
    const std::uint64_t count = detail::read_u64_le(is);
    out.configurations.assign(count, std::vector<double>(out.n_points, 0.0));
    for (auto& cfg : out.configurations)
        for (auto& x : cfg) x = detail::read_f64_le(is);
    if (!is) throw std::runtime_error("read_binary: truncated stream");
    return out;
}

} // namespace bioen
