#pragma once
// SNR/SINR of the three link types, spectral and energy efficiency, and the
// expectation engines (grid quadrature and seeded Monte-Carlo) behind them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "b5gee/channel.hpp"
#include "b5gee/core.hpp"

namespace b5gee {

enum class LinkKind { macro_backhaul, mmwave_access, lifi_access };

struct LinkSnr {
    LinkKind kind = LinkKind::macro_backhaul;
    double value = 0.0;  // linear
};

struct SpectralEff {
    double value = 0.0;  // bit/s/Hz
    double gamma = 1.0;
    double std_error = 0.0;  // nonzero only for Monte-Carlo estimates
};

struct EnergyEff {
    double value = 0.0;  // (bit/s/Hz)/W

    /// bit/J once the spectral efficiency is scaled by the occupied bandwidth.
    double bits_per_joule(double bandwidth_hz) const { return value * bandwidth_hz; }
};

/// Mean and standard error of a Monte-Carlo estimate.
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Seeded Monte-Carlo mean of `draw(rng)`. Draws are cut into fixed-size
/// chunks, chunk c seeded from (seed, c); chunks run in parallel and are
/// reduced in chunk order, so the result does not depend on thread count.
template <class Draw>
McEstimate monte_carlo_mean(std::uint64_t draws, std::uint64_t seed, Draw&& draw) {
    if (draws == 0) {
        throw std::invalid_argument("monte_carlo_mean: need at least one draw");
    }
    constexpr std::uint64_t chunk = 1u << 16;
    const std::uint64_t n_chunks = (draws + chunk - 1) / chunk;
    std::vector<double> sums(n_chunks, 0.0);
    std::vector<double> sq_sums(n_chunks, 0.0);

    auto run_chunk = [&](std::uint64_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
        std::mt19937_64 rng(seq);
        const std::uint64_t begin = c * chunk;
        const std::uint64_t end = std::min(draws, begin + chunk);
        double s = 0.0;
        double s2 = 0.0;
        for (std::uint64_t i = begin; i < end; ++i) {
            const double v = draw(rng);
            s += v;
            s2 += v * v;
        }
        sums[c] = s;
        sq_sums[c] = s2;
    };

    const std::uint64_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t workers = std::min<std::uint64_t>(hw, n_chunks);
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) {
            run_chunk(c);
        }
    } else {
        std::vector<std::jthread> pool;
        for (std::uint64_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t c = w; c < n_chunks; c += workers) {
                    run_chunk(c);
                }
            });
        }
    }

    double s = 0.0;
    double s2 = 0.0;
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
        s += sums[c];
        s2 += sq_sums[c];
    }
    const double n = static_cast<double>(draws);
    const double mean = s / n;
    const double var = draws > 1 ? std::max(0.0, (s2 - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(var / n)};
}

/// Uniform directional uncertainty: theta ~ U(center - half_width, center + half_width).
/// half_width == 0 is the degenerate (fixed-angle) case.
struct AngleDistribution {
    double center = 0.0;
    double half_width = 0.0;
};

/// Fixed-grid midpoint quadrature; 4096 nodes unless configured otherwise.
struct ExpectationEngine {
    int grid_points = 4096;
};

/// E[F_M^2(theta - beam)] for theta drawn from `aod`, by quadrature.
inline double expected_fejer_sq(int m, const AngleDistribution& aod, double beam,
                                const ExpectationEngine& engine = {}) {
    const double mu = aod.center - beam;
    if (aod.half_width <= 0.0) {
        const double f = fejer_kernel(m, mu);
        return f * f;
    }
    const int n = std::max(1, engine.grid_points);
    const double step = 2.0 * aod.half_width / n;
    const double lo = mu - aod.half_width;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = fejer_kernel(m, lo + (i + 0.5) * step);
        acc += f * f;
    }
    return acc / n;
}

/// Same expectation by seeded Monte-Carlo sampling.
inline McEstimate expected_fejer_sq_mc(int m, const AngleDistribution& aod, double beam, std::uint64_t draws,
                                       std::uint64_t seed) {
    const double mu = aod.center - beam;
    const double w = aod.half_width;
    return monte_carlo_mean(draws, seed, [m, mu, w](std::mt19937_64& rng) {
        const double x = w > 0.0 ? std::uniform_real_distribution<double>(mu - w, mu + w)(rng) : mu;
        const double f = fejer_kernel(m, x);
        return f * f;
    });
}

/// Expected macro backhaul SNR: beta M_T P / (sigma^2 / M_R).
inline LinkSnr snr_macro(double beta, int m_t, int m_r, double p_sig, double sigma2) {
    if (!(beta > 0.0) || m_t < 1 || m_r < 1 || !(p_sig >= 0.0) || !(sigma2 > 0.0)) {
        throw DomainError("snr_macro: inputs must be positive");
    }
    return {LinkKind::macro_backhaul, beta * m_t * p_sig / (sigma2 / m_r)};
}

/// Expected SINR of indoor mmWave user k. The interference sum is weighted
/// by the desired user's beta_k as the model is written.
inline LinkSnr sinr_mmwave(std::size_t k, std::span<const AngleDistribution> aods, std::span<const double> beams,
                           std::span<const double> betas, std::span<const double> powers, int m_t_iap,
                           double sigma2, const ExpectationEngine& engine = {}) {
    const auto n = aods.size();
    if (beams.size() != n || betas.size() != n || powers.size() != n) {
        throw std::invalid_argument("sinr_mmwave: per-user lists must have equal length");
    }
    if (k >= n) {
        throw std::out_of_range("sinr_mmwave: user index out of range");
    }
    const double signal = betas[k] * expected_fejer_sq(m_t_iap, aods[k], beams[k], engine) * powers[k];
    double interference = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j != k) {
            interference += expected_fejer_sq(m_t_iap, aods[k], beams[j], engine) * powers[j];
        }
    }
    return {LinkKind::mmwave_access, signal / (betas[k] * interference + sigma2)};
}

/// One optical transmitter seen by the receiver: LED coefficient, optical
/// power and LoS gain.
struct OpticalLink {
    double led_coeff = 1.0;
    double p_opt = 0.0;
    double h_los = 0.0;

    double electrical_power() const {
        const double a = led_coeff * p_opt * h_los;
        return a * a;
    }
};

/// c^2 P^2 H^2 / (N0 B + sum of interferer terms).
inline LinkSnr sinr_lifi(const OpticalLink& serving, std::span<const OpticalLink> interferers, double n0,
                         double bandwidth) {
    if (!(bandwidth > 0.0)) {
        throw DomainError("sinr_lifi: bandwidth must be > 0");
    }
    double den = n0 * bandwidth;
    for (const auto& i : interferers) {
        den += i.electrical_power();
    }
    return {LinkKind::lifi_access, serving.electrical_power() / den};
}

/// gamma log2(1 + E[SINR]).
inline SpectralEff spectral_efficiency(const LinkSnr& sinr, double gamma) {
    if (!(sinr.value >= 0.0)) {
        throw DomainError("spectral_efficiency: SINR must be >= 0");
    }
    return {gamma * std::log1p(sinr.value) / std::numbers::ln2, gamma, 0.0};
}

/// gamma E[log2(1 + SINR)] by seeded Monte-Carlo over `sample(rng)`.
template <class Sampler>
SpectralEff spectral_efficiency_mc(Sampler&& sample, double gamma, std::uint64_t draws, std::uint64_t seed) {
    const auto est = monte_carlo_mean(draws, seed, [&sample](std::mt19937_64& rng) {
        return std::log1p(sample(rng)) / std::numbers::ln2;
    });
    return {gamma * est.mean, gamma, gamma * est.std_error};
}

/// Small-scale variation of the macro link under matched beamforming: with
/// i.i.d. Rayleigh entries the post-combining SNR is Gamma distributed with
/// shape M_T M_R around the expected SNR. Disabled: always the mean.
struct MacroSnrSampler {
    double mean_snr = 0.0;
    int m_t = 1;
    int m_r = 1;
    bool fading = true;

    double operator()(std::mt19937_64& rng) const {
        if (!fading) {
            return mean_snr;
        }
        const double shape = static_cast<double>(m_t) * m_r;
        return std::gamma_distribution<double>(shape, mean_snr / shape)(rng);
    }
};

/// Inverse of the spectral efficiency: 2^(se / gamma) - 1.
inline double required_sinr(double se_target, double gamma) {
    if (!(se_target >= 0.0) || !(gamma > 0.0)) {
        throw DomainError("required_sinr: need se >= 0 and gamma > 0");
    }
    return std::expm1(se_target / gamma * std::numbers::ln2);
}

inline EnergyEff energy_efficiency(const SpectralEff& se, double total_power) {
    if (!(total_power > 0.0)) {
        throw DomainError("energy_efficiency: total power must be > 0");
    }
    return {se.value / total_power};
}

}  // namespace b5gee
