#pragma once
// Propagation and array models: ULA responses, the Fejer beam kernel,
// rank-one beamforming gain, WINNER II B5a path loss, wall penetration and
// the LiFi line-of-sight gain with its angle geometry.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "b5gee/config.hpp"
#include "b5gee/core.hpp"

namespace b5gee {

/// Normalised ULA response; entry m is exp(-j 2 pi spacing m steering) / sqrt(M).
struct ArrayResponse {
    int length = 0;
    double spacing = 0.5;  // wavelengths
    double steering = 0.0; // sine-space direction
    std::vector<std::complex<double>> entries;
};

inline ArrayResponse array_response(int m, double spacing, double steering) {
    if (m < 1) {
        throw DomainError("array_response: antenna count must be >= 1");
    }
    ArrayResponse r{m, spacing, steering, {}};
    r.entries.reserve(static_cast<std::size_t>(m));
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (int k = 0; k < m; ++k) {
        const double phase = -2.0 * pi * spacing * k * steering;
        r.entries.push_back(std::polar(scale, phase));
    }
    return r;
}

/// F_M(x) = sin(pi M x / 2) / (M sin(pi x / 2)), with its removable
/// singularities at even integers replaced by the limit (-1)^((M-1)k), x = 2k.
inline double fejer_kernel(int m, double x) {
    if (m < 1) {
        throw DomainError("fejer_kernel: M must be >= 1");
    }
    const double den = std::sin(pi * x / 2.0);
    if (std::abs(den) < 1e-9) {
        const long long k = std::llround(x / 2.0);
        return ((static_cast<long long>(m - 1) * k) % 2 == 0) ? 1.0 : -1.0;
    }
    return std::sin(pi * m * x / 2.0) / (m * den);
}

/// Rank-one outdoor beamforming channel between an MBSALA and a BMAA.
struct BeamChannel {
    double beta = 1.0;  // linear path gain
    int m_t = 1;
    int m_r = 1;
    double aod = 0.0;
    double aoa = 0.0;
};

/// beta M_T M_R F^2_{M_T}(tx - aod) F^2_{M_R}(rx - aoa).
inline double beam_gain(const BeamChannel& ch, double tx_beam_angle, double rx_beam_angle) {
    const double ft = fejer_kernel(ch.m_t, tx_beam_angle - ch.aod);
    const double fr = fejer_kernel(ch.m_r, rx_beam_angle - ch.aoa);
    return ch.beta * ch.m_t * ch.m_r * ft * ft * fr * fr;
}

/// WINNER II B5a rooftop-to-rooftop path loss in dB (d in m, f_c in GHz).
inline double pathloss_winner_b5a(double d, double fc_ghz) {
    if (!(d >= 1.0)) {
        throw DomainError("pathloss_winner_b5a: distance must be >= 1 m");
    }
    if (!(fc_ghz > 0.0)) {
        throw DomainError("pathloss_winner_b5a: carrier frequency must be > 0");
    }
    return 23.5 * std::log10(d) + 42.5 + 20.0 * std::log10(fc_ghz / 5.0);
}

/// Adds a wall penetration loss to a path-loss chain (both dB).
inline double apply_penetration(double loss_chain_db, double penetration_db) {
    if (!(penetration_db >= 0.0)) {
        throw DomainError("apply_penetration: penetration loss must be >= 0 dB");
    }
    return loss_chain_db + penetration_db;
}

/// Free-space path loss in dB; used for the indoor mmWave hop.
inline double pathloss_free_space(double d, double fc_ghz) {
    if (!(d > 0.0) || !(fc_ghz > 0.0)) {
        throw DomainError("pathloss_free_space: distance and frequency must be > 0");
    }
    return 20.0 * std::log10(4.0 * pi * d * fc_ghz * 1e9 / speed_of_light);
}

/// Transmitter-to-receiver vector with radiance (phi) and incidence (psi) angles.
struct LiFiGeometry {
    Vec3 d;
    double phi = 0.0;
    double psi = 0.0;

    double distance() const { return norm(d); }
};

inline LiFiGeometry lifi_angles(const Vec3& tx_pos, const Vec3& rx_pos, const Vec3& n_tx, const Vec3& n_rx) {
    const Vec3 d = rx_pos - tx_pos;
    const double len = norm(d);
    if (!(len > 0.0)) {
        throw DomainError("lifi_angles: transmitter and receiver positions coincide");
    }
    const double cos_phi = std::clamp(dot(d, n_tx) / len, -1.0, 1.0);
    const double cos_psi = std::clamp(-dot(d, n_rx) / len, -1.0, 1.0);
    return {d, std::acos(cos_phi), std::acos(cos_psi)};
}

/// LoS DC gain of a Lambertian LED into a concentrator-equipped photodiode.
/// Zero outside the field of view and behind the transmitter plane.
inline double lifi_los_gain(const LiFiGeometry& geom, const LiFiDeviceParams& p) {
    const double dist = geom.distance();
    if (!(dist > 0.0)) {
        throw DomainError("lifi_los_gain: zero link distance");
    }
    if (geom.psi > p.fov || geom.phi >= pi / 2.0) {
        return 0.0;
    }
    const double m = lambertian_order(p.half_angle);
    const double s = std::sin(p.fov);
    const double concentrator = p.refr_index * p.refr_index / (s * s);
    return (m + 1.0) * p.area_pd / (2.0 * pi * dist * dist) * std::pow(std::cos(geom.phi), m) * p.g_filter *
           concentrator * std::cos(geom.psi);
}

}  // namespace b5gee
