#pragma once
// Device power ledger: baseband GOPS laws, RF front-end scaling, class-B and
// Doherty PA consumption, LiFi LED power, and the per-device aggregates with
// cooling and power-conversion overhead.

#include <bit>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "b5gee/config.hpp"
#include "b5gee/core.hpp"

namespace b5gee {

/// Baseband workload in GOPS, by operation.
struct ComplexityLoad {
    double filtering = 0.0;
    double fft = 0.0;
    double estimation = 0.0;
    double beamforming = 0.0;
    double precoding = 0.0;
    double mapping = 0.0;   // mapping / de-mapping
    double coding = 0.0;    // encoding / decoding
    double control = 0.0;
    double network = 0.0;
    double sampling = 0.0;

    double total() const {
        return filtering + fft + estimation + beamforming + precoding + mapping + coding + control + network +
               sampling;
    }

    ComplexityLoad& operator*=(double k) {
        filtering *= k;
        fft *= k;
        estimation *= k;
        beamforming *= k;
        precoding *= k;
        mapping *= k;
        coding *= k;
        control *= k;
        network *= k;
        sampling *= k;
        return *this;
    }
};

enum class DeviceKind { mbs, mbsala, bmaa, mmwave_iap, lifi_iap };

/// Decomposed device power. p_total includes the overhead divisor for
/// overhead-bearing devices (MBS, BMAA, mmWave IAP).
struct DevicePower {
    DeviceKind kind = DeviceKind::mbsala;
    double p_bb = 0.0;
    double p_rf = 0.0;
    double p_pa = 0.0;
    double p_illumination = 0.0;  // LiFi only
    double p_total = 0.0;

    double pre_overhead() const { return p_bb + p_rf + p_pa + p_illumination; }
};

// (I)FFT, estimation and precoding laws. Each *_ops function returns raw
// operation counts; gops_* scales them to GOPS.

/// N_s N_fft log2(N_fft) operations per frame.
inline double fft_ops_per_frame(int n_symbols, int n_fft) {
    if (n_fft < 2 || !std::has_single_bit(static_cast<unsigned>(n_fft))) {
        throw DomainError("fft: N_fft must be a power of two >= 2");
    }
    if (n_symbols < 0) {
        throw DomainError("fft: symbol count must be >= 0");
    }
    return static_cast<double>(n_symbols) * n_fft * std::log2(static_cast<double>(n_fft));
}

inline double gops_fft(int n_symbols, int n_fft, double frames_per_second) {
    return fft_ops_per_frame(n_symbols, n_fft) * frames_per_second / 1e9;
}

/// tau M_T N_ue per coherence block; tau defaults to N_ue.
inline double estimation_ops_per_block(int m_t, int n_ue, int tau = -1) {
    if (m_t < 0 || n_ue < 0) {
        throw DomainError("estimation: counts must be >= 0");
    }
    const double t = tau < 0 ? n_ue : tau;
    return t * n_ue * m_t;
}

inline double gops_estimation(int m_t, int n_ue, double blocks_per_second, int tau = -1) {
    return estimation_ops_per_block(m_t, n_ue, tau) * blocks_per_second / 1e9;
}

/// (N_ue + N_b L)(1 - tau / N_c) precoded streams per symbol, weight 1.
inline double precoding_streams(int n_ue, int n_b, int l_beams, int tau, int n_c) {
    if (n_c < 1 || tau < 0 || tau > n_c) {
        throw DomainError("precoding: need 0 <= tau <= N_c");
    }
    return (static_cast<double>(n_ue) + static_cast<double>(n_b) * l_beams) *
           (1.0 - static_cast<double>(tau) / n_c);
}

inline double gops_precoding(int n_ue, int n_b, int l_beams, int tau, int n_c, double ops_per_stream_symbol,
                             double symbols_per_second) {
    return precoding_streams(n_ue, n_b, l_beams, tau, n_c) * ops_per_stream_symbol * symbols_per_second / 1e9;
}

/// GOPS / rho.
inline double bb_power(const ComplexityLoad& load, double rho) {
    if (!(rho > 0.0)) {
        throw DomainError("bb_power: rho must be > 0");
    }
    return load.total() / rho;
}

/// Front-end component set: draws that scale per antenna plus a clock that
/// scales with the square root of the antenna count.
struct RfComponentSet {
    double per_antenna = 0.0;
    double clock = 0.0;
};

inline double rf_power(int antennas, const RfComponentSet& set) {
    if (antennas < 1) {
        throw DomainError("rf_power: antenna count must be >= 1");
    }
    return antennas * set.per_antenna + std::sqrt(static_cast<double>(antennas)) * set.clock;
}

inline RfComponentSet mbsala_rf_set(const DeviceConstants& k) {
    return {k.mbsala.p_mod + k.mbsala.p_mix + k.mbsala.p_dac, k.mbsala.p_clk};
}
inline RfComponentSet bmaa_rf_set(const DeviceConstants& k) {
    return {k.bmaa.p_mix + k.bmaa.p_vga + k.bmaa.p_adc + k.bmaa.p_lna, k.bmaa.p_clc};
}
inline RfComponentSet iap_rf_set(const DeviceConstants& k) {
    return {k.iap.p_mix + k.iap.p_dac + k.iap.p_bft + k.iap.p_fs, k.iap.p_clc};
}

inline double rf_power_mbsala(int m_t, const DeviceConstants& k) { return rf_power(m_t, mbsala_rf_set(k)); }
inline double rf_power_bmaa(int m_r, const DeviceConstants& k) { return rf_power(m_r, bmaa_rf_set(k)); }
inline double rf_power_iap(int m_t_iap, const DeviceConstants& k) { return rf_power(m_t_iap, iap_rf_set(k)); }

namespace detail {
inline void check_pa(double p_out, double p_max) {
    if (!(p_max > 0.0)) {
        throw DomainError("PA: P_max must be > 0");
    }
    if (!(p_out >= 0.0)) {
        throw DomainError("PA: output power must be >= 0");
    }
    if (p_out > p_max) {
        throw SaturationError(p_out, p_max);
    }
}
}  // namespace detail

/// Doherty PA draw: (2/pi) sqrt(P_o P_max) below 0.25 P_max, (6/pi) sqrt(P_o P_max)
/// from there to P_max. The continuous variant shifts the upper branch down
/// by (2/pi) P_max so both branches meet at P_max / pi.
inline double pa_power_doherty(double p_out, double p_max, bool continuous = false) {
    detail::check_pa(p_out, p_max);
    const double root = std::sqrt(p_out * p_max);
    if (p_out < 0.25 * p_max) {
        return 2.0 / pi * root;
    }
    return continuous ? 6.0 / pi * root - 2.0 / pi * p_max : 6.0 / pi * root;
}

/// Ideal class-B draw (2/pi) sqrt(P_o P_max).
inline double pa_power_classb(double p_out, double p_max) {
    detail::check_pa(p_out, p_max);
    return 2.0 / pi * std::sqrt(p_out * p_max);
}

/// MBSALA: baseband + RF + class-B PAs (one per beam/stream). No overhead
/// divisor; that is applied once at the MBS.
inline DevicePower power_mbsala(int m_t, const DeviceConstants& k, const ComplexityLoad& load,
                                std::span<const double> p_out_per_beam) {
    DevicePower p{DeviceKind::mbsala};
    p.p_bb = bb_power(load, k.rho);
    p.p_rf = rf_power_mbsala(m_t, k);
    for (double po : p_out_per_beam) {
        p.p_pa += pa_power_classb(po, k.mbsala.pa_max);
    }
    p.p_total = p.pre_overhead();
    return p;
}

/// BMAA: (baseband + RF) over the overhead divisor. Receive-only, no PA.
inline DevicePower power_bmaa(int m_r, const DeviceConstants& k, const ComplexityLoad& load) {
    DevicePower p{DeviceKind::bmaa};
    p.p_bb = bb_power(load, k.rho);
    p.p_rf = rf_power_bmaa(m_r, k);
    p.p_total = p.pre_overhead() / k.overhead_divisor();
    return p;
}

/// mmWave IAP: (baseband + RF + M'_T per-antenna Doherty PAs) over the
/// overhead divisor. Antenna scaling of RF happens once, inside rf_power.
inline DevicePower power_iap_mmwave(int m_t_iap, const DeviceConstants& k, const ComplexityLoad& load,
                                    double p_out_per_antenna) {
    DevicePower p{DeviceKind::mmwave_iap};
    p.p_bb = bb_power(load, k.rho);
    p.p_rf = rf_power_iap(m_t_iap, k);
    p.p_pa = m_t_iap * pa_power_doherty(p_out_per_antenna, k.iap.pa_max, k.iap.doherty_continuous);
    p.p_total = p.pre_overhead() / k.overhead_divisor();
    return p;
}

/// LED illumination power n q V_T Phi / (p_f eps) ln(q Phi / (p_f eps I_s) + 1).
inline double lifi_illumination_power(const LiFiDeviceParams& l) {
    const double pe = l.p_f * l.epsilon;
    return l.n_ideality * l.charge * l.thermal_voltage * l.photon_flux / pe *
           std::log1p(l.charge * l.photon_flux / (pe * l.sat_current));
}

/// Extra drive power for data transmission n q V_T H^2 / (2 p_f eps mu_Phi).
inline double lifi_comm_power(const LiFiDeviceParams& l, double h_los) {
    return l.n_ideality * l.charge * l.thermal_voltage * h_los * h_los /
           (2.0 * l.p_f * l.epsilon * l.mu_phi);
}

inline DevicePower power_lifi_iap(const LiFiDeviceParams& l, double h_los) {
    DevicePower p{DeviceKind::lifi_iap};
    p.p_illumination = lifi_illumination_power(l);
    p.p_pa = lifi_comm_power(l, h_los);
    p.p_total = p.pre_overhead();
    return p;
}

/// MBS: (MBS baseband + sum of MBSALA totals) over the overhead divisor.
/// The breakdown folds MBSALA baseband/RF/PA into the MBS fields.
inline DevicePower power_mbs(int n_arrays, const DeviceConstants& k, std::span<const DevicePower> mbsala,
                             const ComplexityLoad& mbs_load) {
    if (static_cast<int>(mbsala.size()) != n_arrays) {
        throw std::invalid_argument("power_mbs: need one MBSALA power per array");
    }
    DevicePower p{DeviceKind::mbs};
    p.p_bb = bb_power(mbs_load, k.rho);
    for (const auto& a : mbsala) {
        p.p_bb += a.p_bb;
        p.p_rf += a.p_rf;
        p.p_pa += a.p_pa;
    }
    p.p_total = p.pre_overhead() / k.overhead_divisor();
    return p;
}

/// Cell total: MBS plus, in the separate scenario, every BMAA and IAP.
inline double power_cell(Separation mode, const DevicePower& mbs, std::span<const DevicePower> bmaas,
                         std::span<const DevicePower> iaps) {
    double total = mbs.p_total;
    if (mode == Separation::separate) {
        for (const auto& b : bmaas) {
            total += b.p_total;
        }
        for (const auto& i : iaps) {
            total += i.p_total;
        }
    }
    return total;
}

}  // namespace b5gee
