#pragma once
// Scenario parameters, device constants, and the key = value configuration
// grammar that feeds every other module.
//
// Grammar (one setting per line):
//
//     # comment            ; comment
//     m_t = 256            top-level keys belong to the scenario
//     [mbsala]             opens a device section
//     pa_max = 120
//
// Keys ending in "_deg" give an angle field in degrees (stored in radians).
// Lists are comma separated; lists of 3-vectors separate vectors with ';'.
// Environment variables B5GEE_<KEY> (top level) and B5GEE_<SECTION>__<KEY>
// override the file, which overrides the shipped defaults.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "b5gee/core.hpp"

namespace b5gee {

enum class IapKind { mmwave, lifi };
enum class Separation { separate, non_separate };
enum class Layout { deterministic, random };

inline std::string_view to_string(IapKind k) { return k == IapKind::mmwave ? "mmwave" : "lifi"; }
inline std::string_view to_string(Separation s) {
    return s == Separation::separate ? "separate" : "non-separate";
}
inline std::string_view to_string(Layout l) { return l == Layout::deterministic ? "deterministic" : "random"; }

/// Topology, bandwidths and propagation settings for one cell.
struct ScenarioConfig {
    int n_arrays = 1;     // MBSALAs per MBS
    int n_buildings = 4;  // BMAAs per MBSALA
    int n_beams = 4;      // beams per MBSALA-BMAA pair
    int m_t = 128;        // MBSALA transmit antennas
    int m_r = 64;         // BMAA receive antennas
    int m_t_iap = 16;     // mmWave IAP transmit antennas
    int n_ue = 8;         // outdoor users per MBSALA sector
    int n_iue = 4;        // indoor users per IAP

    double carrier_freq_out = 3.5;  // GHz
    double bandwidth_out = 20e6;    // Hz
    double bandwidth_in = 500e6;    // Hz
    double penetration_loss_db = 20.0;
    double gamma = 1.0;
    double noise_variance = 2.53e-13;     // W, outdoor band
    double noise_variance_in = 1.0e-11;   // W, indoor mmWave band
    int coherence_block = 196;            // symbols
    std::optional<int> pilot_len;         // unset: tau equals the served user count

    IapKind iap_kind = IapKind::mmwave;
    Separation separation = Separation::separate;

    // Geometry.
    Layout layout = Layout::deterministic;
    double building_distance_min = 100.0;  // m
    double building_distance_max = 400.0;  // m
    std::vector<double> building_distances;  // m, explicit per-building override
    double indoor_distance = 5.0;          // m, mmWave IAP to user
    double carrier_freq_in = 28.0;         // GHz
    double aod_spread = 0.02;              // half-width of uniform user AoD jitter (sine space)
    double beam_spacing = 0.25;            // spacing of IAP beam centres (sine space)
    std::vector<double> rate_weights;      // per-building split; empty means equal

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Baseband operation accounting constants.
struct BasebandConstants {
    int symbols_per_frame = 14;
    double frames_per_second = 1000.0;
    int n_fft = 2048;
    double gops_filter = 0.5;     // per antenna (or per beam at the BMAA)
    double gops_sampling = 0.2;   // per beam
    double gops_control = 5.0;
    double gops_network = 5.0;
    double coding_ops_per_bit = 80.0;
    double mapping_ops_per_bit = 20.0;
    double precoding_weight = 0.0;  // ops per stream per symbol; 0 selects M * N_fft

    double symbols_per_second() const { return symbols_per_frame * frames_per_second; }
    double resource_elements_per_second() const { return symbols_per_second() * n_fft; }

    friend bool operator==(const BasebandConstants&, const BasebandConstants&) = default;
};

struct MbsalaConstants {
    double p_mod = 0.008;
    double p_mix = 0.008;
    double p_dac = 0.004;
    double p_clk = 0.2;
    double pa_max = 120.0;  // per beam
    friend bool operator==(const MbsalaConstants&, const MbsalaConstants&) = default;
};

struct BmaaConstants {
    double p_mix = 0.05;
    double p_vga = 0.05;
    double p_adc = 0.1;
    double p_lna = 0.05;
    double p_clc = 0.5;
    friend bool operator==(const BmaaConstants&, const BmaaConstants&) = default;
};

struct IapMmwaveConstants {
    double p_mix = 0.1;
    double p_dac = 0.15;
    double p_bft = 0.1;
    double p_fs = 0.15;
    double p_clc = 0.5;
    double pa_max = 1.0;  // per antenna
    bool doherty_continuous = false;
    friend bool operator==(const IapMmwaveConstants&, const IapMmwaveConstants&) = default;
};

/// Per-component power draws (W) and conversion factors.
struct DeviceConstants {
    MbsalaConstants mbsala;
    BmaaConstants bmaa;
    IapMmwaveConstants iap;
    BasebandConstants baseband;
    double rho = 160.0;  // GOP/W
    double eta_c = 0.1;
    double eta_acdc = 0.075;
    double eta_dcdc = 0.06;

    /// (1 - eta_c)(1 - eta_acdc)(1 - eta_dcdc)
    double overhead_divisor() const { return (1.0 - eta_c) * (1.0 - eta_acdc) * (1.0 - eta_dcdc); }

    friend bool operator==(const DeviceConstants&, const DeviceConstants&) = default;
};

/// LiFi attocell optics, geometry and LED electrical model.
struct LiFiDeviceParams {
    double area_pd = 1e-4;                 // m^2
    double half_angle = deg_to_rad(60.0);  // rad
    double g_filter = 1.0;
    double refr_index = 1.5;
    double fov = deg_to_rad(60.0);         // rad
    std::vector<Vec3> tx_positions{{0.0, 0.0, 3.0}, {4.0, 0.0, 3.0}};  // serving first
    Vec3 rx_position{1.0, 0.5, 0.85};
    Vec3 normal_tx{0.0, 0.0, -1.0};
    Vec3 normal_rx{0.0, 0.0, 1.0};
    double led_coeff = 1.0;         // c_f
    double led_coeff_interf = 1.0;  // c_Ijf
    double p_opt = 1.0;             // W optical
    double n0 = 1e-21;              // W/Hz

    // LED electrical model.
    double n_ideality = 3.0;
    double charge = 1.602176634e-19;  // C
    double thermal_voltage = 0.02585; // V
    double photon_flux = 7.49e18;     // 1/s
    double p_f = 0.5;
    double epsilon = 0.8;
    double sat_current = 1e-12;       // A
    double mu_phi = 2.5e-30;

    friend bool operator==(const LiFiDeviceParams&, const LiFiDeviceParams&) = default;
};

/// Everything one run needs; immutable once loaded.
struct Config {
    ScenarioConfig scenario;
    DeviceConstants devices;
    LiFiDeviceParams lifi;

    friend bool operator==(const Config&, const Config&) = default;
};

/// Lambertian emission order m = -1 / log2(cos(half_angle)).
inline double lambertian_order(double half_angle) {
    if (!(half_angle > 0.0 && half_angle < pi / 2.0)) {
        throw DomainError("lambertian_order: half angle must lie in (0, pi/2)");
    }
    return -1.0 / std::log2(std::cos(half_angle));
}

/// Static description of one configuration key.
struct FieldInfo {
    std::string_view section;     // empty for top-level scenario keys
    std::string_view key;
    std::string_view provenance;  // "<tag>: <note>"
    bool angle = false;           // stored in rad, "_deg" alias accepted
};

/// Calls `visit(info, field)` for every configuration field, in file order.
/// Works for both const and mutable bundles.
template <class C, class Visitor>
    requires std::is_same_v<std::remove_const_t<C>, Config>
void visit_fields(C& c, Visitor&& visit) {
    auto& s = c.scenario;
    visit(FieldInfo{"", "n_arrays", "assumed: single MBSALA per MBS"}, s.n_arrays);
    visit(FieldInfo{"", "n_buildings", "reference: each MBSALA serves 4 buildings"}, s.n_buildings);
    visit(FieldInfo{"", "n_beams", "reference: 4 beamforming links per MBSALA-BMAA pair"}, s.n_beams);
    visit(FieldInfo{"", "m_t", "reference: M_T swept over 64, 128, 256"}, s.m_t);
    visit(FieldInfo{"", "m_r", "reference: 64 antennas per BMAA"}, s.m_r);
    visit(FieldInfo{"", "m_t_iap", "assumed: 16-element indoor mmWave array"}, s.m_t_iap);
    visit(FieldInfo{"", "n_ue", "assumed: 8 outdoor users per sector"}, s.n_ue);
    visit(FieldInfo{"", "n_iue", "assumed: 4 indoor users per IAP"}, s.n_iue);
    visit(FieldInfo{"", "carrier_freq_out", "assumed: 3.5 GHz sub-6 carrier"}, s.carrier_freq_out);
    visit(FieldInfo{"", "bandwidth_out", "earth: 20 MHz reference carrier"}, s.bandwidth_out);
    visit(FieldInfo{"", "bandwidth_in", "assumed: 500 MHz indoor channel"}, s.bandwidth_in);
    visit(FieldInfo{"", "penetration_loss_db", "reference: 20 dB wall penetration"}, s.penetration_loss_db);
    visit(FieldInfo{"", "gamma", "assumed: neutral channel usage efficiency"}, s.gamma);
    visit(FieldInfo{"", "noise_variance", "derived: kTB at 290 K, 20 MHz, 5 dB noise figure"}, s.noise_variance);
    visit(FieldInfo{"", "noise_variance_in", "derived: kTB at 290 K, 500 MHz, 7 dB noise figure"},
          s.noise_variance_in);
    visit(FieldInfo{"", "coherence_block", "assumed: 196-symbol coherence block"}, s.coherence_block);
    visit(FieldInfo{"", "pilot_len", "reference: tau equals the served user count when unset"}, s.pilot_len);
    visit(FieldInfo{"", "iap_kind", "assumed: mmWave IAPs"}, s.iap_kind);
    visit(FieldInfo{"", "separation", "assumed: separate scenario"}, s.separation);

    visit(FieldInfo{"geometry", "layout", "assumed: deterministic layout"}, s.layout);
    visit(FieldInfo{"geometry", "building_distance_min", "assumed: nearest building at 100 m"},
          s.building_distance_min);
    visit(FieldInfo{"geometry", "building_distance_max", "assumed: farthest building at 400 m"},
          s.building_distance_max);
    visit(FieldInfo{"geometry", "building_distances", "assumed: empty, evenly spaced from min to max"},
          s.building_distances);
    visit(FieldInfo{"geometry", "indoor_distance", "assumed: 5 m IAP to user"}, s.indoor_distance);
    visit(FieldInfo{"geometry", "carrier_freq_in", "assumed: 28 GHz indoor mmWave"}, s.carrier_freq_in);
    visit(FieldInfo{"geometry", "aod_spread", "assumed: +/-0.02 uniform AoD jitter"}, s.aod_spread);
    visit(FieldInfo{"geometry", "beam_spacing", "assumed: beams two kernel nulls apart for 16 elements"},
          s.beam_spacing);
    visit(FieldInfo{"geometry", "rate_weights", "assumed: empty, equal split"}, s.rate_weights);

    auto& d = c.devices;
    auto& bb = d.baseband;
    visit(FieldInfo{"baseband", "rho", "reference: 160 GOP/W"}, d.rho);
    visit(FieldInfo{"baseband", "symbols_per_frame", "earth: 14 OFDM symbols per 1 ms"}, bb.symbols_per_frame);
    visit(FieldInfo{"baseband", "frames_per_second", "earth: 1 ms frames"}, bb.frames_per_second);
    visit(FieldInfo{"baseband", "n_fft", "earth: 2048-point FFT"}, bb.n_fft);
    visit(FieldInfo{"baseband", "gops_filter", "earth: digital filtering per chain"}, bb.gops_filter);
    visit(FieldInfo{"baseband", "gops_sampling", "earth: up/down sampling per stream"}, bb.gops_sampling);
    visit(FieldInfo{"baseband", "gops_control", "earth: control processing"}, bb.gops_control);
    visit(FieldInfo{"baseband", "gops_network", "earth: network processing"}, bb.gops_network);
    visit(FieldInfo{"baseband", "coding_ops_per_bit", "earth: channel coding load per bit"},
          bb.coding_ops_per_bit);
    visit(FieldInfo{"baseband", "mapping_ops_per_bit", "earth: symbol mapping load per bit"},
          bb.mapping_ops_per_bit);
    visit(FieldInfo{"baseband", "precoding_weight", "assumed: 0 selects M_T * N_fft per stream-symbol"},
          bb.precoding_weight);

    visit(FieldInfo{"overhead", "eta_c", "earth: cooling loss 10%"}, d.eta_c);
    visit(FieldInfo{"overhead", "eta_acdc", "earth: AC-DC loss 7.5%"}, d.eta_acdc);
    visit(FieldInfo{"overhead", "eta_dcdc", "earth: DC-DC loss 6%"}, d.eta_dcdc);

    visit(FieldInfo{"mbsala", "p_mod", "assumed: integrated massive-MIMO chain"}, d.mbsala.p_mod);
    visit(FieldInfo{"mbsala", "p_mix", "assumed: integrated massive-MIMO chain"}, d.mbsala.p_mix);
    visit(FieldInfo{"mbsala", "p_dac", "assumed: integrated massive-MIMO chain"}, d.mbsala.p_dac);
    visit(FieldInfo{"mbsala", "p_clk", "assumed: shared clock generation"}, d.mbsala.p_clk);
    visit(FieldInfo{"mbsala", "pa_max", "assumed: 120 W per-beam class-B rating"}, d.mbsala.pa_max);

    visit(FieldInfo{"bmaa", "p_mix", "earth: receive mixer"}, d.bmaa.p_mix);
    visit(FieldInfo{"bmaa", "p_vga", "earth: variable gain amplifier"}, d.bmaa.p_vga);
    visit(FieldInfo{"bmaa", "p_adc", "earth: ADC"}, d.bmaa.p_adc);
    visit(FieldInfo{"bmaa", "p_lna", "earth: LNA"}, d.bmaa.p_lna);
    visit(FieldInfo{"bmaa", "p_clc", "earth: clock"}, d.bmaa.p_clc);

    visit(FieldInfo{"iap_mmwave", "p_mix", "assumed: mmWave mixer"}, d.iap.p_mix);
    visit(FieldInfo{"iap_mmwave", "p_dac", "assumed: mmWave DAC"}, d.iap.p_dac);
    visit(FieldInfo{"iap_mmwave", "p_bft", "assumed: beamforming phase shifter"}, d.iap.p_bft);
    visit(FieldInfo{"iap_mmwave", "p_fs", "assumed: frequency synthesiser"}, d.iap.p_fs);
    visit(FieldInfo{"iap_mmwave", "p_clc", "assumed: clock"}, d.iap.p_clc);
    visit(FieldInfo{"iap_mmwave", "pa_max", "assumed: 1 W per-antenna Doherty rating"}, d.iap.pa_max);
    visit(FieldInfo{"iap_mmwave", "doherty_continuous", "assumed: printed discontinuous Doherty law"},
          d.iap.doherty_continuous);

    auto& l = c.lifi;
    visit(FieldInfo{"lifi", "area_pd", "assumed: 1 cm^2 photodiode"}, l.area_pd);
    visit(FieldInfo{"lifi", "half_angle", "assumed: 60 deg half-intensity angle (m = 1)", true}, l.half_angle);
    visit(FieldInfo{"lifi", "g_filter", "assumed: ideal optical filter"}, l.g_filter);
    visit(FieldInfo{"lifi", "refr_index", "assumed: concentrator refractive index 1.5"}, l.refr_index);
    visit(FieldInfo{"lifi", "fov", "assumed: 60 deg receiver field of view", true}, l.fov);
    visit(FieldInfo{"lifi", "tx_positions", "assumed: ceiling luminaire plus one neighbour"}, l.tx_positions);
    visit(FieldInfo{"lifi", "rx_position", "assumed: desk-height user"}, l.rx_position);
    visit(FieldInfo{"lifi", "normal_tx", "reference: n_tx = [0, 0, -1]"}, l.normal_tx);
    visit(FieldInfo{"lifi", "normal_rx", "reference: n_rx = [0, 0, 1]"}, l.normal_rx);
    visit(FieldInfo{"lifi", "led_coeff", "assumed: unit LED coefficient"}, l.led_coeff);
    visit(FieldInfo{"lifi", "led_coeff_interf", "assumed: unit LED coefficient"}, l.led_coeff_interf);
    visit(FieldInfo{"lifi", "p_opt", "assumed: 1 W optical output"}, l.p_opt);
    visit(FieldInfo{"lifi", "n0", "assumed: receiver noise spectral density"}, l.n0);
    visit(FieldInfo{"lifi", "n_ideality", "assumed: LED string ideality factor"}, l.n_ideality);
    visit(FieldInfo{"lifi", "charge", "derived: elementary charge"}, l.charge);
    visit(FieldInfo{"lifi", "thermal_voltage", "derived: kT/q at 300 K"}, l.thermal_voltage);
    visit(FieldInfo{"lifi", "photon_flux", "assumed: sets a 3 A LED drive current"}, l.photon_flux);
    visit(FieldInfo{"lifi", "p_f", "assumed: LED conversion factor"}, l.p_f);
    visit(FieldInfo{"lifi", "epsilon", "assumed: LED quantum efficiency"}, l.epsilon);
    visit(FieldInfo{"lifi", "sat_current", "assumed: LED saturation current"}, l.sat_current);
    visit(FieldInfo{"lifi", "mu_phi", "assumed: gives about 1 W modulation power at the default geometry"},
          l.mu_phi);
}

namespace detail {

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return out;
}

inline std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::toupper(ch); });
    return out;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return parts;
}

// Value codecs, one overload per field type.

inline std::string encode(int v) { return std::to_string(v); }
inline std::string encode(double v) { return format_double(v); }
inline std::string encode(bool v) { return v ? "true" : "false"; }
inline std::string encode(IapKind v) { return std::string(to_string(v)); }
inline std::string encode(Separation v) { return std::string(to_string(v)); }
inline std::string encode(Layout v) { return std::string(to_string(v)); }
inline std::string encode(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string{}; }
inline std::string encode(const Vec3& v) {
    return format_double(v.x) + ", " + format_double(v.y) + ", " + format_double(v.z);
}
inline std::string encode(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + format_double(v[i]);
    }
    return out;
}
inline std::string encode(const std::vector<Vec3>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? "; " : "") + encode(v[i]);
    }
    return out;
}

inline void decode(std::string_view text, int& out, std::string_view ctx) {
    const long long v = parse_integer(text, ctx);
    if (v < -2147483647LL || v > 2147483647LL) {
        throw ParseError(std::string(ctx) + ": integer out of range");
    }
    out = static_cast<int>(v);
}
inline void decode(std::string_view text, double& out, std::string_view ctx) { out = parse_double(text, ctx); }
inline void decode(std::string_view text, bool& out, std::string_view ctx) {
    const auto t = lower(text);
    if (t == "true" || t == "1" || t == "on" || t == "yes") {
        out = true;
    } else if (t == "false" || t == "0" || t == "off" || t == "no") {
        out = false;
    } else {
        throw ParseError(std::string(ctx) + ": not a boolean: '" + std::string(text) + "'");
    }
}
inline void decode(std::string_view text, IapKind& out, std::string_view ctx) {
    const auto t = lower(text);
    if (t == "mmwave") {
        out = IapKind::mmwave;
    } else if (t == "lifi") {
        out = IapKind::lifi;
    } else {
        throw ParseError(std::string(ctx) + ": expected mmwave or lifi, got '" + std::string(text) + "'");
    }
}
inline void decode(std::string_view text, Separation& out, std::string_view ctx) {
    const auto t = lower(text);
    if (t == "separate") {
        out = Separation::separate;
    } else if (t == "non-separate" || t == "non_separate" || t == "nonseparate") {
        out = Separation::non_separate;
    } else {
        throw ParseError(std::string(ctx) + ": expected separate or non-separate, got '" + std::string(text) +
                         "'");
    }
}
inline void decode(std::string_view text, Layout& out, std::string_view ctx) {
    const auto t = lower(text);
    if (t == "deterministic") {
        out = Layout::deterministic;
    } else if (t == "random") {
        out = Layout::random;
    } else {
        throw ParseError(std::string(ctx) + ": expected deterministic or random, got '" + std::string(text) +
                         "'");
    }
}
inline void decode(std::string_view text, std::optional<int>& out, std::string_view ctx) {
    if (trim(text).empty()) {
        out.reset();
        return;
    }
    int v = 0;
    decode(text, v, ctx);
    out = v;
}
inline void decode(std::string_view text, Vec3& out, std::string_view ctx) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) {
        throw ParseError(std::string(ctx) + ": expected three comma-separated coordinates");
    }
    out = {parse_double(parts[0], ctx), parse_double(parts[1], ctx), parse_double(parts[2], ctx)};
}
inline void decode(std::string_view text, std::vector<double>& out, std::string_view ctx) {
    out.clear();
    if (trim(text).empty()) {
        return;
    }
    for (auto p : split(text, ',')) {
        out.push_back(parse_double(p, ctx));
    }
}
inline void decode(std::string_view text, std::vector<Vec3>& out, std::string_view ctx) {
    out.clear();
    if (trim(text).empty()) {
        return;
    }
    for (auto p : split(text, ';')) {
        Vec3 v;
        decode(p, v, ctx);
        out.push_back(v);
    }
}

inline std::string qualified(const FieldInfo& f) {
    return f.section.empty() ? std::string(f.key) : std::string(f.section) + "." + std::string(f.key);
}

inline std::string env_name(const FieldInfo& f, bool deg) {
    std::string name = "B5GEE_";
    if (!f.section.empty()) {
        name += upper(f.section) + "__";
    }
    name += upper(f.key);
    if (deg) {
        name += "_DEG";
    }
    return name;
}

template <class T>
void assign(const FieldInfo& f, T& field, std::string_view text, bool deg) {
    const auto ctx = qualified(f);
    if constexpr (std::is_same_v<T, double>) {
        double v = parse_double(text, ctx);
        field = deg ? deg_to_rad(v) : v;
    } else {
        decode(text, field, ctx);
    }
}

}  // namespace detail

/// Lookup used for environment overrides; injectable for tests.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

inline std::optional<std::string> process_env(const std::string& name) {
    if (const char* v = std::getenv(name.c_str())) {
        return std::string(v);
    }
    return std::nullopt;
}

inline std::optional<std::string> no_env(const std::string&) { return std::nullopt; }

/// Throws ValidationError naming the first violated invariant.
inline void validate(const Config& c) {
    const auto& s = c.scenario;
    auto require = [](bool ok, const char* key, const char* what) {
        if (!ok) {
            throw ValidationError(key, what);
        }
    };
    require(s.n_arrays >= 1, "n_arrays", "must be >= 1");
    require(s.n_buildings >= 1, "n_buildings", "must be >= 1");
    require(s.n_beams >= 1, "n_beams", "must be >= 1");
    require(s.m_t >= 1, "m_t", "must be >= 1");
    require(s.m_r >= 1, "m_r", "must be >= 1");
    require(s.m_t_iap >= 1, "m_t_iap", "must be >= 1");
    require(s.n_ue >= 1, "n_ue", "must be >= 1");
    require(s.n_iue >= 1, "n_iue", "must be >= 1");
    require(s.carrier_freq_out > 0.0, "carrier_freq_out", "must be > 0");
    require(s.bandwidth_out > 0.0, "bandwidth_out", "must be > 0");
    require(s.bandwidth_in > 0.0, "bandwidth_in", "must be > 0");
    require(s.penetration_loss_db >= 0.0, "penetration_loss_db", "must be >= 0");
    require(s.gamma > 0.0 && s.gamma <= 1.0, "gamma", "must lie in (0, 1]");
    require(s.noise_variance > 0.0, "noise_variance", "must be > 0");
    require(s.noise_variance_in > 0.0, "noise_variance_in", "must be > 0");
    require(s.coherence_block >= 1, "coherence_block", "must be >= 1");
    if (s.pilot_len) {
        require(*s.pilot_len >= 1, "pilot_len", "must be >= 1");
        require(*s.pilot_len <= s.coherence_block, "pilot_len", "must not exceed coherence_block");
    }
    require(s.building_distance_min >= 1.0, "geometry.building_distance_min", "must be >= 1 m");
    require(s.building_distance_max >= s.building_distance_min, "geometry.building_distance_max",
            "must be >= building_distance_min");
    require(s.building_distances.empty() ||
                static_cast<int>(s.building_distances.size()) == s.n_buildings,
            "geometry.building_distances", "must be empty or list one distance per building");
    for (double d : s.building_distances) {
        require(d >= 1.0, "geometry.building_distances", "distances must be >= 1 m");
    }
    require(s.indoor_distance > 0.0, "geometry.indoor_distance", "must be > 0");
    require(s.carrier_freq_in > 0.0, "geometry.carrier_freq_in", "must be > 0");
    require(s.aod_spread >= 0.0, "geometry.aod_spread", "must be >= 0");
    require(s.beam_spacing >= 0.0, "geometry.beam_spacing", "must be >= 0");
    require(s.rate_weights.empty() || static_cast<int>(s.rate_weights.size()) == s.n_buildings,
            "geometry.rate_weights", "must be empty or list one weight per building");
    if (!s.rate_weights.empty()) {
        double sum = 0.0;
        for (double w : s.rate_weights) {
            require(w >= 0.0, "geometry.rate_weights", "weights must be >= 0");
            sum += w;
        }
        require(sum > 0.0, "geometry.rate_weights", "weights must not all be zero");
    }

    const auto& d = c.devices;
    const auto& bb = d.baseband;
    require(d.rho > 0.0, "baseband.rho", "must be > 0");
    require(bb.symbols_per_frame >= 1, "baseband.symbols_per_frame", "must be >= 1");
    require(bb.frames_per_second > 0.0, "baseband.frames_per_second", "must be > 0");
    require(bb.n_fft >= 2 && (bb.n_fft & (bb.n_fft - 1)) == 0, "baseband.n_fft", "must be a power of two >= 2");
    require(bb.gops_filter >= 0.0, "baseband.gops_filter", "must be >= 0");
    require(bb.gops_sampling >= 0.0, "baseband.gops_sampling", "must be >= 0");
    require(bb.gops_control >= 0.0, "baseband.gops_control", "must be >= 0");
    require(bb.gops_network >= 0.0, "baseband.gops_network", "must be >= 0");
    require(bb.coding_ops_per_bit >= 0.0, "baseband.coding_ops_per_bit", "must be >= 0");
    require(bb.mapping_ops_per_bit >= 0.0, "baseband.mapping_ops_per_bit", "must be >= 0");
    require(bb.precoding_weight >= 0.0, "baseband.precoding_weight", "must be >= 0");
    require(d.eta_c >= 0.0 && d.eta_c < 1.0, "overhead.eta_c", "must lie in [0, 1)");
    require(d.eta_acdc >= 0.0 && d.eta_acdc < 1.0, "overhead.eta_acdc", "must lie in [0, 1)");
    require(d.eta_dcdc >= 0.0 && d.eta_dcdc < 1.0, "overhead.eta_dcdc", "must lie in [0, 1)");

    const auto& m = d.mbsala;
    require(m.p_mod >= 0.0, "mbsala.p_mod", "must be >= 0");
    require(m.p_mix >= 0.0, "mbsala.p_mix", "must be >= 0");
    require(m.p_dac >= 0.0, "mbsala.p_dac", "must be >= 0");
    require(m.p_clk >= 0.0, "mbsala.p_clk", "must be >= 0");
    require(m.pa_max > 0.0, "mbsala.pa_max", "must be > 0");
    const auto& b = d.bmaa;
    require(b.p_mix >= 0.0, "bmaa.p_mix", "must be >= 0");
    require(b.p_vga >= 0.0, "bmaa.p_vga", "must be >= 0");
    require(b.p_adc >= 0.0, "bmaa.p_adc", "must be >= 0");
    require(b.p_lna >= 0.0, "bmaa.p_lna", "must be >= 0");
    require(b.p_clc >= 0.0, "bmaa.p_clc", "must be >= 0");
    const auto& i = d.iap;
    require(i.p_mix >= 0.0, "iap_mmwave.p_mix", "must be >= 0");
    require(i.p_dac >= 0.0, "iap_mmwave.p_dac", "must be >= 0");
    require(i.p_bft >= 0.0, "iap_mmwave.p_bft", "must be >= 0");
    require(i.p_fs >= 0.0, "iap_mmwave.p_fs", "must be >= 0");
    require(i.p_clc >= 0.0, "iap_mmwave.p_clc", "must be >= 0");
    require(i.pa_max > 0.0, "iap_mmwave.pa_max", "must be > 0");

    const auto& l = c.lifi;
    require(l.area_pd > 0.0, "lifi.area_pd", "must be > 0");
    require(l.half_angle > 0.0 && l.half_angle < pi / 2.0, "lifi.half_angle", "must lie in (0, pi/2)");
    require(l.g_filter > 0.0, "lifi.g_filter", "must be > 0");
    require(l.refr_index > 0.0, "lifi.refr_index", "must be > 0");
    require(l.fov > 0.0 && l.fov <= pi / 2.0, "lifi.fov", "must lie in (0, pi/2]");
    require(!l.tx_positions.empty(), "lifi.tx_positions", "needs at least the serving luminaire");
    require(std::abs(norm(l.normal_tx) - 1.0) < 1e-9, "lifi.normal_tx", "must be a unit vector");
    require(std::abs(norm(l.normal_rx) - 1.0) < 1e-9, "lifi.normal_rx", "must be a unit vector");
    require(l.led_coeff > 0.0, "lifi.led_coeff", "must be > 0");
    require(l.led_coeff_interf >= 0.0, "lifi.led_coeff_interf", "must be >= 0");
    require(l.p_opt > 0.0, "lifi.p_opt", "must be > 0");
    require(l.n0 > 0.0, "lifi.n0", "must be > 0");
    require(l.n_ideality > 0.0, "lifi.n_ideality", "must be > 0");
    require(l.charge > 0.0, "lifi.charge", "must be > 0");
    require(l.thermal_voltage > 0.0, "lifi.thermal_voltage", "must be > 0");
    require(l.photon_flux >= 0.0, "lifi.photon_flux", "must be >= 0");
    require(l.p_f > 0.0, "lifi.p_f", "must be > 0");
    require(l.epsilon > 0.0, "lifi.epsilon", "must be > 0");
    require(l.sat_current > 0.0, "lifi.sat_current", "must be > 0");
    require(l.mu_phi > 0.0, "lifi.mu_phi", "must be > 0");
}

/// Parses configuration text over the shipped defaults, then applies
/// environment overrides. Does not validate.
inline Config parse_config(std::string_view text, const EnvLookup& env = no_env) {
    Config cfg;

    struct Slot {
        std::function<void(std::string_view, bool)> set;
        bool angle;
    };
    std::map<std::string, Slot, std::less<>> slots;
    visit_fields(cfg, [&](const FieldInfo& f, auto& field) {
        slots.emplace(detail::qualified(f),
                      Slot{[f, &field](std::string_view v, bool deg) { detail::assign(f, field, v, deg); }, f.angle});
    });

    std::string section;
    std::map<std::string, int, std::less<>> seen;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        // ';' also separates 3-vectors, so it only starts a comment at line start.
        if (line.empty() || line.front() == ';') {
            continue;
        }
        const auto where = "line " + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError(where + ": unterminated section header");
            }
            section = detail::lower(trim(line.substr(1, line.size() - 2)));
            if (section.empty()) {
                throw ParseError(where + ": empty section name");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(where + ": expected key = value");
        }
        std::string key = detail::lower(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError(where + ": empty key");
        }
        bool deg = false;
        std::string full = section.empty() ? key : section + "." + key;
        auto it = slots.find(full);
        if (it == slots.end() && key.size() > 4 && key.ends_with("_deg")) {
            full = full.substr(0, full.size() - 4);
            it = slots.find(full);
            deg = it != slots.end() && it->second.angle;
            if (!deg) {
                it = slots.end();
            }
        }
        if (it == slots.end()) {
            throw ParseError(where + ": unknown key '" + (section.empty() ? key : section + "." + key) + "'");
        }
        if (auto [prev, inserted] = seen.emplace(full, line_no); !inserted) {
            throw ParseError(where + ": duplicate key '" + full + "' (first set on line " +
                             std::to_string(prev->second) + ")");
        }
        it->second.set(value, deg);
    }

    visit_fields(cfg, [&](const FieldInfo& f, auto& field) {
        if (auto v = env(detail::env_name(f, false))) {
            detail::assign(f, field, *v, false);
        } else if (f.angle) {
            if (auto vd = env(detail::env_name(f, true))) {
                detail::assign(f, field, *vd, true);
            }
        }
    });
    return cfg;
}

/// Emits `cfg` in the configuration grammar; parse_config(write_config(c)) == c.
/// With `provenance`, each key is preceded by a comment naming its source.
inline std::string write_config(const Config& cfg, bool provenance = false) {
    std::ostringstream out;
    out << "# b5gee configuration\n";
    std::string_view section;
    visit_fields(cfg, [&](const FieldInfo& f, const auto& field) {
        if (f.section != section) {
            section = f.section;
            out << "\n[" << section << "]\n";
        }
        if (provenance) {
            out << "# " << f.provenance << '\n';
        }
        out << f.key << " = " << detail::encode(field) << '\n';
    });
    return out.str();
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Reads, parses, applies environment overrides and validates.
inline Config load_config(const std::string& path, const EnvLookup& env = process_env) {
    Config cfg = parse_config(read_text_file(path), env);
    validate(cfg);
    return cfg;
}

}  // namespace b5gee
