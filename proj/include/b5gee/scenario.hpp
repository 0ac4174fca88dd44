#pragma once
// End-to-end cell composition for the separate and non-separate scenarios,
// rate-point solving, parallel sweeps, crossing detection and EE-SE curves.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "b5gee/channel.hpp"
#include "b5gee/config.hpp"
#include "b5gee/link_metrics.hpp"
#include "b5gee/power.hpp"

namespace b5gee {

/// One curve of a sweep: scenario kind plus optional MBSALA antenna override.
struct Variant {
    Separation separation = Separation::separate;
    IapKind iap_kind = IapKind::mmwave;
    std::optional<int> m_t;

    /// "sep-mmwave", "sep-lifi" or "nonsep", with ":<M_T>" when set.
    std::string label() const {
        std::string s = separation == Separation::non_separate ? "nonsep"
                        : iap_kind == IapKind::lifi           ? "sep-lifi"
                                                              : "sep-mmwave";
        if (m_t) {
            s += ":" + std::to_string(*m_t);
        }
        return s;
    }

    friend bool operator==(const Variant&, const Variant&) = default;
};

inline Variant parse_variant(std::string_view text) {
    text = trim(text);
    Variant v;
    const auto colon = text.find(':');
    const std::string name = detail::lower(text.substr(0, colon));
    if (name == "sep-mmwave" || name == "separate-mmwave") {
        v = {Separation::separate, IapKind::mmwave, {}};
    } else if (name == "sep-lifi" || name == "separate-lifi") {
        v = {Separation::separate, IapKind::lifi, {}};
    } else if (name == "nonsep" || name == "non-separate") {
        v = {Separation::non_separate, IapKind::mmwave, {}};
    } else {
        throw ParseError("unknown variant '" + std::string(text) + "' (expected sep-mmwave, sep-lifi or nonsep)");
    }
    if (colon != std::string_view::npos) {
        const long long m = parse_integer(text.substr(colon + 1), "variant antenna count");
        if (m < 1 || m > 65536) {
            throw ParseError("variant '" + std::string(text) + "': antenna count out of range");
        }
        v.m_t = static_cast<int>(m);
    }
    return v;
}

inline std::vector<Variant> parse_variant_list(std::string_view text) {
    std::vector<Variant> out;
    for (auto part : detail::split(text, ',')) {
        if (!part.empty()) {
            out.push_back(parse_variant(part));
        }
    }
    if (out.empty()) {
        throw ParseError("variant list is empty");
    }
    return out;
}

/// Config with the variant's scenario kind and antenna count applied.
inline Config apply_variant(Config cfg, const Variant& v) {
    cfg.scenario.separation = v.separation;
    cfg.scenario.iap_kind = v.iap_kind;
    if (v.m_t) {
        cfg.scenario.m_t = *v.m_t;
    }
    return cfg;
}

struct Building {
    double distance = 0.0;     // m, MBSALA to BMAA
    double weight = 0.0;       // share of each array's rate, weights sum to 1
    double beta_backhaul = 0.0;  // rooftop link, linear
    double beta_direct = 0.0;    // through the wall, linear
};

/// Precomputed mmWave access terms for the users of one IAP.
struct MmwaveAccess {
    std::vector<double> beams;                 // beam centres, sine space
    std::vector<AngleDistribution> user_aods;
    double beta = 0.0;                         // M'_T times free-space gain
    std::vector<double> own;                   // a_k = E[F^2(theta_k - beam_k)]
    std::vector<double> cross;                 // b_k = sum_j!=k E[F^2(theta_k - beam_j)]
};

/// Precomputed LiFi access terms for one attocell.
struct LiFiAccess {
    double h_serving = 0.0;
    std::vector<OpticalLink> interferers;
    DevicePower power;  // rate independent
};

/// A wired cell: validated config, geometry and the static link terms.
struct ScenarioModel {
    Config cfg;
    std::vector<Building> buildings;
    MmwaveAccess mmwave;
    LiFiAccess lifi;

    Separation separation() const { return cfg.scenario.separation; }
    int n_bmaa() const {
        return separation() == Separation::separate ? cfg.scenario.n_arrays * cfg.scenario.n_buildings : 0;
    }
    int n_iap() const { return n_bmaa(); }
};

namespace detail {

inline MmwaveAccess build_mmwave(const Config& cfg) {
    const auto& s = cfg.scenario;
    MmwaveAccess a;
    const int n = s.n_iue;
    for (int k = 0; k < n; ++k) {
        const double c = (k - (n - 1) / 2.0) * s.beam_spacing;
        a.beams.push_back(c);
        a.user_aods.push_back({c, s.aod_spread});
    }
    a.beta = s.m_t_iap * db_to_linear(-pathloss_free_space(s.indoor_distance, s.carrier_freq_in));
    for (int k = 0; k < n; ++k) {
        a.own.push_back(expected_fejer_sq(s.m_t_iap, a.user_aods[k], a.beams[k]));
        double b = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j != k) {
                b += expected_fejer_sq(s.m_t_iap, a.user_aods[k], a.beams[j]);
            }
        }
        a.cross.push_back(b);
    }
    return a;
}

inline LiFiAccess build_lifi(const Config& cfg) {
    const auto& l = cfg.lifi;
    LiFiAccess a;
    auto gain = [&](const Vec3& tx) {
        return lifi_los_gain(lifi_angles(tx, l.rx_position, l.normal_tx, l.normal_rx), l);
    };
    a.h_serving = gain(l.tx_positions.front());
    for (std::size_t i = 1; i < l.tx_positions.size(); ++i) {
        a.interferers.push_back({l.led_coeff_interf, l.p_opt, gain(l.tx_positions[i])});
    }
    a.power = power_lifi_iap(l, a.h_serving);
    return a;
}

}  // namespace detail

/// Validates `cfg` and wires the cell. The random layout draws building
/// distances uniformly in [min, max] from `seed`; the deterministic layout
/// spaces them evenly unless explicit distances are configured.
inline ScenarioModel build_scenario(const Config& cfg, std::uint64_t seed = 0) {
    validate(cfg);
    const auto& s = cfg.scenario;
    ScenarioModel m{cfg, {}, {}, {}};

    const int nb = s.n_buildings;
    std::vector<double> dist(static_cast<std::size_t>(nb));
    if (!s.building_distances.empty()) {
        dist = s.building_distances;
    } else if (s.layout == Layout::random) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(s.building_distance_min, s.building_distance_max);
        for (auto& d : dist) {
            d = u(rng);
        }
    } else {
        for (int b = 0; b < nb; ++b) {
            dist[b] = nb == 1 ? s.building_distance_min
                              : s.building_distance_min +
                                    (s.building_distance_max - s.building_distance_min) * b / (nb - 1);
        }
    }
    double wsum = 0.0;
    for (int b = 0; b < nb; ++b) {
        wsum += s.rate_weights.empty() ? 1.0 : s.rate_weights[b];
    }
    for (int b = 0; b < nb; ++b) {
        const double pl = pathloss_winner_b5a(dist[b], s.carrier_freq_out);
        Building bld;
        bld.distance = dist[b];
        bld.weight = (s.rate_weights.empty() ? 1.0 : s.rate_weights[b]) / wsum;
        bld.beta_backhaul = db_to_linear(-pl);
        bld.beta_direct = db_to_linear(-apply_penetration(pl, s.penetration_loss_db));
        m.buildings.push_back(bld);
    }

    const int served = s.separation == Separation::separate ? s.n_ue : s.n_ue + nb * s.n_iue;
    const int tau = s.pilot_len.value_or(served);
    if (tau > s.coherence_block) {
        throw ValidationError("pilot_len", "pilot length (served users) exceeds coherence_block");
    }

    if (s.separation == Separation::separate) {
        if (s.iap_kind == IapKind::mmwave) {
            m.mmwave = detail::build_mmwave(cfg);
        } else {
            m.lifi = detail::build_lifi(cfg);
        }
    }
    return m;
}

/// Outcome at one offered rate. Infeasible points carry no power.
struct PointResult {
    double rate = 0.0;  // bit/s, whole cell
    bool feasible = true;
    std::string reason;
    double p_total = 0.0;
    double p_mbs = 0.0;
    double p_bmaa = 0.0;  // summed over all BMAAs
    double p_iap = 0.0;   // summed over all IAPs
    DevicePower mbs;
    DevicePower mbsala;   // one array
    std::vector<DevicePower> bmaas;  // one array's buildings
    std::vector<DevicePower> iaps;

    static PointResult infeasible(double rate, std::string why) {
        PointResult r;
        r.rate = rate;
        r.feasible = false;
        r.reason = std::move(why);
        return r;
    }
};

namespace detail {

struct Accounting {
    const Config& cfg;

    double fft_gops() const {
        const auto& bb = cfg.devices.baseband;
        return gops_fft(bb.symbols_per_frame, bb.n_fft, bb.frames_per_second);
    }
    double blocks_per_second() const {
        return cfg.devices.baseband.resource_elements_per_second() / cfg.scenario.coherence_block;
    }
    double per_bit(double ops, double rate) const { return ops * rate / 1e9; }
};

inline ComplexityLoad mbsala_load(const Config& cfg, int n_ue, int n_b, int l_beams, double array_rate) {
    const auto& s = cfg.scenario;
    const auto& bb = cfg.devices.baseband;
    const Accounting acc{cfg};
    const int tau = s.pilot_len.value_or(n_ue);
    const double weight = bb.precoding_weight > 0.0 ? bb.precoding_weight : static_cast<double>(s.m_t) * bb.n_fft;
    ComplexityLoad load;
    load.filtering = s.m_t * bb.gops_filter;
    load.fft = s.m_t * acc.fft_gops();
    load.estimation = gops_estimation(s.m_t, n_ue, acc.blocks_per_second(), tau);
    load.precoding = gops_precoding(n_ue, n_b, l_beams, tau, s.coherence_block, weight, bb.symbols_per_second());
    load.mapping = acc.per_bit(bb.mapping_ops_per_bit, array_rate);
    load.control = bb.gops_control;
    load.network = bb.gops_network;
    return load;
}

inline ComplexityLoad mbs_load(const Config& cfg, double cell_rate) {
    const auto& bb = cfg.devices.baseband;
    ComplexityLoad load;
    load.control = cfg.scenario.n_arrays * bb.gops_control;
    load.network = cfg.scenario.n_arrays * bb.gops_network;
    load.coding = Accounting{cfg}.per_bit(bb.coding_ops_per_bit, cell_rate);
    return load;
}

inline ComplexityLoad bmaa_load(const Config& cfg, double building_rate) {
    const auto& s = cfg.scenario;
    const auto& bb = cfg.devices.baseband;
    const Accounting acc{cfg};
    ComplexityLoad load;
    load.filtering = s.n_beams * bb.gops_filter;
    load.sampling = s.n_beams * bb.gops_sampling;
    load.beamforming = s.n_beams * static_cast<double>(s.m_r) * bb.resource_elements_per_second() / 1e9;
    load.fft = s.n_beams * acc.fft_gops();
    load.control = s.n_beams * bb.gops_control;
    load.network = s.n_beams * bb.gops_network;
    load.coding = acc.per_bit(bb.coding_ops_per_bit, building_rate);
    load.mapping = acc.per_bit(bb.mapping_ops_per_bit, building_rate);
    return load;
}

inline ComplexityLoad iap_load(const Config& cfg, double building_rate) {
    const auto& s = cfg.scenario;
    const auto& bb = cfg.devices.baseband;
    const Accounting acc{cfg};
    ComplexityLoad load;
    load.filtering = s.m_t_iap * bb.gops_filter;
    load.fft = s.m_t_iap * acc.fft_gops();
    load.coding = acc.per_bit(bb.coding_ops_per_bit, building_rate);
    load.mapping = acc.per_bit(bb.mapping_ops_per_bit, building_rate);
    load.control = bb.gops_control;
    load.network = bb.gops_network;
    return load;
}

inline std::string building_tag(std::size_t b) { return "building " + std::to_string(b); }

}  // namespace detail

/// Equal per-user transmit power that meets SINR target `s` for every user
/// of a mmWave IAP, or nullopt when some user is interference limited below `s`.
inline std::optional<double> mmwave_required_power(const MmwaveAccess& a, double s, double sigma2) {
    double p = 0.0;
    for (std::size_t k = 0; k < a.own.size(); ++k) {
        const double margin = a.own[k] - s * a.cross[k];
        if (!(margin > 0.0)) {
            return std::nullopt;
        }
        p = std::max(p, s * sigma2 / (a.beta * margin));
    }
    return p;
}

/// Optical power the serving LED needs for SINR target `s`, or nullopt when
/// the receiver sees no line of sight.
inline std::optional<double> lifi_required_power(const LiFiAccess& a, const LiFiDeviceParams& l, double s,
                                                 double bandwidth) {
    if (!(a.h_serving > 0.0)) {
        return std::nullopt;
    }
    double den = l.n0 * bandwidth;
    for (const auto& i : a.interferers) {
        den += i.electrical_power();
    }
    return std::sqrt(s * den) / (l.led_coeff * a.h_serving);
}

/// Rate-to-power inversion at total offered rate `rate` (bit/s). Rates split
/// equally over arrays, by weight over buildings and equally over beams or
/// users. Any PA above its rating makes the point infeasible.
inline PointResult solve_rate_point(const ScenarioModel& m, double rate) {
    if (!(rate >= 0.0)) {
        throw DomainError("solve_rate_point: rate must be >= 0");
    }
    const auto& cfg = m.cfg;
    const auto& s = cfg.scenario;
    const auto& k = cfg.devices;
    const double array_rate = rate / s.n_arrays;
    PointResult r;
    r.rate = rate;

    std::vector<double> pa_out;
    ComplexityLoad load;

    if (s.separation == Separation::separate) {
        for (std::size_t b = 0; b < m.buildings.size(); ++b) {
            const auto& bld = m.buildings[b];
            const double rb = array_rate * bld.weight;
            const double sinr = required_sinr(rb / s.n_beams / s.bandwidth_out, s.gamma);
            const double p = sinr * s.noise_variance / (bld.beta_backhaul * s.m_t * s.m_r);
            if (p > k.mbsala.pa_max) {
                return PointResult::infeasible(rate, "backhaul PA saturation at " + detail::building_tag(b));
            }
            pa_out.insert(pa_out.end(), static_cast<std::size_t>(s.n_beams), p);

            const auto bmaa = power_bmaa(s.m_r, k, detail::bmaa_load(cfg, rb));
            r.bmaas.push_back(bmaa);

            const double s_in = required_sinr(rb / s.n_iue / s.bandwidth_in, s.gamma);
            if (s.iap_kind == IapKind::mmwave) {
                const auto p_user = mmwave_required_power(m.mmwave, s_in, s.noise_variance_in);
                if (!p_user) {
                    return PointResult::infeasible(rate, "mmWave access interference limited at " +
                                                             detail::building_tag(b));
                }
                const double p_ant = s.n_iue * *p_user / s.m_t_iap;
                if (p_ant > k.iap.pa_max) {
                    return PointResult::infeasible(rate, "mmWave IAP PA saturation at " + detail::building_tag(b));
                }
                r.iaps.push_back(power_iap_mmwave(s.m_t_iap, k, detail::iap_load(cfg, rb), p_ant));
            } else {
                const double s_cell = required_sinr(rb / s.bandwidth_in, s.gamma);
                const auto p_t = lifi_required_power(m.lifi, cfg.lifi, s_cell, s.bandwidth_in);
                if (!p_t || *p_t > cfg.lifi.p_opt) {
                    return PointResult::infeasible(rate, "LiFi optical power limit at " + detail::building_tag(b));
                }
                r.iaps.push_back(m.lifi.power);
            }
        }
        load = detail::mbsala_load(cfg, s.n_ue, s.n_buildings, s.n_beams, array_rate);
    } else {
        for (std::size_t b = 0; b < m.buildings.size(); ++b) {
            const auto& bld = m.buildings[b];
            const double ru = array_rate * bld.weight / s.n_iue;
            const double sinr = required_sinr(ru / s.bandwidth_out, s.gamma);
            const double p = sinr * s.noise_variance / (bld.beta_direct * s.m_t);
            if (p > k.mbsala.pa_max) {
                return PointResult::infeasible(rate, "direct-link PA saturation at " + detail::building_tag(b));
            }
            pa_out.insert(pa_out.end(), static_cast<std::size_t>(s.n_iue), p);
        }
        load = detail::mbsala_load(cfg, s.n_ue + s.n_buildings * s.n_iue, 0, 0, array_rate);
    }

    r.mbsala = power_mbsala(s.m_t, k, load, pa_out);
    const std::vector<DevicePower> arrays(static_cast<std::size_t>(s.n_arrays), r.mbsala);
    r.mbs = power_mbs(s.n_arrays, k, arrays, detail::mbs_load(cfg, rate));
    r.p_mbs = r.mbs.p_total;
    for (const auto& d : r.bmaas) {
        r.p_bmaa += s.n_arrays * d.p_total;
    }
    for (const auto& d : r.iaps) {
        r.p_iap += s.n_arrays * d.p_total;
    }
    r.p_total = r.p_mbs + r.p_bmaa + r.p_iap;
    return r;
}

enum class SweepVariable { rate, se };

inline std::string_view to_string(SweepVariable v) { return v == SweepVariable::rate ? "rate" : "se"; }

struct SweepSpec {
    SweepVariable variable = SweepVariable::rate;
    std::vector<double> grid;
    std::vector<Variant> variants;
};

/// Grid "min:max:steps" with `steps` evenly spaced points, ends included.
inline std::vector<double> parse_grid(std::string_view text) {
    const auto parts = detail::split(text, ':');
    if (parts.size() != 3) {
        throw ParseError("grid must be min:max:steps, got '" + std::string(text) + "'");
    }
    const double lo = parse_double(parts[0], "grid min");
    const double hi = parse_double(parts[1], "grid max");
    const long long n = parse_integer(parts[2], "grid steps");
    if (n < 2 || n > 1000000) {
        throw ParseError("grid needs between 2 and 1e6 steps");
    }
    std::vector<double> g(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        g[i] = i == n - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return g;
}

inline void validate(const SweepSpec& spec) {
    if (spec.grid.size() < 2) {
        throw ValidationError("grid", "needs at least 2 points");
    }
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        if (!(spec.grid[i] >= 0.0) || !std::isfinite(spec.grid[i])) {
            throw ValidationError("grid", "values must be finite and >= 0");
        }
        if (i > 0 && !(spec.grid[i] > spec.grid[i - 1])) {
            throw ValidationError("grid", "must be strictly increasing");
        }
    }
    if (spec.variants.empty()) {
        throw ValidationError("variants", "need at least one variant");
    }
}

struct SweepSeries {
    Variant variant;
    double bandwidth_out = 0.0;
    std::vector<double> x;
    std::vector<PointResult> points;

    /// Cell spectral efficiency R / B_out at point i.
    double se(std::size_t i) const { return points[i].rate / bandwidth_out; }
    /// EE at point i, nullopt when infeasible.
    std::optional<double> ee(std::size_t i) const {
        if (!points[i].feasible) {
            return std::nullopt;
        }
        return energy_efficiency({se(i), 1.0, 0.0}, points[i].p_total).value;
    }
};

struct SweepResult {
    SweepSpec spec;
    std::uint64_t seed = 0;
    std::vector<SweepSeries> series;

    const SweepSeries* find(const Variant& v) const {
        for (const auto& s : series) {
            if (s.variant == v) {
                return &s;
            }
        }
        return nullptr;
    }
};

/// Evaluates every (variant, grid point) pair on a thread pool. Each result
/// lands in a fixed slot, so output order and values do not depend on
/// scheduling.
inline SweepResult run_sweep(const Config& cfg, const SweepSpec& spec, std::uint64_t seed = 0,
                             unsigned threads = 0) {
    validate(spec);
    SweepResult out{spec, seed, {}};
    std::vector<ScenarioModel> models;
    for (const auto& v : spec.variants) {
        models.push_back(build_scenario(apply_variant(cfg, v), seed));
        SweepSeries s{v, models.back().cfg.scenario.bandwidth_out, spec.grid, {}};
        s.points.resize(spec.grid.size());
        out.series.push_back(std::move(s));
    }

    const std::size_t n_pts = spec.grid.size();
    const std::size_t jobs = n_pts * models.size();
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t j = next++; j < jobs; j = next++) {
            const std::size_t v = j / n_pts;
            const std::size_t i = j % n_pts;
            const double x = spec.grid[i];
            const double rate = spec.variable == SweepVariable::rate ? x : x * out.series[v].bandwidth_out;
            out.series[v].points[i] = solve_rate_point(models[v], rate);
        }
    };
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(work);
        }
    }
    return out;
}

/// Curve sampled on a grid; nullopt marks points without a value.
struct Curve {
    std::vector<double> x;
    std::vector<std::optional<double>> y;
};

inline Curve power_curve(const SweepSeries& s) {
    Curve c{s.x, {}};
    for (const auto& p : s.points) {
        c.y.push_back(p.feasible ? std::optional<double>(p.p_total) : std::nullopt);
    }
    return c;
}

/// Every sign change of a - b over the points where both are defined, each
/// located by linear interpolation. A point where the curves touch exactly
/// counts as a crossing only if the sign on either side differs.
inline std::vector<double> find_crossings(const Curve& a, const Curve& b) {
    if (a.x != b.x || a.y.size() != a.x.size() || b.y.size() != b.x.size()) {
        throw std::invalid_argument("find_crossing: curves must share one grid");
    }
    std::vector<double> out;
    std::optional<std::pair<double, double>> last;  // (x, diff) with diff != 0
    bool touched = false;
    double touch_x = 0.0;
    for (std::size_t i = 0; i < a.x.size(); ++i) {
        if (!a.y[i] || !b.y[i]) {
            continue;
        }
        const double d = *a.y[i] - *b.y[i];
        if (d == 0.0) {
            if (last && !touched) {
                touched = true;
                touch_x = a.x[i];
            }
            continue;
        }
        if (last && std::signbit(d) != std::signbit(last->second)) {
            out.push_back(touched ? touch_x : last->first + (a.x[i] - last->first) * last->second / (last->second - d));
        }
        last = {a.x[i], d};
        touched = false;
    }
    return out;
}

inline std::optional<double> find_crossing(const Curve& a, const Curve& b) {
    const auto all = find_crossings(a, b);
    return all.empty() ? std::nullopt : std::optional<double>(all.front());
}

inline std::optional<double> find_crossing(const SweepSeries& a, const SweepSeries& b) {
    return find_crossing(power_curve(a), power_curve(b));
}

struct EeCurve {
    std::vector<double> se;
    std::vector<std::optional<double>> ee;
    std::optional<std::size_t> peak;  // index into se
    bool interior_peak = false;       // peak has feasible points on both sides
    bool unimodal = true;             // rises then falls over the feasible points

    std::optional<double> peak_se() const { return peak ? std::optional<double>(se[*peak]) : std::nullopt; }
    std::optional<double> peak_ee() const { return peak ? ee[*peak] : std::nullopt; }
};

/// EE = SE / P over `se_grid`, where `power(se)` returns total power or
/// nullopt when the point is infeasible.
template <class PowerFn>
EeCurve ee_se_curve(PowerFn&& power, std::span<const double> se_grid) {
    for (std::size_t i = 1; i < se_grid.size(); ++i) {
        if (!(se_grid[i] > se_grid[i - 1])) {
            throw std::invalid_argument("ee_se_curve: SE grid must be strictly increasing");
        }
    }
    EeCurve c;
    std::vector<std::size_t> feasible;
    for (std::size_t i = 0; i < se_grid.size(); ++i) {
        c.se.push_back(se_grid[i]);
        const std::optional<double> p = power(se_grid[i]);
        if (p) {
            c.ee.push_back(energy_efficiency({se_grid[i], 1.0, 0.0}, *p).value);
            feasible.push_back(i);
        } else {
            c.ee.push_back(std::nullopt);
        }
    }
    if (feasible.empty()) {
        return c;
    }
    std::size_t best = feasible.front();
    for (auto i : feasible) {
        if (*c.ee[i] > *c.ee[best]) {
            best = i;
        }
    }
    c.peak = best;
    c.interior_peak = best != feasible.front() && best != feasible.back();
    bool falling = false;
    for (std::size_t j = 1; j < feasible.size(); ++j) {
        const double prev = *c.ee[feasible[j - 1]];
        const double cur = *c.ee[feasible[j]];
        if (cur < prev) {
            falling = true;
        } else if (cur > prev && falling) {
            c.unimodal = false;
        }
    }
    return c;
}

inline EeCurve ee_se_curve(const ScenarioModel& m, std::span<const double> se_grid) {
    const double bw = m.cfg.scenario.bandwidth_out;
    return ee_se_curve(
        [&](double se) -> std::optional<double> {
            const auto r = solve_rate_point(m, se * bw);
            return r.feasible ? std::optional<double>(r.p_total) : std::nullopt;
        },
        se_grid);
}

inline EeCurve ee_se_curve(const SweepSeries& s) {
    std::vector<double> se;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        se.push_back(s.se(i));
    }
    std::size_t i = 0;
    return ee_se_curve(
        [&](double) -> std::optional<double> {
            const auto& p = s.points[i++];
            return p.feasible ? std::optional<double>(p.p_total) : std::nullopt;
        },
        se);
}

}  // namespace b5gee
