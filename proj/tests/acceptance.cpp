// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "b5gee/b5gee.hpp"
#include "golden_support.hpp"

using namespace b5gee;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(const std::string& id, const std::string& name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) {
        ++failures;
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << id << "] " << name;
    if (!o.detail.empty()) {
        std::cout << " -- " << o.detail;
    }
    std::cout << std::endl;
}

bool rel_close(double got, double want, double tol) {
    return std::abs(got - want) <= tol * std::max(std::abs(want), 1e-300);
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const Config& shipped() {
    static const Config c = load_config(B5GEE_SOURCE_DIR "/configs/default.cfg", no_env);
    return c;
}

const std::vector<int> antenna_counts{64, 128, 256};

SweepResult rate_sweep() {
    std::string variants;
    for (int m : antenna_counts) {
        for (const char* v : {"sep-mmwave", "sep-lifi", "nonsep"}) {
            variants += (variants.empty() ? "" : ",") + std::string(v) + ":" + std::to_string(m);
        }
    }
    const SweepSpec spec{SweepVariable::rate, parse_grid("0:6e9:25"), parse_variant_list(variants)};
    return run_sweep(shipped(), spec, 0);
}

const SweepResult& sweep() {
    static const SweepResult r = rate_sweep();
    return r;
}

const SweepSeries& series(const std::string& label) {
    const auto* s = sweep().find(parse_variant(label));
    if (!s) {
        throw std::runtime_error("missing series " + label);
    }
    return *s;
}

}  // namespace

int main() {
    constexpr double exact = 1e-9;

    // 1. Exact formula checks.
    criterion("1.1", "WINNER B5a path loss", [] {
        const double a = pathloss_winner_b5a(100, 5), b = pathloss_winner_b5a(1, 5);
        return Outcome{rel_close(a, 89.5, exact) && rel_close(b, 42.5, exact), num(a) + " dB, " + num(b) + " dB"};
    });
    criterion("1.2", "Lambertian order", [] {
        const double a = lambertian_order(deg_to_rad(60)), b = lambertian_order(deg_to_rad(45));
        return Outcome{rel_close(a, 1.0, exact) && rel_close(b, 2.0, exact), num(a) + ", " + num(b)};
    });
    criterion("1.3", "Fejer kernel values and nulls", [] {
        bool ok = true;
        for (int m = 1; m <= 512; ++m) {
            ok = ok && rel_close(fejer_kernel(m, 0.0), 1.0, exact);
        }
        ok = ok && std::abs(fejer_kernel(2, 1.0)) <= exact && std::abs(fejer_kernel(4, 0.5)) <= exact;
        return Outcome{ok, ""};
    });
    criterion("1.4", "Doherty PA branches", [] {
        const double q = 0.25;
        const double below = pa_power_doherty(std::nextafter(q, 0.0), 1.0);
        const double at = pa_power_doherty(q, 1.0);
        const bool ok = rel_close(pa_power_doherty(1, 1), 6.0 / pi, exact) &&
                        rel_close(pa_power_doherty(0.01, 1), 2.0 / (pi * 10.0), exact) &&
                        std::abs(below - 0.31831) < 5e-6 && std::abs(at - 0.95493) < 5e-6;
        return Outcome{ok, "0.25- -> " + num(below) + ", 0.25+ -> " + num(at)};
    });
    criterion("1.5", "overhead divisor", [] {
        DeviceConstants k;
        const double v = 1.0 / k.overhead_divisor();
        return Outcome{std::abs(v - 1.27787) < 5e-6 && rel_close(v, 1.0 / (0.9 * 0.925 * 0.94), exact), num(v) + " W"};
    });
    criterion("1.6", "snr_macro linear in M_T and M_R (100 configs)", [] {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(0.1, 10.0);
        for (int i = 0; i < 100; ++i) {
            const double beta = u(rng) * 1e-10, p = u(rng), s2 = u(rng) * 1e-13;
            const int mt = 1 + static_cast<int>(rng() % 512), mr = 1 + static_cast<int>(rng() % 128);
            const double base = snr_macro(beta, mt, mr, p, s2).value;
            if (!rel_close(snr_macro(beta, 2 * mt, mr, p, s2).value, 2 * base, exact) ||
                !rel_close(snr_macro(beta, mt, 2 * mr, p, s2).value, 2 * base, exact)) {
                return Outcome{false, "config " + std::to_string(i)};
            }
        }
        return Outcome{true, ""};
    });

    // 2. Oracle equivalence.
    criterion("2.1", "beam-pattern expectation: integration vs 1e6-draw Monte Carlo (20 cases, 1%)", [] {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> centre(-0.6, 0.6), width(0.005, 0.3);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const int m = 2 + static_cast<int>(rng() % 63);
            const AngleDistribution aod{centre(rng), width(rng)};
            const double grid = expected_fejer_sq(m, aod, 0.0);
            const auto mc = expected_fejer_sq_mc(m, aod, 0.0, 1'000'000, 100 + i);
            worst = std::max(worst, std::abs(grid - mc.mean) / mc.mean);
        }
        return Outcome{worst <= 0.01, "worst relative gap " + num(worst)};
    });
    criterion("2.2", "spectral efficiency approximation vs exact Monte Carlo (M_T M_R >= 4096, 2%)", [] {
        double worst = 0.0;
        for (int mt : {64, 128, 256}) {
            for (double snr_db : {-10.0, 0.0, 10.0, 20.0, 30.0}) {
                const MacroSnrSampler s{db_to_linear(snr_db), mt, 64, true};
                const double exact_se = spectral_efficiency_mc(s, 1.0, 100'000, 9).value;
                const double approx = spectral_efficiency({LinkKind::macro_backhaul, s.mean_snr}, 1.0).value;
                worst = std::max(worst, std::abs(approx - exact_se) / exact_se);
            }
        }
        return Outcome{worst <= 0.02, "worst relative gap " + num(worst)};
    });
    criterion("2.3", "required_sinr round trip (1000 values, 1e-12)", [] {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> se(0.0, 40.0);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double s = se(rng);
            const double back = spectral_efficiency({LinkKind::macro_backhaul, required_sinr(s, 1.0)}, 1.0).value;
            worst = std::max(worst, std::abs(back - s) / std::max(1.0, s));
        }
        return Outcome{worst <= 1e-12, "worst gap " + num(worst)};
    });

    // 3. Figure shapes on the shipped config, seed 0, 25-point grid to 6 Gbit/s.
    for (int m : antenna_counts) {
        const std::string tag = std::to_string(m);
        criterion("3.1", "exactly one separate/non-separate crossing, M_T=" + tag, [&] {
            const auto c = find_crossings(power_curve(series("sep-mmwave:" + tag)), power_curve(series("nonsep:" + tag)));
            std::string at;
            for (double x : c) {
                at += (at.empty() ? "" : ", ") + num(x / 1e9) + " Gbit/s";
            }
            return Outcome{c.size() == 1, std::to_string(c.size()) + " crossing(s)" + (at.empty() ? "" : " at " + at)};
        });
        criterion("3.2", "separate cheaper above the crossing, dearer below, M_T=" + tag, [&] {
            const auto& s = series("sep-mmwave:" + tag);
            const auto& n = series("nonsep:" + tag);
            const auto x0 = find_crossing(s, n);
            if (!x0) {
                return Outcome{false, "no crossing"};
            }
            int checked = 0;
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!s.points[i].feasible || !n.points[i].feasible) {
                    continue;
                }
                ++checked;
                const double ps = s.points[i].p_total, pn = n.points[i].p_total;
                if ((s.x[i] > *x0 && !(ps < pn)) || (s.x[i] < *x0 && !(ps > pn))) {
                    return Outcome{false, "violated at " + num(s.x[i] / 1e9) + " Gbit/s"};
                }
            }
            return Outcome{true, std::to_string(checked) + " common feasible points"};
        });
    }
    criterion("3.3", "total power nondecreasing in rate for every variant", [] {
        for (const auto& s : sweep().series) {
            double prev = -1.0;
            for (const auto& p : s.points) {
                if (!p.feasible) {
                    continue;
                }
                if (p.p_total < prev) {
                    return Outcome{false, s.variant.label() + " at " + num(p.rate)};
                }
                prev = p.p_total;
            }
        }
        return Outcome{true, std::to_string(sweep().series.size()) + " variants"};
    });
    criterion("3.4", "EE-SE interior maximum at M_T=128 and 256; peak EE(256) >= peak EE(64)", [] {
        const SweepSpec spec{SweepVariable::se, parse_grid("2:600:120"),
                             parse_variant_list("sep-mmwave:64,sep-mmwave:128,sep-mmwave:256,sep-lifi:64,"
                                                "sep-lifi:128,sep-lifi:256,nonsep:64,nonsep:128,nonsep:256")};
        const auto r = run_sweep(shipped(), spec, 0);
        std::ostringstream detail;
        bool ok = true;
        for (const char* kind : {"sep-mmwave", "sep-lifi", "nonsep"}) {
            const std::string k(kind);
            const auto c64 = ee_se_curve(*r.find(parse_variant(k + ":64")));
            const auto c128 = ee_se_curve(*r.find(parse_variant(k + ":128")));
            const auto c256 = ee_se_curve(*r.find(parse_variant(k + ":256")));
            ok = ok && c128.interior_peak && c256.interior_peak && c64.peak && c256.peak &&
                 *c256.peak_ee() >= *c64.peak_ee();
            detail << k << " peak " << (c64.peak ? num(*c64.peak_ee()) : "-") << " -> "
                   << (c256.peak ? num(*c256.peak_ee()) : "-") << "; ";
        }
        return Outcome{ok, detail.str()};
    });

    // 4. Calibration targets.
    criterion("4.1", "M_T=256 at 5 Gbit/s: P_nonsep / P_sep >= 2", [] {
        const auto sep = solve_rate_point(build_scenario(apply_variant(shipped(), parse_variant("sep-mmwave:256"))), 5e9);
        const auto non = solve_rate_point(build_scenario(apply_variant(shipped(), parse_variant("nonsep:256"))), 5e9);
        if (!sep.feasible || !non.feasible) {
            return Outcome{false, "infeasible reference point"};
        }
        const double ratio = non.p_total / sep.p_total;
        return Outcome{ratio >= 2.0, num(non.p_total) + " W / " + num(sep.p_total) + " W = " + num(ratio)};
    });
    criterion("4.2", "LiFi below mmWave at every common point, mean saving in [5%, 20%]", [] {
        std::ostringstream detail;
        bool ok = true;
        for (int m : antenna_counts) {
            const auto& l = series("sep-lifi:" + std::to_string(m));
            const auto& w = series("sep-mmwave:" + std::to_string(m));
            double saving = 0.0;
            int n = 0;
            for (std::size_t i = 0; i < l.x.size(); ++i) {
                if (l.points[i].feasible && w.points[i].feasible) {
                    const double ratio = l.points[i].p_total / w.points[i].p_total;
                    ok = ok && ratio < 1.0;
                    saving += 1.0 - ratio;
                    ++n;
                }
            }
            const double mean = n ? saving / n : 0.0;
            ok = ok && n > 0 && mean >= 0.05 && mean <= 0.20;
            detail << "M_T=" << m << ": " << num(100 * mean) << "% over " << n << " points; ";
        }
        return Outcome{ok, detail.str()};
    });

    // 5. Determinism and schema.
    criterion("5.1", "identical (config, seed) gives byte-identical results.csv", [] {
        const auto a = write_csv(rate_sweep());
        const auto b = write_csv(sweep());
        return Outcome{a == b, sha256_hex(a).substr(0, 16)};
    });
    criterion("5.2", "golden device powers match the independent oracle (1e-6)", [] {
        const auto want = golden::read_golden(B5GEE_SOURCE_DIR "/tests/golden/device_powers.txt");
        const auto got = golden::golden_points(shipped());
        double worst = 0.0;
        for (const auto& [k, v] : want) {
            if (!got.count(k)) {
                return Outcome{false, "missing " + k};
            }
            worst = std::max(worst, std::abs(got.at(k) - v) / std::abs(v));
        }
        return Outcome{worst <= 1e-6 && got.size() == want.size(),
                       std::to_string(want.size()) + " values, worst relative gap " + num(worst)};
    });

    std::cout << (failures ? "ACCEPTANCE: " + std::to_string(failures) + " criterion line(s) failed" : "ACCEPTANCE: all criteria pass")
              << std::endl;
    return failures ? 1 : 0;
}
