#pragma once
// Sweep output: results.csv writer and reader, run manifest, SVG line charts
// drawn from CSV rows, and the crossing / EE-peak / LiFi-saving summary.
// Needs OpenSSL libcrypto for the manifest hash.

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "b5gee/config.hpp"
#include "b5gee/scenario.hpp"

namespace b5gee {

inline constexpr std::string_view tool_version = "0.1.0";
inline constexpr std::string_view csv_header =
    "variant,x_value,x_kind,total_power_w,ee,feasible,p_mbs_w,p_bmaa_w,p_iap_w";

inline std::string_view x_kind_name(SweepVariable v) {
    return v == SweepVariable::rate ? "rate_bps" : "se_bits_per_hz";
}

/// One results.csv row. Power and EE fields are empty on infeasible rows.
struct CsvRow {
    std::string variant;
    double x = 0.0;
    std::string x_kind;
    std::optional<double> total_power;
    std::optional<double> ee;
    bool feasible = false;
    std::optional<double> p_mbs;
    std::optional<double> p_bmaa;
    std::optional<double> p_iap;
};

inline std::vector<CsvRow> to_rows(const SweepResult& r) {
    std::vector<CsvRow> rows;
    for (const auto& s : r.series) {
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            const auto& p = s.points[i];
            CsvRow row{s.variant.label(), s.x[i], std::string(x_kind_name(r.spec.variable)), {}, {}, p.feasible, {},
                       {}, {}};
            if (p.feasible) {
                row.total_power = p.p_total;
                row.ee = s.ee(i);
                row.p_mbs = p.p_mbs;
                row.p_bmaa = p.p_bmaa;
                row.p_iap = p.p_iap;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

inline std::string write_csv(const std::vector<CsvRow>& rows) {
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; };
    std::string out(csv_header);
    out += '\n';
    for (const auto& r : rows) {
        out += r.variant + ',' + format_double(r.x) + ',' + r.x_kind + ',' + opt(r.total_power) + ',' + opt(r.ee) +
               ',' + (r.feasible ? "1" : "0") + ',' + opt(r.p_mbs) + ',' + opt(r.p_bmaa) + ',' + opt(r.p_iap) +
               '\n';
    }
    return out;
}

inline std::string write_csv(const SweepResult& r) { return write_csv(to_rows(r)); }

/// Parses results.csv; throws ParseError on a wrong header, field count or value.
inline std::vector<CsvRow> read_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (!header) {
            if (t != csv_header) {
                throw ParseError("results.csv: unexpected header '" + std::string(t) + "'");
            }
            header = true;
            continue;
        }
        const auto f = detail::split(t, ',');
        const std::string ctx = "results.csv line " + std::to_string(lineno);
        if (f.size() != 9) {
            throw ParseError(ctx + ": expected 9 fields, got " + std::to_string(f.size()));
        }
        auto opt = [&](std::string_view v) -> std::optional<double> {
            if (v.empty()) {
                return std::nullopt;
            }
            return parse_double(v, ctx);
        };
        CsvRow r;
        r.variant = std::string(f[0]);
        if (r.variant.empty()) {
            throw ParseError(ctx + ": empty variant");
        }
        r.x = parse_double(f[1], ctx);
        r.x_kind = std::string(f[2]);
        if (r.x_kind != "rate_bps" && r.x_kind != "se_bits_per_hz") {
            throw ParseError(ctx + ": unknown x_kind '" + r.x_kind + "'");
        }
        r.total_power = opt(f[3]);
        r.ee = opt(f[4]);
        if (f[5] != "0" && f[5] != "1") {
            throw ParseError(ctx + ": feasible must be 0 or 1");
        }
        r.feasible = f[5] == "1";
        r.p_mbs = opt(f[6]);
        r.p_bmaa = opt(f[7]);
        r.p_iap = opt(f[8]);
        if (r.feasible != r.total_power.has_value()) {
            throw ParseError(ctx + ": total_power must be present exactly on feasible rows");
        }
        rows.push_back(std::move(r));
    }
    if (!header) {
        throw ParseError("results.csv: missing header");
    }
    return rows;
}

/// Rows grouped per variant, in first-appearance order.
struct CsvSeries {
    std::string variant;
    std::string x_kind;
    std::vector<double> x;
    std::vector<std::optional<double>> power;
    std::vector<std::optional<double>> ee;

    Curve power_curve() const { return {x, power}; }
};

inline std::vector<CsvSeries> group_rows(const std::vector<CsvRow>& rows) {
    std::vector<CsvSeries> out;
    for (const auto& r : rows) {
        auto it = std::find_if(out.begin(), out.end(), [&](const CsvSeries& s) { return s.variant == r.variant; });
        if (it == out.end()) {
            out.push_back({r.variant, r.x_kind, {}, {}, {}});
            it = out.end() - 1;
        }
        if (!it->x.empty() && !(r.x > it->x.back())) {
            throw ParseError("results.csv: x values of '" + r.variant + "' are not strictly increasing");
        }
        it->x.push_back(r.x);
        it->power.push_back(r.total_power);
        it->ee.push_back(r.ee);
    }
    return out;
}

inline std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

struct RunManifest {
    std::string config_path;    // empty when running on defaults
    std::string config_sha256;  // hash of the exact config file bytes
    std::string effective_sha256;  // hash of the resolved config (file + env)
    std::uint64_t seed = 0;
    std::string variable;
    std::string grid;
    std::string variants;
    std::string version{tool_version};
    std::string timestamp;

    std::string write() const {
        std::ostringstream o;
        o << "tool_version=" << version << '\n'
          << "timestamp=" << timestamp << '\n'
          << "config_path=" << config_path << '\n'
          << "config_sha256=" << config_sha256 << '\n'
          << "effective_config_sha256=" << effective_sha256 << '\n'
          << "seed=" << seed << '\n'
          << "variable=" << variable << '\n'
          << "grid=" << grid << '\n'
          << "variants=" << variants << '\n';
        return o.str();
    }
};

/// key=value lines into a map; blank and '#' lines ignored.
inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("key=value line without '=': '" + std::string(t) + "'");
        }
        kv[std::string(trim(t.substr(0, eq)))] = std::string(trim(t.substr(eq + 1)));
    }
    return kv;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// SVG line chart.

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<std::optional<double>> y;
};

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

/// Minimal static line chart. Gaps in a series (nullopt) break its polyline.
inline std::string render_svg(std::string_view title, std::string_view x_label, std::string_view y_label,
                              const std::vector<PlotSeries>& series) {
    constexpr double w = 720, h = 480, left = 80, right = 180, top = 40, bottom = 60;
    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                              "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    double x0 = INFINITY, x1 = -INFINITY, y0 = 0.0, y1 = -INFINITY;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (s.y[i]) {
                x0 = std::min(x0, s.x[i]);
                x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, *s.y[i]);
                y1 = std::max(y1, *s.y[i]);
            }
        }
    }
    if (!(x1 > x0)) {
        x0 = std::isfinite(x0) ? x0 - 1.0 : 0.0;
        x1 = x0 + 2.0;
    }
    if (!(y1 > y0)) {
        y1 = y0 + 1.0;
    }
    const double pw = w - left - right;
    const double ph = h - top - bottom;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };
    using detail::svg_num;

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << svg_num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << detail::xml_escape(title) << "</text>\n";
    o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double xv = x0 + (x1 - x0) * t / 5.0;
        const double yv = y0 + (y1 - y0) * t / 5.0;
        o << "<line x1=\"" << svg_num(px(xv)) << "\" y1=\"" << svg_num(top + ph) << "\" x2=\"" << svg_num(px(xv))
          << "\" y2=\"" << svg_num(top + ph + 5) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << svg_num(px(xv)) << "\" y=\"" << svg_num(top + ph + 18)
          << "\" text-anchor=\"middle\">" << detail::tick_label(xv) << "</text>\n";
        o << "<line x1=\"" << svg_num(left - 5) << "\" y1=\"" << svg_num(py(yv)) << "\" x2=\"" << svg_num(left)
          << "\" y2=\"" << svg_num(py(yv)) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << svg_num(left - 8) << "\" y=\"" << svg_num(py(yv) + 4) << "\" text-anchor=\"end\">"
          << detail::tick_label(yv) << "</text>\n";
    }
    o << "<text x=\"" << svg_num(left + pw / 2) << "\" y=\"" << svg_num(h - 15) << "\" text-anchor=\"middle\">"
      << detail::xml_escape(x_label) << "</text>\n";
    o << "<text transform=\"translate(18," << svg_num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << detail::xml_escape(y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = palette[k % std::size(palette)];
        std::string pts;
        auto flush = [&] {
            if (!pts.empty()) {
                o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"" << pts
                  << "\"/>\n";
                pts.clear();
            }
        };
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!s.y[i]) {
                flush();
                continue;
            }
            pts += (pts.empty() ? "" : " ") + svg_num(px(s.x[i])) + "," + svg_num(py(*s.y[i]));
        }
        flush();
        const double ly = top + 10 + 18.0 * k;
        o << "<line x1=\"" << svg_num(w - right + 10) << "\" y1=\"" << svg_num(ly) << "\" x2=\""
          << svg_num(w - right + 30) << "\" y2=\"" << svg_num(ly) << "\" stroke=\"" << colour
          << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << svg_num(w - right + 35) << "\" y=\"" << svg_num(ly + 4) << "\">"
          << detail::xml_escape(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

/// Chart of total power (rate sweeps) or EE (SE sweeps) built only from CSV rows.
inline std::string plot_from_csv(const std::vector<CsvRow>& rows) {
    const auto groups = group_rows(rows);
    std::vector<PlotSeries> ps;
    const bool rate = !groups.empty() && groups.front().x_kind == "rate_bps";
    for (const auto& g : groups) {
        PlotSeries s{g.variant, {}, rate ? g.power : g.ee};
        for (double x : g.x) {
            s.x.push_back(rate ? x / 1e9 : x);
        }
        ps.push_back(std::move(s));
    }
    if (rate) {
        return render_svg("Cell power versus offered rate", "offered rate (Gbit/s)", "total power (W)", ps);
    }
    return render_svg("Energy efficiency versus spectral efficiency", "SE (bit/s/Hz)", "EE ((bit/s/Hz)/W)", ps);
}

inline std::string plot_file_name(const std::vector<CsvRow>& rows) {
    return !rows.empty() && rows.front().x_kind == "se_bits_per_hz" ? "ee_vs_se.svg" : "power_vs_rate.svg";
}

// Analysis.

struct CrossingReport {
    std::string a;
    std::string b;
    std::vector<double> at;
};

struct PeakReport {
    std::string variant;
    std::optional<double> x;
    std::optional<double> ee;
    bool interior = false;
};

struct SavingReport {
    std::string lifi;
    std::string mmwave;
    std::vector<double> x;
    std::vector<double> ratio;  // P_lifi / P_mmwave at common feasible points
    double mean_saving() const {
        if (ratio.empty()) {
            return 0.0;
        }
        double s = 0.0;
        for (double r : ratio) {
            s += 1.0 - r;
        }
        return s / static_cast<double>(ratio.size());
    }
};

struct Analysis {
    std::string x_kind;
    std::vector<CrossingReport> crossings;
    std::vector<PeakReport> peaks;
    std::vector<SavingReport> savings;
};

namespace detail {
inline std::string variant_suffix(const std::string& label) {
    const auto c = label.find(':');
    return c == std::string::npos ? std::string{} : label.substr(c);
}
inline std::string variant_base(const std::string& label) { return label.substr(0, label.find(':')); }
}  // namespace detail

/// Crossings for every variant pair, EE peak per variant, and LiFi/mmWave
/// power ratios for separate-mode pairs with the same antenna suffix.
inline Analysis analyze(const std::vector<CsvRow>& rows) {
    const auto groups = group_rows(rows);
    Analysis out;
    if (!groups.empty()) {
        out.x_kind = groups.front().x_kind;
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            if (groups[i].x != groups[j].x) {
                continue;
            }
            out.crossings.push_back(
                {groups[i].variant, groups[j].variant, find_crossings(groups[i].power_curve(), groups[j].power_curve())});
        }
    }
    for (const auto& g : groups) {
        PeakReport p{g.variant, {}, {}, false};
        std::vector<std::size_t> feas;
        for (std::size_t i = 0; i < g.ee.size(); ++i) {
            if (g.ee[i]) {
                feas.push_back(i);
            }
        }
        if (!feas.empty()) {
            std::size_t best = feas.front();
            for (auto i : feas) {
                if (*g.ee[i] > *g.ee[best]) {
                    best = i;
                }
            }
            p.x = g.x[best];
            p.ee = g.ee[best];
            p.interior = best != feas.front() && best != feas.back();
        }
        out.peaks.push_back(p);
    }
    for (const auto& l : groups) {
        if (detail::variant_base(l.variant) != "sep-lifi") {
            continue;
        }
        for (const auto& m : groups) {
            if (detail::variant_base(m.variant) != "sep-mmwave" ||
                detail::variant_suffix(m.variant) != detail::variant_suffix(l.variant) || m.x != l.x) {
                continue;
            }
            SavingReport s{l.variant, m.variant, {}, {}};
            for (std::size_t i = 0; i < l.x.size(); ++i) {
                if (l.power[i] && m.power[i]) {
                    s.x.push_back(l.x[i]);
                    s.ratio.push_back(*l.power[i] / *m.power[i]);
                }
            }
            out.savings.push_back(std::move(s));
        }
    }
    return out;
}

/// Machine-readable key=value summary.
inline std::string write_summary(const Analysis& a) {
    std::ostringstream o;
    o << "x_kind=" << a.x_kind << '\n';
    for (const auto& c : a.crossings) {
        o << "crossing." << c.a << ".vs." << c.b << ".count=" << c.at.size() << '\n';
        std::string list;
        for (std::size_t i = 0; i < c.at.size(); ++i) {
            list += (i ? "," : "") + format_double(c.at[i]);
        }
        o << "crossing." << c.a << ".vs." << c.b << ".at=" << list << '\n';
    }
    for (const auto& p : a.peaks) {
        o << "peak." << p.variant << ".x=" << (p.x ? format_double(*p.x) : "") << '\n';
        o << "peak." << p.variant << ".ee=" << (p.ee ? format_double(*p.ee) : "") << '\n';
        o << "peak." << p.variant << ".interior=" << (p.interior ? 1 : 0) << '\n';
    }
    for (const auto& s : a.savings) {
        std::string list;
        for (std::size_t i = 0; i < s.ratio.size(); ++i) {
            list += (i ? "," : "") + format_double(s.ratio[i]);
        }
        o << "lifi_ratio." << s.lifi << ".vs." << s.mmwave << "=" << list << '\n';
        o << "lifi_mean_saving." << s.lifi << ".vs." << s.mmwave << "=" << format_double(s.mean_saving()) << '\n';
    }
    return o.str();
}

/// Human-readable summary for the terminal.
inline std::string describe(const Analysis& a) {
    std::ostringstream o;
    const bool rate = a.x_kind == "rate_bps";
    auto fmt_x = [&](double x) {
        char buf[64];
        if (rate) {
            std::snprintf(buf, sizeof buf, "%.3f Gbit/s", x / 1e9);
        } else {
            std::snprintf(buf, sizeof buf, "%.3f bit/s/Hz", x);
        }
        return std::string(buf);
    };
    if (!a.crossings.empty()) {
        o << "Crossings:\n";
        for (const auto& c : a.crossings) {
            o << "  " << c.a << " vs " << c.b << ": ";
            if (c.at.empty()) {
                o << "none";
            }
            for (std::size_t i = 0; i < c.at.size(); ++i) {
                o << (i ? ", " : "") << fmt_x(c.at[i]);
            }
            o << '\n';
        }
    }
    o << "EE peaks:\n";
    for (const auto& p : a.peaks) {
        o << "  " << p.variant << ": ";
        if (p.ee) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6g", *p.ee);
            o << buf << " at " << fmt_x(*p.x) << (p.interior ? " (interior)" : " (edge)");
        } else {
            o << "no feasible points";
        }
        o << '\n';
    }
    for (const auto& s : a.savings) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.1f%% mean saving over %zu points", 100.0 * s.mean_saving(), s.ratio.size());
        o << "LiFi vs mmWave (" << s.lifi << " / " << s.mmwave << "): " << buf << '\n';
        for (std::size_t i = 0; i < s.ratio.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.4f", s.ratio[i]);
            o << "  " << fmt_x(s.x[i]) << "  ratio " << buf << '\n';
        }
    }
    return o.str();
}

}  // namespace b5gee
