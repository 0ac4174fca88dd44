#pragma once
// Shared error types, unit conversions and small numeric helpers.

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace b5gee {

/// Malformed configuration text (bad syntax, unknown key, unparsable value).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter bundle that parsed but violates an invariant. `key()` names it.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Argument outside a model's domain of validity.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A power amplifier asked to radiate more than its rated maximum.
class SaturationError : public std::range_error {
public:
    SaturationError(double requested, double p_max)
        : std::range_error("PA saturation: requested " + std::to_string(requested) +
                           " W exceeds P_max " + std::to_string(p_max) + " W"),
          requested_(requested), p_max_(p_max) {}
    double requested() const noexcept { return requested_; }
    double p_max() const noexcept { return p_max_; }

private:
    double requested_;
    double p_max_;
};

inline constexpr double pi = std::numbers::pi;
inline constexpr double speed_of_light = 299792458.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }

/// Shortest decimal text that parses back to the identical double.
inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf.data(), end);
}

/// Strict full-string double parse; nullopt-free, throws ParseError with context.
inline double parse_double(std::string_view text, std::string_view context) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last) {
        throw ParseError(std::string(context) + ": not a number: '" + std::string(text) + "'");
    }
    return v;
}

inline long long parse_integer(std::string_view text, std::string_view context) {
    long long v = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last) {
        // Accept integral values written in floating notation, e.g. "1e3".
        double d = parse_double(text, context);
        if (std::floor(d) != d || std::abs(d) > 9.0e15) {
            throw ParseError(std::string(context) + ": not an integer: '" + std::string(text) + "'");
        }
        return static_cast<long long>(d);
    }
    return v;
}

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

/// 3-D point or direction in metres.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

}  // namespace b5gee
