#pragma once

// Exact arithmetic helpers: big rationals for power values and a small
// exact ratio type for relative quotas.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace twotier {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Relative quota q with 1/2 <= q < 1, stored as a reduced fraction.
class Quota {
public:
    constexpr Quota() = default;

    Quota(std::int64_t num, std::int64_t den) {
        if (den <= 0) throw std::invalid_argument("quota denominator must be positive");
        if (num < 0) throw std::invalid_argument("quota must be non-negative");
        const auto g = std::gcd(num, den);
        num_ = num / g;
        den_ = den / g;
        // 1/2 <= num/den < 1
        if (2 * num_ < den_ || num_ >= den_)
            throw std::invalid_argument("quota must satisfy 1/2 <= q < 1, got " + str());
    }

    static Quota half() { return {1, 2}; }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    Rational value() const { return Rational(num_, den_); }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// floor(q * total): the largest integer weight that still loses.
    std::uint64_t floor_of(std::uint64_t total) const {
        __extension__ using u128 = unsigned __int128;
        return static_cast<std::uint64_t>(static_cast<u128>(total) * static_cast<u128>(num_) / static_cast<u128>(den_));
    }

    std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

    friend bool operator==(const Quota&, const Quota&) = default;

private:
    std::int64_t num_ = 1;
    std::int64_t den_ = 2;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::int64_t parse_int64(std::string_view s, const char* what) {
    s = trim(s);
    if (s.empty()) throw std::invalid_argument(std::string("empty ") + what);
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(std::string(s), &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("malformed ") + what + ": '" + std::string(s) + "'");
    }
    if (used != s.size())
        throw std::invalid_argument(std::string("malformed ") + what + ": '" + std::string(s) + "'");
    return v;
}

}  // namespace detail

/// Parses "p/q", an integer-free decimal such as "0.74", or "1/2".
inline Quota parse_quota(std::string_view text) {
    const auto s = detail::trim(text);
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        return {detail::parse_int64(s.substr(0, slash), "quota numerator"),
                detail::parse_int64(s.substr(slash + 1), "quota denominator")};
    }
    const auto dot = s.find('.');
    if (dot == std::string_view::npos)
        throw std::invalid_argument("malformed quota: '" + std::string(s) + "'");
    const auto int_part = s.substr(0, dot);
    const auto frac_part = s.substr(dot + 1);
    if (frac_part.empty() || frac_part.size() > 15 ||
        frac_part.find_first_not_of("0123456789") != std::string_view::npos)
        throw std::invalid_argument("malformed quota: '" + std::string(s) + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
    const std::int64_t whole = int_part.empty() ? 0 : detail::parse_int64(int_part, "quota");
    const std::int64_t frac = detail::parse_int64(frac_part, "quota");
    return {whole * den + frac, den};
}

}  // namespace twotier
