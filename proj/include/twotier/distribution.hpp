#pragma once

// Named continuous distributions for idiosyncratic (G) and constituency (H)
// preference shocks.

#include "twotier/rational.hpp"
#include "twotier/rng.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/random/normal_distribution.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace twotier {

class ShockDistribution {
public:
    enum class Kind { uniform, normal };

    /// Uniform on [lo, hi].
    static ShockDistribution uniform(double lo, double hi) {
        if (!(lo < hi)) throw std::invalid_argument("uniform distribution needs lo < hi");
        return {Kind::uniform, lo, hi};
    }

    /// Normal with the given mean and variance.
    static ShockDistribution normal(double mean, double variance) {
        if (!(variance > 0.0)) throw std::invalid_argument("normal distribution needs a positive variance");
        return {Kind::normal, mean, variance};
    }

    Kind kind() const { return kind_; }

    double mean() const { return kind_ == Kind::uniform ? 0.5 * (a_ + b_) : a_; }
    double median() const { return mean(); }
    double variance() const { return kind_ == Kind::uniform ? (b_ - a_) * (b_ - a_) / 12.0 : b_; }

    /// Density bound (sup of the pdf).
    double max_density() const {
        return kind_ == Kind::uniform ? 1.0 / (b_ - a_) : 1.0 / std::sqrt(2.0 * std::numbers::pi * b_);
    }

    double quantile(double p) const {
        if (kind_ == Kind::uniform) return a_ + (b_ - a_) * p;
        return boost::math::quantile(boost::math::normal_distribution<double>(a_, std::sqrt(b_)), p);
    }

    template <class Engine>
    double sample(Engine& rng) const {
        if (kind_ == Kind::uniform) return a_ + (b_ - a_) * uniform_open01(rng);
        return boost::random::normal_distribution<double>(a_, std::sqrt(b_))(rng);
    }

    /// `uniform(lo,hi)` or `normal(mean,variance)`.
    std::string str() const {
        std::ostringstream out;
        out.precision(17);
        out << (kind_ == Kind::uniform ? "uniform(" : "normal(") << a_ << ',' << b_ << ')';
        return out.str();
    }

    friend bool operator==(const ShockDistribution&, const ShockDistribution&) = default;

private:
    ShockDistribution(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}

    Kind kind_;
    double a_;
    double b_;
};

inline ShockDistribution parse_distribution(std::string_view text) {
    const auto s = detail::trim(text);
    const auto open = s.find('(');
    const auto comma = s.find(',');
    if (open == std::string_view::npos || comma == std::string_view::npos || s.back() != ')' || comma < open)
        throw std::invalid_argument("distribution must look like 'uniform(lo,hi)' or 'normal(mean,variance)', got '" +
                                    std::string(s) + "'");
    const auto name = detail::trim(s.substr(0, open));
    auto number = [&](std::string_view v) {
        v = detail::trim(v);
        std::size_t used = 0;
        double x = 0;
        try {
            x = std::stod(std::string(v), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != v.size())
            throw std::invalid_argument("malformed distribution parameter '" + std::string(v) + "'");
        return x;
    };
    const double p1 = number(s.substr(open + 1, comma - open - 1));
    const double p2 = number(s.substr(comma + 1, s.size() - comma - 2));
    if (name == "uniform") return ShockDistribution::uniform(p1, p2);
    if (name == "normal") return ShockDistribution::normal(p1, p2);
    throw std::invalid_argument("unknown distribution '" + std::string(name) + "'");
}

}  // namespace twotier
