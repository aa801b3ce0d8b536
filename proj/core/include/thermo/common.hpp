#pragma once

#include <array>
#include <random>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace thermo {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// bad or unparseable configuration
class ConfigError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double last_residual)
        : Error(what), last_residual(last_residual) {}
    double last_residual;
};

// too few samples (or too little resolution) inside a ball or plaque
class Starvation : public Error {
public:
    using Error::Error;
};

class ResolutionExhausted : public Error {
public:
    using Error::Error;
};

class ChartOverflow : public Error {
public:
    using Error::Error;
};

class LeafMembershipError : public Error {
public:
    using Error::Error;
};

class HolonomyError : public Error {
public:
    using Error::Error;
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// reduce to [0,1)
inline double wrap01(double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

/// reduce to [-1/2,1/2)
inline double wrap_half(double x) {
    return x - std::floor(x + 0.5);
}

inline double circle_dist(double a, double b) {
    return std::fabs(wrap_half(a - b));
}

struct Vec2 {
    double x = 0, y = 0;
    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    double norm() const { return std::hypot(x, y); }
    double norm_inf() const { return std::max(std::fabs(x), std::fabs(y)); }
};
inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline Vec2 wrap01(Vec2 v) { return {wrap01(v.x), wrap01(v.y)}; }
inline Vec2 wrap_half(Vec2 v) { return {wrap_half(v.x), wrap_half(v.y)}; }

/// Double-double accumulator; keeps long sums of O(1) terms exact to ~1e-30.
class CompensatedSum {
public:
    void add(double v) {
        double s = hi_ + v;
        double bp = s - hi_;
        double err = (hi_ - (s - bp)) + (v - bp);
        hi_ = s;
        lo_ += err;
    }
    double value() const { return hi_ + lo_; }
    /// value reduced mod 1 without losing the low part
    double frac() const {
        double f = std::floor(hi_);
        return wrap01((hi_ - f) + lo_);
    }

private:
    double hi_ = 0, lo_ = 0;
};

// Seeds and random streams. One master seed; every task derives its own
// stream from a label so adding tasks never perturbs other streams.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);

class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next();
    /// uniform on [0,1) with 53 random bits
    double uniform();

private:
    std::mt19937_64 gen_;
};

struct LineFit {
    double slope = 0;
    double intercept = 0;
    double rms_residual = 0;
    double slope_stderr = 0;
};

/// least squares y = a + b x; needs at least two distinct x
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace thermo
