#pragma once

#include "thermo/common.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace thermo {

struct Mat2i {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    std::int64_t det() const { return a * d - b * c; }
    std::int64_t trace() const { return a + d; }
    /// inverse of a unimodular matrix
    Mat2i inverse() const;
    Mat2i operator*(const Mat2i& o) const;
    Vec2 operator*(Vec2 v) const {
        return {static_cast<double>(a) * v.x + static_cast<double>(b) * v.y,
                static_cast<double>(c) * v.x + static_cast<double>(d) * v.y};
    }
    bool operator==(const Mat2i&) const = default;
    double norm_inf() const;
};

/// amp * cos(2 pi (m1 x1 + m2 x2)) or the sine counterpart
struct TrigTerm {
    bool is_sin = false;
    double amp = 0;
    int m1 = 0, m2 = 0;
};

/// Real trigonometric polynomial on the base torus with integer frequencies.
class TrigPolynomial {
public:
    TrigPolynomial() = default;
    TrigPolynomial(double constant, std::vector<TrigTerm> terms);

    /// "const 0.1; cos 0.2 1 0; sin 0.05 0 1" (separators ';' or ',')
    static TrigPolynomial parse(std::string_view text);
    std::string to_string() const;

    double operator()(Vec2 x) const;
    double operator()(double x1, double x2) const { return (*this)(Vec2(x1, x2)); }

    double constant() const { return c0_; }
    const std::vector<TrigTerm>& terms() const { return terms_; }
    bool is_constant() const { return terms_.empty(); }

    /// x -> p(Bx)
    TrigPolynomial composed(const Mat2i& B) const;
    TrigPolynomial scaled(double s) const;
    TrigPolynomial shifted(double c) const;

    /// sup of the Euclidean gradient norm (bound from coefficient sums)
    double lipschitz_euclid() const;
    /// Lipschitz constant for the max metric on the torus
    double lipschitz_max() const;

private:
    double c0_ = 0;
    std::vector<TrigTerm> terms_;
};

}  // namespace thermo
