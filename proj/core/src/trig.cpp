#include "thermo/trig.hpp"

#include <cstdlib>
#include <sstream>

namespace thermo {

Mat2i Mat2i::inverse() const {
    const std::int64_t dt = det();
    if (dt != 1 && dt != -1)
        throw PreconditionError("matrix is not unimodular");
    return {d * dt, -b * dt, -c * dt, a * dt};
}

Mat2i Mat2i::operator*(const Mat2i& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

double Mat2i::norm_inf() const {
    return std::max(std::abs(a) + std::abs(b), std::abs(c) + std::abs(d));
}

TrigPolynomial::TrigPolynomial(double constant, std::vector<TrigTerm> terms)
    : c0_(constant) {
    for (auto& t : terms)
        if (t.amp != 0 && !(t.m1 == 0 && t.m2 == 0))
            terms_.push_back(t);
        else if (!t.is_sin)
            c0_ += t.amp;
}

double TrigPolynomial::operator()(Vec2 x) const {
    double v = c0_;
    for (const auto& t : terms_) {
        // reduce the phase first so large frequencies keep full accuracy
        double ph = wrap_half(t.m1 * x.x + t.m2 * x.y);
        v += t.is_sin ? t.amp * std::sin(kTwoPi * ph) : t.amp * std::cos(kTwoPi * ph);
    }
    return v;
}

TrigPolynomial TrigPolynomial::composed(const Mat2i& B) const {
    // m . (Bx) = (B^T m) . x
    std::vector<TrigTerm> out;
    for (auto t : terms_) {
        TrigTerm r = t;
        r.m1 = static_cast<int>(B.a * t.m1 + B.c * t.m2);
        r.m2 = static_cast<int>(B.b * t.m1 + B.d * t.m2);
        out.push_back(r);
    }
    return TrigPolynomial(c0_, out);
}

TrigPolynomial TrigPolynomial::scaled(double s) const {
    std::vector<TrigTerm> out = terms_;
    for (auto& t : out)
        t.amp *= s;
    return TrigPolynomial(c0_ * s, out);
}

TrigPolynomial TrigPolynomial::shifted(double c) const {
    TrigPolynomial r = *this;
    r.c0_ += c;
    return r;
}

double TrigPolynomial::lipschitz_euclid() const {
    double s = 0;
    for (const auto& t : terms_)
        s += std::fabs(t.amp) * kTwoPi * std::hypot(double(t.m1), double(t.m2));
    return s;
}

double TrigPolynomial::lipschitz_max() const {
    double s = 0;
    for (const auto& t : terms_)
        s += std::fabs(t.amp) * kTwoPi * (std::abs(t.m1) + std::abs(t.m2));
    return s;
}

TrigPolynomial TrigPolynomial::parse(std::string_view text) {
    std::string s(text);
    for (auto& ch : s)
        if (ch == ';' || ch == ',')
            ch = '\n';
    std::istringstream lines(s);
    std::string line;
    double c0 = 0;
    std::vector<TrigTerm> terms;
    while (std::getline(lines, line)) {
        std::istringstream in(line);
        std::string kind;
        if (!(in >> kind))
            continue;
        if (kind == "const") {
            double v;
            if (!(in >> v))
                throw ConfigError("trig term 'const' needs a value: '" + line + "'");
            c0 += v;
        } else if (kind == "cos" || kind == "sin") {
            TrigTerm t;
            t.is_sin = kind == "sin";
            if (!(in >> t.amp >> t.m1 >> t.m2))
                throw ConfigError("trig term needs amplitude and two frequencies: '" + line + "'");
            terms.push_back(t);
        } else {
            throw ConfigError("unknown trig term '" + kind + "'");
        }
        std::string extra;
        if (in >> extra)
            throw ConfigError("trailing text in trig term: '" + line + "'");
    }
    return TrigPolynomial(c0, terms);
}

std::string TrigPolynomial::to_string() const {
    std::ostringstream out;
    out.precision(17);
    out << "const " << c0_;
    for (const auto& t : terms_)
        out << "; " << (t.is_sin ? "sin " : "cos ") << t.amp << ' ' << t.m1 << ' ' << t.m2;
    return out.str();
}

}  // namespace thermo
