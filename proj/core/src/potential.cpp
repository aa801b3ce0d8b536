#include "thermo/potential.hpp"

#include <cstdlib>
#include <sstream>

namespace thermo {

Potential Potential::zero() { return Potential(); }

Potential Potential::constant(double c) {
    Potential p;
    p.kind_ = PotentialKind::constant;
    p.poly_ = TrigPolynomial(c, {});
    return p;
}

Potential Potential::trig(TrigPolynomial poly) {
    Potential p;
    p.kind_ = PotentialKind::trig;
    p.poly_ = std::move(poly);
    return p;
}

Potential Potential::srb(const ModelSystem& sys) {
    Potential p;
    p.kind_ = PotentialKind::srb;
    p.poly_ = TrigPolynomial(-std::log(sys.lambda()), {});
    return p;
}

namespace {

double parse_number(std::string_view s, std::string_view what) {
    std::string str(s);
    char* end = nullptr;
    double v = std::strtod(str.c_str(), &end);
    if (str.empty() || end != str.c_str() + str.size())
        throw ConfigError("bad number '" + str + "' in " + std::string(what));
    return v;
}

}  // namespace

Potential Potential::parse(std::string_view spec, const ModelSystem& sys) {
    const auto colon = spec.find(':');
    const std::string_view head = spec.substr(0, colon);
    const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    if (head == "zero")
        return zero();
    if (head == "srb")
        return srb(sys);
    if (head == "const" || head == "constant")
        return constant(parse_number(arg, "constant potential"));
    if (head == "cos")
        return trig(TrigPolynomial(0.0, {TrigTerm{false, parse_number(arg, "cos potential"), 1, 0}}));
    if (head == "trig")
        return trig(TrigPolynomial::parse(arg));
    throw ConfigError("unknown potential '" + std::string(spec) + "'");
}

std::string Potential::kind_name() const {
    switch (kind_) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::constant: return "constant";
    case PotentialKind::trig: return "trig";
    case PotentialKind::srb: return "srb";
    }
    return "?";
}

std::string Potential::describe() const { return kind_name() + "(" + poly_.to_string() + ")"; }

Potential Potential::shifted(double c) const {
    Potential p = *this;
    p.poly_ = poly_.shifted(c);
    if (kind_ == PotentialKind::zero || kind_ == PotentialKind::srb)
        p.kind_ = PotentialKind::constant;
    return p;
}

Potential Potential::composed(const Mat2i& B) const {
    Potential p = *this;
    p.poly_ = poly_.composed(B);
    return p;
}

double birkhoff_sum(const ModelSystem& sys, const Potential& phi, const TorusPoint& p, int n) {
    if (n < 0)
        throw PreconditionError("birkhoff_sum: n must be >= 0");
    if (phi.is_constant())
        return n * phi.constant_part();
    CompensatedSum s;
    Vec2 x = sys.iterate_base(p.base(), 0);
    for (int i = 0; i < n; ++i) {
        s.add(phi.eval_base(x));
        x = sys.iterate_base(x, 1);
    }
    return s.value();
}

}  // namespace thermo
