#pragma once

#include "thermo/torus.hpp"
#include "thermo/trig.hpp"

#include <string>
#include <string_view>

namespace thermo {

enum class PotentialKind { zero, constant, trig, srb };

/// Hoelder potential depending on base coordinates only. Every kind is held
/// as a trigonometric polynomial (constants included), so alpha = 1.
class Potential {
public:
    Potential() = default;
    static Potential zero();
    static Potential constant(double c);
    static Potential trig(TrigPolynomial p);
    /// -log of the unstable Jacobian; constant on the algebraic models
    static Potential srb(const ModelSystem& sys);
    /// "zero", "const:0.1", "srb", "trig:cos 0.2 1 0" or "cos:0.2" (shorthand for 0.2 cos(2 pi x1))
    static Potential parse(std::string_view spec, const ModelSystem& sys);

    PotentialKind kind() const { return kind_; }
    std::string kind_name() const;
    std::string describe() const;

    double eval(const TorusPoint& p) const { return poly_(p.base()); }
    double eval_base(Vec2 x) const { return poly_(x); }

    double alpha() const { return 1.0; }
    /// Lipschitz constant for the max metric on the torus
    double holder_constant() const { return poly_.lipschitz_max(); }
    /// Lipschitz constant along straight lines, per unit Euclidean length
    double lipschitz_euclid() const { return poly_.lipschitz_euclid(); }

    double constant_part() const { return poly_.constant(); }
    bool is_constant() const { return poly_.is_constant(); }
    const TrigPolynomial& polynomial() const { return poly_; }

    Potential shifted(double c) const;
    /// x -> phi(Bx) on the base
    Potential composed(const Mat2i& B) const;

private:
    PotentialKind kind_ = PotentialKind::zero;
    TrigPolynomial poly_;
};

/// sum_{i<n} phi(f^i p) along the exact orbit
double birkhoff_sum(const ModelSystem& sys, const Potential& phi, const TorusPoint& p, int n);

}  // namespace thermo
