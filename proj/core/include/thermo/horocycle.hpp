#pragma once

#include "thermo/product_states.hpp"

#include <optional>
#include <vector>

namespace thermo {

/// Unit-speed translation flow along v_u on a planar model.
class HoroFlow {
public:
    explicit HoroFlow(const ModelSystem& sys);

    const ModelSystem& system() const { return sys_; }
    Vec2 direction() const { return sys_.v_u(); }
    /// f o Phi_t = Phi_{mu t} o f with mu the signed unstable eigenvalue
    double renormalization() const { return sys_.unstable_eigenvalue(); }

private:
    ModelSystem sys_;
};

/// x + t v_u mod Z^2; |t| <= 1e7
TorusPoint flow(const HoroFlow& hf, const TorusPoint& x, double t);

/// J_t(x) = Delta_x(Phi_t x)
TruncatedValue jacobian_cocycle(const HoroFlow& hf, const Potential& phi, const TorusPoint& x, double t, int N);

enum class ConstructionRoute { leaf_product, reweighted_average };
std::string to_string(ConstructionRoute r);

struct SeedMeasure {
    enum Kind { lebesgue, atom } kind = lebesgue;
    Vec2 point{0.3, 0.7};  // atom location
    std::uint64_t seed = 7;
    int starts = 8;  // start points of the Lebesgue seed
};

struct ConformalOptions {
    int grid = 64;
    int resolution_k = 14;  // stable family resolution of the leaf_product route
    double T = 1e4;         // flow time of the reweighted_average route
    int N_trunc = 60;
    /// tolerated total variation between the T/2 and T averages
    double convergence_tol = 0.05;
    SeedMeasure seed;
};

struct ConformalCandidate {
    int grid = 0;
    /// index i * grid + j for the cell [i/g, (i+1)/g) x [j/g, (j+1)/g)
    std::vector<double> grid_masses;
    Potential jacobian_source;
    ConstructionRoute route = ConstructionRoute::leaf_product;
    /// leaf_product candidates keep the glued state for exact polygon masses
    std::optional<GlobalState> state;
    /// total variation between the half-horizon and full averages
    double horizon_gap = 0;

    /// mass of a polygon; grid-only candidates spread each cell uniformly
    double mass(const ConvexPolygon& P) const;
};

ConformalCandidate build_conformal_candidate(const HoroFlow& hf, const Potential& phi, ConstructionRoute route,
                                             const ConformalOptions& opts = {});

/// candidate from raw grid masses (normalized to total 1)
ConformalCandidate grid_candidate(std::vector<double> masses, const Potential& phi);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

/// max over t and test cells A of |mu(Phi_t A) - int_A J_t dmu| / mu(A)
double conformality_residual(const ConformalCandidate& cand, const HoroFlow& hf, const std::vector<double>& t_values,
                             int test_grid = 16, int sub = 4, int N = 60);

struct UniquenessReport {
    std::vector<ConformalCandidate> candidates;
    double gap = 0;  // max pairwise total variation
    /// equidistribution error on trig test functions (phi = 0 only)
    std::optional<double> equidistribution_error;
};

UniquenessReport uniqueness_gap(const HoroFlow& hf, const Potential& phi, const std::vector<SeedMeasure>& seeds,
                                const ConformalOptions& opts = {});

/// orbit average of cos/sin(2 pi m.x) over [0, T] minus its space average (0)
struct TrigTest {
    bool is_sin = false;
    int m1 = 1, m2 = 0;
};
std::vector<TrigTest> default_trig_tests();
/// quadrature of the orbit average
double orbit_average(const HoroFlow& hf, const TrigTest& g, Vec2 x, double T, int panels);
/// closed form of the same average
double orbit_average_exact(const HoroFlow& hf, const TrigTest& g, Vec2 x, double T);
/// max over test functions of |orbit average - space average|
double equidistribution(const HoroFlow& hf, Vec2 x, double T, const std::vector<TrigTest>& tests);

}  // namespace thermo
