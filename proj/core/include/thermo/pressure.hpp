#pragma once

#include "thermo/potential.hpp"
#include "thermo/torus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace thermo {

struct PressureEstimate {
    double epsilon = 0;
    std::vector<int> n_values;
    std::vector<double> log_sums;      // log S(eps, n)
    std::vector<double> cardinalities;  // number of lattice centers
    double slope = 0;
    double intercept = 0;
    double slope_ci = 0;  // least-squares residual band of the slope
    double rms_residual = 0;
};

struct SpanningOptions {
    /// smallest admissible lattice spacing along v_u
    double min_spacing = 1e-13;
    /// cap on the number of centers summed explicitly for a nonconstant potential
    double max_points = 6e7;
};

/// Half widths of the certified lattice cells in (u, s, center) coordinates.
struct SpanningCell {
    double u = 0, s = 0, c = 0;
};
SpanningCell spanning_cell(const ModelSystem& sys, double eps, int n);

/// log of sum over a certified (eps, n)-spanning lattice of exp(S_n phi)
double spanning_log_sum(const ModelSystem& sys, const Potential& phi, double eps, int n,
                        const SpanningOptions& opts = {}, double* cardinality = nullptr);

PressureEstimate spanning_pressure(const ModelSystem& sys, const Potential& phi, double eps,
                                   const std::vector<int>& n_values, const SpanningOptions& opts = {});

/// Sampled measure as a point cloud.
struct SampledMeasure {
    std::vector<TorusPoint> points;
    std::string label;

    static SampledMeasure lebesgue(const ModelSystem& sys, std::size_t count, std::uint64_t seed);
    static SampledMeasure atom(const TorusPoint& p, std::size_t count);
    /// f^i(x0), i < count, along the exact orbit
    static SampledMeasure orbit(const ModelSystem& sys, const TorusPoint& x0, std::size_t count);
};

struct LocalEntropyOptions {
    double epsilon = 0.2;
    std::vector<int> n_values = {2, 3, 4, 5};
    std::size_t min_samples = 50;
};

/// fitted slope of -log mu(B(x, eps, n)) against n
double local_entropy(const ModelSystem& sys, const SampledMeasure& mu, const TorusPoint& x,
                     const LocalEntropyOptions& opts = {});

/// mean local entropy over x_samples plus the mean of phi under mu
double metric_pressure(const ModelSystem& sys, const Potential& phi, const SampledMeasure& mu,
                       const std::vector<TorusPoint>& x_samples, const LocalEntropyOptions& opts = {});

}  // namespace thermo
