#pragma once

// Surface integrals over level sets and volume integrals over the region
// between Γ_0 and Γ_1, using the coarea foliation
//
//     ∫_M f dvol = ∫_0^1 ∫_{Γ_t} f / |∇u| dA dt.
//
// Parameter axes use Gauss–Legendre nodes, or the trapezoidal rule when the
// axis is periodic. Every result also carries the spread against a grid with
// half the nodes per axis as its error estimate.

#include "totcurv/field.hpp"
#include "totcurv/metric.hpp"
#include "totcurv/parallel.hpp"

#include <memory>
#include <optional>
#include <span>

namespace totcurv {

struct ParamAxis {
    double lo;
    double hi;
    bool periodic = false;
};

struct PatchPoint {
    Vec x;        // chart point
    Mat tangent;  // n × (n-1), column k is ∂x/∂s_k
};

// Parametrization of (part of) the level set u = t.
struct LevelSurfacePatch {
    double t = 0.0;
    std::vector<ParamAxis> axes;
    std::function<PatchPoint(std::span<const double>)> param;
    std::vector<int> grid;  // node count per axis
    std::shared_ptr<const MetricChart> chart;

    int param_dim() const { return static_cast<int>(axes.size()); }
};

// Builds the patch for level t; `m` sets the grid (m Gauss–Legendre nodes per
// bounded axis, 2m per periodic axis).
using PatchFactory = std::function<LevelSurfacePatch(double t, int m)>;

std::vector<int> default_axis_grid(std::span<const ParamAxis> axes, int m);

struct QuadratureResult {
    double value = 0.0;
    double coarse_value = 0.0;  // same rule with half the nodes per axis
    double estimated_error = 0.0;
    std::size_t nodes_used = 0;
};

// Per-point integrand with `width` outputs.
using MultiIntegrand = std::function<void(const Vec& x, std::span<double> out)>;
using Integrand = std::function<double(const Vec& x)>;

// One-dimensional rule on [lo, hi].
struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Rule1D gauss_legendre(int count, double lo, double hi);
Rule1D periodic_trapezoid(int count, double lo, double hi);

// √det(J^T g J) at a patch point.
double area_element(const MetricChart& chart, const PatchPoint& p);

QuadratureResult surface_integral(const LevelSurfacePatch& patch, const Integrand& integrand,
                                  Execution exec = Execution::parallel);
std::vector<QuadratureResult> surface_integral(const LevelSurfacePatch& patch, std::size_t width,
                                               const MultiIntegrand& integrand,
                                               Execution exec = Execution::parallel);

struct VolumeGrid {
    int surface_m = 64;  // per-patch grid parameter
    int t_nodes = 32;    // outer Gauss–Legendre nodes in t
};

QuadratureResult volume_integral(const PatchFactory& patches, const ScalarField& field,
                                 const Integrand& integrand, VolumeGrid grid,
                                 Execution exec = Execution::parallel);
std::vector<QuadratureResult> volume_integral(const PatchFactory& patches,
                                              const ScalarField& field, std::size_t width,
                                              const MultiIntegrand& integrand, VolumeGrid grid,
                                              Execution exec = Execution::parallel);

// Empirical convergence order from a sequence of results on grids that
// double in resolution. With an exact value, p = log2(err_m / err_2m) from
// the last two entries; without one, the last three entries give
// p = log2(|I_2m − I_m| / |I_4m − I_2m|). The order is undefined (nullopt)
// when the finer error is at the noise floor or data is insufficient.
struct ConvergenceEstimate {
    std::optional<double> order;
    double coarse_error = 0.0;
    double fine_error = 0.0;
    bool at_noise_floor = false;
};

ConvergenceEstimate refine_and_estimate(std::span<const double> values,
                                        std::optional<double> exact, double noise_floor);

} // namespace totcurv
