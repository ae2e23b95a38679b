#pragma once

// Metric, Levi-Civita connection and curvature on a single coordinate chart.
//
// Curvature sign convention:
//
//     R(X,Y)Z = ∇_Y ∇_X Z - ∇_X ∇_Y Z + ∇_[X,Y] Z
//
// which is the negative of the usual ∇_X∇_Y - ∇_Y∇_X convention. With it the
// sectional curvature is K(x,y) = <R(X,Y)X, Y>, so the unit sphere has K = +1,
// and frame components are R_{lkij} = <R(e_l,e_k)e_i, e_j>.

#include "totcurv/common.hpp"

#include <functional>
#include <span>

namespace totcurv {

class MetricChart {
public:
    using MetricFn = std::function<Mat(const Vec&)>;
    // d(k,i,j) = ∂_k g_ij
    using FirstDerivativeFn = std::function<Tensor3(const Vec&)>;
    // d(l,k,i,j) = ∂_l ∂_k g_ij
    using SecondDerivativeFn = std::function<Tensor4(const Vec&)>;

    MetricChart(int dim, Box domain, MetricFn g, FirstDerivativeFn dg = {},
                SecondDerivativeFn d2g = {});

    int dim() const { return dim_; }
    const Box& domain() const { return domain_; }

    bool has_analytic_first() const { return static_cast<bool>(dg_); }
    bool has_analytic_second() const { return static_cast<bool>(d2g_); }

    // Copy of this chart that forgets the analytic derivatives, so every
    // derivative goes through finite differences.
    MetricChart finite_difference_only() const;

    // Central-difference step, (domain diameter) * 1e-4 unless overridden.
    double fd_step() const { return fd_step_; }
    void set_fd_step(double h);

    // Metric components; throws DegenerateMetricError when g(x) is not
    // symmetric to 1e-12 or not positive definite.
    Mat metric(const Vec& x) const;
    Tensor3 metric_first_derivative(const Vec& x) const;
    Tensor4 metric_second_derivative(const Vec& x) const;

private:
    int dim_;
    Box domain_;
    MetricFn g_;
    FirstDerivativeFn dg_;
    SecondDerivativeFn d2g_;
    double fd_step_;
};

// Everything first-order about the metric at one point; shared by the
// connection, curvature and level-set code so each node pays for it once.
struct LocalGeometry {
    Vec x;
    Mat g;
    Mat g_inv;
    Tensor3 dg;     // ∂_k g_ij
    Tensor3 gamma;  // Γ^k_ij stored as gamma(k,i,j)
};

LocalGeometry local_geometry(const MetricChart& chart, const Vec& x);

// Γ^k_ij = ½ g^{kl}(∂_i g_lj + ∂_j g_li − ∂_l g_ij), stored as (k,i,j).
Tensor3 christoffel(const MetricChart& chart, const Vec& x);

// Coordinate components P(a,b,c,d) = <R(∂_a,∂_b)∂_c, ∂_d> in the convention
// above.
Tensor4 riemann_coord(const MetricChart& chart, const Vec& x);
Tensor4 riemann_coord(const MetricChart& chart, const LocalGeometry& geo);

struct FrameCurvature {
    Tensor4 R;  // R(l,k,i,j) = <R(e_l,e_k)e_i, e_j>
    Mat K;      // K(i,j) = R(i,j,i,j)

    int dim() const { return R.dim(); }
};

// Frame components of the curvature. `frame` holds the vectors as columns;
// they must be g-orthonormal to 1e-8 (FrameError otherwise).
FrameCurvature frame_curvature(const MetricChart& chart, const Vec& x, const Mat& frame);
FrameCurvature frame_curvature(const Tensor4& riemann, const Mat& g, const Mat& frame);

// Max |<e_i,e_j> - δ_ij| over the frame columns.
double orthonormality_defect(const Mat& g, const Mat& frame);

// ---------------------------------------------------------------------------
// Chart factories
// ---------------------------------------------------------------------------

// Flat metric g = I on the given box.
MetricChart euclidean_chart(const Box& domain);

// Radial profile of a warped product dρ² + f(ρ)² dσ²_{n-1}.
struct WarpingFunction {
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> d2f;
};

// Geodesic polar coordinates (ρ, α_1, …, α_{n-1}) with the round metric of
// S^{n-1} in hyperspherical angles:
//   g = diag(1, f², f² sin²α_1, …, f² sin²α_1 ⋯ sin²α_{n-2}).
// The last angle is the periodic one. Analytic first and second derivatives
// are supplied.
MetricChart warped_polar_chart(int n, const WarpingFunction& warp, double rho_lo, double rho_hi);

WarpingFunction euclidean_warp();                 // f = ρ
WarpingFunction sphere_warp();                    // f = sin ρ
WarpingFunction hyperbolic_warp();                // f = sinh ρ

// Poincaré half-plane, g = diag(1/y², 1/y²), with analytic derivatives.
MetricChart poincare_half_plane_chart(const Box& domain);

} // namespace totcurv
