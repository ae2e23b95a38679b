#pragma once

// Principal frames of the level sets of u and the symmetric functions of
// their principal curvatures.

#include "totcurv/field.hpp"
#include "totcurv/metric.hpp"
#include "totcurv/quadrature.hpp"

#include <span>

namespace totcurv {

// Orthonormal, positively oriented frame at x: columns 0..n-2 of `e` are
// principal directions of the level set through x, column n-1 is
// e_n = ∇u/|∇u|. Frame index n-1 is always the normal.
struct PrincipalFrame {
    Vec x;
    Mat e;       // columns: frame vectors in coordinates
    Mat theta;   // rows: dual covectors, theta.row(i)·e.col(j) = δ_ij
    Mat g;       // metric at x
    Vec kappa;   // n-1 principal curvatures, ascending
    double grad_norm = 0.0;      // |∇u|
    Vec grad_norm_tangential;    // |∇u|_i = e_i(|∇u|), i < n-1

    int dim() const { return static_cast<int>(e.cols()); }
    double theta_of(int i, const Vec& v) const { return theta.row(i).dot(v); }
    // ω^i_n(v) = <∇_v e_n, e_i> = κ_i θ^i(v) + (|∇u|_i/|∇u|) θ^n(v)
    double omega_normal_of(int i, const Vec& v) const;
    // Volume form of M on the frame, √det g · det[e].
    double orientation() const;
};

// Hess u(X,Y) = <∇_X ∇u, Y>, coordinates H_ab = ∂_a∂_b u − Γ^c_ab ∂_c u.
Mat covariant_hessian(const ScalarField& field, const MetricChart& chart, const Vec& x);
Mat covariant_hessian(const ScalarField& field, const LocalGeometry& geo);

// Throws CriticalPointError when |∇u| is below the field's floor.
PrincipalFrame principal_frame(const ScalarField& field, const MetricChart& chart, const Vec& x);
PrincipalFrame principal_frame(const ScalarField& field, const LocalGeometry& geo);

// r-th elementary symmetric polynomial; σ_0 = 1 and σ_r = 0 for r > size.
double sigma_r(std::span<const double> kappa, int r);
inline double sigma_r(const Vec& kappa, int r) {
    return sigma_r(std::span<const double>(kappa.data(), static_cast<std::size_t>(kappa.size())), r);
}

// M_r(Γ_t) = ∫ σ_r(κ) dvol over the patch.
QuadratureResult total_mean_curvature(const LevelSurfacePatch& patch, const ScalarField& field,
                                      int r, Execution exec = Execution::parallel);

} // namespace totcurv
