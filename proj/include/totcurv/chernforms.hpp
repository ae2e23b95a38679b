#pragma once

// The (n−1)-forms
//
//     Φ_r = Σ ε(i_1 … i_{n−1}) ω^{i_1}_n ∧ … ∧ ω^{i_r}_n ∧ θ^{i_{r+1}} ∧ … ∧ θ^{i_{n−1}},
//
// (i_1<…<i_r, i_{r+1}<…<i_{n−1}) built on a principal frame, their exterior
// derivative in closed form, and the curvature corrections it produces in the
// volume integrand of the total-mean-curvature comparison formula.
//
// Connection values on the principal frame are ω^i_n(e_j) = δ_ij κ_i,
// ω^i_n(e_n) = |∇u|_i/|∇u|, and ω^i_j = 0 for i,j < n.

#include "totcurv/exterior.hpp"
#include "totcurv/field.hpp"
#include "totcurv/levelset.hpp"
#include "totcurv/metric.hpp"

#include <span>

namespace totcurv {

// Frame covectors the forms are assembled from: theta rows θ^1..θ^n and
// omega rows ω^1_n..ω^{n−1}_n. Any positively oriented orthonormal frame
// with the same e_n gives the same Φ_r.
struct NormalConnection {
    Mat theta;  // n × n
    Mat omega;  // (n−1) × n
};

NormalConnection normal_connection(const PrincipalFrame& frame);

AlternatingForm phi_form(const NormalConnection& conn, int r);
double phi_eval(const NormalConnection& conn, int r, std::span<const Vec> vectors);
double phi_eval(const PrincipalFrame& frame, int r, std::span<const Vec> vectors);

// Density of Φ_r|Γ_t against dvol_Γt: (−1)^{n−1} σ_r(κ).
double phi_restricted_density(const PrincipalFrame& frame, int r);

// Ω^i_n(v,w) = Σ_{l,k} θ^l(v) θ^k(w) R_{l k i n}.
AlternatingForm curvature_form(const PrincipalFrame& frame, const FrameCurvature& curv, int i);

// dΦ_r = (−1)^{n−1}(r+1) Φ_{r+1}∧θ^n
//      + (−1)^{r−1} Σ ε(i_1 … i_{n−1}) ω^{i_1}_n∧…∧ω^{i_{r−1}}_n∧Ω^{i_r}_n∧θ^{i_{r+1}}∧…∧θ^{i_{n−1}}
// evaluated on an n-tuple of vectors.
double dphi_formula_eval(const PrincipalFrame& frame, const FrameCurvature& curv, int r,
                         std::span<const Vec> vectors);

// −Σ κ_{i_1}⋯κ_{i_{r−1}} K_{i_r n}, i_1<…<i_{r−1}, i_r distinct from them. Zero for r < 1.
double correction_A(const PrincipalFrame& frame, const FrameCurvature& curv, int r);

// (1/|∇u|) Σ κ_{i_1}⋯κ_{i_{r−2}} |∇u|_{i_{r−1}} R_{i_r i_{r−1} i_r n},
// i_1<…<i_{r−2}, all indices distinct. Zero for r < 2.
double correction_B(const PrincipalFrame& frame, const FrameCurvature& curv, int r);

// (r+1) σ_{r+1}(κ) + correction_A + correction_B.
double main_rhs_integrand(const PrincipalFrame& frame, const FrameCurvature& curv, int r);

// Φ_r as a coordinate form field, rebuilding the principal frame at every
// point it is sampled at. This is what the finite-difference exterior
// derivative differentiates.
FormField phi_field(const ScalarField& field, const MetricChart& chart, int r);

// θ^n = du/|∇u| as a coordinate 1-form field.
FormField normal_coframe_field(const ScalarField& field, const MetricChart& chart);

} // namespace totcurv
