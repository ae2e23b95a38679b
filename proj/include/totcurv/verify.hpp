#pragma once

// End-to-end checks of the comparison formula
//
//   M_r(Γ_1) − M_r(Γ_0) = ∫_M (r+1)σ_{r+1}(κ) + correction_A + correction_B
//
// by two independent routes: surface quadrature of σ_r on the boundary
// levels against volume quadrature of the integrand; and, pointwise, the
// closed-form dΦ_r against a finite-difference exterior derivative of Φ_r.

#include "totcurv/parallel.hpp"
#include "totcurv/quadrature.hpp"
#include "totcurv/scenarios.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace totcurv {

struct Tolerances {
    double rel = 1e-6;
    double abs = 1e-9;        // used when the row is near zero
    double near_zero = 1e-6;  // max(|lhs|,|rhs|) below this → absolute test
};

struct VerifyOptions {
    int surface_m = 0;  // 0: scenario default
    int t_nodes = 32;
    std::optional<double> rel_tol;  // unset: scenario default
    double abs_tol = 1e-9;
    double near_zero = 1e-6;
    Execution exec = Execution::parallel;
};

struct VerificationRow {
    std::string scenario;
    int dim = 0;
    int r = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_error = 0.0;
    double rel_error = 0.0;
    std::optional<double> closed_form_lhs;
    double lhs_quadrature_error = 0.0;
    double rhs_quadrature_error = 0.0;
    int surface_m = 0;
    int t_nodes = 0;
    std::size_t nodes = 0;
    std::optional<double> convergence_order;
    double tolerance = 0.0;  // the rel or abs bound the row was judged by
    bool absolute_test = false;
    bool pass = false;
    double wall_time = 0.0;
    std::string note;  // failure message or convergence remark
};

// Pass rule shared by rows and tests.
bool row_passes(double lhs, double rhs, const Tolerances& tol, bool* absolute_test = nullptr);

// One row per r; all r share the quadrature passes. Exceptions from the
// scenario are caught and reported as failed rows.
std::vector<VerificationRow> verify_main_identity(const Scenario& scenario, std::span<const int> rs,
                                                  const VerifyOptions& opts = {});
VerificationRow verify_main_identity(const Scenario& scenario, int r, const VerifyOptions& opts = {});

struct PointwiseOptions {
    int points = 100;
    std::uint64_t seed = 1;
    double h = 0.0;  // 0: 1e-4 · chart diameter
    double slope_lo = 1.7;
    double slope_hi = 2.3;
    Execution exec = Execution::parallel;
};

struct PointwiseRow {
    std::string scenario;
    int dim = 0;
    int r = 0;
    int points = 0;
    double h = 0.0;
    double max_residual = 0.0;       // at step h
    double max_residual_half = 0.0;  // at step h/2
    std::optional<double> slope;     // log2 of the ratio
    double constant = 0.0;           // max_residual / h²
    double max_abs_dphi = 0.0;
    double max_abs_correction_B = 0.0;
    bool pass = false;
    double wall_time = 0.0;
    std::string note;
};

// Residual |numeric_d(Φ_r) − dΦ_r formula| on the principal frame at one point.
double pointwise_residual(const Scenario& scenario, int r, const Vec& x, double h);

std::vector<PointwiseRow> run_pointwise(const Scenario& scenario, std::span<const int> rs,
                                        const PointwiseOptions& opts = {});

// Interior sample points used by the pointwise runs and property tests.
std::vector<Vec> sample_points(const Scenario& scenario, int count, std::uint64_t seed);

} // namespace totcurv
