#include "totcurv/verify.hpp"

#include "totcurv/chernforms.hpp"
#include "totcurv/levelset.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>

namespace totcurv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct NodeGeometry {
    PrincipalFrame frame;
    FrameCurvature curv;
};

NodeGeometry node_geometry(const Scenario& s, const Vec& x) {
    const LocalGeometry geo = local_geometry(*s.chart, x);
    PrincipalFrame frame = principal_frame(*s.field, geo);
    FrameCurvature curv = frame_curvature(riemann_coord(*s.chart, geo), geo.g, frame.e);
    return {std::move(frame), std::move(curv)};
}

void check_rs(const Scenario& s, std::span<const int> rs) {
    for (int r : rs) {
        if (r < 0 || r > s.dim - 1) {
            throw ConfigError(s.label + ": r = " + std::to_string(r) + " outside 0.." +
                              std::to_string(s.dim - 1));
        }
    }
}

} // namespace

bool row_passes(double lhs, double rhs, const Tolerances& tol, bool* absolute_test) {
    const double diff = std::abs(lhs - rhs);
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    const bool absolute = scale < tol.near_zero;
    if (absolute_test) *absolute_test = absolute;
    if (!std::isfinite(diff)) return false;
    return absolute ? diff <= tol.abs : diff <= tol.rel * scale;
}

std::vector<VerificationRow> verify_main_identity(const Scenario& s, std::span<const int> rs,
                                                  const VerifyOptions& opts) {
    const auto start = Clock::now();
    const int m = opts.surface_m > 0 ? opts.surface_m : s.default_m;
    if (opts.surface_m < 0) throw ConfigError("grid must be positive");
    if (opts.t_nodes < 1) throw ConfigError("t-nodes must be positive");
    check_rs(s, rs);

    const Tolerances tol{opts.rel_tol.value_or(s.default_rel_tol), opts.abs_tol, opts.near_zero};
    std::vector<VerificationRow> rows(rs.size());
    for (std::size_t k = 0; k < rs.size(); ++k) {
        auto& row = rows[k];
        row.scenario = s.label;
        row.dim = s.dim;
        row.r = rs[k];
        row.surface_m = m;
        row.t_nodes = opts.t_nodes;
        if (auto a = s.closed_form_value(rs[k], 1.0), b = s.closed_form_value(rs[k], 0.0); a && b) {
            row.closed_form_lhs = *a - *b;
        }
    }
    if (rs.empty()) return rows;

    try {
        const std::size_t width = rs.size();
        const auto sigma_integrand = [&](const Vec& x, std::span<double> out) {
            const PrincipalFrame frame = principal_frame(*s.field, *s.chart, x);
            for (std::size_t k = 0; k < width; ++k) out[k] = sigma_r(frame.kappa, rs[k]);
        };
        const auto outer = surface_integral(s.patches(1.0, m), width, sigma_integrand, opts.exec);
        const auto inner = surface_integral(s.patches(0.0, m), width, sigma_integrand, opts.exec);
        const auto rhs = volume_integral(
            s.patches, *s.field, width,
            [&](const Vec& x, std::span<double> out) {
                const auto node = node_geometry(s, x);
                for (std::size_t k = 0; k < width; ++k) {
                    out[k] = main_rhs_integrand(node.frame, node.curv, rs[k]);
                }
            },
            VolumeGrid{m, opts.t_nodes}, opts.exec);

        const double elapsed = seconds_since(start);
        for (std::size_t k = 0; k < width; ++k) {
            auto& row = rows[k];
            row.lhs = outer[k].value - inner[k].value;
            row.rhs = rhs[k].value;
            row.lhs_quadrature_error = outer[k].estimated_error + inner[k].estimated_error;
            row.rhs_quadrature_error = rhs[k].estimated_error;
            row.nodes = outer[k].nodes_used + inner[k].nodes_used + rhs[k].nodes_used;
            row.abs_error = std::abs(row.lhs - row.rhs);
            const double scale = std::max(std::abs(row.lhs), std::abs(row.rhs));
            row.rel_error = scale > 0.0 ? row.abs_error / scale : 0.0;
            row.pass = row_passes(row.lhs, row.rhs, tol, &row.absolute_test);
            row.tolerance = row.absolute_test ? tol.abs : tol.rel;

            // Order of the discrepancy between the half grid and the full grid.
            const double coarse_lhs = outer[k].coarse_value - inner[k].coarse_value;
            const double coarse_diff = std::abs(coarse_lhs - rhs[k].coarse_value);
            const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
            if (row.abs_error > floor && coarse_diff > floor) {
                row.convergence_order = std::log2(coarse_diff / row.abs_error);
            } else {
                row.note = "discrepancy at rounding floor";
            }
            row.wall_time = elapsed;
        }
    } catch (const Error& e) {
        for (auto& row : rows) {
            row.pass = false;
            row.note = e.what();
            row.lhs = row.rhs = row.abs_error = row.rel_error = std::numeric_limits<double>::quiet_NaN();
            row.wall_time = seconds_since(start);
        }
    }
    return rows;
}

VerificationRow verify_main_identity(const Scenario& scenario, int r, const VerifyOptions& opts) {
    const int rs[] = {r};
    return verify_main_identity(scenario, std::span<const int>(rs), opts).front();
}

std::vector<Vec> sample_points(const Scenario& scenario, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Vec> points;
    points.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) points.push_back(scenario.sample_interior(rng));
    return points;
}

double pointwise_residual(const Scenario& s, int r, const Vec& x, double h) {
    const auto node = node_geometry(s, x);
    const FormField phi = phi_field(*s.field, *s.chart, r);
    const AlternatingForm d = numeric_d(phi, x, NumericDOptions{h, false});
    std::vector<Vec> basis;
    for (int i = 0; i < s.dim; ++i) basis.push_back(node.frame.e.col(i));
    return std::abs(d(basis) - dphi_formula_eval(node.frame, node.curv, r, basis));
}

std::vector<PointwiseRow> run_pointwise(const Scenario& s, std::span<const int> rs,
                                        const PointwiseOptions& opts) {
    check_rs(s, rs);
    if (opts.points < 0) throw ConfigError("point count must be non-negative");
    if (opts.h < 0.0) throw ConfigError("step h must be non-negative");
    const double h = opts.h > 0.0 ? opts.h : 1e-4 * s.chart->domain().diameter();
    const auto points = sample_points(s, opts.points, opts.seed);

    std::vector<PointwiseRow> rows;
    for (int r : rs) {
        const auto start = Clock::now();
        PointwiseRow row;
        row.scenario = s.label;
        row.dim = s.dim;
        row.r = r;
        row.points = opts.points;
        row.h = h;
        try {
            // Per point: residual at h, residual at h/2, |dΦ_r|, |correction_B|.
            std::vector<std::array<double, 4>> per_point(points.size());
            const FormField phi = phi_field(*s.field, *s.chart, r);
            for_each_index(
                points.size(),
                [&](std::size_t i) {
                    const Vec& x = points[i];
                    const auto node = node_geometry(s, x);
                    std::vector<Vec> basis;
                    for (int j = 0; j < s.dim; ++j) basis.push_back(node.frame.e.col(j));
                    const double exact = dphi_formula_eval(node.frame, node.curv, r, basis);
                    const double coarse = numeric_d(phi, x, NumericDOptions{h, false})(basis);
                    const double fine = numeric_d(phi, x, NumericDOptions{0.5 * h, false})(basis);
                    per_point[i] = {std::abs(coarse - exact), std::abs(fine - exact), std::abs(exact),
                                    std::abs(correction_B(node.frame, node.curv, r))};
                },
                opts.exec);
            for (const auto& p : per_point) {
                row.max_residual = std::max(row.max_residual, p[0]);
                row.max_residual_half = std::max(row.max_residual_half, p[1]);
                row.max_abs_dphi = std::max(row.max_abs_dphi, p[2]);
                row.max_abs_correction_B = std::max(row.max_abs_correction_B, p[3]);
            }
            row.constant = row.max_residual / (h * h);
            if (row.max_residual > 0.0 && row.max_residual_half > 0.0) {
                row.slope = std::log2(row.max_residual / row.max_residual_half);
            }
            row.pass = row.slope && *row.slope >= opts.slope_lo && *row.slope <= opts.slope_hi;
            if (!row.slope) row.note = points.empty() ? "no points" : "residual vanished";
        } catch (const Error& e) {
            row.pass = false;
            row.note = e.what();
        }
        row.wall_time = seconds_since(start);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace totcurv
