#pragma once

// Structure and tensor properties sampled at random interior points of a
// scenario. Each field is the largest deviation seen.

#include "oracles.hpp"

#include "totcurv/chernforms.hpp"
#include "totcurv/verify.hpp"

#include <algorithm>
#include <cmath>

namespace checks {

using totcurv::Mat;
using totcurv::Vec;

struct RiemannDefects {
    double antisym_first = 0.0;   // R_ijkl + R_jikl
    double antisym_second = 0.0;  // R_ijkl + R_ijlk
    double pair = 0.0;            // R_ijkl − R_klij
    double bianchi = 0.0;         // R_ijkl + R_jkil + R_kijl
    double k_definition = 0.0;    // K_ij − R_ijij

    double max() const { return std::max({antisym_first, antisym_second, pair, bianchi, k_definition}); }
    void merge(const RiemannDefects& o) {
        antisym_first = std::max(antisym_first, o.antisym_first);
        antisym_second = std::max(antisym_second, o.antisym_second);
        pair = std::max(pair, o.pair);
        bianchi = std::max(bianchi, o.bianchi);
        k_definition = std::max(k_definition, o.k_definition);
    }
};

inline RiemannDefects riemann_defects(const totcurv::FrameCurvature& c) {
    RiemannDefects d;
    const int n = c.dim();
    const auto& R = c.R;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            d.k_definition = std::max(d.k_definition, std::abs(c.K(i, j) - R(i, j, i, j)));
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    d.antisym_first = std::max(d.antisym_first, std::abs(R(i, j, k, l) + R(j, i, k, l)));
                    d.antisym_second = std::max(d.antisym_second, std::abs(R(i, j, k, l) + R(i, j, l, k)));
                    d.pair = std::max(d.pair, std::abs(R(i, j, k, l) - R(k, l, i, j)));
                    d.bianchi = std::max(d.bianchi, std::abs(R(i, j, k, l) + R(j, k, i, l) + R(k, i, j, l)));
                }
        }
    return d;
}

struct PropertyReport {
    int points = 0;
    RiemannDefects riemann;
    double orthonormality = 0.0;    // max |<e_i,e_j> − δ_ij|
    double orientation = 0.0;       // max |dvol_M(e_1..e_n) − 1|
    double normal = 0.0;            // max |e_n − ∇u/|∇u||
    double hessian_route = 0.0;     // |∇u|_i three ways: Hess(e_i,e_n), e_i|∇u|, <∇_{e_n}∇u, e_i>
    double restriction = 0.0;       // Φ_r on tangent tuples vs (−1)^{n−1}σ_r dvol_Γ, relative
    double principal_values = 0.0;  // Φ_r(e_1..e_{n−1}) − σ_r
    double frame_invariance = 0.0;  // Φ_r under a rotation of the tangential frame
    double sigma_conventions = 0.0; // σ_0 − 1 and σ_r for r ≥ n
};

// dvol_M(w_1..w_n) = √det g · det[w].
inline double volume_form(const Mat& g, const Mat& w) { return std::sqrt(g.determinant()) * w.determinant(); }

inline Mat random_rotation(int m, std::mt19937_64& rng) {
    return oracle::random_orthonormal_frame(Mat::Identity(m, m), rng);
}

inline PropertyReport property_suite(const totcurv::Scenario& s, int count, std::uint64_t seed) {
    PropertyReport rep;
    const int n = s.dim;
    std::mt19937_64 rng(seed ^ 0x5bd1e995u);
    const auto grad_field = oracle::gradient_field(s);
    for (const Vec& x : totcurv::sample_points(s, count, seed)) {
        ++rep.points;
        const auto geo = totcurv::local_geometry(*s.chart, x);
        const auto frame = totcurv::principal_frame(*s.field, geo);
        const auto curv = totcurv::frame_curvature(totcurv::riemann_coord(*s.chart, geo), geo.g, frame.e);
        rep.riemann.merge(riemann_defects(curv));

        rep.orthonormality = std::max(rep.orthonormality, totcurv::orthonormality_defect(geo.g, frame.e));
        rep.orientation = std::max(rep.orientation, std::abs(volume_form(geo.g, frame.e) - 1.0));
        const Vec grad = grad_field(x);
        const Vec unit = grad / std::sqrt(grad.dot(geo.g * grad));
        rep.normal = std::max(rep.normal, (frame.e.col(n - 1) - unit).cwiseAbs().maxCoeff());

        const double h = 1e-5 * std::max(1.0, x.norm());
        const Vec en = frame.e.col(n - 1);
        const Vec dgrad_en = oracle::covariant_derivative(*s.chart, grad_field, x, en, h);
        for (int i = 0; i < n - 1; ++i) {
            const Vec ei = frame.e.col(i);
            const double route_a = frame.grad_norm_tangential[i];
            const double route_b = oracle::derivative_of_grad_norm(s, x, ei, h);
            const double route_c = ei.dot(geo.g * dgrad_en);
            rep.hessian_route =
                std::max({rep.hessian_route, std::abs(route_a - route_b), std::abs(route_a - route_c)});
        }

        // Random tangent tuple to Γ_t and random ambient tuple.
        std::vector<Vec> tangent, ambient;
        for (int k = 0; k < n - 1; ++k) {
            tangent.push_back(frame.e.leftCols(n - 1) * oracle::random_vec(n - 1, rng));
            ambient.push_back(oracle::random_vec(n, rng));
        }
        Mat w(n, n);
        w.col(0) = en;
        for (int k = 0; k < n - 1; ++k) w.col(k + 1) = tangent[k];
        const double dvol_gamma = volume_form(geo.g, w);

        const auto conn = totcurv::normal_connection(frame);
        totcurv::NormalConnection rotated = conn;
        const Mat Q = random_rotation(n - 1, rng);
        rotated.theta.topRows(n - 1) = Q.transpose() * conn.theta.topRows(n - 1);
        rotated.omega = Q.transpose() * conn.omega;

        std::vector<Vec> principal;
        for (int k = 0; k < n - 1; ++k) principal.push_back(frame.e.col(k));
        for (int r = 0; r < n; ++r) {
            const double sigma = totcurv::sigma_r(frame.kappa, r);
            const double scale = std::max(1.0, std::abs(sigma));
            const double on_tangent = totcurv::phi_eval(frame, r, tangent);
            const double expected = totcurv::phi_restricted_density(frame, r) * dvol_gamma;
            rep.restriction = std::max(rep.restriction,
                                       std::abs(on_tangent - expected) / (scale * std::max(1.0, std::abs(dvol_gamma))));
            rep.principal_values =
                std::max(rep.principal_values, std::abs(totcurv::phi_eval(frame, r, principal) - sigma) / scale);
            const double a = totcurv::phi_eval(conn, r, ambient);
            const double b = totcurv::phi_eval(rotated, r, ambient);
            rep.frame_invariance = std::max(rep.frame_invariance, std::abs(a - b) / std::max(1.0, std::abs(a)));
        }
        rep.sigma_conventions = std::max(rep.sigma_conventions, std::abs(totcurv::sigma_r(frame.kappa, 0) - 1.0));
        for (int r = n; r < n + 3; ++r) {
            rep.sigma_conventions = std::max(rep.sigma_conventions, std::abs(totcurv::sigma_r(frame.kappa, r)));
        }
    }
    return rep;
}

// Scenario copy whose metric derivatives all go through finite differences.
inline totcurv::Scenario with_finite_difference_metric(totcurv::Scenario s) {
    s.chart = std::make_shared<totcurv::MetricChart>(s.chart->finite_difference_only());
    return s;
}

} // namespace checks
