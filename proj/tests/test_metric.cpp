#include "checks.hpp"
#include "oracles.hpp"

#include "totcurv/metric.hpp"
#include "totcurv/scenarios.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace totcurv;

namespace {

constexpr double kPi = std::numbers::pi;

Vec point(std::initializer_list<double> v) {
    Vec x(static_cast<int>(v.size()));
    int i = 0;
    for (double a : v) x[i++] = a;
    return x;
}

Box box(std::initializer_list<double> lo, std::initializer_list<double> hi) { return Box{point(lo), point(hi)}; }

// Unit frame of a diagonal metric: e_k = ∂_k / √g_kk.
Mat diagonal_unit_frame(const Mat& g) {
    Mat e = Mat::Zero(g.rows(), g.cols());
    for (int k = 0; k < g.rows(); ++k) e(k, k) = 1.0 / std::sqrt(g(k, k));
    return e;
}

double max_abs(const Tensor3& t) { return t.max_abs(); }

MetricChart polar_plane() { return warped_polar_chart(2, euclidean_warp(), 0.5, 3.0); }
MetricChart round_s2() { return warped_polar_chart(2, sphere_warp(), 0.1, kPi - 0.1); }

} // namespace

TEST_CASE("christoffel symbols vanish for the flat metric") {
    const MetricChart flat = euclidean_chart(box({-1, -1, -1}, {1, 1, 1}));
    CHECK(max_abs(christoffel(flat, point({0.3, -0.2, 0.5}))) == 0.0);
    CHECK(max_abs(christoffel(flat.finite_difference_only(), point({0.3, -0.2, 0.5}))) <= 1e-12);
}

TEST_CASE("christoffel symbols of the polar plane at rho = 2") {
    const auto G = christoffel(polar_plane(), point({2.0, 0.7}));
    CHECK(G(0, 1, 1) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(G(1, 0, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(G(1, 1, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(G(0, 0, 0)) + std::abs(G(0, 0, 1)) + std::abs(G(0, 1, 0)) + std::abs(G(1, 0, 0)) +
              std::abs(G(1, 1, 1)) ==
          0.0);
}

TEST_CASE("christoffel symbols of the round sphere") {
    const auto equator = christoffel(round_s2(), point({kPi / 2, 1.0}));
    CHECK(std::abs(equator(0, 1, 1)) <= 1e-15);
    CHECK(std::abs(equator(1, 0, 1)) <= 1e-15);
    const double th = kPi / 3;
    const auto G = christoffel(round_s2(), point({th, 1.0}));
    CHECK(G(0, 1, 1) == doctest::Approx(-std::sin(th) * std::cos(th)).epsilon(1e-12));
    CHECK(G(1, 0, 1) == doctest::Approx(std::cos(th) / std::sin(th)).epsilon(1e-12));
}

TEST_CASE("christoffel symbols are symmetric in the lower indices") {
    std::mt19937_64 rng(3);
    const Scenario s = warped_tilted();
    for (const Vec& x : sample_points(s, 20, 5)) {
        const auto G = christoffel(*s.chart, x);
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) CHECK(G(k, i, j) == G(k, j, i));
    }
}

TEST_CASE("metric compatibility: inner products are constant under parallel transport") {
    // Transport V, W along x(t) = x + t v with dV/dt = −Γ(v, V) by RK4 and
    // difference g(x(t))(V(t), W(t)) across t = ±h.
    for (const auto& name : builtin_names()) {
        const Scenario s = builtin(name);
        std::mt19937_64 rng(17);
        const int n = s.dim;
        for (const Vec& x : sample_points(s, 10, 23)) {
            const Vec v = oracle::random_vec(n, rng);
            auto transport = [&](Vec V, double t_end) {
                const int steps = 8;
                const double dt = t_end / steps;
                auto rhs = [&](double t, const Vec& Y) {
                    const auto G = christoffel(*s.chart, Vec(x + t * v));
                    Vec out = Vec::Zero(n);
                    for (int k = 0; k < n; ++k)
                        for (int a = 0; a < n; ++a)
                            for (int b = 0; b < n; ++b) out[k] -= G(k, a, b) * v[a] * Y[b];
                    return out;
                };
                double t = 0.0;
                for (int i = 0; i < steps; ++i, t += dt) {
                    const Vec k1 = rhs(t, V);
                    const Vec k2 = rhs(t + dt / 2, V + dt / 2 * k1);
                    const Vec k3 = rhs(t + dt / 2, V + dt / 2 * k2);
                    const Vec k4 = rhs(t + dt, V + dt * k3);
                    V += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
                }
                return V;
            };
            const Vec V = oracle::random_vec(n, rng), W = oracle::random_vec(n, rng);
            auto inner = [&](double t) {
                const Mat g = s.chart->metric(Vec(x + t * v));
                return transport(V, t).dot(g * transport(W, t));
            };
            for (double h : {1e-3, 5e-4}) {
                const double rate = (inner(h) - inner(-h)) / (2 * h);
                CHECK(std::abs(rate) <= 1e-6 * std::max(1.0, std::abs(inner(0.0))));
            }
        }
    }
}

TEST_CASE("riemann tensor vanishes for the flat metric") {
    const MetricChart flat = euclidean_chart(box({-1, -1, -1}, {1, 1, 1}));
    CHECK(riemann_coord(flat, point({0.1, 0.2, 0.3})).max_abs() == 0.0);
    CHECK(riemann_coord(polar_plane(), point({1.3, 0.4})).max_abs() <= 1e-12);
    const auto c = frame_curvature(flat, point({0.1, 0.2, 0.3}), Mat::Identity(3, 3));
    CHECK(c.R.max_abs() == 0.0);
}

TEST_CASE("sign convention: the unit sphere has K = +1, the hyperbolic plane K = -1") {
    const Vec x = point({1.1, 0.3});
    const MetricChart s2 = round_s2();
    const auto cs = frame_curvature(s2, x, diagonal_unit_frame(s2.metric(x)));
    CHECK(cs.K(0, 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(cs.R(0, 1, 0, 1) == doctest::Approx(1.0).epsilon(1e-10));

    const MetricChart h2 = poincare_half_plane_chart(box({-2, 0.2}, {2, 3}));
    const Vec y = point({0.4, 1.3});
    const auto ch = frame_curvature(h2, y, diagonal_unit_frame(h2.metric(y)));
    CHECK(ch.K(0, 1) == doctest::Approx(-1.0).epsilon(1e-10));
    const auto ch_fd = frame_curvature(h2.finite_difference_only(), y, diagonal_unit_frame(h2.metric(y)));
    CHECK(ch_fd.K(0, 1) == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("unit S^3: every sectional curvature is 1 in a random orthonormal frame") {
    const MetricChart s3 = warped_polar_chart(3, sphere_warp(), 0.2, 2.5);
    std::mt19937_64 rng(8);
    const Vec x = point({0.9, 1.2, 2.0});
    const Mat E = oracle::random_orthonormal_frame(s3.metric(x), rng);
    const auto c = frame_curvature(s3, x, E);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(c.K(i, j) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("warped product with f = r^2: radial curvature -f''/f = -2/r^2") {
    // Hand computation for dr² + f² dσ²: K(∂_r, tangential) = −f''/f and
    // K(tangential, tangential) = (1 − f'²)/f².
    const WarpingFunction square{[](double r) { return r * r; }, [](double r) { return 2 * r; },
                                 [](double) { return 2.0; }};
    const MetricChart chart = warped_polar_chart(3, square, 0.5, 2.0);
    const double r = 1.3;
    const Vec x = point({r, 1.0, 0.5});
    const auto c = frame_curvature(chart, x, diagonal_unit_frame(chart.metric(x)));
    CHECK(c.K(0, 1) == doctest::Approx(-2.0 / (r * r)).epsilon(1e-10));
    CHECK(c.K(0, 2) == doctest::Approx(-2.0 / (r * r)).epsilon(1e-10));
    CHECK(c.K(1, 2) == doctest::Approx((1.0 - 4 * r * r) / std::pow(r, 4)).epsilon(1e-10));
    const auto fd = frame_curvature(chart.finite_difference_only(), x, diagonal_unit_frame(chart.metric(x)));
    CHECK(fd.K(0, 1) == doctest::Approx(-2.0 / (r * r)).epsilon(1e-5));
}

TEST_CASE("constant-curvature scenarios reproduce their curvature") {
    for (auto [s, c] : {std::pair{sphere_annulus(4), 1.0}, std::pair{hyperbolic_annulus(3), -1.0},
                        std::pair{euclid_shell(3), 0.0}, std::pair{sphere_annulus(3), 1.0}}) {
        std::mt19937_64 rng(4);
        for (const Vec& x : sample_points(s, 10, 9)) {
            const auto curv = frame_curvature(*s.chart, x, oracle::random_orthonormal_frame(s.chart->metric(x), rng));
            for (int i = 0; i < s.dim; ++i)
                for (int j = 0; j < s.dim; ++j)
                    if (i != j) CHECK(std::abs(curv.K(i, j) - c) <= 1e-10);
        }
    }
}

TEST_CASE("frame curvature symmetries and first Bianchi at 100 points of every scenario") {
    for (const auto& name : builtin_names()) {
        CAPTURE(name);
        const Scenario s = builtin(name);
        std::mt19937_64 rng(12);
        const auto fd_chart = s.chart->finite_difference_only();
        for (const Vec& x : sample_points(s, 100, 31)) {
            const Mat E = oracle::random_orthonormal_frame(s.chart->metric(x), rng);
            CHECK(checks::riemann_defects(frame_curvature(*s.chart, x, E)).max() <= 1e-6);
            CHECK(checks::riemann_defects(frame_curvature(fd_chart, x, E)).max() <= 1e-4);
        }
    }
}

TEST_CASE("finite-difference metric derivatives agree with the analytic ones") {
    const Scenario s = warped_tilted();
    const MetricChart fd = s.chart->finite_difference_only();
    for (const Vec& x : sample_points(s, 20, 2)) {
        const Tensor3 a1 = s.chart->metric_first_derivative(x), f1 = fd.metric_first_derivative(x);
        const Tensor4 a2 = s.chart->metric_second_derivative(x), f2 = fd.metric_second_derivative(x);
        double d1 = 0, d2 = 0;
        for (int l = 0; l < 4; ++l)
            for (int k = 0; k < 4; ++k)
                for (int i = 0; i < 4; ++i) {
                    d1 = std::max(d1, std::abs(a1(k, l, i) - f1(k, l, i)));
                    for (int j = 0; j < 4; ++j) d2 = std::max(d2, std::abs(a2(l, k, i, j) - f2(l, k, i, j)));
                }
        CHECK(d1 <= 5e-6);
        CHECK(d2 <= 1e-5);
        const Tensor4 ra = riemann_coord(*s.chart, x), rf = riemann_coord(fd, x);
        double dr = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d) dr = std::max(dr, std::abs(ra(a, b, c, d) - rf(a, b, c, d)));
        CHECK(dr <= 1e-5);
    }
}

TEST_CASE("first-derivative error of the finite-difference metric is second order") {
    const MetricChart analytic = warped_polar_chart(3, sphere_warp(), 0.2, 2.5);
    MetricChart fd = analytic.finite_difference_only();
    const Vec x = point({0.8, 1.1, 0.4});
    auto err = [&](double h) {
        fd.set_fd_step(h);
        const Tensor3 a = analytic.metric_first_derivative(x), f = fd.metric_first_derivative(x);
        double e = 0;
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) e = std::max(e, std::abs(a(k, i, j) - f(k, i, j)));
        return e;
    };
    const double slope = std::log2(err(1e-2) / err(5e-3));
    CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("sectional curvature does not depend on the basis of the 2-plane") {
    const Scenario s = warped_tilted();
    std::mt19937_64 rng(41);
    for (const Vec& x : sample_points(s, 20, 43)) {
        const Mat g = s.chart->metric(x);
        Mat E = oracle::random_orthonormal_frame(g, rng);
        const double k1 = frame_curvature(*s.chart, x, E).K(0, 1);
        const double phi = oracle::uniform(rng, 0.0, 2 * kPi);
        const Vec a = E.col(0), b = E.col(1);
        E.col(0) = std::cos(phi) * a + std::sin(phi) * b;
        E.col(1) = -std::sin(phi) * a + std::cos(phi) * b;
        const double k2 = frame_curvature(*s.chart, x, E).K(0, 1);
        CHECK(k1 == doctest::Approx(k2).epsilon(1e-10));
    }
}

TEST_CASE("metric errors") {
    const MetricChart degenerate(2, box({-1, -1}, {1, 1}), [](const Vec&) {
        Mat g = Mat::Identity(2, 2);
        g(1, 1) = 0.0;
        return g;
    });
    CHECK_THROWS_AS(degenerate.metric(point({0, 0})), DegenerateMetricError);
    CHECK_THROWS_AS(christoffel(degenerate, point({0, 0})), DegenerateMetricError);

    const MetricChart asymmetric(2, box({-1, -1}, {1, 1}), [](const Vec&) {
        Mat g = Mat::Identity(2, 2);
        g(0, 1) = 0.1;
        return g;
    });
    CHECK_THROWS_AS(asymmetric.metric(point({0, 0})), DegenerateMetricError);

    const MetricChart flat = euclidean_chart(box({-1, -1}, {1, 1}));
    Mat skew = Mat::Identity(2, 2);
    skew(0, 1) = 0.2;
    CHECK_THROWS_AS(frame_curvature(flat, point({0, 0}), skew), FrameError);

    MetricChart fd = polar_plane().finite_difference_only();
    CHECK_THROWS_AS(fd.set_fd_step(0.0), StepSizeError);
    fd.set_fd_step(1e-14);
    CHECK_THROWS_AS(riemann_coord(fd, point({1.0, 0.5})), StepSizeError);
}
