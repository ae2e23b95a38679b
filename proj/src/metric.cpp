#include "totcurv/metric.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace totcurv {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kMinRcond = 1e-15;

void check_step(const Vec& x, double h, const Box& domain) {
    const double scale = std::max(domain.diameter(), 1.0);
    if (!(h > 0.0) || h < scale * 1e-12) {
        throw StepSizeError("finite-difference step underflows the domain scale");
    }
    for (int i = 0; i < x.size(); ++i) {
        if (x[i] + h == x[i]) {
            throw StepSizeError("finite-difference step lost to rounding at coordinate " +
                                std::to_string(i));
        }
    }
}

Vec shifted(const Vec& x, int k, double h) {
    Vec y = x;
    y[k] += h;
    return y;
}

Vec shifted(const Vec& x, int k, double hk, int l, double hl) {
    Vec y = x;
    y[k] += hk;
    y[l] += hl;
    return y;
}

} // namespace

MetricChart::MetricChart(int dim, Box domain, MetricFn g, FirstDerivativeFn dg,
                         SecondDerivativeFn d2g)
    : dim_(dim), domain_(std::move(domain)), g_(std::move(g)), dg_(std::move(dg)),
      d2g_(std::move(d2g)), fd_step_(domain_.diameter() * 1e-4) {
    if (dim_ < 2) throw DomainError("metric chart needs dimension >= 2");
    if (domain_.dim() != dim_) throw DomainError("chart domain dimension mismatch");
}

MetricChart MetricChart::finite_difference_only() const {
    MetricChart copy(dim_, domain_, g_);
    copy.fd_step_ = fd_step_;
    return copy;
}

void MetricChart::set_fd_step(double h) {
    if (!(h > 0.0)) throw StepSizeError("finite-difference step must be positive");
    fd_step_ = h;
}

Mat MetricChart::metric(const Vec& x) const {
    if (x.size() != dim_) throw DomainError("point dimension does not match chart");
    Mat g = g_(x);
    if (g.rows() != dim_ || g.cols() != dim_) throw DomainError("metric has wrong shape");
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
        throw DegenerateMetricError("metric not symmetric");
    }
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success) throw DegenerateMetricError("metric not positive definite");
    if (llt.rcond() < kMinRcond) {
        std::ostringstream msg;
        msg << "metric is numerically singular (rcond " << llt.rcond() << ")";
        throw DegenerateMetricError(msg.str());
    }
    return g;
}

Tensor3 MetricChart::metric_first_derivative(const Vec& x) const {
    if (dg_) return dg_(x);
    const double h = fd_step_;
    check_step(x, h, domain_);
    Tensor3 d(dim_);
    for (int k = 0; k < dim_; ++k) {
        const Mat gp = g_(shifted(x, k, h));
        const Mat gm = g_(shifted(x, k, -h));
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) d(k, i, j) = (gp(i, j) - gm(i, j)) / (2.0 * h);
    }
    return d;
}

Tensor4 MetricChart::metric_second_derivative(const Vec& x) const {
    if (d2g_) return d2g_(x);
    // Nested central differences; the step never drops below eps^{1/4} of
    // the domain scale, where second differences stop losing to rounding.
    const double floor = std::pow(std::numeric_limits<double>::epsilon(), 0.25) *
                         std::max(domain_.diameter(), 1.0);
    const double h = std::max(fd_step_, floor);
    check_step(x, h, domain_);
    Tensor4 d(dim_);
    const Mat g0 = g_(x);
    for (int k = 0; k < dim_; ++k) {
        const Mat gp = g_(shifted(x, k, h));
        const Mat gm = g_(shifted(x, k, -h));
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j)
                d(k, k, i, j) = (gp(i, j) - 2.0 * g0(i, j) + gm(i, j)) / (h * h);
        for (int l = k + 1; l < dim_; ++l) {
            const Mat gpp = g_(shifted(x, k, h, l, h));
            const Mat gpm = g_(shifted(x, k, h, l, -h));
            const Mat gmp = g_(shifted(x, k, -h, l, h));
            const Mat gmm = g_(shifted(x, k, -h, l, -h));
            for (int i = 0; i < dim_; ++i)
                for (int j = 0; j < dim_; ++j) {
                    const double v = (gpp(i, j) - gpm(i, j) - gmp(i, j) + gmm(i, j)) / (4.0 * h * h);
                    d(k, l, i, j) = v;
                    d(l, k, i, j) = v;
                }
        }
    }
    return d;
}

LocalGeometry local_geometry(const MetricChart& chart, const Vec& x) {
    const int n = chart.dim();
    LocalGeometry geo;
    geo.x = x;
    geo.g = chart.metric(x);
    geo.g_inv = geo.g.llt().solve(Mat::Identity(n, n));
    geo.dg = chart.metric_first_derivative(x);
    geo.gamma = Tensor3(n);
    // Γ_lij = ½(∂_i g_lj + ∂_j g_li − ∂_l g_ij), then raise l.
    Tensor3 lowered(n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                lowered(l, i, j) = 0.5 * (geo.dg(i, l, j) + geo.dg(j, l, i) - geo.dg(l, i, j));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l) s += geo.g_inv(k, l) * lowered(l, i, j);
                geo.gamma(k, i, j) = s;
            }
    return geo;
}

Tensor3 christoffel(const MetricChart& chart, const Vec& x) {
    return local_geometry(chart, x).gamma;
}

Tensor4 riemann_coord(const MetricChart& chart, const Vec& x) {
    return riemann_coord(chart, local_geometry(chart, x));
}

Tensor4 riemann_coord(const MetricChart& chart, const LocalGeometry& geo) {
    const int n = chart.dim();
    const Tensor4 d2g = chart.metric_second_derivative(geo.x);
    const Tensor3& dg = geo.dg;
    const Tensor3& gamma = geo.gamma;

    Tensor3 lowered(n);  // Γ_abc = g_ad Γ^d_bc
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                lowered(a, b, c) = 0.5 * (dg(b, a, c) + dg(c, a, b) - dg(a, b, c));

    // g_ap ∂_e Γ^p_bc = ∂_e Γ_abc − ∂_e g_aq Γ^q_bc
    auto lowered_dgamma = [&](int e, int a, int b, int c) {
        const double dlow = 0.5 * (d2g(e, b, a, c) + d2g(e, c, a, b) - d2g(e, a, b, c));
        double s = 0.0;
        for (int q = 0; q < n; ++q) s += dg(e, a, q) * gamma(q, b, c);
        return dlow - s;
    };

    // Standard lowered tensor S_abcd = g_ap R^p_bcd with
    // R^p_bcd = ∂_c Γ^p_db − ∂_d Γ^p_cb + Γ^p_ce Γ^e_db − Γ^p_de Γ^e_cb,
    // i.e. R_std(∂_c,∂_d)∂_b = R^p_bcd ∂_p. Our convention flips the sign:
    // P(c,d,b,a) = <R(∂_c,∂_d)∂_b, ∂_a> = −S_abcd.
    Tensor4 P(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = c + 1; d < n; ++d) {
                    double s = lowered_dgamma(c, a, d, b) - lowered_dgamma(d, a, c, b);
                    for (int e = 0; e < n; ++e)
                        s += lowered(a, c, e) * gamma(e, d, b) - lowered(a, d, e) * gamma(e, c, b);
                    P(c, d, b, a) = -s;
                    P(d, c, b, a) = s;
                }
    return P;
}

double orthonormality_defect(const Mat& g, const Mat& frame) {
    const Mat gram = frame.transpose() * g * frame;
    return (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

FrameCurvature frame_curvature(const MetricChart& chart, const Vec& x, const Mat& frame) {
    const LocalGeometry geo = local_geometry(chart, x);
    return frame_curvature(riemann_coord(chart, geo), geo.g, frame);
}

FrameCurvature frame_curvature(const Tensor4& riemann, const Mat& g, const Mat& frame) {
    const int n = riemann.dim();
    if (frame.rows() != n || frame.cols() != n) throw FrameError("frame must be n x n");
    if (orthonormality_defect(g, frame) > 1e-8) throw FrameError("frame is not orthonormal");

    // Contract one slot at a time: n^5 work instead of n^8.
    Tensor4 a(n), b(n);
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                for (int s = 0; s < n; ++s) {
                    double v = 0.0;
                    for (int t = 0; t < n; ++t) v += riemann(p, q, s, t) * frame(t, i);
                    a(p, q, s, i) = v;
                }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) {
                    double v = 0.0;
                    for (int s = 0; s < n; ++s) v += a(p, q, s, j) * frame(s, i);
                    b(p, q, i, j) = v;
                }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int p = 0; p < n; ++p) {
                    double v = 0.0;
                    for (int q = 0; q < n; ++q) v += b(p, q, i, j) * frame(q, k);
                    a(p, k, i, j) = v;
                }
    FrameCurvature out;
    out.R = Tensor4(n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double v = 0.0;
                    for (int p = 0; p < n; ++p) v += a(p, k, i, j) * frame(p, l);
                    out.R(l, k, i, j) = v;
                }
    out.K = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.K(i, j) = out.R(i, j, i, j);
    return out;
}

// ---------------------------------------------------------------------------
// Chart factories
// ---------------------------------------------------------------------------

MetricChart euclidean_chart(const Box& domain) {
    const int n = domain.dim();
    return MetricChart(
        n, domain, [n](const Vec&) { return Mat::Identity(n, n); },
        [n](const Vec&) { return Tensor3(n); }, [n](const Vec&) { return Tensor4(n); });
}

WarpingFunction euclidean_warp() {
    return {[](double r) { return r; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
}

WarpingFunction sphere_warp() {
    return {[](double r) { return std::sin(r); }, [](double r) { return std::cos(r); },
            [](double r) { return -std::sin(r); }};
}

WarpingFunction hyperbolic_warp() {
    return {[](double r) { return std::sinh(r); }, [](double r) { return std::cosh(r); },
            [](double r) { return std::sinh(r); }};
}

MetricChart warped_polar_chart(int n, const WarpingFunction& warp, double rho_lo, double rho_hi) {
    if (n < 2) throw DomainError("warped chart needs n >= 2");
    Box box{Vec(n), Vec(n)};
    box.lo[0] = rho_lo;
    box.hi[0] = rho_hi;
    for (int k = 1; k < n - 1; ++k) {
        box.lo[k] = 0.0;
        box.hi[k] = std::numbers::pi;
    }
    box.lo[n - 1] = -std::numbers::pi;
    box.hi[n - 1] = 3.0 * std::numbers::pi;

    // g_kk = F(ρ) Π_{1≤j<k} S(α_j) with F = f², S = sin². Each factor depends
    // on one coordinate, so derivatives follow from the product rule.
    struct Factors {
        std::vector<double> v, d1, d2;  // per coordinate: value, ', ''
    };
    auto factors = [warp, n](const Vec& x) {
        Factors fs{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
        const double f = warp.f(x[0]), df = warp.df(x[0]), d2f = warp.d2f(x[0]);
        fs.v[0] = f * f;
        fs.d1[0] = 2.0 * f * df;
        fs.d2[0] = 2.0 * (df * df + f * d2f);
        for (int j = 1; j < n; ++j) {
            const double s = std::sin(x[j]), c = std::cos(x[j]);
            fs.v[j] = s * s;
            fs.d1[j] = 2.0 * s * c;
            fs.d2[j] = 2.0 * (c * c - s * s);
        }
        return fs;
    };
    auto g = [factors, n](const Vec& x) {
        const Factors fs = factors(x);
        Mat out = Mat::Zero(n, n);
        out(0, 0) = 1.0;
        double prod = fs.v[0];
        for (int k = 1; k < n; ++k) {
            out(k, k) = prod;
            prod *= fs.v[k];
        }
        return out;
    };
    auto dg = [factors, n](const Vec& x) {
        const Factors fs = factors(x);
        Tensor3 out(n);
        for (int k = 1; k < n; ++k)
            for (int m = 0; m < k; ++m) {
                double p = 1.0;
                for (int j = 0; j < k; ++j) p *= (j == m) ? fs.d1[j] : fs.v[j];
                out(m, k, k) = p;
            }
        return out;
    };
    auto d2g = [factors, n](const Vec& x) {
        const Factors fs = factors(x);
        Tensor4 out(n);
        for (int k = 1; k < n; ++k)
            for (int l = 0; l < k; ++l)
                for (int m = 0; m < k; ++m) {
                    double p = 1.0;
                    for (int j = 0; j < k; ++j) {
                        if (j == l && j == m) p *= fs.d2[j];
                        else if (j == l || j == m) p *= fs.d1[j];
                        else p *= fs.v[j];
                    }
                    out(l, m, k, k) = p;
                }
        return out;
    };
    return MetricChart(n, box, g, dg, d2g);
}

MetricChart poincare_half_plane_chart(const Box& domain) {
    if (domain.dim() != 2) throw DomainError("half-plane chart is two-dimensional");
    if (domain.lo[1] <= 0.0) throw DomainError("half-plane chart needs y > 0");
    auto g = [](const Vec& x) {
        const double w = 1.0 / (x[1] * x[1]);
        return Mat(Eigen::Matrix2d{{w, 0.0}, {0.0, w}});
    };
    auto dg = [](const Vec& x) {
        Tensor3 d(2);
        const double w = -2.0 / (x[1] * x[1] * x[1]);
        d(1, 0, 0) = w;
        d(1, 1, 1) = w;
        return d;
    };
    auto d2g = [](const Vec& x) {
        Tensor4 d(2);
        const double w = 6.0 / (x[1] * x[1] * x[1] * x[1]);
        d(1, 1, 0, 0) = w;
        d(1, 1, 1, 1) = w;
        return d;
    };
    return MetricChart(2, domain, g, dg, d2g);
}

} // namespace totcurv
