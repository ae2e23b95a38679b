#include "totcurv/levelset.hpp"

#include <cmath>
#include <sstream>

namespace totcurv {

ScalarField::ScalarField(ValueFn u, GradientFn du, HessianFn d2u)
    : u_(std::move(u)), du_(std::move(du)), d2u_(std::move(d2u)) {}

Mat ScalarField::hessian(const Vec& x) const {
    if (d2u_) return d2u_(x);
    const int n = static_cast<int>(x.size());
    const double h = fd_step_;
    Mat H(n, n);
    for (int a = 0; a < n; ++a) {
        Vec xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        H.col(a) = (du_(xp) - du_(xm)) / (2.0 * h);
    }
    return 0.5 * (H + H.transpose());
}

ScalarField ScalarField::finite_difference_only() const {
    ScalarField copy(u_, du_);
    copy.gradient_floor_ = gradient_floor_;
    copy.fd_step_ = fd_step_;
    return copy;
}

double PrincipalFrame::omega_normal_of(int i, const Vec& v) const {
    const int n = dim();
    return kappa[i] * theta_of(i, v) + grad_norm_tangential[i] / grad_norm * theta_of(n - 1, v);
}

double PrincipalFrame::orientation() const {
    return std::sqrt(g.determinant()) * e.determinant();
}

Mat covariant_hessian(const ScalarField& field, const LocalGeometry& geo) {
    const int n = static_cast<int>(geo.x.size());
    const Vec du = field.gradient(geo.x);
    Mat H = field.hessian(geo.x);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double s = 0.0;
            for (int c = 0; c < n; ++c) s += geo.gamma(c, a, b) * du[c];
            H(a, b) -= s;
        }
    return H;
}

Mat covariant_hessian(const ScalarField& field, const MetricChart& chart, const Vec& x) {
    return covariant_hessian(field, local_geometry(chart, x));
}

PrincipalFrame principal_frame(const ScalarField& field, const MetricChart& chart, const Vec& x) {
    return principal_frame(field, local_geometry(chart, x));
}

PrincipalFrame principal_frame(const ScalarField& field, const LocalGeometry& geo) {
    const int n = static_cast<int>(geo.x.size());
    const Vec du = field.gradient(geo.x);
    const Vec grad = geo.g_inv * du;  // ∇u
    const double grad_norm = std::sqrt(du.dot(grad));
    if (!(grad_norm >= field.gradient_floor())) {
        std::ostringstream msg;
        msg << "|grad u| = " << grad_norm << " below floor " << field.gradient_floor();
        throw CriticalPointError(msg.str());
    }
    const Mat H = covariant_hessian(field, geo);

    // Work in g-orthonormal coordinates w = L^T v, where g = L L^T.
    const Eigen::LLT<Mat> llt(geo.g);
    const Mat L = llt.matrixL();
    const Vec normal_w = (L.transpose() * grad) / grad_norm;
    const Mat H_w = L.triangularView<Eigen::Lower>().solve(
        L.triangularView<Eigen::Lower>().solve(H).transpose());  // L^{-1} H L^{-T}

    // Orthonormal complement of the normal from a Householder reflection.
    const Eigen::HouseholderQR<Mat> qr(normal_w);
    const Mat Q = qr.householderQ() * Mat::Identity(n, n);
    const Mat T = Q.rightCols(n - 1);

    const Mat shape = T.transpose() * H_w * T / grad_norm;
    const Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (shape + shape.transpose()));
    if (eig.info() != Eigen::Success) throw NumericalError("shape operator eigensolver failed");

    Mat W(n, n);
    W.leftCols(n - 1) = T * eig.eigenvectors();
    W.col(n - 1) = normal_w;
    if (W.determinant() < 0.0) W.col(0) = -W.col(0);

    PrincipalFrame f;
    f.x = geo.x;
    f.g = geo.g;
    f.grad_norm = grad_norm;
    f.kappa = eig.eigenvalues();
    f.e = L.transpose().triangularView<Eigen::Upper>().solve(W);
    f.e.col(n - 1) = grad / grad_norm;
    f.theta = (geo.g * f.e).transpose();
    f.grad_norm_tangential = Vec(n - 1);
    const Vec He_n = H * f.e.col(n - 1);
    for (int i = 0; i < n - 1; ++i) f.grad_norm_tangential[i] = f.e.col(i).dot(He_n);
    return f;
}

double sigma_r(std::span<const double> kappa, int r) {
    if (r < 0) throw DomainError("sigma_r needs r >= 0");
    const int m = static_cast<int>(kappa.size());
    if (r > m) return 0.0;
    // e[j] after processing k values is σ_j of those values.
    std::vector<double> e(r + 1, 0.0);
    e[0] = 1.0;
    for (int k = 0; k < m; ++k)
        for (int j = std::min(r, k + 1); j >= 1; --j) e[j] += kappa[k] * e[j - 1];
    return e[r];
}

QuadratureResult total_mean_curvature(const LevelSurfacePatch& patch, const ScalarField& field,
                                      int r, Execution exec) {
    const MetricChart& chart = *patch.chart;
    return surface_integral(
        patch,
        [&](const Vec& x) { return sigma_r(principal_frame(field, chart, x).kappa, r); }, exec);
}

} // namespace totcurv
