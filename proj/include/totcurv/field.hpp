#pragma once

#include "totcurv/common.hpp"

#include <functional>

namespace totcurv {

// The function u whose level sets foliate the region, with coordinate
// derivatives. The Hessian falls back to central differences of the
// gradient when no analytic one is given.
class ScalarField {
public:
    using ValueFn = std::function<double(const Vec&)>;
    using GradientFn = std::function<Vec(const Vec&)>;
    using HessianFn = std::function<Mat(const Vec&)>;

    ScalarField(ValueFn u, GradientFn du, HessianFn d2u = {});

    double value(const Vec& x) const { return u_(x); }
    Vec gradient(const Vec& x) const { return du_(x); }
    Mat hessian(const Vec& x) const;

    bool has_analytic_hessian() const { return static_cast<bool>(d2u_); }
    ScalarField finite_difference_only() const;

    // Smallest |∇u| accepted when building frames.
    double gradient_floor() const { return gradient_floor_; }
    void set_gradient_floor(double floor) { gradient_floor_ = floor; }

    double fd_step() const { return fd_step_; }
    void set_fd_step(double h) { fd_step_ = h; }

private:
    ValueFn u_;
    GradientFn du_;
    HessianFn d2u_;
    double gradient_floor_ = 1e-8;
    double fd_step_ = 1e-4;
};

} // namespace totcurv
