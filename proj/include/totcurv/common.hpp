#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace totcurv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateMetricError : Error { using Error::Error; };
struct StepSizeError : Error { using Error::Error; };
struct FrameError : Error { using Error::Error; };
struct CriticalPointError : Error { using Error::Error; };
struct NumericalError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct ParametrizationError : Error { using Error::Error; };
struct UnknownScenarioError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// Axis-aligned coordinate box of a chart.
struct Box {
    Vec lo;
    Vec hi;

    int dim() const { return static_cast<int>(lo.size()); }
    double diameter() const { return (hi - lo).norm(); }
    bool contains(const Vec& x, double margin = 0.0) const {
        for (int i = 0; i < dim(); ++i) {
            if (x[i] < lo[i] + margin || x[i] > hi[i] - margin) return false;
        }
        return true;
    }
};

// Dense rank-3 array T(a,b,c), all indices in [0,n).
class Tensor3 {
public:
    Tensor3() = default;
    explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

    int dim() const { return n_; }
    double& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
    double operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }
    double max_abs() const;

private:
    std::size_t index(int a, int b, int c) const {
        return (static_cast<std::size_t>(a) * n_ + b) * n_ + c;
    }
    int n_ = 0;
    std::vector<double> data_;
};

// Dense rank-4 array T(a,b,c,d).
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

    int dim() const { return n_; }
    double& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
    double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }
    double max_abs() const;

private:
    std::size_t index(int a, int b, int c, int d) const {
        return ((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d;
    }
    int n_ = 0;
    std::vector<double> data_;
};

inline double Tensor3::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

inline double Tensor4::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

} // namespace totcurv
