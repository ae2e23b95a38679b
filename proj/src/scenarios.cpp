#include "totcurv/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace totcurv {

namespace {

constexpr double kPi = std::numbers::pi;

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

std::string format_label(const std::string& name, std::initializer_list<double> args) {
    std::ostringstream os;
    os << name << '(';
    bool first = true;
    for (double a : args) {
        if (!first) os << ',';
        os << a;
        first = false;
    }
    os << ')';
    return os.str();
}

// Angular axes of S^{n-1}: n-2 polar angles on [0, π], one periodic on [0, 2π).
std::vector<ParamAxis> sphere_axes(int n) {
    std::vector<ParamAxis> axes;
    for (int k = 0; k < n - 2; ++k) axes.push_back({0.0, kPi, false});
    axes.push_back({0.0, 2.0 * kPi, true});
    return axes;
}

// Random angles away from the polar singularities of the chart.
std::vector<double> sample_angles(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> polar(0.35, kPi - 0.35);
    std::uniform_real_distribution<double> azimuth(0.0, 2.0 * kPi);
    std::vector<double> a(n - 1);
    for (int k = 0; k < n - 2; ++k) a[k] = polar(rng);
    a[n - 2] = azimuth(rng);
    return a;
}

double sample_level(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.05, 0.95)(rng);
}

int default_grid_for(int n) {
    if (n <= 3) return 64;
    if (n == 4) return 32;
    return 12;
}

void require_dim(int n, int lo, const char* what) {
    if (n < lo) throw ConfigError(std::string(what) + ": dimension too small");
}

// u = (ρ − ρ0)/Δ on a warped polar chart; the level set u = t is ρ = ρ0 + tΔ.
Scenario radial_warped(const std::string& name, int n, double rho0, double rho1,
                       const WarpingFunction& warp, double rho_min_chart, double rho_max_chart) {
    require_dim(n, 2, name.c_str());
    if (!(rho1 > rho0) || !(rho0 > 0.0)) throw ConfigError(name + ": need 0 < rho0 < rho1");
    const double width = rho1 - rho0;
    Scenario s;
    s.name = name;
    s.dim = n;
    s.parameters = {{"n", n}, {"rho0", rho0}, {"rho1", rho1}};
    s.label = format_label(name, {double(n), rho0, rho1});
    s.chart = std::make_shared<MetricChart>(
        warped_polar_chart(n, warp, std::max(rho_min_chart, rho0 - 0.25 * width),
                           std::min(rho_max_chart, rho1 + 0.25 * width)));
    auto field = std::make_shared<ScalarField>(
        [rho0, width](const Vec& x) { return (x[0] - rho0) / width; },
        [n, width](const Vec&) {
            Vec d = Vec::Zero(n);
            d[0] = 1.0 / width;
            return d;
        },
        [n](const Vec&) { return Mat(Mat::Zero(n, n)); });
    field->set_gradient_floor(1e-8 / width);
    s.field = field;
    auto chart = s.chart;
    s.patches = [n, rho0, width, chart](double t, int m) {
        LevelSurfacePatch p;
        p.t = t;
        p.axes = sphere_axes(n);
        p.grid = default_axis_grid(p.axes, m);
        p.chart = chart;
        const double rho = rho0 + t * width;
        p.param = [n, rho](std::span<const double> a) {
            PatchPoint pt{Vec(n), Mat::Zero(n, n - 1)};
            pt.x[0] = rho;
            for (int k = 0; k < n - 1; ++k) {
                pt.x[k + 1] = a[k];
                pt.tangent(k + 1, k) = 1.0;
            }
            return pt;
        };
        return p;
    };
    s.radial = true;
    s.default_m = default_grid_for(n);
    s.sample_interior = [n, rho0, width](std::mt19937_64& rng) {
        Vec x(n);
        x[0] = rho0 + sample_level(rng) * width;
        const auto a = sample_angles(n, rng);
        for (int k = 0; k < n - 1; ++k) x[k + 1] = a[k];
        return x;
    };
    return s;
}

} // namespace

double unit_sphere_area(int k) {
    const double m = k + 1;
    return 2.0 * std::pow(kPi, m / 2.0) / std::tgamma(m / 2.0);
}

Vec sphere_point(std::span<const double> angles) {
    const int n = static_cast<int>(angles.size()) + 1;
    Vec y(n);
    double prod = 1.0;
    for (int k = 0; k < n - 1; ++k) {
        y[k] = prod * std::cos(angles[k]);
        prod *= std::sin(angles[k]);
    }
    y[n - 1] = prod;
    return y;
}

Mat sphere_jacobian(std::span<const double> angles) {
    const int n = static_cast<int>(angles.size()) + 1;
    Mat J = Mat::Zero(n, n - 1);
    for (int k = 0; k < n; ++k) {
        // y_k = Π_{j<k} sin α_j · (k < n−1 ? cos α_k : 1)
        for (int m = 0; m < n - 1 && m <= k; ++m) {
            double v = 1.0;
            for (int j = 0; j < k; ++j) v *= (j == m) ? std::cos(angles[j]) : std::sin(angles[j]);
            if (k < n - 1) v *= (m == k) ? -std::sin(angles[k]) : std::cos(angles[k]);
            J(k, m) = v;
        }
    }
    return J;
}

Scenario euclid_shell(int n, double a, double b) {
    require_dim(n, 2, "euclid_shell");
    if (!(b > a) || !(a > 0.0)) throw ConfigError("euclid_shell: need 0 < a < b");
    const double width = b - a;
    Scenario s;
    s.name = "euclid_shell";
    s.dim = n;
    s.parameters = {{"n", n}, {"a", a}, {"b", b}};
    s.label = format_label(s.name, {double(n), a, b});
    s.description = "flat R^n, u = (|x| - a)/(b - a); level sets are round spheres";
    s.chart = std::make_shared<MetricChart>(
        euclidean_chart(Box{Vec::Constant(n, -1.1 * b), Vec::Constant(n, 1.1 * b)}));
    auto field = std::make_shared<ScalarField>(
        [a, width](const Vec& x) { return (x.norm() - a) / width; },
        [width](const Vec& x) { return Vec(x / (x.norm() * width)); },
        [n, width](const Vec& x) {
            const double r = x.norm();
            return Mat((Mat::Identity(n, n) / r - x * x.transpose() / (r * r * r)) / width);
        });
    field->set_gradient_floor(1e-8 / width);
    s.field = field;
    auto chart = s.chart;
    s.patches = [n, a, width, chart](double t, int m) {
        LevelSurfacePatch p;
        p.t = t;
        p.axes = sphere_axes(n);
        p.grid = default_axis_grid(p.axes, m);
        p.chart = chart;
        const double rho = a + t * width;
        p.param = [rho](std::span<const double> ang) {
            return PatchPoint{rho * sphere_point(ang), rho * sphere_jacobian(ang)};
        };
        return p;
    };
    const double area = unit_sphere_area(n - 1);
    s.closed_form = [n, a, width, area](int r, double t) -> std::optional<double> {
        const double rho = a + t * width;
        return binomial(n - 1, r) * std::pow(rho, n - 1 - r) * area;
    };
    s.radial = true;
    s.default_m = default_grid_for(n);
    s.sample_interior = [n, a, width](std::mt19937_64& rng) {
        const double rho = a + sample_level(rng) * width;
        const auto ang = sample_angles(n, rng);
        return Vec(rho * sphere_point(ang));
    };
    return s;
}

Scenario sphere_annulus(int n, double rho0, double rho1) {
    if (!(rho1 < kPi)) throw ConfigError("sphere_annulus: need rho1 < pi");
    Scenario s = radial_warped("sphere_annulus", n, rho0, rho1, sphere_warp(), 1e-3, kPi - 1e-3);
    s.description = "round unit S^n, u = geodesic distance from a pole, rescaled";
    s.default_rel_tol = 1e-4;
    const double area = unit_sphere_area(n - 1);
    s.closed_form = [n, rho0, rho1, area](int r, double t) -> std::optional<double> {
        const double rho = rho0 + t * (rho1 - rho0);
        return binomial(n - 1, r) * std::pow(std::cos(rho), r) * std::pow(std::sin(rho), n - 1 - r) * area;
    };
    return s;
}

Scenario hyperbolic_annulus(int n, double rho0, double rho1) {
    Scenario s = radial_warped("hyperbolic_annulus", n, rho0, rho1, hyperbolic_warp(), 1e-3, 1e6);
    s.description = "hyperbolic space H^n, u = geodesic distance from a point, rescaled";
    s.default_rel_tol = 1e-4;
    const double area = unit_sphere_area(n - 1);
    s.closed_form = [n, rho0, rho1, area](int r, double t) -> std::optional<double> {
        const double rho = rho0 + t * (rho1 - rho0);
        return binomial(n - 1, r) * std::pow(std::cosh(rho), r) * std::pow(std::sinh(rho), n - 1 - r) * area;
    };
    return s;
}

Scenario ellipsoid_flat(double a1, double a2, double a3, double q0, double q1) {
    if (!(a1 > 0 && a2 > 0 && a3 > 0)) throw ConfigError("ellipsoid_flat: semi-axes must be positive");
    if (!(q1 > q0) || !(q0 > 0.0)) throw ConfigError("ellipsoid_flat: need 0 < q0 < q1");
    const int n = 3;
    const Vec axes = (Vec(3) << a1, a2, a3).finished();
    const Vec inv2 = axes.cwiseProduct(axes).cwiseInverse();
    const double width = q1 - q0;
    Scenario s;
    s.name = "ellipsoid_flat";
    s.dim = n;
    s.parameters = {{"n", 3}, {"a1", a1}, {"a2", a2}, {"a3", a3}, {"q0", q0}, {"q1", q1}};
    s.label = format_label(s.name, {a1, a2, a3, q0, q1});
    s.description = "flat R^3 foliated by homothetic ellipsoids";
    const double reach = 1.1 * q1 * axes.maxCoeff();
    s.chart = std::make_shared<MetricChart>(
        euclidean_chart(Box{Vec::Constant(n, -reach), Vec::Constant(n, reach)}));
    // q = sqrt(Σ x_k²/A_k²), ∂q = D x / q, ∂²q = D/q − (Dx)(Dx)^T/q³.
    auto field = std::make_shared<ScalarField>(
        [inv2, q0, width](const Vec& x) {
            return (std::sqrt(x.cwiseProduct(x).dot(inv2)) - q0) / width;
        },
        [inv2, width](const Vec& x) {
            const double q = std::sqrt(x.cwiseProduct(x).dot(inv2));
            return Vec(inv2.cwiseProduct(x) / (q * width));
        },
        [inv2, width](const Vec& x) {
            const double q = std::sqrt(x.cwiseProduct(x).dot(inv2));
            const Vec dx = inv2.cwiseProduct(x);
            return Mat((Mat(inv2.asDiagonal()) / q - dx * dx.transpose() / (q * q * q)) / width);
        });
    field->set_gradient_floor(1e-8 / (width * axes.maxCoeff()));
    s.field = field;
    auto chart = s.chart;
    s.patches = [n, axes, q0, width, chart](double t, int m) {
        LevelSurfacePatch p;
        p.t = t;
        p.axes = sphere_axes(n);
        p.grid = default_axis_grid(p.axes, m);
        p.chart = chart;
        const double q = q0 + t * width;
        p.param = [axes, q](std::span<const double> ang) {
            return PatchPoint{Vec(q * axes.cwiseProduct(sphere_point(ang))),
                              Mat(q * axes.asDiagonal() * sphere_jacobian(ang))};
        };
        return p;
    };
    s.default_m = default_grid_for(n);
    s.sample_interior = [n, axes, q0, width](std::mt19937_64& rng) {
        const double q = q0 + sample_level(rng) * width;
        const auto ang = sample_angles(n, rng);
        return Vec(q * axes.cwiseProduct(sphere_point(ang)));
    };
    return s;
}

Scenario warped_tilted(int n, double rho0, double rho1, double eps, double amp) {
    require_dim(n, 3, "warped_tilted");
    if (!(rho1 > rho0) || !(rho0 > 0.0)) throw ConfigError("warped_tilted: need 0 < rho0 < rho1");
    if (!(std::abs(eps) * kPi < 1.0)) throw ConfigError("warped_tilted: need |eps| < 1/pi");
    if (!(std::abs(amp) < 0.5)) throw ConfigError("warped_tilted: need |amp| < 0.5");
    const double width = rho1 - rho0;
    const WarpingFunction warp{[amp](double r) { return r + amp * std::sin(r); },
                               [amp](double r) { return 1.0 + amp * std::cos(r); },
                               [amp](double r) { return -amp * std::sin(r); }};
    Scenario s;
    s.name = "warped_tilted";
    s.dim = n;
    s.parameters = {{"n", n}, {"rho0", rho0}, {"rho1", rho1}, {"eps", eps}, {"amp", amp}};
    s.label = format_label(s.name, {double(n), rho0, rho1, eps, amp});
    s.description = "warped product dr^2 + (r + amp sin r)^2 dsigma^2 with u tilted by eps cos(alpha_1)";
    s.chart = std::make_shared<MetricChart>(
        warped_polar_chart(n, warp, std::max(0.5 * rho0, rho0 - 0.25 * width), rho1 + 0.25 * width));

    // u = σ + ε cos α_1 sin²(πσ), σ = (ρ − ρ0)/Δ.
    auto value = [rho0, width, eps](double rho, double alpha) {
        const double sg = (rho - rho0) / width;
        const double b = std::sin(kPi * sg);
        return sg + eps * std::cos(alpha) * b * b;
    };
    auto d_rho = [rho0, width, eps](double rho, double alpha) {
        const double sg = (rho - rho0) / width;
        return 1.0 / width + eps * std::cos(alpha) * (kPi / width) * std::sin(2.0 * kPi * sg);
    };
    auto d_alpha = [rho0, width, eps](double rho, double alpha) {
        const double b = std::sin(kPi * (rho - rho0) / width);
        return -eps * std::sin(alpha) * b * b;
    };
    auto field = std::make_shared<ScalarField>(
        [value](const Vec& x) { return value(x[0], x[1]); },
        [n, d_rho, d_alpha](const Vec& x) {
            Vec d = Vec::Zero(n);
            d[0] = d_rho(x[0], x[1]);
            d[1] = d_alpha(x[0], x[1]);
            return d;
        },
        [n, rho0, width, eps](const Vec& x) {
            const double sg = (x[0] - rho0) / width;
            const double b = std::sin(kPi * sg);
            const double ca = std::cos(x[1]), sa = std::sin(x[1]);
            Mat H = Mat::Zero(n, n);
            H(0, 0) = eps * ca * (2.0 * kPi * kPi / (width * width)) * std::cos(2.0 * kPi * sg);
            H(0, 1) = H(1, 0) = -eps * sa * (kPi / width) * std::sin(2.0 * kPi * sg);
            H(1, 1) = -eps * ca * b * b;
            return H;
        });
    field->set_gradient_floor(1e-8 / width);
    s.field = field;

    // ρ on the level set u = t along a fixed direction; u is strictly
    // increasing in ρ, so Newton with a bisection fallback converges.
    auto level_radius = [value, d_rho, rho0, width](double t, double alpha) {
        double lo = rho0 - width, hi = rho0 + 2.0 * width;
        double rho = rho0 + t * width;
        for (int it = 0; it < 100; ++it) {
            const double f = value(rho, alpha) - t;
            if (f > 0.0) hi = rho;
            else lo = rho;
            double next = rho - f / d_rho(rho, alpha);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - rho) <= 1e-15 * std::max(1.0, std::abs(rho))) return next;
            rho = next;
        }
        throw NumericalError("warped_tilted: level-set radius did not converge");
    };
    auto chart = s.chart;
    s.patches = [n, chart, level_radius, d_rho, d_alpha](double t, int m) {
        LevelSurfacePatch p;
        p.t = t;
        p.axes = sphere_axes(n);
        p.grid = default_axis_grid(p.axes, m);
        p.chart = chart;
        p.param = [n, t, level_radius, d_rho, d_alpha](std::span<const double> a) {
            PatchPoint pt{Vec(n), Mat::Zero(n, n - 1)};
            const double rho = level_radius(t, a[0]);
            pt.x[0] = rho;
            for (int k = 0; k < n - 1; ++k) {
                pt.x[k + 1] = a[k];
                pt.tangent(k + 1, k) = 1.0;
            }
            // Implicit function theorem: ∂ρ/∂α_1 = −u_α / u_ρ.
            pt.tangent(0, 0) = -d_alpha(rho, a[0]) / d_rho(rho, a[0]);
            return pt;
        };
        return p;
    };
    s.default_m = default_grid_for(n);
    s.default_rel_tol = 1e-3;
    s.sample_interior = [n, level_radius](std::mt19937_64& rng) {
        const double t = sample_level(rng);
        const auto a = sample_angles(n, rng);
        Vec x(n);
        x[0] = level_radius(t, a[0]);
        for (int k = 0; k < n - 1; ++k) x[k + 1] = a[k];
        return x;
    };
    return s;
}

std::vector<std::string> builtin_names() {
    return {"euclid_shell", "sphere_annulus", "hyperbolic_annulus", "ellipsoid_flat", "warped_tilted"};
}

namespace {

double param_or(const std::map<std::string, double>& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

void reject_unknown(const std::string& name, const std::map<std::string, double>& p,
                    std::initializer_list<const char*> known) {
    for (const auto& [key, value] : p) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError(name + ": unknown parameter '" + key + "'");
    }
}

int dim_param(const std::map<std::string, double>& p, int fallback) {
    const double n = param_or(p, "n", fallback);
    if (n != std::floor(n)) throw ConfigError("dimension n must be an integer");
    return static_cast<int>(n);
}

} // namespace

Scenario builtin(const std::string& name, const std::map<std::string, double>& p) {
    if (name == "euclid_shell") {
        reject_unknown(name, p, {"n", "a", "b"});
        return euclid_shell(dim_param(p, 3), param_or(p, "a", 0.5), param_or(p, "b", 1.0));
    }
    if (name == "sphere_annulus") {
        reject_unknown(name, p, {"n", "rho0", "rho1"});
        return sphere_annulus(dim_param(p, 4), param_or(p, "rho0", 0.5), param_or(p, "rho1", 1.0));
    }
    if (name == "hyperbolic_annulus") {
        reject_unknown(name, p, {"n", "rho0", "rho1"});
        return hyperbolic_annulus(dim_param(p, 3), param_or(p, "rho0", 0.5), param_or(p, "rho1", 1.0));
    }
    if (name == "ellipsoid_flat") {
        reject_unknown(name, p, {"n", "a1", "a2", "a3", "q0", "q1"});
        if (dim_param(p, 3) != 3) throw ConfigError("ellipsoid_flat is three-dimensional");
        return ellipsoid_flat(param_or(p, "a1", 1.5), param_or(p, "a2", 1.0), param_or(p, "a3", 0.75),
                              param_or(p, "q0", 0.5), param_or(p, "q1", 1.0));
    }
    if (name == "warped_tilted") {
        reject_unknown(name, p, {"n", "rho0", "rho1", "eps", "amp"});
        return warped_tilted(dim_param(p, 4), param_or(p, "rho0", 0.5), param_or(p, "rho1", 1.0),
                             param_or(p, "eps", 0.05), param_or(p, "amp", 0.1));
    }
    throw UnknownScenarioError("unknown scenario '" + name + "'");
}

Scenario builtin(const ScenarioSpec& spec) { return builtin(spec.name, spec.params); }

ScenarioSpec parse_scenario_spec(const std::string& text) {
    ScenarioSpec spec;
    const auto colon = text.find(':');
    spec.name = text.substr(0, colon);
    if (colon == std::string::npos) return spec;
    std::istringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("scenario parameter '" + item + "' lacks '='");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        try {
            std::size_t used = 0;
            spec.params[key] = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
        } catch (const std::exception&) {
            throw ConfigError("scenario parameter '" + key + "' is not a number: " + val);
        }
    }
    return spec;
}

} // namespace totcurv
