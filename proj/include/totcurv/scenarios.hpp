#pragma once

// Concrete (M, g, u) triples: chart, foliating function, level-set
// parametrizations, and closed-form total mean curvatures where known.
//
// Boundaries are ordered so that u = 0 on the inner and u = 1 on the outer
// boundary; e_n = ∇u/|∇u| then points out of M on Γ_1 and into M on Γ_0.

#include "totcurv/field.hpp"
#include "totcurv/metric.hpp"
#include "totcurv/quadrature.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>

namespace totcurv {

struct Scenario {
    std::string name;   // catalog key, e.g. "euclid_shell"
    std::string label;  // name with parameters, e.g. "euclid_shell(3,0.5,1)"
    std::string description;
    int dim = 0;
    std::map<std::string, double> parameters;

    std::shared_ptr<const MetricChart> chart;
    std::shared_ptr<const ScalarField> field;
    PatchFactory patches;
    int default_m = 32;
    // Relative tolerance for the integral identity at the default grid.
    double default_rel_tol = 1e-6;

    // M_r(Γ_t), when a closed form is known.
    std::function<std::optional<double>(int r, double t)> closed_form;

    // Rotational symmetry with radial u: |∇u|_i ≡ 0 and correction_B ≡ 0.
    bool radial = false;

    // Chart point with u in [0.05, 0.95], kept away from coordinate poles.
    std::function<Vec(std::mt19937_64&)> sample_interior;

    std::optional<double> closed_form_value(int r, double t) const {
        if (!closed_form) return std::nullopt;
        return closed_form(r, t);
    }
};

// Flat R^n, u = (|x| − a)/(b − a); Cartesian chart.
Scenario euclid_shell(int n = 3, double a = 0.5, double b = 1.0);
// Round unit S^n in geodesic polar coordinates, u = (ρ − ρ0)/(ρ1 − ρ0).
Scenario sphere_annulus(int n = 4, double rho0 = 0.5, double rho1 = 1.0);
// Hyperbolic space H^n, same construction with sinh.
Scenario hyperbolic_annulus(int n = 3, double rho0 = 0.5, double rho1 = 1.0);
// Flat R³ foliated by homothetic ellipsoids with the given semi-axes,
// u = (q − q0)/(q1 − q0), q² = Σ x_k²/A_k².
Scenario ellipsoid_flat(double a1 = 1.5, double a2 = 1.0, double a3 = 0.75, double q0 = 0.5,
                        double q1 = 1.0);
// dρ² + f(ρ)² dσ² with f = ρ + amp·sin ρ and a u tilted by an angular
// harmonic so that |∇u|_i ≠ 0:
//   u = s + ε cos α_1 sin²(π s),  s = (ρ − ρ0)/(ρ1 − ρ0).
// ∂_ρ u ≥ (1 − επ)/(ρ1 − ρ0) > 0 for ε < 1/π.
Scenario warped_tilted(int n = 4, double rho0 = 0.5, double rho1 = 1.0, double eps = 0.05,
                       double amp = 0.1);

// Name plus parameter overrides, e.g. "sphere_annulus:n=3,rho0=0.4".
struct ScenarioSpec {
    std::string name;
    std::map<std::string, double> params;
};

std::vector<std::string> builtin_names();
Scenario builtin(const std::string& name, const std::map<std::string, double>& params = {});
Scenario builtin(const ScenarioSpec& spec);
ScenarioSpec parse_scenario_spec(const std::string& text);

// Area of the unit sphere S^{k} ⊂ R^{k+1}.
double unit_sphere_area(int k);

// Hyperspherical embedding y(α) ∈ S^{n−1} from n−1 angles, last one
// periodic, and its n × (n−1) Jacobian.
Vec sphere_point(std::span<const double> angles);
Mat sphere_jacobian(std::span<const double> angles);

} // namespace totcurv
