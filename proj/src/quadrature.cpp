#include "totcurv/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>

namespace totcurv {

std::vector<int> default_axis_grid(std::span<const ParamAxis> axes, int m) {
    std::vector<int> grid;
    grid.reserve(axes.size());
    for (const auto& a : axes) grid.push_back(a.periodic ? 2 * m : m);
    return grid;
}

Rule1D gauss_legendre(int count, double lo, double hi) {
    if (count < 1) throw ConfigError("Gauss-Legendre rule needs at least one node");
    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(count);
    if (!table) throw NumericalError("GSL could not allocate Gauss-Legendre table");
    Rule1D rule{std::vector<double>(count), std::vector<double>(count)};
    for (int i = 0; i < count; ++i) {
        gsl_integration_glfixed_point(lo, hi, static_cast<std::size_t>(i), &rule.nodes[i],
                                      &rule.weights[i], table);
    }
    gsl_integration_glfixed_table_free(table);
    return rule;
}

Rule1D periodic_trapezoid(int count, double lo, double hi) {
    if (count < 1) throw ConfigError("trapezoid rule needs at least one node");
    Rule1D rule{std::vector<double>(count), std::vector<double>(count)};
    const double step = (hi - lo) / count;
    for (int i = 0; i < count; ++i) {
        rule.nodes[i] = lo + step * i;
        rule.weights[i] = step;
    }
    return rule;
}

double area_element(const MetricChart& chart, const PatchPoint& p) {
    const Mat g = chart.metric(p.x);
    const Mat first_form = p.tangent.transpose() * g * p.tangent;
    const double det = first_form.determinant();
    if (!(det > 0.0)) throw ParametrizationError("degenerate pullback metric on level-set patch");
    return std::sqrt(det);
}

namespace {

struct TensorRule {
    std::vector<Rule1D> axes;
    std::size_t count = 1;
};

TensorRule make_rule(const LevelSurfacePatch& patch, std::span<const int> grid) {
    if (static_cast<int>(grid.size()) != patch.param_dim()) {
        throw ConfigError("patch grid does not match its parameter dimension");
    }
    TensorRule rule;
    for (int k = 0; k < patch.param_dim(); ++k) {
        const auto& a = patch.axes[k];
        if (grid[k] < 1) throw ConfigError("grid sizes must be positive");
        rule.axes.push_back(a.periodic ? periodic_trapezoid(grid[k], a.lo, a.hi)
                                       : gauss_legendre(grid[k], a.lo, a.hi));
        rule.count *= static_cast<std::size_t>(grid[k]);
    }
    return rule;
}

// Parameter point and product weight of flat node `index` (last axis fastest).
double node_params(const TensorRule& rule, std::size_t index, std::vector<double>& s) {
    double w = 1.0;
    for (std::size_t k = rule.axes.size(); k-- > 0;) {
        const auto& ax = rule.axes[k];
        const std::size_t m = ax.nodes.size();
        const std::size_t i = index % m;
        index /= m;
        s[k] = ax.nodes[i];
        w *= ax.weights[i];
    }
    return w;
}

std::vector<double> run_surface(const LevelSurfacePatch& patch, std::span<const int> grid,
                                std::size_t width, const MultiIntegrand& integrand, Execution exec,
                                std::size_t& nodes) {
    const TensorRule rule = make_rule(patch, grid);
    nodes = rule.count;
    const MetricChart& chart = *patch.chart;
    return accumulate_nodes(
        rule.count, width,
        [&](std::size_t index, std::span<double> out) {
            std::vector<double> s(rule.axes.size());
            const double w = node_params(rule, index, s);
            const PatchPoint p = patch.param(s);
            const double dA = area_element(chart, p);
            integrand(p.x, out);
            for (double& v : out) v *= w * dA;
        },
        exec);
}

std::vector<int> halved(std::span<const int> grid) {
    std::vector<int> out;
    for (int g : grid) out.push_back(std::max(1, g / 2));
    return out;
}

double gradient_norm(const MetricChart& chart, const ScalarField& field, const Vec& x) {
    const Mat g = chart.metric(x);
    const Vec du = field.gradient(x);
    return std::sqrt(du.dot(g.llt().solve(du)));
}

std::vector<double> run_volume(const PatchFactory& patches, const ScalarField& field,
                               std::size_t width, const MultiIntegrand& integrand, VolumeGrid grid,
                               Execution exec, std::size_t& nodes) {
    if (grid.t_nodes < 1 || grid.surface_m < 1) throw ConfigError("volume grid sizes must be positive");
    const Rule1D outer = gauss_legendre(grid.t_nodes, 0.0, 1.0);
    std::vector<LevelSurfacePatch> levels;
    std::vector<TensorRule> rules;
    levels.reserve(outer.nodes.size());
    for (double t : outer.nodes) {
        levels.push_back(patches(t, grid.surface_m));
        rules.push_back(make_rule(levels.back(), levels.back().grid));
    }
    const std::size_t per_level = rules.front().count;
    for (const auto& r : rules) {
        if (r.count != per_level) throw ConfigError("level-set patches must share one grid");
    }
    nodes = per_level * levels.size();
    return accumulate_nodes(
        nodes, width,
        [&](std::size_t index, std::span<double> out) {
            const std::size_t level = index / per_level;
            const auto& patch = levels[level];
            const auto& rule = rules[level];
            std::vector<double> s(rule.axes.size());
            const double w = outer.weights[level] * node_params(rule, index % per_level, s);
            const PatchPoint p = patch.param(s);
            const MetricChart& chart = *patch.chart;
            const double dA = area_element(chart, p);
            const double grad = gradient_norm(chart, field, p.x);
            if (!(grad >= field.gradient_floor())) {
                throw CriticalPointError("|grad u| below floor inside the integration region");
            }
            integrand(p.x, out);
            for (double& v : out) v *= w * dA / grad;
        },
        exec);
}

std::vector<QuadratureResult> combine(const std::vector<double>& fine,
                                      const std::vector<double>& coarse, std::size_t nodes) {
    std::vector<QuadratureResult> out(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) {
        out[i] = QuadratureResult{fine[i], coarse[i], std::abs(fine[i] - coarse[i]), nodes};
    }
    return out;
}

} // namespace

std::vector<QuadratureResult> surface_integral(const LevelSurfacePatch& patch, std::size_t width,
                                               const MultiIntegrand& integrand, Execution exec) {
    if (!patch.chart) throw ParametrizationError("patch has no chart");
    std::size_t nodes = 0, coarse_nodes = 0;
    const auto fine = run_surface(patch, patch.grid, width, integrand, exec, nodes);
    const auto coarse = run_surface(patch, halved(patch.grid), width, integrand, exec, coarse_nodes);
    return combine(fine, coarse, nodes + coarse_nodes);
}

QuadratureResult surface_integral(const LevelSurfacePatch& patch, const Integrand& integrand,
                                  Execution exec) {
    return surface_integral(
        patch, 1, [&](const Vec& x, std::span<double> out) { out[0] = integrand(x); }, exec)[0];
}

std::vector<QuadratureResult> volume_integral(const PatchFactory& patches,
                                              const ScalarField& field, std::size_t width,
                                              const MultiIntegrand& integrand, VolumeGrid grid,
                                              Execution exec) {
    std::size_t nodes = 0, coarse_nodes = 0;
    const auto fine = run_volume(patches, field, width, integrand, grid, exec, nodes);
    const VolumeGrid half{std::max(1, grid.surface_m / 2), std::max(1, grid.t_nodes / 2)};
    const auto coarse = run_volume(patches, field, width, integrand, half, exec, coarse_nodes);
    return combine(fine, coarse, nodes + coarse_nodes);
}

QuadratureResult volume_integral(const PatchFactory& patches, const ScalarField& field,
                                 const Integrand& integrand, VolumeGrid grid, Execution exec) {
    return volume_integral(
        patches, field, 1, [&](const Vec& x, std::span<double> out) { out[0] = integrand(x); },
        grid, exec)[0];
}

ConvergenceEstimate refine_and_estimate(std::span<const double> values,
                                        std::optional<double> exact, double noise_floor) {
    ConvergenceEstimate est;
    const std::size_t n = values.size();
    if (exact) {
        if (n < 2) return est;
        est.coarse_error = std::abs(values[n - 2] - *exact);
        est.fine_error = std::abs(values[n - 1] - *exact);
    } else {
        if (n < 3) return est;
        est.coarse_error = std::abs(values[n - 2] - values[n - 3]);
        est.fine_error = std::abs(values[n - 1] - values[n - 2]);
    }
    if (est.fine_error <= noise_floor || est.coarse_error <= noise_floor) {
        est.at_noise_floor = true;
        return est;
    }
    est.order = std::log2(est.coarse_error / est.fine_error);
    return est;
}

} // namespace totcurv
